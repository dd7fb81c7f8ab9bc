// Darboux-coordinate realizations of the canonical symplectic and contact
// structures on R^{2n} and R^{2n+1}.
//
// Sign convention (inherited by every module): i_X Omega = dH with
// Omega = dq^i ^ dp_i, so sharp(dH) = (dH/dp, -dH/dq). The Liouville field is
// Z = sharp(Theta) = -p_i d/dp_i with div Z = -n. The contact one-form is
// eta = dz - p_i dq^i with Reeb field R = d/dz.
#pragma once

#include <utility>

#include "ckt/state.hpp"

namespace ckt {

// Z = -p_i d/dp_i, returned as flat tangent components (qdot, pdot)
Vec liouville_field(const PhaseState& s);

// alpha = a_i dq^i + b^i dp_i  ->  (b^i, -a_i)
Vec symplectic_sharp(const CovectorValue& alpha, const PhaseState& s);

// inverse musical map: X = (Xq, Xp)  ->  -Xp dq + Xq dp
CovectorValue symplectic_flat(std::span<const double> X, const PhaseState& s);

// eta = dz - p_i dq^i evaluated at s, and R = d/dz
std::pair<CovectorValue, Vec> contact_form_and_reeb(const ContactState& s);

// (a_i, b^i, u) -> (b^i, -(a_i + p_i u), b^i p_i); kernel spanned by eta
Vec sharp_lambda(const CovectorValue& alpha, const ContactState& s);

} // namespace ckt
