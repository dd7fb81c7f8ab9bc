// Pointwise canonical Poisson and contact (Jacobi) brackets.
//
//   {F,H}^(S) = dF/dq . dH/dp - dF/dp . dH/dq
//   {F,H}^(C) = {F,H}^(S) + (F - p.dF/dp) dH/dz - (H - p.dH/dp) dF/dz
//
// The contact bracket satisfies Jacobi but violates Leibniz; the defect is
// {FG,H} - F{G,H} - G{F,H} = -FG R(H), which leibniz_defect measures.
#pragma once

#include <span>

#include "ckt/scalar_function.hpp"

namespace ckt {

enum class BracketKind { symplectic, contact };

double poisson_bracket(const ScalarFunction& F, const ScalarFunction& H,
                       std::span<const double> s);

double contact_bracket(const ScalarFunction& F, const ScalarFunction& H,
                       std::span<const double> s);

double bracket(BracketKind kind, const ScalarFunction& F, const ScalarFunction& H,
               std::span<const double> s);

// the bracket as a new ScalarFunction; gradients of the closure fall back to
// central differences, which is how nested brackets are differentiated
ScalarFunction bracket_function(BracketKind kind, const ScalarFunction& F,
                                const ScalarFunction& H);

// max over states of |{{F,G},H} + {{G,H},F} + {{H,F},G}|
double jacobi_residual(BracketKind kind, const ScalarFunction& F, const ScalarFunction& G,
                       const ScalarFunction& H, std::span<const Vec> states);

// {FG,H}^(C) - F{G,H}^(C) - G{F,H}^(C) + FG R(H) at s
double leibniz_defect(const ScalarFunction& F, const ScalarFunction& G, const ScalarFunction& H,
                      std::span<const double> s);

} // namespace ckt
