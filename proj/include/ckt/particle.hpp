// Vector-field evaluation and trajectory integration for Hamiltonian,
// conformal, contact, and strict contact dynamics.
//
// Fields in flat coordinates (q, p [, z]):
//   hamiltonian     (dH/dp, -dH/dq)
//   conformal(c)    (dH/dp, -dH/dq + c p)
//   contact         (dHb/dp, -dHb/dq - p dHb/dz, p.dHb/dp - Hb)
//   strict_contact  contact with dHb/dz == 0
//
// Closed-form divergences: 0, n c, -(n+1) dHb/dz, 0.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckt/scalar_function.hpp"

namespace ckt {

struct FieldKind {
    enum class Tag { hamiltonian, conformal, contact, strict_contact };
    Tag tag = Tag::hamiltonian;
    double c = 0.0; // conformal parameter, used by Tag::conformal only

    static FieldKind hamiltonian() { return {Tag::hamiltonian, 0.0}; }
    static FieldKind conformal(double c) { return {Tag::conformal, c}; }
    static FieldKind contact() { return {Tag::contact, 0.0}; }
    static FieldKind strict_contact() { return {Tag::strict_contact, 0.0}; }

    Arity arity() const
    {
        return (tag == Tag::hamiltonian || tag == Tag::conformal) ? Arity::symplectic
                                                                  : Arity::contact;
    }
    std::string label() const;
};

enum class Method { rk4, conformal_splitting };

struct StepRecord {
    double t = 0.0;
    double energy = 0.0;  // H or Hbar at the state
    double logvol = 0.0;  // integral of div(X) along the path up to t
    double det_j = 1.0;   // determinant of the flow tangent map (variational runs)
    double dt = 0.0;      // step size used to reach t
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<StepRecord> diagnostics;
};

struct IntegrationError : std::runtime_error {
    std::size_t step;
    IntegrationError(std::string msg, std::size_t step_)
        : std::runtime_error(std::move(msg)), step(step_) {}
};

struct IntegrateOptions {
    Method method = Method::rk4;
    bool variational = false;      // carry the tangent map and record det J
    double blowup_threshold = 1e12;
};

Vec evaluate_field(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s);

double divergence(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s);

// finite-difference divergence of evaluate_field, for cross-checks
double fd_divergence(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s);

Trajectory integrate(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s0,
                     double T, double dt, const IntegrateOptions& opts = {});

// det of the flow tangent map at time T; equals e^{ncT} for conformal(c)
double flow_volume_factor(const FieldKind& kind, const ScalarFunction& H,
                          std::span<const double> s0, double T, double dt,
                          Method method = Method::rk4);

// max |d^2 H / dq dp| coupling over probe states; 0 for separable H = T(p)+V(q)
double separability_residual(const ScalarFunction& H, std::span<const Vec> probes);

// determinant by LU with partial pivoting; a is row-major d x d, clobbered
double lu_determinant(std::vector<double> a, std::size_t d);

} // namespace ckt
