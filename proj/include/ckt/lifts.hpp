// Lifts of base vector fields to the cotangent bundle and numerical checks
// of the Lie-algebra homomorphisms underlying the kinetic equations.
//
// With base coordinates x^a and fiber coordinates y_a:
//   complete lift   (X^a, -(dX^b/dx^a) y_b)
//   kappa           (X^a, -((dX^b/dx^b) y_a + (dX^b/dx^a) y_b)), div X constant
//   vertical rep    ydot_a = -((dX^b/dx^b) y_a + (dX^b/dx^a) y_b + X^b dy_a/dx^b)
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "ckt/brackets.hpp"
#include "ckt/density_kinetics.hpp"
#include "ckt/polynomial.hpp"

namespace ckt {

struct BaseField {
    std::size_t dim = 0;
    std::function<double(std::size_t a, std::span<const double>)> component;
    std::function<double(std::size_t a, std::size_t b, std::span<const double>)> deriv; // dX^a/dx^b

    double divergence(std::span<const double> x) const;
};

// field with polynomial components (analytic derivatives)
BaseField polynomial_field(std::vector<Polynomial> comps);

// one-form section y_a(x) with derivative access
struct CovectorSection {
    std::size_t dim = 0;
    std::function<double(std::size_t a, std::span<const double>)> value;
    std::function<double(std::size_t a, std::size_t b, std::span<const double>)> deriv; // dy_a/dx^b
};
CovectorSection polynomial_section(std::vector<Polynomial> comps);

// max over probes of |div X(x) - div X(x0)|
double constant_divergence_residual(const BaseField& X, std::span<const Vec> probes);

Vec complete_cotangent_lift(const BaseField& X, std::span<const double> x,
                            std::span<const double> y);

// requires constant divergence, verified by sampling around x (tol 1e-8)
Vec kappa_lift(const BaseField& X, std::span<const double> x, std::span<const double> y);

// fiber rate of the section under the vertical representative of kappa(X)
Vec vertical_representative(const BaseField& X, const CovectorSection& section,
                            std::span<const double> x);

// generic vector field R^d -> R^d for finite-difference bracket checks
using AnyField = std::function<Vec(std::span<const double>)>;

// Jacobi-Lie bracket [A,B]^i = A^j d_j B^i - B^j d_j A^i; derivatives by
// Richardson-extrapolated central differences
Vec fd_lie_bracket(const AnyField& A, const AnyField& B, std::span<const double> x);

// max over probes of the homomorphism defect for each algebra:
//   hamiltonian:  [X_F, X_H] + X_{{F,H}^(S)}
//   conformal:    [X_F^{cF}, X_H^{cH}] + X_{{F,H}+cF(Z(H)+H)-cH(Z(F)+F)}
//   contact:      [xi_F, xi_H] + xi_{{F,H}^(C)}
//   kappa:        [kappa X, kappa Y] - kappa([X,Y])
double hamiltonian_homomorphism_residual(const ScalarFunction& F, const ScalarFunction& H,
                                         std::span<const Vec> probes);
double conformal_homomorphism_residual(const ScalarFunction& F, double cF,
                                       const ScalarFunction& H, double cH,
                                       std::span<const Vec> probes);
double contact_homomorphism_residual(const ScalarFunction& F, const ScalarFunction& H,
                                     std::span<const Vec> probes);
double complete_lift_homomorphism_residual(const std::vector<Polynomial>& X,
                                           const std::vector<Polynomial>& Y,
                                           std::span<const Vec> probes);
double kappa_homomorphism_residual(const std::vector<Polynomial>& X,
                                   const std::vector<Polynomial>& Y,
                                   std::span<const Vec> probes);

// conformal_density_rhs against the three-piece coadjoint assembly
// (ad*_H f, f <* c_H, b*_H f); max of grid L-inf defect and |c* rate defect|
double extension_coadjoint_residual(const DensityGrid& f, const ScalarFunction& H, double c,
                                    int threads = 1);

// [complete lift X, div(X) W] for constant-divergence X (should vanish)
double kappa_commutation_residual(const std::vector<Polynomial>& X, std::span<const Vec> probes);

struct VerificationRecord {
    std::string kind;
    std::uint64_t seed = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// the five homomorphism checks over `instances` seeded polynomial draws each
std::vector<VerificationRecord> run_algebra_suite(std::uint64_t seed, std::size_t instances);

} // namespace ckt
