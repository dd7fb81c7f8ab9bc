#include <stdexcept>

#include <doctest.h>

#include "ckt/lifts.hpp"
#include "support.hpp"

using namespace ckt;

namespace {

Polynomial mono(std::size_t nvars, double coef, std::vector<unsigned> exps)
{
    Polynomial p(nvars);
    p.add_term(coef, std::move(exps));
    return p;
}

} // namespace

TEST_CASE("complete cotangent lift")
{
    // X = x d/dx at (x,y) = (2,3) -> (2, -3)
    const BaseField X = polynomial_field({mono(1, 1.0, {1})});
    const Vec lift = complete_cotangent_lift(X, Vec{2.0}, Vec{3.0});
    CHECK(lift[0] == doctest::Approx(2.0));
    CHECK(lift[1] == doctest::Approx(-3.0));

    // constant field has zero fiber part
    const BaseField Xc = polynomial_field({mono(1, 4.0, {0})});
    const Vec liftc = complete_cotangent_lift(Xc, Vec{2.0}, Vec{3.0});
    CHECK(liftc[0] == doctest::Approx(4.0));
    CHECK(liftc[1] == 0.0);
}

TEST_CASE("complete lift is a bracket homomorphism")
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 5; ++k) {
        const std::vector<Polynomial> X = {random_polynomial(2, 3, rng),
                                           random_polynomial(2, 3, rng)};
        const std::vector<Polynomial> Y = {random_polynomial(2, 3, rng),
                                           random_polynomial(2, 3, rng)};
        const auto probes = test_support::random_states(4, 8, 900 + k, 0.8);
        CHECK(complete_lift_homomorphism_residual(X, Y, probes) <= 1e-6);
    }
}

TEST_CASE("kappa lift values")
{
    // X = x d/dx at (2,3): div = 1, fiber -(1*3 + 1*3) = -6
    const BaseField X = polynomial_field({mono(1, 1.0, {1})});
    const Vec lift = kappa_lift(X, Vec{2.0}, Vec{3.0});
    CHECK(lift[0] == doctest::Approx(2.0));
    CHECK(lift[1] == doctest::Approx(-6.0));

    // divergence-free field: kappa equals the complete lift
    // X = (x2, -x1) in m = 2
    const BaseField rot =
        polynomial_field({mono(2, 1.0, {0, 1}), mono(2, -1.0, {1, 0})});
    const Vec a = kappa_lift(rot, Vec{0.3, -0.7}, Vec{1.0, 2.0});
    const Vec b = complete_cotangent_lift(rot, Vec{0.3, -0.7}, Vec{1.0, 2.0});
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(a[i] == doctest::Approx(b[i]));

    // X = (x1 + x2) d/dx1 in m = 2: div = 1
    // fiber_1 = -(1*y1 + 1*y1) = -2 y1, fiber_2 = -(1*y2 + 1*y1)
    Polynomial c0(2);
    c0.add_term(1.0, {1, 0});
    c0.add_term(1.0, {0, 1});
    const BaseField Xs = polynomial_field({c0, Polynomial(2)});
    const Vec ls = kappa_lift(Xs, Vec{0.5, 0.25}, Vec{2.0, 3.0});
    CHECK(ls[0] == doctest::Approx(0.75));
    CHECK(ls[1] == 0.0);
    CHECK(ls[2] == doctest::Approx(-(1.0 * 2.0 + 1.0 * 2.0)));
    CHECK(ls[3] == doctest::Approx(-(1.0 * 3.0 + 1.0 * 2.0)));

    // non-constant divergence is rejected
    const BaseField bad = polynomial_field({mono(1, 1.0, {2})});
    CHECK_THROWS_AS(kappa_lift(bad, Vec{1.0}, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("vertical representative")
{
    // X = x d/dx, section y = x: ydot = -3x
    const BaseField X = polynomial_field({mono(1, 1.0, {1})});
    const CovectorSection sec = polynomial_section({mono(1, 1.0, {1})});
    for (double x : {0.5, 1.0, -2.0}) {
        const Vec rate = vertical_representative(X, sec, Vec{x});
        CHECK(rate[0] == doctest::Approx(-3.0 * x));
    }

    // constant field, constant section: zero
    const BaseField Xc = polynomial_field({mono(1, 2.0, {0})});
    const CovectorSection secc = polynomial_section({mono(1, 5.0, {0})});
    CHECK(vertical_representative(Xc, secc, Vec{1.3})[0] == 0.0);
}

TEST_CASE("vertical representative equals -L_X Pi - div(X) Pi on sections")
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
        // constant-divergence field so the kappa route is defined as well
        const Polynomial psi = random_polynomial(2, 4, rng);
        Polynomial c0 = psi.derivative(1);
        Polynomial c1(2);
        c1.add_scaled(psi.derivative(0), -1.0);
        c0.add_scaled(mono(2, 0.7, {1, 0}), 1.0);
        c1.add_scaled(mono(2, 0.7, {0, 1}), 1.0);
        const std::vector<Polynomial> Xp = {c0, c1};
        const std::vector<Polynomial> Yp = {random_polynomial(2, 3, rng),
                                            random_polynomial(2, 3, rng)};
        const BaseField X = polynomial_field(Xp);
        const CovectorSection sec = polynomial_section(Yp);
        for (const Vec& x : test_support::random_states(2, 6, 700 + k)) {
            const Vec vr = vertical_representative(X, sec, x);
            const double div = X.divergence(x);
            for (std::size_t a = 0; a < 2; ++a) {
                // (L_X Pi)_a = X^b d_b y_a + y_b d_a X^b with section jets
                double lie = 0.0;
                for (std::size_t b = 0; b < 2; ++b)
                    lie += X.component(b, x) * sec.deriv(a, b, x) +
                           sec.value(b, x) * X.deriv(b, a, x);
                CHECK(vr[a] == doctest::Approx(-lie - div * sec.value(a, x)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("holonomic-part consistency: kappa minus H-kappa on section jets")
{
    // at (x, y(x)) the fiber part of kappa(X) minus X^b dy_a/dx^b equals the
    // vertical representative
    std::mt19937_64 rng(9);
    const Polynomial psi = random_polynomial(2, 4, rng);
    Polynomial c0 = psi.derivative(1);
    Polynomial c1(2);
    c1.add_scaled(psi.derivative(0), -1.0);
    const std::vector<Polynomial> Xp = {c0, c1};
    const BaseField X = polynomial_field(Xp);
    const CovectorSection sec =
        polynomial_section({random_polynomial(2, 3, rng), random_polynomial(2, 3, rng)});
    for (const Vec& x : test_support::random_states(2, 10, 19)) {
        const Vec y = {sec.value(0, x), sec.value(1, x)};
        const Vec kap = kappa_lift(X, x, y);
        const Vec vr = vertical_representative(X, sec, x);
        for (std::size_t a = 0; a < 2; ++a) {
            double holon = 0.0;
            for (std::size_t b = 0; b < 2; ++b)
                holon += X.component(b, x) * sec.deriv(a, b, x);
            CHECK(kap[2 + a] - holon == doctest::Approx(vr[a]).epsilon(1e-12));
        }
    }
}

TEST_CASE("homomorphism residual hand cases")
{
    // F = q, H = p: constant fields, bracket constant -> residual ~ 0
    Polynomial fq(2), hp(2);
    fq.add_term(1.0, {1, 0});
    hp.add_term(1.0, {0, 1});
    const ScalarFunction F = to_scalar_function(Arity::symplectic, 1, fq, "q");
    const ScalarFunction H = to_scalar_function(Arity::symplectic, 1, hp, "p");
    const auto probes = test_support::random_states(2, 10, 23);
    CHECK(hamiltonian_homomorphism_residual(F, H, probes) <= 1e-10);

    // contact: F = z, H = p, expanded by hand from the contact field formula
    Polynomial fz(3), hp3(3);
    fz.add_term(1.0, {0, 0, 1});
    hp3.add_term(1.0, {0, 1, 0});
    const ScalarFunction Fc = to_scalar_function(Arity::contact, 1, fz, "z");
    const ScalarFunction Hc = to_scalar_function(Arity::contact, 1, hp3, "p");
    const auto probes3 = test_support::random_states(3, 10, 29);
    CHECK(contact_homomorphism_residual(Fc, Hc, probes3) <= 1e-6);
}

TEST_CASE("kappa commutes with divergence lifts")
{
    std::mt19937_64 rng(31);
    const Polynomial psi = random_polynomial(2, 4, rng);
    Polynomial c0 = psi.derivative(1);
    Polynomial c1(2);
    c1.add_scaled(psi.derivative(0), -1.0);
    c0.add_scaled(mono(2, 0.4, {1, 0}), 1.0);
    c1.add_scaled(mono(2, 0.4, {0, 1}), 1.0);
    const auto probes = test_support::random_states(4, 10, 37, 0.8);
    CHECK(kappa_commutation_residual({c0, c1}, probes) <= 1e-8);
}

TEST_CASE("extension coadjoint assembly matches the density right side")
{
    const GridSpec spec = GridSpec::symplectic({-2.0, 2.0, 24, Boundary::truncated},
                                               {-2.0, 2.0, 24, Boundary::truncated});
    DensityGrid f(spec);
    f.values = sample_on_grid(spec, [](std::span<const double> x) {
        return (0.3 + x[0] - 0.5 * x[1]) * std::exp(-(x[0] * x[0] + x[1] * x[1]));
    });
    CHECK(extension_coadjoint_residual(f, test_support::harmonic(), 0.7) <= 1e-6);
}

TEST_CASE("algebra suite passes on a fixed seed")
{
    const auto records = run_algebra_suite(42, 10);
    CHECK(records.size() == 5);
    for (const VerificationRecord& rec : records) {
        INFO(rec.kind, " residual ", rec.residual);
        CHECK(rec.pass);
        CHECK(rec.residual <= rec.tolerance);
    }
}
