#include <doctest.h>

#include "ckt/brackets.hpp"
#include "ckt/crosschecks.hpp"
#include "ckt/polynomial.hpp"
#include "support.hpp"

using namespace ckt;
using test_support::harmonic;

TEST_CASE("extension values and bracket homomorphism")
{
    const ExtendedHamiltonian ext = extend_hamiltonian(harmonic(), 0.1);
    CHECK(ext.extended.value(Vec{0.0, 1.0, 4.0}) == doctest::Approx(0.1));
    CHECK(ext.extended.gradient(Vec{0.3, -0.2, 1.5}).back() == -0.1);

    // contact bracket of two extensions equals the extension-algebra bracket:
    // {Xi(H,cH), Xi(F,cF)}^C = {H,F}^S + cH (Z(F)+F) - cF (Z(H)+H)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> cdist(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const Polynomial hp = random_polynomial(2, 3, rng);
        const Polynomial fp = random_polynomial(2, 3, rng);
        const double cH = cdist(rng), cF = cdist(rng);
        const ScalarFunction H = to_scalar_function(Arity::symplectic, 1, hp, "H");
        const ScalarFunction F = to_scalar_function(Arity::symplectic, 1, fp, "F");
        const ScalarFunction Hb = extend_hamiltonian(H, cH).extended;
        const ScalarFunction Fb = extend_hamiltonian(F, cF).extended;
        for (const Vec& s : test_support::random_states(3, 6, 600 + k)) {
            const Vec s2 = {s[0], s[1]};
            const Vec gH = H.gradient(s2), gF = F.gradient(s2);
            const double zh = H.value(s2) - s[1] * gH[1];
            const double zf = F.value(s2) - s[1] * gF[1];
            const double expected =
                poisson_bracket(H, F, s2) + cH * zf - cF * zh;
            CHECK(contact_bracket(Hb, Fb, s) == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("contact trajectory projects onto the conformal trajectory")
{
    const double c = 0.1, T = 10.0, dt = 1e-3;
    const ScalarFunction H = harmonic();
    const ExtendedHamiltonian ext = extend_hamiltonian(H, c);
    const Trajectory contact_tr =
        integrate(FieldKind::contact(), ext.extended, Vec{1.0, 0.0, 0.0}, T, dt);
    const Trajectory conformal_tr =
        integrate(FieldKind::conformal(c), H, Vec{1.0, 0.0}, T, dt);
    const Trajectory projected = project_trajectory(contact_tr, H);
    REQUIRE(projected.states.size() == conformal_tr.states.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < projected.states.size(); ++k) {
        worst = std::max(worst,
                         std::fabs(projected.states[k][0] - conformal_tr.states[k][0]));
        worst = std::max(worst,
                         std::fabs(projected.states[k][1] - conformal_tr.states[k][1]));
    }
    CHECK(worst <= 1e-10);

    // c = 0 reduces to the plain Hamiltonian flow
    const ExtendedHamiltonian flat = extend_hamiltonian(H, 0.0);
    const Trajectory tr0 =
        integrate(FieldKind::contact(), flat.extended, Vec{1.0, 0.0, 0.0}, 1.0, 1e-3);
    const Trajectory ham = integrate(FieldKind::hamiltonian(), H, Vec{1.0, 0.0}, 1.0, 1e-3);
    const Trajectory proj0 = project_trajectory(tr0, H);
    for (std::size_t k = 0; k < proj0.states.size(); k += 100) {
        CHECK(std::fabs(proj0.states[k][0] - ham.states[k][0]) <= 1e-12);
        CHECK(std::fabs(proj0.states[k][1] - ham.states[k][1]) <= 1e-12);
    }

    // z history obeys zdot = p dH/dp - H + c z (4th-order differencing)
    double zres = 0.0;
    for (std::size_t k = 2; k + 2 < contact_tr.states.size(); k += 13) {
        auto z_at = [&](std::size_t j) { return contact_tr.states[j][2]; };
        const Vec& st = contact_tr.states[k];
        const double zdot =
            (-z_at(k + 2) + 8.0 * z_at(k + 1) - 8.0 * z_at(k - 1) + z_at(k - 2)) / (12.0 * dt);
        const double expected = st[1] * st[1] - 0.5 * (st[0] * st[0] + st[1] * st[1]) +
                                c * st[2];
        zres = std::max(zres, std::fabs(zdot - expected));
    }
    CHECK(zres <= 1e-6);
}

TEST_CASE("kinetic projection of separable data")
{
    const GridSpec spec = GridSpec::contact({-3.0, 3.0, 24, Boundary::truncated},
                                            {-3.0, 3.0, 24, Boundary::truncated},
                                            {-3.0, 3.0, 24, Boundary::truncated});
    // fb = g(q,p) rho(z) with unit-mass rho
    const double sz = 0.4;
    const double norm = 1.0 / (sz * std::sqrt(2.0 * std::acos(-1.0)));
    DensityGrid fbar(spec);
    fbar.values = sample_on_grid(spec, [&](std::span<const double> x) {
        const double g = std::exp(-(x[0] * x[0] + x[1] * x[1]));
        return g * norm * std::exp(-0.5 * x[2] * x[2] / (sz * sz));
    });
    const auto [f, cstar] = project_kinetic(fbar);
    GridSpec base;
    base.axes = {spec.axes[0], spec.axes[1]};
    double worst = 0.0;
    std::array<double, 2> x{};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        base.center(i, x);
        worst = std::max(worst,
                         std::fabs(f.values[i] - std::exp(-(x[0] * x[0] + x[1] * x[1]))));
    }
    CHECK(worst <= 1e-6);       // quadrature error of the z marginal
    CHECK(std::fabs(cstar) <= 1e-10); // odd moment of an even profile

    // one-form projection of separable data recovers the planar components
    OneFormGrid Pibar(spec);
    Pibar.comp[0] = sample_on_grid(spec, [&](std::span<const double> x3) {
        return (0.3 + x3[1]) * norm * std::exp(-0.5 * x3[2] * x3[2] / (sz * sz));
    });
    const OneFormGrid Pi = project_oneform(Pibar);
    std::array<double, 2> xb{};
    for (std::size_t i = 0; i < Pi.comp[0].size(); ++i) {
        base.center(i, xb);
        CHECK(std::fabs(Pi.comp[0][i] - (0.3 + xb[1])) <= 1e-6);
        CHECK(Pi.comp[1][i] == 0.0);
    }

    // odd-in-z data projects to zero
    OneFormGrid odd(spec);
    odd.comp[0] = sample_on_grid(spec, [&](std::span<const double> x3) {
        return x3[2] * std::exp(-0.5 * x3[2] * x3[2] / (sz * sz));
    });
    const OneFormGrid odd_projected = project_oneform(odd);
    for (double v : odd_projected.comp[0])
        CHECK(std::fabs(v) <= 1e-12);
}

TEST_CASE("z-boundary decay violation is an error")
{
    const GridSpec spec = GridSpec::contact({-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated});
    DensityGrid fbar(spec, 1.0); // uniform: huge boundary fraction
    CHECK_THROWS_AS(project_kinetic(fbar), std::runtime_error);
}

TEST_CASE("density projection intertwines with the conformal flow")
{
    const GridSpec base = GridSpec::contact({-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated});
    const ConvergenceStudy st =
        contact_density_projection_study(harmonic(), 0.3, base, 2, 6);
    INFO("residuals ", st.residuals[0], " ", st.residuals[1]);
    CHECK(st.residuals[1] < st.residuals[0]);
    CHECK(st.min_order() >= 1.8);
}

TEST_CASE("one-form projection intertwines with the conformal momentum flow")
{
    const GridSpec base = GridSpec::contact({-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated},
                                            {-3.0, 3.0, 16, Boundary::truncated});
    const ConvergenceStudy st =
        contact_oneform_projection_study(harmonic(), 0.3, base, 2, 6);
    INFO("residuals ", st.residuals[0], " ", st.residuals[1]);
    CHECK(st.min_order() >= 1.8);
}

TEST_CASE("commuting square residual shrinks under refinement")
{
    const GridSpec coarse = GridSpec::contact({-3.0, 3.0, 16, Boundary::truncated},
                                              {-3.0, 3.0, 16, Boundary::truncated},
                                              {-3.0, 3.0, 16, Boundary::truncated});
    const double r0 = commuting_square_residual(harmonic(), 0.3, coarse, 6);
    const double r1 = commuting_square_residual(harmonic(), 0.3, refine(coarse, 2), 12);
    INFO("square residuals ", r0, " ", r1);
    CHECK(std::log2(r0 / r1) >= 1.8);
}
