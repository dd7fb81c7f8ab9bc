#include <stdexcept>

#include <doctest.h>

#include "ckt/geometry.hpp"
#include "support.hpp"

using namespace ckt;

TEST_CASE("liouville field values")
{
    // Z = -p d/dp by hand substitution
    const Vec z1 = liouville_field(PhaseState({2.0}, {3.0}));
    CHECK(z1[0] == 0.0);
    CHECK(z1[1] == -3.0);
    const Vec z2 = liouville_field(PhaseState({5.0}, {0.0}));
    CHECK(z2[0] == 0.0);
    CHECK(z2[1] == 0.0);
    const Vec z3 = liouville_field(PhaseState({0.0, 0.0}, {1.0, -1.0}));
    CHECK(z3[2] == -1.0);
    CHECK(z3[3] == 1.0);
}

TEST_CASE("symplectic sharp convention")
{
    const PhaseState s({1.0}, {2.0});
    // alpha = p dq maps to the Liouville field
    CovectorValue theta;
    theta.dq = {s.p[0]};
    theta.dp = {0.0};
    const Vec sharp_theta = symplectic_sharp(theta, s);
    const Vec z = liouville_field(s);
    CHECK(sharp_theta[0] == z[0]);
    CHECK(sharp_theta[1] == z[1]);

    CovectorValue dq;
    dq.dq = {1.0};
    dq.dp = {0.0};
    const Vec v = symplectic_sharp(dq, s);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == -1.0);

    CovectorValue zero;
    zero.dq = {0.0};
    zero.dp = {0.0};
    const Vec v0 = symplectic_sharp(zero, s);
    CHECK(v0[0] == 0.0);
    CHECK(v0[1] == 0.0);
}

TEST_CASE("sharp/flat round trip")
{
    for (const Vec& x : test_support::random_states(4, 50, 7)) {
        const PhaseState s({x[0], x[1]}, {0.5, -0.25});
        const Vec tangent = {x[2], x[3], x[0] - x[1], x[0] * x[1]};
        const Vec back = symplectic_sharp(symplectic_flat(tangent, s), s);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::fabs(back[i] - tangent[i]) <= 1e-12);
    }
}

TEST_CASE("contact form and Reeb field")
{
    const ContactState s({1.0}, {3.0}, 0.5);
    const auto [eta, reeb] = contact_form_and_reeb(s);
    CHECK(eta.dq[0] == -3.0);
    CHECK(eta.dp[0] == 0.0);
    CHECK(*eta.dz == 1.0);
    CHECK(reeb[0] == 0.0);
    CHECK(reeb[1] == 0.0);
    CHECK(reeb[2] == 1.0);

    const auto [eta0, reeb0] = contact_form_and_reeb(ContactState({1.0}, {0.0}, 2.0));
    CHECK(eta0.dq[0] == 0.0);

    // eta(R) = 1 at random states
    for (const Vec& x : test_support::random_states(3, 100, 11, 2.0)) {
        const ContactState st({x[0]}, {x[1]}, x[2]);
        const auto [e, r] = contact_form_and_reeb(st);
        const double pairing = e.dq[0] * r[0] + e.dp[0] * r[1] + *e.dz * r[2];
        CHECK(std::fabs(pairing - 1.0) <= 1e-14);
    }
}

TEST_CASE("d(eta) annihilates the Reeb field (finite differences)")
{
    // d(eta)_{ij} = d_i eta_j - d_j eta_i of the component functions
    auto eta_comp = [](const Vec& x, std::size_t j) {
        const ContactState s({x[0]}, {x[1]}, x[2]);
        const auto [e, r] = contact_form_and_reeb(s);
        return j == 0 ? e.dq[0] : (j == 1 ? e.dp[0] : *e.dz);
    };
    for (const Vec& x : test_support::random_states(3, 100, 13, 2.0)) {
        for (std::size_t j = 0; j < 3; ++j) {
            // (d eta)(R, e_j) = d_z eta_j - d_j eta_z
            const double h = 1e-6;
            Vec xp = x, xm = x;
            xp[2] += h;
            xm[2] -= h;
            const double dz_etaj = (eta_comp(xp, j) - eta_comp(xm, j)) / (2 * h);
            xp = x;
            xm = x;
            xp[j] += h;
            xm[j] -= h;
            const double dj_etaz = (eta_comp(xp, 2) - eta_comp(xm, 2)) / (2 * h);
            CHECK(std::fabs(dz_etaj - dj_etaz) <= 1e-8);
        }
    }
}

TEST_CASE("sharp_lambda values and kernel")
{
    const ContactState s({1.0}, {2.0}, 3.0);
    CovectorValue dz;
    dz.dq = {0.0};
    dz.dp = {0.0};
    dz.dz = 1.0;
    const Vec v = sharp_lambda(dz, s);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == -2.0);
    CHECK(v[2] == 0.0);

    CovectorValue dq;
    dq.dq = {1.0};
    dq.dp = {0.0};
    dq.dz = 0.0;
    const ContactState s5({0.0}, {5.0}, 0.0);
    const Vec vq = sharp_lambda(dq, s5);
    CHECK(vq[0] == 0.0);
    CHECK(vq[1] == -1.0);
    CHECK(vq[2] == 0.0);

    // eta spans the kernel
    for (const Vec& x : test_support::random_states(3, 100, 17, 2.0)) {
        const ContactState st({x[0]}, {x[1]}, x[2]);
        const auto [eta, reeb] = contact_form_and_reeb(st);
        const Vec k = sharp_lambda(eta, st);
        for (double comp : k)
            CHECK(std::fabs(comp) <= 1e-14);
    }
}

TEST_CASE("gradient fallback agrees with analytic gradients")
{
    const ScalarFunction h = test_support::harmonic();
    const auto probes = test_support::random_states(2, 20, 23, 2.0);
    CHECK(gradient_consistency(h, probes) <= 1e-6);
}

TEST_CASE("state invariants")
{
    CHECK_THROWS_AS(PhaseState({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseState({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ContactState({1.0}, {2.0}, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(
        [] {
            CovectorValue alpha;
            alpha.dq = {1.0};
            alpha.dp = {0.0};
            alpha.dz = 1.0; // contact covector against symplectic op
            return symplectic_sharp(alpha, PhaseState({0.0}, {0.0}));
        }(),
        std::invalid_argument);
}
