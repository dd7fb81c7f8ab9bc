#include <doctest.h>

#include <stdexcept>

#include "ckt/density_kinetics.hpp"
#include "ckt/momentum_kinetics.hpp"
#include "support.hpp"

using namespace ckt;
using test_support::harmonic;

namespace {

GridSpec sym_spec(std::size_t cells = 32, double half = 4.0)
{
    return GridSpec::symplectic({-half, half, cells, Boundary::truncated},
                                {-half, half, cells, Boundary::truncated});
}

GridSpec con_spec(std::size_t cells = 24, double half = 3.0)
{
    return GridSpec::contact({-half, half, cells, Boundary::truncated},
                             {-half, half, cells, Boundary::truncated},
                             {-half, half, cells, Boundary::truncated});
}

// Pi = p dq sampled on a grid
OneFormGrid theta_oneform(const GridSpec& spec)
{
    OneFormGrid Pi(spec);
    const std::size_t np = spec.axes[1].cells;
    const std::size_t nz = spec.is_contact() ? spec.axes[2].cells : 1;
    for (std::size_t i = 0; i < Pi.comp[0].size(); ++i)
        Pi.comp[0][i] = spec.axes[1].center((i / nz) % np);
    return Pi;
}

} // namespace

TEST_CASE("lie derivative hand values")
{
    const GridSpec spec = sym_spec();

    // X = d/dq (H = p), Pi = p dq -> 0
    VectorFieldGrid X(spec);
    std::fill(X.comp[0].begin(), X.comp[0].end(), 1.0);
    const OneFormGrid theta = theta_oneform(spec);
    const OneFormGrid l1 = lie_derivative_oneform(X, theta);
    for (std::size_t a = 0; a < 2; ++a)
        for (double v : l1.comp[a])
            CHECK(std::fabs(v) <= 1e-12);

    // X = q d/dq, Pi = q dq -> 2q dq
    VectorFieldGrid Xq(spec);
    OneFormGrid qdq(spec);
    const std::size_t np = spec.axes[1].cells;
    for (std::size_t i = 0; i < qdq.comp[0].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        Xq.comp[0][i] = q;
        qdq.comp[0][i] = q;
    }
    const OneFormGrid l2 = lie_derivative_oneform(Xq, qdq);
    for (std::size_t i = 0; i < l2.comp[0].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        CHECK(std::fabs(l2.comp[0][i] - 2.0 * q) <= 1e-10);
        CHECK(std::fabs(l2.comp[1][i]) <= 1e-12);
    }

    // X = Z = -p d/dp, Pi = p dq -> -p dq
    VectorFieldGrid Z(spec);
    for (std::size_t i = 0; i < Z.comp[1].size(); ++i)
        Z.comp[1][i] = -spec.axes[1].center(i % np);
    const OneFormGrid l3 = lie_derivative_oneform(Z, theta);
    for (std::size_t i = 0; i < l3.comp[0].size(); ++i) {
        CHECK(std::fabs(l3.comp[0][i] + spec.axes[1].center(i % np)) <= 1e-10);
        CHECK(std::fabs(l3.comp[1][i]) <= 1e-12);
    }
}

TEST_CASE("momentum right sides on theta")
{
    const GridSpec spec = sym_spec();
    const ScalarFunction Hp = ScalarFunction::symplectic(
        1, [](std::span<const double> x) { return x[1]; },
        [](std::span<const double>, std::span<double> g) {
            g[0] = 0.0;
            g[1] = 1.0;
        },
        "p");
    const OneFormGrid theta = theta_oneform(spec);

    // stationary under the free-streaming field
    const OneFormGrid rham = momentum_rhs(MomentumModel::hamiltonian(), theta, Hp);
    for (std::size_t a = 0; a < 2; ++a)
        for (double v : rham.comp[a])
            CHECK(std::fabs(v) <= 1e-12);

    // conformal: -L_{X^c} theta - c n theta = -c(n+1) theta for H = p
    // (L_{X_H} theta = 0 and L_Z theta = -theta)
    const double c = 0.3;
    const OneFormGrid rconf = momentum_rhs(MomentumModel::conformal(c), theta, Hp);
    const std::size_t np = spec.axes[1].cells;
    for (std::size_t i = 0; i < rconf.comp[0].size(); ++i) {
        const double p = spec.axes[1].center(i % np);
        CHECK(std::fabs(rconf.comp[0][i] - (-2.0 * c * p)) <= 1e-10);
        CHECK(std::fabs(rconf.comp[1][i]) <= 1e-12);
    }

    // c = 0 is bit-identical to the Hamiltonian kernel
    const OneFormGrid rzero = momentum_rhs(MomentumModel::conformal(0.0), theta, Hp);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < rzero.comp[a].size(); ++i)
            CHECK(rzero.comp[a][i] == rham.comp[a][i]);
}

TEST_CASE("contact momentum right side against hand expansion")
{
    // Hb = -z: xi = p d/dp + z d/dz, R(Hb) = -1
    // -L_xi(dz) + 2R(Hb) dz = -dz - 2dz = -3 dz
    const GridSpec spec = con_spec();
    const ScalarFunction Hb = ScalarFunction::contact(
        1, [](std::span<const double> x) { return -x[2]; },
        [](std::span<const double>, std::span<double> g) {
            g[0] = 0.0;
            g[1] = 0.0;
            g[2] = -1.0;
        },
        "-z");
    OneFormGrid dz(spec);
    std::fill(dz.comp[2].begin(), dz.comp[2].end(), 1.0);
    const OneFormGrid rate = momentum_rhs(MomentumModel::contact(), dz, Hb);
    for (std::size_t i = 0; i < rate.comp[2].size(); ++i) {
        CHECK(std::fabs(rate.comp[0][i]) <= 1e-10);
        CHECK(std::fabs(rate.comp[1][i]) <= 1e-10);
        CHECK(std::fabs(rate.comp[2][i] + 3.0) <= 1e-10);
    }
}

TEST_CASE("density map anchors")
{
    const GridSpec spec = sym_spec();
    // Pi = p dq -> f = div Z = -1
    const DensityGrid f = density_from_oneform(theta_oneform(spec));
    for (double v : f.values)
        CHECK(std::fabs(v + 1.0) <= 1e-11);

    // Pi = dq -> 0
    OneFormGrid dq(spec);
    std::fill(dq.comp[0].begin(), dq.comp[0].end(), 1.0);
    const DensityGrid f_dq = density_from_oneform(dq);
    for (double v : f_dq.values)
        CHECK(std::fabs(v) <= 1e-12);

    // exact form dF, F compactly supported -> total mass 0
    OneFormGrid dF(spec);
    auto F = [](double q, double p) { return std::exp(-2.0 * (q * q + p * p)); };
    const std::size_t np = spec.axes[1].cells;
    for (std::size_t i = 0; i < dF.comp[0].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        const double p = spec.axes[1].center(i % np);
        dF.comp[0][i] = -4.0 * q * F(q, p);
        dF.comp[1][i] = -4.0 * p * F(q, p);
    }
    const DensityGrid fd = density_from_oneform(dF);
    CHECK(std::fabs(integrate_cells(spec, fd.values)) <= 1e-10);
}

TEST_CASE("cstar map")
{
    const GridSpec spec = sym_spec();
    const std::size_t np = spec.axes[1].cells;

    // Pi = w p dq: <Theta, sharp Pi> = 0 pointwise
    OneFormGrid wtheta(spec);
    for (std::size_t i = 0; i < wtheta.comp[0].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        const double p = spec.axes[1].center(i % np);
        wtheta.comp[0][i] = std::exp(-(q * q + p * p)) * p;
    }
    CHECK(std::fabs(cstar_from_oneform(wtheta)) <= 1e-14);

    // Pi = w dp: integrand w p
    OneFormGrid wdp(spec);
    Vec expected(spec.cell_count());
    for (std::size_t i = 0; i < wdp.comp[1].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        const double p = spec.axes[1].center(i % np);
        wdp.comp[1][i] = std::exp(-(q * q + p * p));
        expected[i] = wdp.comp[1][i] * p;
    }
    CHECK(cstar_from_oneform(wdp) ==
          doctest::Approx(integrate_cells(spec, expected)).epsilon(1e-13));

    OneFormGrid zero(spec);
    CHECK(cstar_from_oneform(zero) == 0.0);
}

TEST_CASE("contact density map anchors")
{
    const GridSpec spec = con_spec();
    // Pb = p dq -> fb = -1
    const DensityGrid f1 = contact_density_from_oneform(theta_oneform(spec));
    for (double v : f1.values)
        CHECK(std::fabs(v + 1.0) <= 1e-11);

    // Pb = z dz -> 0 for n = 1
    OneFormGrid zdz(spec);
    const std::size_t nz = spec.axes[2].cells;
    for (std::size_t i = 0; i < zdz.comp[2].size(); ++i)
        zdz.comp[2][i] = spec.axes[2].center(i % nz);
    const DensityGrid f_zdz = contact_density_from_oneform(zdz);
    for (double v : f_zdz.values)
        CHECK(std::fabs(v) <= 1e-11);

    OneFormGrid zero(spec);
    const DensityGrid f_zero = contact_density_from_oneform(zero);
    for (double v : f_zero.values)
        CHECK(v == 0.0);

    // strict map gains the dPb_z/dz term: Sb = z dz integrates to the z-width
    const DensityGrid fs = contact_density_from_oneform(zdz, true);
    const double width = spec.axes[2].max - spec.axes[2].min;
    for (double v : fs.values)
        CHECK(v == doctest::Approx(width).epsilon(1e-10));
}

TEST_CASE("linearity of the maps")
{
    const GridSpec spec = sym_spec(16);
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    OneFormGrid A(spec), B(spec), C(spec);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < A.comp[a].size(); ++i) {
            A.comp[a][i] = dist(rng);
            B.comp[a][i] = dist(rng);
            C.comp[a][i] = 2.5 * A.comp[a][i] - 0.5 * B.comp[a][i];
        }
    const DensityGrid fa = density_from_oneform(A);
    const DensityGrid fb = density_from_oneform(B);
    const DensityGrid fc = density_from_oneform(C);
    for (std::size_t i = 0; i < fc.values.size(); ++i)
        CHECK(fc.values[i] ==
              doctest::Approx(2.5 * fa.values[i] - 0.5 * fb.values[i]).epsilon(1e-10));
    CHECK(cstar_from_oneform(C) ==
          doctest::Approx(2.5 * cstar_from_oneform(A) - 0.5 * cstar_from_oneform(B))
              .epsilon(1e-10));
}

TEST_CASE("momentum-to-density intertwining over one step")
{
    // d/dt of the mapped density equals the density-form right side applied
    // to the mapped data (Lie-Poisson naturality of the map)
    const GridSpec spec = GridSpec::symplectic({-4.0, 4.0, 64, Boundary::truncated},
                                               {-4.0, 4.0, 64, Boundary::truncated});
    const ScalarFunction H = harmonic();
    const double c = 0.4;
    OneFormGrid Pi(spec);
    const std::size_t np = spec.axes[1].cells;
    for (std::size_t i = 0; i < Pi.comp[0].size(); ++i) {
        const double q = spec.axes[0].center(i / np);
        const double p = spec.axes[1].center(i % np);
        const double w = std::exp(-(q * q + p * p) / 0.72);
        Pi.comp[0][i] = w * (0.8 + 0.3 * p);
        Pi.comp[1][i] = w * (0.5 - 0.4 * q);
    }
    const OneFormGrid Pidot = momentum_rhs(MomentumModel::conformal(c), Pi, H);
    const DensityGrid f_of_pidot = density_from_oneform(Pidot);
    const ConformalRate density_rate = conformal_density_rhs(density_from_oneform(Pi), H, c);
    const double h = spec.axes[0].step();
    CHECK(l2_distance(spec, f_of_pidot.values, density_rate.rate.values) <= 5.0 * h * h);
    CHECK(std::fabs(cstar_from_oneform(Pidot) - density_rate.cstar_rate) <= 5.0 * h * h);
}

TEST_CASE("grid mismatch errors")
{
    const GridSpec a = sym_spec(16);
    const GridSpec b = sym_spec(32);
    VectorFieldGrid X(a);
    OneFormGrid Pi(b);
    CHECK_THROWS_AS(lie_derivative_oneform(X, Pi), std::invalid_argument);
    CHECK_THROWS_AS(density_from_oneform(OneFormGrid(con_spec(16))), std::invalid_argument);
    CHECK_THROWS_AS(momentum_rhs(MomentumModel::contact(), Pi, harmonic()),
                    std::invalid_argument);
}
