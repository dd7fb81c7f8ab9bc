#include "ckt/crosschecks.hpp"

#include "ckt/density_kinetics.hpp"

#include <cmath>
#include <stdexcept>

namespace ckt {

double ConvergenceStudy::min_order() const
{
    double m = std::numeric_limits<double>::infinity();
    for (double o : orders)
        m = std::min(m, o);
    return m;
}

GridSpec refine(const GridSpec& spec, std::size_t factor)
{
    GridSpec out = spec;
    for (AxisSpec& a : out.axes)
        a.cells *= factor;
    return out;
}

namespace {

void fill_orders(ConvergenceStudy& st)
{
    for (std::size_t k = 0; k + 1 < st.residuals.size(); ++k) {
        const double a = st.residuals[k], b = st.residuals[k + 1];
        st.orders.push_back((a > 0.0 && b > 0.0) ? std::log2(a / b)
                                                 : std::numeric_limits<double>::infinity());
    }
}

double window2(std::span<const double> x)
{
    const double q = x[0] - 0.4, p = x[1] + 0.3;
    return std::exp(-(q * q + p * p) / (2.0 * 0.6 * 0.6));
}

double window3(std::span<const double> x)
{
    const double q = x[0] - 0.3, p = x[1] + 0.2, z = x[2];
    return std::exp(-(q * q + p * p) / (2.0 * 0.5 * 0.5)) * std::exp(-z * z / (2.0 * 0.4 * 0.4));
}

OneFormGrid initial_oneform2(const GridSpec& spec)
{
    OneFormGrid Pi(spec);
    Pi.comp[0] = sample_on_grid(spec, [](std::span<const double> x) {
        return window2(x) * (0.8 + 0.3 * x[1]);
    });
    Pi.comp[1] = sample_on_grid(spec, [](std::span<const double> x) {
        return window2(x) * (0.5 - 0.4 * x[0]);
    });
    return Pi;
}

OneFormGrid initial_oneform3(const GridSpec& spec)
{
    OneFormGrid Pi(spec);
    Pi.comp[0] = sample_on_grid(spec, [](std::span<const double> x) {
        return window3(x) * (0.8 + 0.3 * x[1]);
    });
    Pi.comp[1] = sample_on_grid(spec, [](std::span<const double> x) {
        return window3(x) * (0.5 - 0.4 * x[0] + 0.2 * x[1]);
    });
    // odd in z so the z-line integral of Pb_z vanishes (the subspace on which
    // the discarded-component projection intertwines)
    Pi.comp[2] = sample_on_grid(spec, [](std::span<const double> x) {
        return 0.6 * x[2] * window3(x);
    });
    return Pi;
}

} // namespace

ConvergenceStudy momentum_density_intertwining(const ScalarFunction& H, double c,
                                               const GridSpec& base, std::size_t levels,
                                               std::size_t steps0, int threads)
{
    if (base.is_contact())
        throw std::invalid_argument("momentum_density_intertwining expects a symplectic grid");
    ConvergenceStudy st;
    {
        MomentumStepper probe(MomentumModel::conformal(c), base, H, threads);
        st.dt0 = 0.4 * probe.cfl_limit();
    }
    st.T = st.dt0 * static_cast<double>(steps0);

    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t factor = std::size_t{1} << level;
        const GridSpec spec = refine(base, factor);
        const double dt = st.dt0 / static_cast<double>(factor);
        const std::size_t steps = steps0 * factor;

        OneFormGrid Pi = initial_oneform2(spec);
        DensityGrid f = density_from_oneform(Pi, threads);
        f.cstar = cstar_from_oneform(Pi);

        MomentumStepper mstep(MomentumModel::conformal(c), spec, H, threads);
        DensityStepper dstep(KineticModel::conformal(c), spec, H, {.threads = threads});
        for (std::size_t k = 0; k < steps; ++k) {
            mstep.step(Pi, dt);
            dstep.step(f, dt);
        }
        const DensityGrid f_from_momentum = density_from_oneform(Pi, threads);
        const double cstar_from_mom = cstar_from_oneform(Pi);

        st.cells.push_back(spec.axes[0].cells);
        st.residuals.push_back(l2_distance(spec, f_from_momentum.values, f.values));
        st.extra.push_back(std::fabs(cstar_from_mom - f.cstar.value_or(0.0)));
    }
    fill_orders(st);
    return st;
}

ConvergenceStudy contact_density_projection_study(const ScalarFunction& H, double c,
                                                  const GridSpec& contact_base,
                                                  std::size_t levels, std::size_t steps0,
                                                  int threads)
{
    if (!contact_base.is_contact())
        throw std::invalid_argument("contact_density_projection_study expects a contact grid");
    const ExtendedHamiltonian ext = extend_hamiltonian(H, c);
    ConvergenceStudy st;
    {
        DensityStepper probe(KineticModel::contact_bracket(), contact_base, ext.extended,
                             {.threads = threads});
        st.dt0 = 0.4 * probe.cfl_limit();
    }
    st.T = st.dt0 * static_cast<double>(steps0);

    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t factor = std::size_t{1} << level;
        const GridSpec spec = refine(contact_base, factor);
        const double dt = st.dt0 / static_cast<double>(factor);
        const std::size_t steps = steps0 * factor;

        DensityGrid fbar(spec);
        fbar.values = sample_on_grid(spec, window3);

        auto [f, cstar0] = project_kinetic(fbar, 1e-3);
        f.cstar = cstar0;

        GridSpec base;
        base.axes = {spec.axes[0], spec.axes[1]};
        DensityStepper contact_step(KineticModel::contact_bracket(), spec, ext.extended,
                                    {.threads = threads});
        DensityStepper conf_step(KineticModel::conformal(c), base, H, {.threads = threads});
        for (std::size_t k = 0; k < steps; ++k) {
            contact_step.step(fbar, dt);
            conf_step.step(f, dt);
        }
        auto [f_projected, cstarT] = project_kinetic(fbar, 1e-3);

        st.cells.push_back(spec.axes[0].cells);
        st.residuals.push_back(l2_distance(base, f_projected.values, f.values));
        st.extra.push_back(std::fabs(cstarT - f.cstar.value_or(0.0)));
    }
    fill_orders(st);
    return st;
}

ConvergenceStudy contact_oneform_projection_study(const ScalarFunction& H, double c,
                                                  const GridSpec& contact_base,
                                                  std::size_t levels, std::size_t steps0,
                                                  int threads)
{
    if (!contact_base.is_contact())
        throw std::invalid_argument("contact_oneform_projection_study expects a contact grid");
    const ExtendedHamiltonian ext = extend_hamiltonian(H, c);
    ConvergenceStudy st;
    {
        MomentumStepper probe(MomentumModel::contact(), contact_base, ext.extended, threads);
        st.dt0 = 0.4 * probe.cfl_limit();
    }
    st.T = st.dt0 * static_cast<double>(steps0);

    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t factor = std::size_t{1} << level;
        const GridSpec spec = refine(contact_base, factor);
        const double dt = st.dt0 / static_cast<double>(factor);
        const std::size_t steps = steps0 * factor;

        OneFormGrid Pibar = initial_oneform3(spec);
        OneFormGrid Pi = project_oneform(Pibar, 1e-3);

        GridSpec base = Pi.spec;
        MomentumStepper contact_step(MomentumModel::contact(), spec, ext.extended, threads);
        MomentumStepper conf_step(MomentumModel::conformal(c), base, H, threads);
        for (std::size_t k = 0; k < steps; ++k) {
            contact_step.step(Pibar, dt);
            conf_step.step(Pi, dt);
        }
        const OneFormGrid projected = project_oneform(Pibar, 1e-3);
        const double rq = l2_distance(base, projected.comp[0], Pi.comp[0]);
        const double rp = l2_distance(base, projected.comp[1], Pi.comp[1]);

        st.cells.push_back(spec.axes[0].cells);
        st.residuals.push_back(std::hypot(rq, rp));
        st.extra.push_back(0.0);
    }
    fill_orders(st);
    return st;
}

double commuting_square_residual(const ScalarFunction& H, double c, const GridSpec& contact,
                                 std::size_t steps, int threads)
{
    if (!contact.is_contact())
        throw std::invalid_argument("commuting_square_residual expects a contact grid");
    const ExtendedHamiltonian ext = extend_hamiltonian(H, c);
    OneFormGrid Pibar = initial_oneform3(contact);
    MomentumStepper mstep(MomentumModel::contact(), contact, ext.extended, threads);
    const double dt = 0.4 * mstep.cfl_limit();
    for (std::size_t k = 0; k < steps; ++k)
        mstep.step(Pibar, dt);

    const DensityGrid via_oneform =
        density_from_oneform(project_oneform(Pibar, 1e-3), threads);
    const auto [via_density, cstar] =
        project_kinetic(contact_density_from_oneform(Pibar, false, threads), 1e-3);
    return l2_distance(via_oneform.spec, via_oneform.values, via_density.values);
}

} // namespace ckt
