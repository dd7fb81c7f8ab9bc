#include "ckt/hierarchy.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ckt {

ExtendedHamiltonian extend_hamiltonian(const ScalarFunction& H, double c)
{
    if (H.arity() != Arity::symplectic)
        throw std::invalid_argument("extend_hamiltonian expects a symplectic Hamiltonian");
    const std::size_t n = H.n();
    auto base = std::make_shared<ScalarFunction>(H);
    ScalarFunction extended(
        Arity::contact, n,
        [base, c, n](std::span<const double> x) {
            return base->value(x.first(2 * n)) - c * x[2 * n];
        },
        [base, c, n](std::span<const double> x, std::span<double> out) {
            base->gradient(x.first(2 * n), out.first(2 * n));
            out[2 * n] = -c;
        },
        H.name().empty() ? "extended" : H.name() + "-c*z");
    return {H, c, std::move(extended)};
}

Trajectory project_trajectory(const Trajectory& tr, const ScalarFunction& base_hamiltonian)
{
    if (tr.states.empty())
        throw std::invalid_argument("project_trajectory: empty trajectory");
    if (tr.states.front().size() % 2 != 1)
        throw std::invalid_argument("project_trajectory expects a contact trajectory");
    const std::size_t n = tr.states.front().size() / 2;
    if (base_hamiltonian.dim() != 2 * n)
        throw std::invalid_argument("project_trajectory: base Hamiltonian dimension mismatch");
    Trajectory out;
    out.times = tr.times;
    out.states.reserve(tr.states.size());
    out.diagnostics.reserve(tr.diagnostics.size());
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        Vec s(tr.states[k].begin(), tr.states[k].begin() + 2 * n);
        StepRecord rec;
        rec.t = tr.diagnostics[k].t;
        rec.dt = tr.diagnostics[k].dt;
        rec.energy = base_hamiltonian.value(s);
        rec.logvol = 0.0;
        rec.det_j = 1.0;
        out.states.push_back(std::move(s));
        out.diagnostics.push_back(rec);
    }
    return out;
}

namespace {

GridSpec base_of(const GridSpec& contact_spec)
{
    GridSpec base;
    base.axes = {contact_spec.axes[0], contact_spec.axes[1]};
    return base;
}

void check_z_decay(const GridSpec& spec, std::span<const double> values, double threshold,
                   const char* what)
{
    const std::size_t nz = spec.axes[2].cells;
    Vec absval(values.size());
    Vec edge(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        absval[i] = std::fabs(values[i]);
        const std::size_t iz = i % nz;
        if (iz < 3 || iz + 3 >= nz)
            edge[i] = absval[i];
    }
    const double total = pairwise_sum(absval);
    if (total == 0.0)
        return;
    const double frac = pairwise_sum(edge) / total;
    if (frac > threshold)
        throw std::runtime_error(std::string(what) +
                                 ": mass near the z boundary violates the decay requirement "
                                 "(fraction " +
                                 std::to_string(frac) + ")");
}

// z-column midpoint quadrature of a contact-grid array onto the base grid
Vec z_integral(const GridSpec& spec, std::span<const double> values)
{
    const std::size_t np = spec.axes[1].cells;
    const std::size_t nz = spec.axes[2].cells;
    const double dz = spec.axes[2].step();
    Vec out(spec.axes[0].cells * np);
    for (std::size_t iq = 0; iq < spec.axes[0].cells; ++iq)
        for (std::size_t ip = 0; ip < np; ++ip) {
            const std::size_t b = (iq * np + ip) * nz;
            out[iq * np + ip] = pairwise_sum(values.subspan(b, nz)) * dz;
        }
    return out;
}

} // namespace

std::pair<DensityGrid, double> project_kinetic(const DensityGrid& fbar,
                                               double max_z_boundary_fraction)
{
    if (!fbar.spec.is_contact())
        throw std::invalid_argument("project_kinetic expects a contact density");
    check_z_decay(fbar.spec, fbar.values, max_z_boundary_fraction, "project_kinetic");
    DensityGrid f(base_of(fbar.spec));
    f.values = z_integral(fbar.spec, fbar.values);

    const std::size_t nz = fbar.spec.axes[2].cells;
    Vec weighted(fbar.values.size());
    for (std::size_t i = 0; i < fbar.values.size(); ++i)
        weighted[i] = fbar.spec.axes[2].center(i % nz) * fbar.values[i];
    const double cstar = integrate_cells(fbar.spec, weighted);
    f.cstar = cstar;
    return {std::move(f), cstar};
}

OneFormGrid project_oneform(const OneFormGrid& Pibar, double max_z_boundary_fraction)
{
    if (!Pibar.spec.is_contact())
        throw std::invalid_argument("project_oneform expects a contact one-form");
    for (std::size_t a = 0; a < 2; ++a)
        check_z_decay(Pibar.spec, Pibar.comp[a], max_z_boundary_fraction, "project_oneform");
    OneFormGrid out(base_of(Pibar.spec));
    out.comp[0] = z_integral(Pibar.spec, Pibar.comp[0]);
    out.comp[1] = z_integral(Pibar.spec, Pibar.comp[1]);
    return out;
}

} // namespace ckt
