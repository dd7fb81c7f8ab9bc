#include "ckt/density_kinetics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ckt {

std::string KineticModel::label() const
{
    switch (kind) {
    case Kind::vlasov: return "vlasov";
    case Kind::conformal: return "conformal";
    case Kind::contact_vf: return "contact_vf";
    case Kind::contact_bracket: return "contact_bracket";
    }
    return "?";
}

HamiltonianSamples sample_hamiltonian(const GridSpec& spec, const ScalarFunction& H)
{
    if (spec.is_contact() || H.arity() != Arity::symplectic || H.n() != 1)
        throw std::invalid_argument("sample_hamiltonian expects a symplectic n=1 grid/function");
    const std::size_t total = spec.cell_count();
    HamiltonianSamples s;
    s.spec = spec;
    s.dHdq.resize(total);
    s.dHdp.resize(total);
    s.zh_plus_h.resize(total);
    std::array<double, 2> x{};
    std::array<double, 2> g{};
    for (std::size_t i = 0; i < total; ++i) {
        spec.center(i, x);
        H.gradient(x, g);
        s.dHdq[i] = g[0];
        s.dHdp[i] = g[1];
        s.zh_plus_h[i] = H.value(x) - x[1] * g[1];
    }
    return s;
}

ContactFieldSamples sample_contact_field(const GridSpec& spec, const ScalarFunction& Hbar)
{
    if (!spec.is_contact() || Hbar.arity() != Arity::contact || Hbar.n() != 1)
        throw std::invalid_argument("sample_contact_field expects a contact n=1 grid/function");
    const std::size_t total = spec.cell_count();
    ContactFieldSamples s;
    s.spec = spec;
    s.xi_q.resize(total);
    s.xi_p.resize(total);
    s.xi_z.resize(total);
    s.dHdz.resize(total);
    std::array<double, 3> x{};
    std::array<double, 3> g{};
    for (std::size_t i = 0; i < total; ++i) {
        spec.center(i, x);
        Hbar.gradient(x, g);
        const double p = x[1];
        s.xi_q[i] = g[1];
        s.xi_p[i] = -(g[0] + p * g[2]);
        s.xi_z[i] = p * g[1] - Hbar.value(x);
        s.dHdz[i] = g[2];
    }
    return s;
}

namespace {

// df/dt = dHdq*dfdp - dHdp*dfdq (+ c(-p dfdp) - c(n+1) f when c != 0)
void conformal_kernel(const GridSpec& spec, const HamiltonianSamples& hs, const Vec& f, double c,
                      int threads, Vec& out)
{
    const Vec dfdq = derivative_axis(spec, f, 0, threads);
    const Vec dfdp = derivative_axis(spec, f, 1, threads);
    const std::size_t np = spec.axes[1].cells;
    parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = hs.dHdq[i] * dfdp[i] - hs.dHdp[i] * dfdq[i];
        if (c != 0.0) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double p = spec.axes[1].center(i % np);
                out[i] += c * (-p * dfdp[i]) - 2.0 * c * f[i];
            }
        }
    });
}

void check_density(const DensityGrid& f, bool want_contact)
{
    if (f.spec.is_contact() != want_contact)
        throw std::invalid_argument("density grid arity mismatch for requested model");
    if (f.values.size() != f.spec.cell_count())
        throw std::invalid_argument("density grid value array size mismatch");
}

void contact_advective_kernel(const GridSpec& spec, const ContactFieldSamples& cs, const Vec& f,
                              double reeb_coef, int threads, Vec& out)
{
    const Vec dfdq = derivative_axis(spec, f, 0, threads);
    const Vec dfdp = derivative_axis(spec, f, 1, threads);
    const Vec dfdz = derivative_axis(spec, f, 2, threads);
    parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = -cs.xi_q[i] * dfdq[i] - cs.xi_p[i] * dfdp[i] - cs.xi_z[i] * dfdz[i] +
                     reeb_coef * cs.dHdz[i] * f[i];
    });
}

void contact_flux_kernel(const GridSpec& spec, const ContactFieldSamples& cs, const Vec& f,
                         int threads, Vec& out, Vec& scratch)
{
    scratch.resize(f.size());
    const std::array<const Vec*, 3> vel = {&cs.xi_q, &cs.xi_p, &cs.xi_z};
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const Vec& v = *vel[axis];
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                scratch[i] = f[i] * v[i];
        });
        const Vec d = flux_difference_axis(spec, scratch, axis, threads);
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                out[i] -= d[i];
        });
    }
}

// transport in skew-symmetric split form: -X(f) + s f assembled as
// -1/2 [v_a D_a f + D_a(v_a f)] + (s + div(X)/2) f. Identical to the
// advective form in the continuum; unlike it, the split operator is
// energy-neutral under the SBP stencils, which long runs need.
void split_transport_kernel(const GridSpec& spec, const std::vector<Vec>& velocity,
                            const Vec* source, double source_scale, const Vec& f, int threads,
                            Vec& out, Vec& scratch)
{
    scratch.resize(f.size());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t axis = 0; axis < spec.rank(); ++axis) {
        const Vec& v = velocity[axis];
        const Vec da = derivative_axis(spec, f, axis, threads);
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                out[i] -= 0.5 * v[i] * da[i];
                scratch[i] = v[i] * f[i];
            }
        });
        const Vec db = derivative_axis(spec, scratch, axis, threads);
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                out[i] -= 0.5 * db[i];
        });
    }
    if (source_scale != 0.0) {
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                out[i] += source_scale * (source ? (*source)[i] : 1.0) * f[i];
        });
    }
    // zero-inflow SAT penalty on truncated boundaries: with the SBP norm
    // weight 17/48 at the edge cell this makes the boundary terms of the
    // energy estimate non-positive
    for (std::size_t axis = 0; axis < spec.rank(); ++axis) {
        if (spec.axes[axis].boundary != Boundary::truncated)
            continue;
        const Vec& v = velocity[axis];
        const std::size_t len = spec.axes[axis].cells;
        const std::size_t st = spec.stride(axis);
        const double inv_weight = 48.0 / (17.0 * spec.axes[axis].step());
        parallel_for(f.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::size_t ia = (i / st) % len;
                if (ia == 0 && v[i] > 0.0)
                    out[i] -= v[i] * inv_weight * f[i];
                else if (ia == len - 1 && v[i] < 0.0)
                    out[i] += v[i] * inv_weight * f[i];
            }
        });
    }
}

} // namespace

DensityGrid vlasov_density_rhs(const DensityGrid& f, const ScalarFunction& H, int threads)
{
    check_density(f, false);
    const HamiltonianSamples hs = sample_hamiltonian(f.spec, H);
    DensityGrid rate(f.spec);
    conformal_kernel(f.spec, hs, f.values, 0.0, threads, rate.values);
    return rate;
}

ConformalRate conformal_density_rhs(const DensityGrid& f, const ScalarFunction& H, double c,
                                    int threads)
{
    check_density(f, false);
    const HamiltonianSamples hs = sample_hamiltonian(f.spec, H);
    ConformalRate out;
    out.rate = DensityGrid(f.spec);
    conformal_kernel(f.spec, hs, f.values, c, threads, out.rate.values);
    Vec weighted(f.values.size());
    for (std::size_t i = 0; i < weighted.size(); ++i)
        weighted[i] = f.values[i] * hs.zh_plus_h[i];
    out.cstar_rate = integrate_cells(f.spec, weighted);
    return out;
}

DensityGrid contact_density_rhs(const DensityGrid& fbar, const ScalarFunction& Hbar,
                                ContactVariant variant, int threads)
{
    check_density(fbar, true);
    const ContactFieldSamples cs = sample_contact_field(fbar.spec, Hbar);
    const double coef = variant == ContactVariant::vector_field ? 2.0 : 3.0; // n+1 / n+2, n=1
    DensityGrid rate(fbar.spec);
    contact_advective_kernel(fbar.spec, cs, fbar.values, coef, threads, rate.values);
    return rate;
}

DensityGrid contact_flux_rhs(const DensityGrid& fbar, const ScalarFunction& Hbar, int threads)
{
    check_density(fbar, true);
    const ContactFieldSamples cs = sample_contact_field(fbar.spec, Hbar);
    DensityGrid rate(fbar.spec);
    Vec scratch;
    contact_flux_kernel(fbar.spec, cs, fbar.values, threads, rate.values, scratch);
    return rate;
}

double observable(const DensityGrid& f, const ScalarFunction& a)
{
    if (a.dim() != f.spec.rank())
        throw std::invalid_argument("observable: function/grid arity mismatch");
    const Vec av = sample_on_grid(f.spec, a);
    Vec weighted(f.values.size());
    for (std::size_t i = 0; i < weighted.size(); ++i)
        weighted[i] = av[i] * f.values[i];
    return integrate_cells(f.spec, weighted);
}

DensityStepper::DensityStepper(KineticModel model, GridSpec spec, ScalarFunction H,
                               DensityStepOptions opts)
    : model_(model), spec_(std::move(spec)), hamiltonian_(std::move(H)), opts_(opts)
{
    spec_.validate();
    if (model_.contact()) {
        if (!spec_.is_contact())
            throw std::invalid_argument("contact kinetic model needs a (q,p,z) grid");
        field_samples_ = sample_contact_field(spec_, hamiltonian_);
        velocity_ = {field_samples_.xi_q, field_samples_.xi_p, field_samples_.xi_z};
    } else {
        if (spec_.is_contact())
            throw std::invalid_argument("symplectic kinetic model needs a (q,p) grid");
        ham_samples_ = sample_hamiltonian(spec_, hamiltonian_);
        Vec vq = ham_samples_.dHdp;
        Vec vp(ham_samples_.dHdq.size());
        const std::size_t np = spec_.axes[1].cells;
        for (std::size_t i = 0; i < vp.size(); ++i)
            vp[i] = -ham_samples_.dHdq[i];
        if (model_.kind == KineticModel::Kind::conformal && model_.c != 0.0)
            for (std::size_t i = 0; i < vp.size(); ++i)
                vp[i] += model_.c * spec_.axes[1].center(i % np);
        velocity_ = {std::move(vq), std::move(vp)};
    }
    const std::size_t total = spec_.cell_count();
    k1_.values.resize(total);
    k2_.values.resize(total);
    k3_.values.resize(total);
    k4_.values.resize(total);
    ytmp_.resize(total);

    // cells within 3 layers of a truncated boundary, for the mass monitor
    const std::size_t rank = spec_.rank();
    std::vector<std::size_t> idx(rank);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rest = i;
        bool near = false;
        for (std::size_t a = rank; a-- > 0;) {
            idx[a] = rest % spec_.axes[a].cells;
            rest /= spec_.axes[a].cells;
        }
        for (std::size_t a = 0; a < rank; ++a)
            if (spec_.axes[a].boundary == Boundary::truncated &&
                (idx[a] < 3 || idx[a] + 3 >= spec_.axes[a].cells))
                near = true;
        if (near)
            boundary_cells_.push_back(i);
    }
}

double DensityStepper::cfl_limit() const
{
    double limit = std::numeric_limits<double>::infinity();
    for (std::size_t axis = 0; axis < velocity_.size(); ++axis) {
        double vmax = 0.0;
        for (double x : velocity_[axis])
            vmax = std::max(vmax, std::fabs(x));
        if (vmax > 0.0)
            limit = std::min(limit, 0.5 * spec_.axes[axis].step() / vmax);
    }
    return limit;
}

void DensityStepper::rhs(const Vec& f, Slope& out)
{
    // split-form transport; the source scale folds the analytic div(X)/2
    // correction into the model's f coefficient
    switch (model_.kind) {
    case KineticModel::Kind::vlasov:
    case KineticModel::Kind::conformal: {
        // -(n+1)c f + (1/2) div(X^c) f = -(3/2) c f at n = 1
        const double scale = -1.5 * model_.c;
        split_transport_kernel(spec_, velocity_, nullptr, scale, f, opts_.threads, out.values,
                               scratch_);
        out.cstar = 0.0;
        if (model_.kind == KineticModel::Kind::conformal) {
            Vec weighted(f.size());
            for (std::size_t i = 0; i < f.size(); ++i)
                weighted[i] = f[i] * ham_samples_.zh_plus_h[i];
            out.cstar = integrate_cells(spec_, weighted);
        }
        break;
    }
    case KineticModel::Kind::contact_vf:
        // (n+1) R(Hb) f + (1/2) div(xi) f = +1 dHb/dz f at n = 1
        if (opts_.flux_form)
            contact_flux_kernel(spec_, field_samples_, f, opts_.threads, out.values, scratch_);
        else
            split_transport_kernel(spec_, velocity_, &field_samples_.dHdz, 1.0, f,
                                   opts_.threads, out.values, scratch_);
        out.cstar = 0.0;
        break;
    case KineticModel::Kind::contact_bracket:
        split_transport_kernel(spec_, velocity_, &field_samples_.dHdz, 2.0, f, opts_.threads,
                               out.values, scratch_);
        out.cstar = 0.0;
        break;
    }
}

void DensityStepper::step(DensityGrid& f, double dt)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("step_density requires dt > 0");
    if (f.values.size() != spec_.cell_count() || !f.spec.compatible(spec_))
        throw std::invalid_argument("density grid does not match stepper grid");
    if (!cfl_warned_) {
        const double limit = cfl_limit();
        if (dt > limit) {
            warnings_.push_back("CFL violation: dt=" + std::to_string(dt) + " exceeds bound " +
                                std::to_string(limit));
            cfl_warned_ = true;
        }
    }

    const std::size_t total = f.values.size();
    const double c0 = f.cstar.value_or(0.0);

    rhs(f.values, k1_);
    for (std::size_t i = 0; i < total; ++i)
        ytmp_[i] = f.values[i] + 0.5 * dt * k1_.values[i];
    rhs(ytmp_, k2_);
    for (std::size_t i = 0; i < total; ++i)
        ytmp_[i] = f.values[i] + 0.5 * dt * k2_.values[i];
    rhs(ytmp_, k3_);
    for (std::size_t i = 0; i < total; ++i)
        ytmp_[i] = f.values[i] + dt * k3_.values[i];
    rhs(ytmp_, k4_);
    for (std::size_t i = 0; i < total; ++i)
        f.values[i] += dt / 6.0 *
                       (k1_.values[i] + 2.0 * k2_.values[i] + 2.0 * k3_.values[i] +
                        k4_.values[i]);
    if (model_.kind == KineticModel::Kind::conformal)
        f.cstar = c0 + dt / 6.0 * (k1_.cstar + 2.0 * k2_.cstar + 2.0 * k3_.cstar + k4_.cstar);

    ++steps_;
    if (!all_finite(f.values))
        throw std::runtime_error("density stepping aborted: non-finite values at step " +
                                 std::to_string(steps_));

    if (!boundary_cells_.empty()) {
        Vec absval(f.values.size());
        for (std::size_t i = 0; i < f.values.size(); ++i)
            absval[i] = std::fabs(f.values[i]);
        const double total_mass = pairwise_sum(absval);
        if (total_mass > 0.0) {
            Vec edge(boundary_cells_.size());
            for (std::size_t k = 0; k < boundary_cells_.size(); ++k)
                edge[k] = absval[boundary_cells_[k]];
            const double frac = pairwise_sum(edge) / total_mass;
            if (frac > opts_.boundary_warn_fraction && warnings_.size() < 64)
                warnings_.push_back("mass near truncated boundary: fraction " +
                                    std::to_string(frac) + " at step " + std::to_string(steps_));
        }
    }
}

DensityGrid step_density(const KineticModel& model, const DensityGrid& f,
                         const ScalarFunction& H, double dt, DensityStepOptions opts)
{
    DensityStepper stepper(model, f.spec, H, opts);
    DensityGrid out = f;
    stepper.step(out, dt);
    return out;
}

} // namespace ckt
