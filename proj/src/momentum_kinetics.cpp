#include "ckt/momentum_kinetics.hpp"

#include "ckt/density_kinetics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ckt {

VectorFieldGrid::VectorFieldGrid(GridSpec s) : spec(std::move(s))
{
    spec.validate();
    comp.assign(spec.rank(), Vec(spec.cell_count(), 0.0));
}

std::string MomentumModel::label() const
{
    switch (kind) {
    case Kind::hamiltonian: return "hamiltonian";
    case Kind::conformal: return "conformal";
    case Kind::contact: return "contact";
    }
    return "?";
}

VectorFieldGrid sample_particle_field(const FieldKind& kind, const ScalarFunction& H,
                                      const GridSpec& spec)
{
    if (spec.arity() != kind.arity() || H.arity() != kind.arity() || H.n() != 1)
        throw std::invalid_argument("sample_particle_field: arity mismatch (grids are n=1)");
    VectorFieldGrid X(spec);
    const std::size_t total = spec.cell_count();
    std::array<double, 3> xbuf{};
    std::span<double> x(xbuf.data(), spec.rank());
    for (std::size_t i = 0; i < total; ++i) {
        spec.center(i, x);
        const Vec v = evaluate_field(kind, H, x);
        for (std::size_t a = 0; a < spec.rank(); ++a)
            X.comp[a][i] = v[a];
    }
    return X;
}

namespace {

void check_oneform(const OneFormGrid& Pi)
{
    if (Pi.comp.size() != Pi.spec.rank())
        throw std::invalid_argument("one-form grid component count mismatch");
    for (const Vec& c : Pi.comp)
        if (c.size() != Pi.spec.cell_count())
            throw std::invalid_argument("one-form grid component size mismatch");
}

// rate_a = -(X^b d_b Pi_a + Pi_b d_a X^b) - decay * Pi_a, with d_a X^b given
void coadjoint_kernel(const GridSpec& spec, const VectorFieldGrid& X,
                      const std::vector<Vec>& dX, const Vec* decay, double scale,
                      const OneFormGrid& Pi, int threads, OneFormGrid& out)
{
    const std::size_t rank = spec.rank();
    const std::size_t total = spec.cell_count();
    for (std::size_t a = 0; a < rank; ++a) {
        Vec& ra = out.comp[a];
        std::fill(ra.begin(), ra.end(), 0.0);
        for (std::size_t b = 0; b < rank; ++b) {
            const Vec dPia_b = derivative_axis(spec, Pi.comp[a], b, threads);
            const Vec& dXb_a = dX[b * rank + a];
            parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i)
                    ra[i] -= X.comp[b][i] * dPia_b[i] + Pi.comp[b][i] * dXb_a[i];
            });
        }
        if (decay) {
            parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i)
                    ra[i] += scale * (*decay)[i] * Pi.comp[a][i];
            });
        } else if (scale != 0.0) {
            parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i)
                    ra[i] += scale * Pi.comp[a][i];
            });
        }
    }
}

std::vector<Vec> field_derivatives(const GridSpec& spec, const VectorFieldGrid& X, int threads)
{
    const std::size_t rank = spec.rank();
    std::vector<Vec> dX(rank * rank);
    for (std::size_t b = 0; b < rank; ++b)
        for (std::size_t a = 0; a < rank; ++a)
            dX[b * rank + a] = derivative_axis(spec, X.comp[b], a, threads);
    return dX;
}

} // namespace

OneFormGrid lie_derivative_oneform(const VectorFieldGrid& X, const OneFormGrid& Pi, int threads)
{
    check_oneform(Pi);
    if (!X.spec.compatible(Pi.spec))
        throw std::invalid_argument("lie_derivative_oneform: grid mismatch");
    const GridSpec& spec = Pi.spec;
    const std::vector<Vec> dX = field_derivatives(spec, X, threads);
    OneFormGrid out(spec);
    // reuse the coadjoint kernel with no decay term, then flip sign
    coadjoint_kernel(spec, X, dX, nullptr, 0.0, Pi, threads, out);
    for (Vec& c : out.comp)
        for (double& v : c)
            v = -v;
    return out;
}

OneFormGrid momentum_rhs(const MomentumModel& model, const OneFormGrid& Pi,
                         const ScalarFunction& H, int threads)
{
    check_oneform(Pi);
    const GridSpec& spec = Pi.spec;
    if (model.contact_kind() != spec.is_contact())
        throw std::invalid_argument("momentum_rhs: model/grid arity mismatch");
    OneFormGrid out(spec);
    if (model.contact_kind()) {
        const ContactFieldSamples cs = sample_contact_field(spec, H);
        VectorFieldGrid X(spec);
        X.comp[0] = cs.xi_q;
        X.comp[1] = cs.xi_p;
        X.comp[2] = cs.xi_z;
        const std::vector<Vec> dX = field_derivatives(spec, X, threads);
        coadjoint_kernel(spec, X, dX, &cs.dHdz, 2.0, Pi, threads, out); // (n+1) = 2
    } else {
        const FieldKind kind = model.kind == MomentumModel::Kind::conformal
                                   ? FieldKind::conformal(model.c)
                                   : FieldKind::hamiltonian();
        const VectorFieldGrid X = sample_particle_field(kind, H, spec);
        const std::vector<Vec> dX = field_derivatives(spec, X, threads);
        const double decay =
            model.kind == MomentumModel::Kind::conformal ? -model.c * 1.0 : 0.0; // -c n, n=1
        coadjoint_kernel(spec, X, dX, nullptr, decay, Pi, threads, out);
    }
    return out;
}

DensityGrid density_from_oneform(const OneFormGrid& Pi, int threads)
{
    check_oneform(Pi);
    if (Pi.spec.is_contact())
        throw std::invalid_argument("density_from_oneform expects a symplectic one-form");
    const Vec dPp_dq = derivative_axis(Pi.spec, Pi.comp[1], 0, threads);
    const Vec dPq_dp = derivative_axis(Pi.spec, Pi.comp[0], 1, threads);
    DensityGrid f(Pi.spec);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = dPp_dq[i] - dPq_dp[i];
    return f;
}

double cstar_from_oneform(const OneFormGrid& Pi)
{
    check_oneform(Pi);
    if (Pi.spec.is_contact())
        throw std::invalid_argument("cstar_from_oneform expects a symplectic one-form");
    const std::size_t np = Pi.spec.axes[1].cells;
    Vec weighted(Pi.spec.cell_count());
    for (std::size_t i = 0; i < weighted.size(); ++i)
        weighted[i] = Pi.spec.axes[1].center(i % np) * Pi.comp[1][i];
    return integrate_cells(Pi.spec, weighted);
}

DensityGrid contact_density_from_oneform(const OneFormGrid& Pibar, bool strict, int threads)
{
    check_oneform(Pibar);
    if (!Pibar.spec.is_contact())
        throw std::invalid_argument("contact_density_from_oneform expects a contact one-form");
    const GridSpec& spec = Pibar.spec;
    const Vec dPp_dq = derivative_axis(spec, Pibar.comp[1], 0, threads);
    const Vec dPq_dp = derivative_axis(spec, Pibar.comp[0], 1, threads);
    const Vec dPz_dp = derivative_axis(spec, Pibar.comp[2], 1, threads);
    const Vec dPp_dz = derivative_axis(spec, Pibar.comp[1], 2, threads);
    const std::size_t np = spec.axes[1].cells;
    const std::size_t nz = spec.axes[2].cells;

    // n = 1, so the -(n-1) Pb_z term vanishes
    Vec fbar(spec.cell_count());
    for (std::size_t i = 0; i < fbar.size(); ++i) {
        const double p = spec.axes[1].center((i / nz) % np);
        fbar[i] = dPp_dq[i] - dPq_dp[i] - p * (dPz_dp[i] - dPp_dz[i]);
    }
    if (!strict) {
        DensityGrid out(spec);
        out.values = std::move(fbar);
        return out;
    }
    // strict variant integrates over z and gains the dPb_z/dz term
    const Vec dPz_dz = derivative_axis(spec, Pibar.comp[2], 2, threads);
    GridSpec base;
    base.axes = {spec.axes[0], spec.axes[1]};
    DensityGrid out(base);
    const double dz = spec.axes[2].step();
    for (std::size_t iq = 0; iq < spec.axes[0].cells; ++iq)
        for (std::size_t ip = 0; ip < np; ++ip) {
            const std::size_t b = (iq * np + ip) * nz;
            Vec col(nz);
            for (std::size_t iz = 0; iz < nz; ++iz)
                col[iz] = fbar[b + iz] + dPz_dz[b + iz];
            out.values[iq * np + ip] = pairwise_sum(col) * dz;
        }
    return out;
}

MomentumStepper::MomentumStepper(MomentumModel model, GridSpec spec, ScalarFunction H,
                                 int threads)
    : model_(model), spec_(std::move(spec)), hamiltonian_(std::move(H)), threads_(threads),
      k1_(spec_), k2_(spec_), k3_(spec_), k4_(spec_), ytmp_(spec_)
{
    if (model_.contact_kind()) {
        const ContactFieldSamples cs = sample_contact_field(spec_, hamiltonian_);
        field_ = VectorFieldGrid(spec_);
        field_.comp[0] = cs.xi_q;
        field_.comp[1] = cs.xi_p;
        field_.comp[2] = cs.xi_z;
        reeb_derivative_ = cs.dHdz;
    } else {
        const FieldKind kind = model_.kind == MomentumModel::Kind::conformal
                                   ? FieldKind::conformal(model_.c)
                                   : FieldKind::hamiltonian();
        field_ = sample_particle_field(kind, hamiltonian_, spec_);
    }
    field_jac_ = field_derivatives(spec_, field_, threads_);
}

double MomentumStepper::cfl_limit() const
{
    double limit = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < spec_.rank(); ++a) {
        double vmax = 0.0;
        for (double x : field_.comp[a])
            vmax = std::max(vmax, std::fabs(x));
        if (vmax > 0.0)
            limit = std::min(limit, 0.5 * spec_.axes[a].step() / vmax);
    }
    return limit;
}

void MomentumStepper::rhs(const OneFormGrid& Pi, OneFormGrid& out)
{
    if (model_.contact_kind()) {
        coadjoint_kernel(spec_, field_, field_jac_, &reeb_derivative_, 2.0, Pi, threads_, out);
    } else {
        const double decay = model_.kind == MomentumModel::Kind::conformal ? -model_.c : 0.0;
        coadjoint_kernel(spec_, field_, field_jac_, nullptr, decay, Pi, threads_, out);
    }
}

void MomentumStepper::step(OneFormGrid& Pi, double dt)
{
    check_oneform(Pi);
    if (!Pi.spec.compatible(spec_))
        throw std::invalid_argument("one-form grid does not match stepper grid");
    const std::size_t rank = spec_.rank();
    const std::size_t total = spec_.cell_count();
    auto blend = [&](const OneFormGrid& base, double w, const OneFormGrid& slope,
                     OneFormGrid& dst) {
        for (std::size_t a = 0; a < rank; ++a)
            for (std::size_t i = 0; i < total; ++i)
                dst.comp[a][i] = base.comp[a][i] + w * slope.comp[a][i];
    };
    rhs(Pi, k1_);
    blend(Pi, 0.5 * dt, k1_, ytmp_);
    rhs(ytmp_, k2_);
    blend(Pi, 0.5 * dt, k2_, ytmp_);
    rhs(ytmp_, k3_);
    blend(Pi, dt, k3_, ytmp_);
    rhs(ytmp_, k4_);
    for (std::size_t a = 0; a < rank; ++a)
        for (std::size_t i = 0; i < total; ++i)
            Pi.comp[a][i] += dt / 6.0 *
                             (k1_.comp[a][i] + 2.0 * k2_.comp[a][i] + 2.0 * k3_.comp[a][i] +
                              k4_.comp[a][i]);
    ++steps_;
    for (const Vec& c : Pi.comp)
        if (!all_finite(c))
            throw std::runtime_error("momentum stepping aborted: non-finite components at step " +
                                     std::to_string(steps_));
    // compact-support monitor, same policy as the density stepper
    if (warnings_.size() < 64) {
        for (std::size_t a = 0; a < rank; ++a) {
            const double frac = boundary_mass_fraction(spec_, Pi.comp[a]);
            if (frac > 1e-6) {
                warnings_.push_back("one-form component " + std::to_string(a) +
                                    " near truncated boundary: fraction " +
                                    std::to_string(frac) + " at step " +
                                    std::to_string(steps_));
                break;
            }
        }
    }
}

} // namespace ckt
