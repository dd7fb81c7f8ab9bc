#include "ckt/particle.hpp"

#include <cmath>
#include <limits>

namespace ckt {

std::string FieldKind::label() const
{
    switch (tag) {
    case Tag::hamiltonian: return "hamiltonian";
    case Tag::conformal: return "conformal";
    case Tag::contact: return "contact";
    case Tag::strict_contact: return "strict_contact";
    }
    return "?";
}

namespace {

void check_arity(const FieldKind& kind, const ScalarFunction& H, std::size_t state_dim)
{
    if (H.arity() != kind.arity())
        throw std::invalid_argument("evaluate_field: Hamiltonian arity does not match kind " +
                                    kind.label());
    if (state_dim != H.dim())
        throw std::invalid_argument("evaluate_field: state dimension mismatch");
}

} // namespace

Vec evaluate_field(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s)
{
    check_arity(kind, H, s.size());
    const std::size_t n = H.n();
    const Vec g = H.gradient(s);
    Vec out(s.size());
    switch (kind.tag) {
    case FieldKind::Tag::hamiltonian:
    case FieldKind::Tag::conformal:
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = g[n + i];
            out[n + i] = -g[i];
            if (kind.tag == FieldKind::Tag::conformal && kind.c != 0.0)
                out[n + i] += kind.c * s[n + i];
        }
        break;
    case FieldKind::Tag::contact:
    case FieldKind::Tag::strict_contact: {
        double dHdz = g[2 * n];
        if (kind.tag == FieldKind::Tag::strict_contact) {
            if (std::fabs(dHdz) > 1e-10)
                throw std::invalid_argument(
                    "strict_contact requires a z-independent Hamiltonian (|dH/dz| = " +
                    std::to_string(std::fabs(dHdz)) + ")");
            dHdz = 0.0;
        }
        double zdot = -H.value(s);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = g[n + i];
            out[n + i] = -g[i] - s[n + i] * dHdz;
            zdot += s[n + i] * g[n + i];
        }
        out[2 * n] = zdot;
        break;
    }
    }
    return out;
}

double divergence(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s)
{
    check_arity(kind, H, s.size());
    const double n = static_cast<double>(H.n());
    switch (kind.tag) {
    case FieldKind::Tag::hamiltonian: return 0.0;
    case FieldKind::Tag::conformal: return n * kind.c;
    case FieldKind::Tag::contact: {
        const Vec g = H.gradient(s);
        return -(n + 1.0) * g[2 * H.n()];
    }
    case FieldKind::Tag::strict_contact: return 0.0;
    }
    return 0.0;
}

double fd_divergence(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s)
{
    Vec probe(s.begin(), s.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double xi = s[i];
        const double h = fd_step(xi);
        probe[i] = xi + h;
        const double hp = probe[i] - xi;
        const double fp = evaluate_field(kind, H, probe)[i];
        probe[i] = xi - h;
        const double hm = xi - probe[i];
        const double fm = evaluate_field(kind, H, probe)[i];
        probe[i] = xi;
        acc += (fp - fm) / (hp + hm);
    }
    return acc;
}

double lu_determinant(std::vector<double> a, std::size_t d)
{
    double det = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a[k * d + k]);
        for (std::size_t r = k + 1; r < d; ++r) {
            const double v = std::fabs(a[r * d + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0)
            return 0.0;
        if (piv != k) {
            for (std::size_t c = 0; c < d; ++c)
                std::swap(a[k * d + c], a[piv * d + c]);
            det = -det;
        }
        det *= a[k * d + k];
        for (std::size_t r = k + 1; r < d; ++r) {
            const double f = a[r * d + k] / a[k * d + k];
            for (std::size_t c = k; c < d; ++c)
                a[r * d + c] -= f * a[k * d + c];
        }
    }
    return det;
}

double separability_residual(const ScalarFunction& H, std::span<const Vec> probes)
{
    if (H.arity() != Arity::symplectic)
        throw std::invalid_argument("separability probe expects a symplectic Hamiltonian");
    const std::size_t n = H.n();
    double worst = 0.0;
    Vec gp(2 * n), gm(2 * n);
    for (const Vec& s : probes) {
        Vec probe = s;
        for (std::size_t j = 0; j < n; ++j) {
            const double pj = s[n + j];
            const double h = fd_step(pj);
            probe[n + j] = pj + h;
            H.gradient(probe, gp);
            probe[n + j] = pj - h;
            H.gradient(probe, gm);
            probe[n + j] = pj;
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::fabs(gp[i] - gm[i]) / (2.0 * h));
        }
    }
    return worst;
}

namespace {

// d/dx_j of field component i by central differences
std::vector<double> field_jacobian(const FieldKind& kind, const ScalarFunction& H,
                                   std::span<const double> s)
{
    const std::size_t d = s.size();
    std::vector<double> a(d * d);
    Vec probe(s.begin(), s.end());
    for (std::size_t j = 0; j < d; ++j) {
        const double xj = s[j];
        const double h = fd_step(xj);
        probe[j] = xj + h;
        const double hp = probe[j] - xj;
        const Vec fp = evaluate_field(kind, H, probe);
        probe[j] = xj - h;
        const double hm = xj - probe[j];
        const Vec fm = evaluate_field(kind, H, probe);
        probe[j] = xj;
        for (std::size_t i = 0; i < d; ++i)
            a[i * d + j] = (fp[i] - fm[i]) / (hp + hm);
    }
    return a;
}

struct AugmentedState {
    Vec s;                 // flat state, size d
    std::vector<double> j; // tangent map, row-major d x d (empty when not carried)
    double logvol = 0.0;
};

AugmentedState rate_of(const FieldKind& kind, const ScalarFunction& H, const AugmentedState& y)
{
    const std::size_t d = y.s.size();
    AugmentedState r;
    r.s = evaluate_field(kind, H, y.s);
    if (!y.j.empty()) {
        const std::vector<double> a = field_jacobian(kind, H, y.s);
        r.j.assign(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) {
                const double aik = a[i * d + k];
                if (aik == 0.0)
                    continue;
                for (std::size_t c = 0; c < d; ++c)
                    r.j[i * d + c] += aik * y.j[k * d + c];
            }
    }
    r.logvol = divergence(kind, H, y.s);
    return r;
}

void axpy(AugmentedState& y, double a, const AugmentedState& x)
{
    for (std::size_t i = 0; i < y.s.size(); ++i)
        y.s[i] += a * x.s[i];
    for (std::size_t i = 0; i < y.j.size(); ++i)
        y.j[i] += a * x.j[i];
    y.logvol += a * x.logvol;
}

void rk4_step(const FieldKind& kind, const ScalarFunction& H, AugmentedState& y, double dt)
{
    const AugmentedState k1 = rate_of(kind, H, y);
    AugmentedState y2 = y;
    axpy(y2, 0.5 * dt, k1);
    const AugmentedState k2 = rate_of(kind, H, y2);
    AugmentedState y3 = y;
    axpy(y3, 0.5 * dt, k2);
    const AugmentedState k3 = rate_of(kind, H, y3);
    AugmentedState y4 = y;
    axpy(y4, dt, k3);
    const AugmentedState k4 = rate_of(kind, H, y4);
    axpy(y, dt / 6.0, k1);
    axpy(y, dt / 3.0, k2);
    axpy(y, dt / 3.0, k3);
    axpy(y, dt / 6.0, k4);
}

// J <- M J where M differs from identity by block (rows x cols) = B
void apply_block_jacobian(std::vector<double>& j, std::size_t d, std::size_t row0,
                          std::size_t col0, std::size_t nb, const std::vector<double>& b)
{
    std::vector<double> upd(nb * d, 0.0);
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t k = 0; k < nb; ++k) {
            const double bik = b[i * nb + k];
            if (bik == 0.0)
                continue;
            for (std::size_t c = 0; c < d; ++c)
                upd[i * d + c] += bik * j[(col0 + k) * d + c];
        }
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t c = 0; c < d; ++c)
            j[(row0 + i) * d + c] += upd[i * d + c];
}

// second derivative block d(grad_out)/d(x_in) by central differences of the gradient
std::vector<double> hessian_block(const ScalarFunction& H, const Vec& s, std::size_t out0,
                                  std::size_t in0, std::size_t n)
{
    std::vector<double> b(n * n);
    Vec probe = s;
    Vec gp(s.size()), gm(s.size());
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = s[in0 + j];
        const double h = fd_step(xj);
        probe[in0 + j] = xj + h;
        H.gradient(probe, gp);
        probe[in0 + j] = xj - h;
        H.gradient(probe, gm);
        probe[in0 + j] = xj;
        for (std::size_t i = 0; i < n; ++i)
            b[i * n + j] = (gp[out0 + i] - gm[out0 + i]) / (2.0 * h);
    }
    return b;
}

void splitting_step(const ScalarFunction& H, double c, AugmentedState& y, double dt)
{
    const std::size_t n = H.n();
    const std::size_t d = 2 * n;
    const double decay = std::exp(0.5 * c * dt);
    Vec g(d);

    auto dissipate_half = [&] {
        for (std::size_t i = 0; i < n; ++i)
            y.s[n + i] *= decay;
        if (!y.j.empty())
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t col = 0; col < d; ++col)
                    y.j[(n + i) * d + col] *= decay;
    };
    auto kick = [&](double tau) {
        if (!y.j.empty()) {
            std::vector<double> b = hessian_block(H, y.s, 0, 0, n); // d2H/dq dq
            for (double& v : b)
                v *= -tau;
            apply_block_jacobian(y.j, d, n, 0, n, b);
        }
        H.gradient(y.s, g);
        for (std::size_t i = 0; i < n; ++i)
            y.s[n + i] -= tau * g[i];
    };
    auto drift = [&](double tau) {
        if (!y.j.empty()) {
            std::vector<double> b = hessian_block(H, y.s, n, n, n); // d2H/dp dp
            for (double& v : b)
                v *= tau;
            apply_block_jacobian(y.j, d, 0, n, n, b);
        }
        H.gradient(y.s, g);
        for (std::size_t i = 0; i < n; ++i)
            y.s[i] += tau * g[n + i];
    };

    dissipate_half();
    kick(0.5 * dt);
    drift(dt);
    kick(0.5 * dt);
    dissipate_half();
    y.logvol += static_cast<double>(n) * c * dt; // the dissipation maps, exactly
}

} // namespace

Trajectory integrate(const FieldKind& kind, const ScalarFunction& H, std::span<const double> s0,
                     double T, double dt, const IntegrateOptions& opts)
{
    check_arity(kind, H, s0.size());
    if (!(dt > 0.0) || !(T >= dt))
        throw std::invalid_argument("integrate requires dt > 0 and T >= dt");
    if (opts.method == Method::conformal_splitting) {
        if (kind.tag != FieldKind::Tag::conformal)
            throw std::invalid_argument("conformal_splitting is valid only for conformal kind");
        std::vector<Vec> probes;
        probes.emplace_back(s0.begin(), s0.end());
        for (std::size_t i = 0; i < s0.size(); ++i) {
            Vec v(s0.begin(), s0.end());
            v[i] += 0.7 * std::max(1.0, std::fabs(v[i]));
            probes.push_back(std::move(v));
        }
        const double sep = separability_residual(H, probes);
        if (sep > 1e-8)
            throw std::invalid_argument(
                "conformal_splitting requires separable H = T(p) + V(q); coupling " +
                std::to_string(sep));
    }

    const std::size_t d = s0.size();
    AugmentedState y;
    y.s.assign(s0.begin(), s0.end());
    if (opts.variational) {
        y.j.assign(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            y.j[i * d + i] = 1.0;
    }

    const std::size_t nsteps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    Trajectory tr;
    tr.times.reserve(nsteps + 1);
    tr.states.reserve(nsteps + 1);
    tr.diagnostics.reserve(nsteps + 1);

    auto record = [&](double t, double used_dt) {
        tr.times.push_back(t);
        tr.states.push_back(y.s);
        StepRecord rec;
        rec.t = t;
        rec.energy = H.value(y.s);
        rec.logvol = y.logvol;
        rec.det_j = y.j.empty() ? 1.0 : lu_determinant(y.j, d);
        rec.dt = used_dt;
        tr.diagnostics.push_back(rec);
    };
    record(0.0, 0.0);

    double t = 0.0;
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double step_dt = (k + 1 == nsteps) ? T - t : dt;
        if (opts.method == Method::rk4)
            rk4_step(kind, H, y, step_dt);
        else
            splitting_step(H, kind.c, y, step_dt);
        t = (k + 1 == nsteps) ? T : t + dt;
        if (!all_finite(y.s))
            throw IntegrationError("non-finite state at step " + std::to_string(k + 1), k + 1);
        for (double v : y.s)
            if (std::fabs(v) > opts.blowup_threshold)
                throw IntegrationError("state blow-up (|x| > " +
                                           std::to_string(opts.blowup_threshold) + ") at step " +
                                           std::to_string(k + 1),
                                       k + 1);
        record(t, step_dt);
    }
    return tr;
}

double flow_volume_factor(const FieldKind& kind, const ScalarFunction& H,
                          std::span<const double> s0, double T, double dt, Method method)
{
    IntegrateOptions opts;
    opts.method = method;
    opts.variational = true;
    const Trajectory tr = integrate(kind, H, s0, T, dt, opts);
    return tr.diagnostics.back().det_j;
}

} // namespace ckt
