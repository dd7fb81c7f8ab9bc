#include "ckt/lifts.hpp"

#include "ckt/particle.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace ckt {

double BaseField::divergence(std::span<const double> x) const
{
    double acc = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        acc += deriv(a, a, x);
    return acc;
}

BaseField polynomial_field(std::vector<Polynomial> comps)
{
    const std::size_t m = comps.size();
    for (const Polynomial& c : comps)
        if (c.nvars() != m)
            throw std::invalid_argument("polynomial_field: component variable count mismatch");
    auto cs = std::make_shared<std::vector<Polynomial>>(std::move(comps));
    auto ds = std::make_shared<std::vector<Polynomial>>();
    ds->reserve(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            ds->push_back((*cs)[a].derivative(b));
    BaseField f;
    f.dim = m;
    f.component = [cs](std::size_t a, std::span<const double> x) { return (*cs)[a].value(x); };
    f.deriv = [ds, m](std::size_t a, std::size_t b, std::span<const double> x) {
        return (*ds)[a * m + b].value(x);
    };
    return f;
}

CovectorSection polynomial_section(std::vector<Polynomial> comps)
{
    const BaseField f = polynomial_field(std::move(comps));
    CovectorSection s;
    s.dim = f.dim;
    s.value = f.component;
    s.deriv = f.deriv;
    return s;
}

double constant_divergence_residual(const BaseField& X, std::span<const Vec> probes)
{
    if (probes.empty())
        return 0.0;
    const double ref = X.divergence(probes.front());
    double worst = 0.0;
    for (const Vec& x : probes)
        worst = std::max(worst, std::fabs(X.divergence(x) - ref));
    return worst;
}

Vec complete_cotangent_lift(const BaseField& X, std::span<const double> x,
                            std::span<const double> y)
{
    const std::size_t m = X.dim;
    if (x.size() != m || y.size() != m)
        throw std::invalid_argument("complete_cotangent_lift: dimension mismatch");
    Vec out(2 * m);
    for (std::size_t a = 0; a < m; ++a) {
        out[a] = X.component(a, x);
        double fib = 0.0;
        for (std::size_t b = 0; b < m; ++b)
            fib -= X.deriv(b, a, x) * y[b];
        out[m + a] = fib;
    }
    return out;
}

Vec kappa_lift(const BaseField& X, std::span<const double> x, std::span<const double> y)
{
    const std::size_t m = X.dim;
    if (x.size() != m || y.size() != m)
        throw std::invalid_argument("kappa_lift: dimension mismatch");
    std::vector<Vec> probes;
    probes.emplace_back(x.begin(), x.end());
    for (std::size_t a = 0; a < m; ++a) {
        Vec v(x.begin(), x.end());
        v[a] += 0.5;
        probes.push_back(v);
        v[a] -= 1.0;
        probes.push_back(std::move(v));
    }
    if (constant_divergence_residual(X, probes) > 1e-8)
        throw std::invalid_argument("kappa_lift requires a constant-divergence base field");
    const double div = X.divergence(x);
    Vec out(2 * m);
    for (std::size_t a = 0; a < m; ++a) {
        out[a] = X.component(a, x);
        double fib = -div * y[a];
        for (std::size_t b = 0; b < m; ++b)
            fib -= X.deriv(b, a, x) * y[b];
        out[m + a] = fib;
    }
    return out;
}

Vec vertical_representative(const BaseField& X, const CovectorSection& section,
                            std::span<const double> x)
{
    const std::size_t m = X.dim;
    if (x.size() != m || section.dim != m)
        throw std::invalid_argument("vertical_representative: dimension mismatch");
    const double div = X.divergence(x);
    Vec out(m);
    for (std::size_t a = 0; a < m; ++a) {
        double rate = -div * section.value(a, x);
        for (std::size_t b = 0; b < m; ++b) {
            rate -= X.deriv(b, a, x) * section.value(b, x);
            rate -= X.component(b, x) * section.deriv(a, b, x);
        }
        out[a] = rate;
    }
    return out;
}

namespace {

// Richardson-extrapolated central difference of field component i along x_j
void fd_jacobian(const AnyField& F, std::span<const double> x, std::vector<Vec>& cols)
{
    static const double h0 = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
    const std::size_t d = x.size();
    Vec probe(x.begin(), x.end());
    cols.assign(d, Vec());
    for (std::size_t j = 0; j < d; ++j) {
        const double xj = x[j];
        const double h = h0 * std::max(1.0, std::fabs(xj));
        auto central = [&](double step) {
            probe[j] = xj + step;
            Vec fp = F(probe);
            probe[j] = xj - step;
            const Vec fm = F(probe);
            probe[j] = xj;
            for (std::size_t i = 0; i < fp.size(); ++i)
                fp[i] = (fp[i] - fm[i]) / (2.0 * step);
            return fp;
        };
        const Vec dh = central(h);
        Vec dh2 = central(0.5 * h);
        for (std::size_t i = 0; i < dh2.size(); ++i)
            dh2[i] = (4.0 * dh2[i] - dh[i]) / 3.0;
        cols[j] = std::move(dh2);
    }
}

} // namespace

Vec fd_lie_bracket(const AnyField& A, const AnyField& B, std::span<const double> x)
{
    const std::size_t d = x.size();
    const Vec a = A(x);
    const Vec b = B(x);
    std::vector<Vec> da, db;
    fd_jacobian(A, x, da);
    fd_jacobian(B, x, db);
    Vec out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out[i] += a[j] * db[j][i] - b[j] * da[j][i];
    return out;
}

namespace {

double max_abs(const Vec& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

AnyField field_of(const FieldKind kind, const ScalarFunction& fn)
{
    auto f = std::make_shared<ScalarFunction>(fn);
    return [kind, f](std::span<const double> x) { return evaluate_field(kind, *f, x); };
}

// Z(F) + F = F - p . dF/dp as a closure
ScalarFunction liouville_shifted(const ScalarFunction& F)
{
    auto f = std::make_shared<ScalarFunction>(F);
    return ScalarFunction(F.arity(), F.n(),
                          [f](std::span<const double> x) {
                              const std::size_t n = f->n();
                              const Vec g = f->gradient(x);
                              double acc = f->value(x);
                              for (std::size_t i = 0; i < n; ++i)
                                  acc -= x[n + i] * g[n + i];
                              return acc;
                          },
                          nullptr, "Z(" + F.name() + ")+" + F.name());
}

} // namespace

double hamiltonian_homomorphism_residual(const ScalarFunction& F, const ScalarFunction& H,
                                         std::span<const Vec> probes)
{
    const AnyField XF = field_of(FieldKind::hamiltonian(), F);
    const AnyField XH = field_of(FieldKind::hamiltonian(), H);
    const AnyField Xbr =
        field_of(FieldKind::hamiltonian(), bracket_function(BracketKind::symplectic, F, H));
    double worst = 0.0;
    for (const Vec& x : probes) {
        Vec r = fd_lie_bracket(XF, XH, x);
        const Vec v = Xbr(x);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += v[i];
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

double conformal_homomorphism_residual(const ScalarFunction& F, double cF,
                                       const ScalarFunction& H, double cH,
                                       std::span<const Vec> probes)
{
    const AnyField VF = field_of(FieldKind::conformal(cF), F);
    const AnyField VH = field_of(FieldKind::conformal(cH), H);
    // {F,H}^(S) + cF (Z(H)+H) - cH (Z(F)+F)
    auto Fp = std::make_shared<ScalarFunction>(F);
    auto Hp = std::make_shared<ScalarFunction>(H);
    auto ZF = std::make_shared<ScalarFunction>(liouville_shifted(F));
    auto ZH = std::make_shared<ScalarFunction>(liouville_shifted(H));
    const ScalarFunction br(F.arity(), F.n(),
                            [Fp, Hp, ZF, ZH, cF, cH](std::span<const double> x) {
                                return poisson_bracket(*Fp, *Hp, x) + cF * ZH->value(x) -
                                       cH * ZF->value(x);
                            },
                            nullptr, "ext-bracket");
    const AnyField Xbr = field_of(FieldKind::hamiltonian(), br);
    double worst = 0.0;
    for (const Vec& x : probes) {
        Vec r = fd_lie_bracket(VF, VH, x);
        const Vec v = Xbr(x);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += v[i];
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

double contact_homomorphism_residual(const ScalarFunction& F, const ScalarFunction& H,
                                     std::span<const Vec> probes)
{
    const AnyField xiF = field_of(FieldKind::contact(), F);
    const AnyField xiH = field_of(FieldKind::contact(), H);
    const AnyField xibr =
        field_of(FieldKind::contact(), bracket_function(BracketKind::contact, F, H));
    double worst = 0.0;
    for (const Vec& x : probes) {
        Vec r = fd_lie_bracket(xiF, xiH, x);
        const Vec v = xibr(x);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += v[i];
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

namespace {

// exact polynomial Jacobi-Lie bracket [X,Y]^a = X^b d_b Y^a - Y^b d_b X^a
std::vector<Polynomial> poly_bracket(const std::vector<Polynomial>& X,
                                     const std::vector<Polynomial>& Y)
{
    const std::size_t m = X.size();
    std::vector<Polynomial> out;
    out.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
        Polynomial acc(m);
        for (std::size_t b = 0; b < m; ++b) {
            acc.add_scaled(X[b].multiplied(Y[a].derivative(b)), 1.0);
            acc.add_scaled(Y[b].multiplied(X[a].derivative(b)), -1.0);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

AnyField lift_field(const BaseField& X, bool with_divergence)
{
    auto Xp = std::make_shared<BaseField>(X);
    const bool kappa = with_divergence;
    return [Xp, kappa](std::span<const double> xy) {
        const std::size_t m = Xp->dim;
        const auto x = xy.first(m);
        const auto y = xy.subspan(m);
        return kappa ? kappa_lift(*Xp, x, y) : complete_cotangent_lift(*Xp, x, y);
    };
}

double lift_residual(const std::vector<Polynomial>& X, const std::vector<Polynomial>& Y,
                     std::span<const Vec> probes, bool with_divergence)
{
    const BaseField bx = polynomial_field(X);
    const BaseField by = polynomial_field(Y);
    const BaseField bbr = polynomial_field(poly_bracket(X, Y));
    const AnyField LX = lift_field(bx, with_divergence);
    const AnyField LY = lift_field(by, with_divergence);
    const AnyField Lbr = lift_field(bbr, with_divergence);
    double worst = 0.0;
    for (const Vec& xy : probes) {
        Vec r = fd_lie_bracket(LX, LY, xy);
        const Vec v = Lbr(xy);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] -= v[i];
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

} // namespace

double complete_lift_homomorphism_residual(const std::vector<Polynomial>& X,
                                           const std::vector<Polynomial>& Y,
                                           std::span<const Vec> probes)
{
    return lift_residual(X, Y, probes, false);
}

double kappa_homomorphism_residual(const std::vector<Polynomial>& X,
                                   const std::vector<Polynomial>& Y,
                                   std::span<const Vec> probes)
{
    return lift_residual(X, Y, probes, true);
}

double kappa_commutation_residual(const std::vector<Polynomial>& X, std::span<const Vec> probes)
{
    const BaseField bx = polynomial_field(X);
    const AnyField lift = lift_field(bx, false);
    auto Xp = std::make_shared<BaseField>(bx);
    const AnyField divlift = [Xp](std::span<const double> xy) {
        const std::size_t m = Xp->dim;
        const double div = Xp->divergence(xy.first(m));
        Vec out(2 * m, 0.0);
        for (std::size_t a = 0; a < m; ++a)
            out[m + a] = -div * xy[m + a]; // div(X) W, W = -y_a d/dy_a
        return out;
    };
    double worst = 0.0;
    for (const Vec& xy : probes)
        worst = std::max(worst, max_abs(fd_lie_bracket(lift, divlift, xy)));
    return worst;
}

double extension_coadjoint_residual(const DensityGrid& f, const ScalarFunction& H, double c,
                                    int threads)
{
    const ConformalRate direct = conformal_density_rhs(f, H, c, threads);

    // independent assembly of ad*_H f + f <* c_H and b*_H f
    const GridSpec& spec = f.spec;
    const std::size_t total = spec.cell_count();
    const Vec dfdq = derivative_axis(spec, f.values, 0, threads);
    const Vec dfdp = derivative_axis(spec, f.values, 1, threads);
    Vec assembled(total);
    Vec bweight(total);
    std::array<double, 2> x{};
    std::array<double, 2> g{};
    for (std::size_t i = 0; i < total; ++i) {
        spec.center(i, x);
        H.gradient(x, g);
        const double p = x[1];
        const double adstar = dfdq[i] * g[1] - dfdp[i] * g[0];   // {f,H}
        const double dualact = 2.0 * c * f.values[i] - c * (-p * dfdp[i]); // (n+1)c f - c Z(f)
        assembled[i] = -(adstar + dualact);
        bweight[i] = f.values[i] * (H.value(x) - p * g[1]);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < total; ++i)
        worst = std::max(worst, std::fabs(direct.rate.values[i] - assembled[i]));
    const double bstar = integrate_cells(spec, bweight);
    worst = std::max(worst, std::fabs(direct.cstar_rate - bstar));
    return worst;
}

namespace {

Vec random_state(std::size_t dim, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> box(-0.8, 0.8);
    Vec x(dim);
    for (double& v : x)
        v = box(rng);
    return x;
}

std::vector<Vec> random_states(std::size_t dim, std::size_t count, std::mt19937_64& rng)
{
    std::vector<Vec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_state(dim, rng));
    return out;
}

// constant-divergence planar field: rotated gradient of a stream function
// plus lambda * x
std::vector<Polynomial> constant_divergence_field(std::mt19937_64& rng)
{
    const Polynomial psi = random_polynomial(2, 4, rng);
    std::uniform_real_distribution<double> lam(-1.0, 1.0);
    const double lambda = lam(rng);
    Polynomial x0(2), x1(2);
    x0.add_term(lambda, {1, 0});
    x1.add_term(lambda, {0, 1});
    Polynomial c0 = psi.derivative(1);
    c0.add_scaled(x0, 1.0);
    Polynomial c1 = psi.derivative(0);
    Polynomial c1n(2);
    c1n.add_scaled(c1, -1.0);
    c1n.add_scaled(x1, 1.0);
    return {c0, c1n};
}

} // namespace

std::vector<VerificationRecord> run_algebra_suite(std::uint64_t seed, std::size_t instances)
{
    std::vector<VerificationRecord> records;
    const std::size_t probes_per_instance = 6;

    auto record = [&](const std::string& kind, double residual, double tol) {
        records.push_back({kind, seed, residual, tol, residual <= tol});
    };

    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 1);
        double worst = 0.0;
        for (std::size_t k = 0; k < instances; ++k) {
            const ScalarFunction F =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 3, rng), "F");
            const ScalarFunction H =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 3, rng), "H");
            const auto probes = random_states(2, probes_per_instance, rng);
            worst = std::max(worst, hamiltonian_homomorphism_residual(F, H, probes));
        }
        record("hamiltonian", worst, 1e-6);
    }
    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 2);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < instances; ++k) {
            const ScalarFunction F =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 3, rng), "F");
            const ScalarFunction H =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 3, rng), "H");
            const double cF = cdist(rng), cH = cdist(rng);
            const auto probes = random_states(2, probes_per_instance, rng);
            worst = std::max(worst, conformal_homomorphism_residual(F, cF, H, cH, probes));
        }
        record("conformal", worst, 1e-6);
    }
    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 3);
        double worst = 0.0;
        for (std::size_t k = 0; k < instances; ++k) {
            const ScalarFunction F =
                to_scalar_function(Arity::contact, 1, random_polynomial(3, 3, rng), "F");
            const ScalarFunction H =
                to_scalar_function(Arity::contact, 1, random_polynomial(3, 3, rng), "H");
            const auto probes = random_states(3, probes_per_instance, rng);
            worst = std::max(worst, contact_homomorphism_residual(F, H, probes));
        }
        record("contact", worst, 1e-6);
    }
    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 4);
        double worst = 0.0;
        for (std::size_t k = 0; k < instances; ++k) {
            const auto X = constant_divergence_field(rng);
            const auto Y = constant_divergence_field(rng);
            const auto probes = random_states(4, probes_per_instance, rng);
            worst = std::max(worst, kappa_homomorphism_residual(X, Y, probes));
        }
        record("kappa", worst, 1e-6);
    }
    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 5);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const GridSpec spec = GridSpec::symplectic({-2.0, 2.0, 24, Boundary::truncated},
                                                   {-2.0, 2.0, 24, Boundary::truncated});
        double worst = 0.0;
        for (std::size_t k = 0; k < instances; ++k) {
            const Polynomial shape = random_polynomial(2, 3, rng);
            DensityGrid f(spec);
            f.values = sample_on_grid(spec, [&shape](std::span<const double> x) {
                return shape.value(x) * std::exp(-(x[0] * x[0] + x[1] * x[1]));
            });
            const ScalarFunction H =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 3, rng), "H");
            worst = std::max(worst, extension_coadjoint_residual(f, H, cdist(rng)));
        }
        record("extension", worst, 1e-6);
    }
    return records;
}

} // namespace ckt
