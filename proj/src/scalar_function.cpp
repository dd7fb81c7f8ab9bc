#include "ckt/scalar_function.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ckt {

double fd_step(double x)
{
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::fabs(x));
}

ScalarFunction::ScalarFunction(Arity arity, std::size_t n, ValueFn value, GradFn grad,
                               std::string name)
    : arity_(arity), n_(n), value_(std::move(value)), grad_(std::move(grad)),
      name_(std::move(name))
{
    if (n_ == 0)
        throw std::invalid_argument("ScalarFunction requires n >= 1");
    if (!value_)
        throw std::invalid_argument("ScalarFunction requires a value callable");
}

ScalarFunction ScalarFunction::symplectic(std::size_t n, ValueFn value, GradFn grad,
                                          std::string name)
{
    return ScalarFunction(Arity::symplectic, n, std::move(value), std::move(grad),
                          std::move(name));
}

ScalarFunction ScalarFunction::contact(std::size_t n, ValueFn value, GradFn grad,
                                       std::string name)
{
    return ScalarFunction(Arity::contact, n, std::move(value), std::move(grad), std::move(name));
}

double ScalarFunction::value(std::span<const double> x) const
{
    if (x.size() != dim())
        throw std::invalid_argument("ScalarFunction: state dimension mismatch for '" + name_ +
                                    "'");
    return value_(x);
}

void ScalarFunction::fd_gradient(std::span<const double> x, std::span<double> out) const
{
    Vec probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double h = fd_step(xi);
        probe[i] = xi + h;
        const double hi = probe[i] - xi; // actual representable step
        const double fp = value_(probe);
        probe[i] = xi - h;
        const double lo = xi - probe[i];
        const double fm = value_(probe);
        probe[i] = xi;
        out[i] = (fp - fm) / (hi + lo);
    }
}

void ScalarFunction::gradient(std::span<const double> x, std::span<double> out) const
{
    if (x.size() != dim() || out.size() != dim())
        throw std::invalid_argument("ScalarFunction: gradient dimension mismatch for '" + name_ +
                                    "'");
    if (grad_)
        grad_(x, out);
    else
        fd_gradient(x, out);
}

Vec ScalarFunction::gradient(std::span<const double> x) const
{
    Vec g(dim());
    gradient(x, g);
    return g;
}

double ScalarFunction::partial(std::size_t i, std::span<const double> x) const
{
    Vec g(dim());
    gradient(x, g);
    return g[i];
}

double gradient_consistency(const ScalarFunction& f, std::span<const Vec> probes)
{
    if (!f.has_analytic_gradient())
        return 0.0;
    double worst = 0.0;
    Vec ga(f.dim()), gf(f.dim());
    for (const Vec& x : probes) {
        f.gradient(x, ga);
        f.fd_gradient(x, gf);
        for (std::size_t i = 0; i < f.dim(); ++i) {
            const double scale = std::max({1.0, std::fabs(ga[i]), std::fabs(gf[i])});
            worst = std::max(worst, std::fabs(ga[i] - gf[i]) / scale);
        }
    }
    return worst;
}

double max_reeb_derivative(const ScalarFunction& f, std::span<const Vec> probes)
{
    if (f.arity() == Arity::symplectic)
        return 0.0;
    double worst = 0.0;
    Vec g(f.dim());
    for (const Vec& x : probes) {
        f.gradient(x, g);
        worst = std::max(worst, std::fabs(g.back()));
    }
    return worst;
}

} // namespace ckt
