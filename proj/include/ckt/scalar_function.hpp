// Smooth real functions on phase space (symplectic or contact) with gradient
// access. When no analytic gradient is supplied, central finite differences
// with step h = eps^(1/3) * max(1,|x|) are used.
#pragma once

#include <functional>
#include <span>
#include <string>

#include "ckt/state.hpp"

namespace ckt {

class ScalarFunction {
  public:
    using ValueFn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

    ScalarFunction(Arity arity, std::size_t n, ValueFn value, GradFn grad = nullptr,
                   std::string name = {});

    static ScalarFunction symplectic(std::size_t n, ValueFn value, GradFn grad = nullptr,
                                     std::string name = {});
    static ScalarFunction contact(std::size_t n, ValueFn value, GradFn grad = nullptr,
                                  std::string name = {});

    Arity arity() const { return arity_; }
    std::size_t n() const { return n_; }
    std::size_t dim() const { return flat_dim(arity_, n_); }
    const std::string& name() const { return name_; }
    bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

    double value(std::span<const double> x) const;
    double operator()(std::span<const double> x) const { return value(x); }

    // analytic gradient when supplied, central finite differences otherwise
    void gradient(std::span<const double> x, std::span<double> out) const;
    Vec gradient(std::span<const double> x) const;
    double partial(std::size_t i, std::span<const double> x) const;

    void fd_gradient(std::span<const double> x, std::span<double> out) const;

  private:
    Arity arity_;
    std::size_t n_;
    ValueFn value_;
    GradFn grad_;
    std::string name_;
};

// central-difference step for coordinate value x
double fd_step(double x);

// max relative deviation between analytic and finite-difference gradients
double gradient_consistency(const ScalarFunction& f, std::span<const Vec> probes);

// max |dF/dz| over probe states; 0 for symplectic functions
double max_reeb_derivative(const ScalarFunction& f, std::span<const Vec> probes);

} // namespace ckt
