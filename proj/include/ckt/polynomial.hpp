// Multivariate polynomials with analytic partial derivatives. Used for the
// built-in Hamiltonians of the CLI and as the seeded random-function
// generator of the property tests.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckt/scalar_function.hpp"

namespace ckt {

class Polynomial {
  public:
    struct Term {
        double coef = 0.0;
        std::vector<unsigned> exps; // one exponent per variable
    };

    explicit Polynomial(std::size_t nvars);

    // text like "0.5*q^2 + 0.5*p^2 - 0.3*z"; factors separated by '*' or
    // whitespace; throws std::invalid_argument with a description on bad input
    static Polynomial parse(std::string_view text, std::span<const std::string> vars);

    void add_term(double coef, std::vector<unsigned> exps);

    std::size_t nvars() const { return nvars_; }
    bool empty() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    double value(std::span<const double> x) const;
    double partial(std::size_t var, std::span<const double> x) const;
    Polynomial derivative(std::size_t var) const;
    Polynomial multiplied(const Polynomial& other) const;
    void add_scaled(const Polynomial& other, double scale);

    std::string to_string(std::span<const std::string> vars) const;

  private:
    std::size_t nvars_;
    std::vector<Term> terms_;
};

// all monomials of total degree <= max_degree, coefficients uniform in [-1,1]
Polynomial random_polynomial(std::size_t nvars, unsigned max_degree, std::mt19937_64& rng);

ScalarFunction to_scalar_function(Arity arity, std::size_t n, Polynomial poly,
                                  std::string name = {});

} // namespace ckt
