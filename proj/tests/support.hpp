// shared helpers for the unit tests
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ckt/scalar_function.hpp"

namespace test_support {

inline std::vector<ckt::Vec> random_states(std::size_t dim, std::size_t count,
                                           std::uint64_t seed, double box = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-box, box);
    std::vector<ckt::Vec> out(count, ckt::Vec(dim));
    for (auto& s : out)
        for (double& v : s)
            v = dist(rng);
    return out;
}

// closed-form solution of qdot = p, pdot = -q + c p (eigenvalues c/2 +- i w)
inline ckt::Vec conformal_oscillator_exact(double q0, double p0, double c, double t)
{
    const double w = std::sqrt(1.0 - 0.25 * c * c);
    const double ct = std::cos(w * t), st = std::sin(w * t) / w;
    const double grow = std::exp(0.5 * c * t);
    // exp(At) = e^{ct/2} (cos(wt) I + sin(wt)/w (A - c/2 I)), A = [[0,1],[-1,c]]
    const double a11 = ct + st * (-0.5 * c), a12 = st;
    const double a21 = -st, a22 = ct + st * (0.5 * c);
    return {grow * (a11 * q0 + a12 * p0), grow * (a21 * q0 + a22 * p0)};
}

inline ckt::ScalarFunction harmonic(std::size_t n = 1)
{
    return ckt::ScalarFunction::symplectic(
        n,
        [n](std::span<const double> x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 2 * n; ++i)
                acc += 0.5 * x[i] * x[i];
            return acc;
        },
        [n](std::span<const double> x, std::span<double> g) {
            for (std::size_t i = 0; i < 2 * n; ++i)
                g[i] = x[i];
        },
        "harmonic");
}

} // namespace test_support
