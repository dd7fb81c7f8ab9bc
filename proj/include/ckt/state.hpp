// Phase-space and contact-space points in Darboux coordinates, plus covector
// values. Flat layout used throughout: (q_0..q_{n-1}, p_0..p_{n-1} [, z]).
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ckt {

using Vec = std::vector<double>;

enum class Arity { symplectic, contact };

inline std::size_t flat_dim(Arity a, std::size_t n)
{
    return a == Arity::symplectic ? 2 * n : 2 * n + 1;
}

bool all_finite(std::span<const double> v);

// point (q^i, p_i) on the symplectic manifold R^{2n}
struct PhaseState {
    Vec q, p;

    PhaseState(Vec q_, Vec p_);
    std::size_t n() const { return q.size(); }
    Vec flat() const;
    static PhaseState from_flat(std::span<const double> x);
};

// point (q^i, p_i, z) on the contactized manifold R^{2n+1}
struct ContactState {
    Vec q, p;
    double z = 0.0;

    ContactState(Vec q_, Vec p_, double z_);
    std::size_t n() const { return q.size(); }
    Vec flat() const;
    static ContactState from_flat(std::span<const double> x);
};

// one-form value with components (a_i, a^i [, u]) dual to (q, p [, z])
struct CovectorValue {
    Vec dq, dp;
    std::optional<double> dz;

    std::size_t n() const { return dq.size(); }
    bool contact() const { return dz.has_value(); }
    Vec flat() const;
};

} // namespace ckt
