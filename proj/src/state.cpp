#include "ckt/state.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ckt {

bool all_finite(std::span<const double> v)
{
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

namespace {

void check_pair(const Vec& q, const Vec& p)
{
    if (q.empty() || q.size() != p.size())
        throw std::invalid_argument("state requires q and p of equal length n >= 1");
    if (!all_finite(q) || !all_finite(p))
        throw std::invalid_argument("state entries must be finite");
}

} // namespace

PhaseState::PhaseState(Vec q_, Vec p_) : q(std::move(q_)), p(std::move(p_))
{
    check_pair(q, p);
}

Vec PhaseState::flat() const
{
    Vec x;
    x.reserve(2 * n());
    x.insert(x.end(), q.begin(), q.end());
    x.insert(x.end(), p.begin(), p.end());
    return x;
}

PhaseState PhaseState::from_flat(std::span<const double> x)
{
    if (x.size() < 2 || x.size() % 2 != 0)
        throw std::invalid_argument("flat symplectic state must have even length >= 2");
    const std::size_t n = x.size() / 2;
    return PhaseState(Vec(x.begin(), x.begin() + n), Vec(x.begin() + n, x.end()));
}

ContactState::ContactState(Vec q_, Vec p_, double z_) : q(std::move(q_)), p(std::move(p_)), z(z_)
{
    check_pair(q, p);
    if (!std::isfinite(z))
        throw std::invalid_argument("state entries must be finite");
}

Vec ContactState::flat() const
{
    Vec x;
    x.reserve(2 * n() + 1);
    x.insert(x.end(), q.begin(), q.end());
    x.insert(x.end(), p.begin(), p.end());
    x.push_back(z);
    return x;
}

ContactState ContactState::from_flat(std::span<const double> x)
{
    if (x.size() < 3 || x.size() % 2 != 1)
        throw std::invalid_argument("flat contact state must have odd length >= 3");
    const std::size_t n = x.size() / 2;
    return ContactState(Vec(x.begin(), x.begin() + n), Vec(x.begin() + n, x.begin() + 2 * n),
                        x[2 * n]);
}

Vec CovectorValue::flat() const
{
    Vec x;
    x.reserve(2 * n() + (dz ? 1 : 0));
    x.insert(x.end(), dq.begin(), dq.end());
    x.insert(x.end(), dp.begin(), dp.end());
    if (dz)
        x.push_back(*dz);
    return x;
}

} // namespace ckt
