#include "ckt/geometry.hpp"

#include <stdexcept>

namespace ckt {

namespace {

void check_symplectic_pair(const CovectorValue& alpha, std::size_t n)
{
    if (alpha.contact())
        throw std::invalid_argument("symplectic operation on a contact covector");
    if (alpha.n() != n)
        throw std::invalid_argument("covector/state dimension mismatch");
}

} // namespace

Vec liouville_field(const PhaseState& s)
{
    const std::size_t n = s.n();
    Vec out(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        out[n + i] = -s.p[i];
    return out;
}

Vec symplectic_sharp(const CovectorValue& alpha, const PhaseState& s)
{
    const std::size_t n = s.n();
    check_symplectic_pair(alpha, n);
    Vec out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = alpha.dp[i];
        out[n + i] = -alpha.dq[i];
    }
    return out;
}

CovectorValue symplectic_flat(std::span<const double> X, const PhaseState& s)
{
    const std::size_t n = s.n();
    if (X.size() != 2 * n)
        throw std::invalid_argument("tangent/state dimension mismatch");
    CovectorValue alpha;
    alpha.dq.resize(n);
    alpha.dp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        alpha.dq[i] = -X[n + i];
        alpha.dp[i] = X[i];
    }
    return alpha;
}

std::pair<CovectorValue, Vec> contact_form_and_reeb(const ContactState& s)
{
    const std::size_t n = s.n();
    CovectorValue eta;
    eta.dq.resize(n);
    eta.dp.assign(n, 0.0);
    eta.dz = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        eta.dq[i] = -s.p[i];
    Vec reeb(2 * n + 1, 0.0);
    reeb[2 * n] = 1.0;
    return {eta, reeb};
}

Vec sharp_lambda(const CovectorValue& alpha, const ContactState& s)
{
    const std::size_t n = s.n();
    if (!alpha.contact())
        throw std::invalid_argument("sharp_lambda requires a contact covector");
    if (alpha.n() != n)
        throw std::invalid_argument("covector/state dimension mismatch");
    const double u = *alpha.dz;
    Vec out(2 * n + 1, 0.0);
    double zdot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = alpha.dp[i];
        out[n + i] = -(alpha.dq[i] + s.p[i] * u);
        zdot += alpha.dp[i] * s.p[i];
    }
    out[2 * n] = zdot;
    return out;
}

} // namespace ckt
