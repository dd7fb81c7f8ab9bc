#include "ckt/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace ckt {

GridSpec GridSpec::symplectic(AxisSpec q, AxisSpec p)
{
    GridSpec s;
    s.axes = {q, p};
    s.validate();
    return s;
}

GridSpec GridSpec::contact(AxisSpec q, AxisSpec p, AxisSpec z)
{
    GridSpec s;
    s.axes = {q, p, z};
    s.validate();
    return s;
}

void GridSpec::validate() const
{
    if (axes.size() != 2 && axes.size() != 3)
        throw std::invalid_argument("grid must have axes (q,p) or (q,p,z)");
    for (const AxisSpec& a : axes) {
        if (a.cells < 8)
            throw std::invalid_argument("grid axis needs at least 8 cells");
        if (!(a.max > a.min))
            throw std::invalid_argument("grid axis needs max > min");
    }
}

std::size_t GridSpec::cell_count() const
{
    std::size_t total = 1;
    for (const AxisSpec& a : axes)
        total *= a.cells;
    return total;
}

double GridSpec::cell_volume() const
{
    double v = 1.0;
    for (const AxisSpec& a : axes)
        v *= a.step();
    return v;
}

std::size_t GridSpec::stride(std::size_t axis) const
{
    std::size_t st = 1;
    for (std::size_t a = axes.size(); a-- > axis + 1;)
        st *= axes[a].cells;
    return st;
}

void GridSpec::center(std::size_t flat_index, std::span<double> out) const
{
    for (std::size_t a = axes.size(); a-- > 0;) {
        out[a] = axes[a].center(flat_index % axes[a].cells);
        flat_index /= axes[a].cells;
    }
}

bool GridSpec::compatible(const GridSpec& other) const
{
    if (axes.size() != other.axes.size())
        return false;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const AxisSpec &x = axes[a], &y = other.axes[a];
        if (x.cells != y.cells || x.min != y.min || x.max != y.max || x.boundary != y.boundary)
            return false;
    }
    return true;
}

DensityGrid::DensityGrid(GridSpec s, double fill) : spec(std::move(s))
{
    spec.validate();
    values.assign(spec.cell_count(), fill);
}

OneFormGrid::OneFormGrid(GridSpec s) : spec(std::move(s))
{
    spec.validate();
    comp.assign(spec.rank(), Vec(spec.cell_count(), 0.0));
}

Vec sample_on_grid(const GridSpec& spec, const std::function<double(std::span<const double>)>& f)
{
    const std::size_t total = spec.cell_count();
    Vec out(total);
    std::array<double, 3> x{};
    std::span<double> xs(x.data(), spec.rank());
    for (std::size_t i = 0; i < total; ++i) {
        spec.center(i, xs);
        out[i] = f(xs);
    }
    return out;
}

Vec sample_on_grid(const GridSpec& spec, const ScalarFunction& f)
{
    if (f.dim() != spec.rank())
        throw std::invalid_argument("sample_on_grid: function/grid arity mismatch");
    return sample_on_grid(spec, [&f](std::span<const double> x) { return f.value(x); });
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn)
{
    if (threads <= 1 || count < 2048) {
        fn(0, count);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

namespace {

struct LineWalk {
    std::size_t nlines, len, stride, block;
    std::size_t base(std::size_t line) const
    {
        return (line / stride) * block + (line % stride);
    }
};

LineWalk make_walk(const GridSpec& spec, std::size_t axis)
{
    LineWalk w;
    w.len = spec.axes[axis].cells;
    w.stride = spec.stride(axis);
    w.block = w.len * w.stride;
    w.nlines = spec.cell_count() / w.len;
    return w;
}

void derivative_line_periodic(const double* f, double* out, std::size_t len, std::size_t st,
                              double inv12h)
{
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t im2 = (i + len - 2) % len, im1 = (i + len - 1) % len;
        const std::size_t ip1 = (i + 1) % len, ip2 = (i + 2) % len;
        out[i * st] =
            (f[im2 * st] - 8.0 * f[im1 * st] + 8.0 * f[ip1 * st] - f[ip2 * st]) * inv12h;
    }
}

// one-sided boundary closure with the summation-by-parts structure
// (diagonal-norm SBP(4,2)); plain 4th-order one-sided rows put eigenvalues in
// the right half plane and blow up under long time stepping
void derivative_line_truncated(const double* f, double* out, std::size_t len, std::size_t st,
                               double inv12h)
{
    static constexpr double c0[4] = {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0};
    static constexpr double c1[4] = {-0.5, 0.0, 0.5, 0.0};
    static constexpr double c2[5] = {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0};
    static constexpr double c3[6] = {3.0 / 98.0, 0.0,        -59.0 / 98.0,
                                     0.0,        32.0 / 49.0, -4.0 / 49.0};
    const double invh = 12.0 * inv12h;
    auto v = [&](std::size_t i) { return f[i * st]; };
    auto left = [&](std::size_t row, const double* c, std::size_t nc) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nc; ++j)
            acc += c[j] * v(j);
        out[row * st] = acc * invh;
    };
    const std::size_t L = len - 1;
    auto right = [&](std::size_t row, const double* c, std::size_t nc) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nc; ++j)
            acc -= c[j] * v(L - j);
        out[(L - row) * st] = acc * invh;
    };
    left(0, c0, 4);
    left(1, c1, 3);
    left(2, c2, 5);
    left(3, c3, 6);
    for (std::size_t i = 4; i + 4 < len; ++i)
        out[i * st] = (v(i - 2) - 8.0 * v(i - 1) + 8.0 * v(i + 1) - v(i + 2)) * inv12h;
    right(0, c0, 4);
    right(1, c1, 3);
    right(2, c2, 5);
    right(3, c3, 6);
}

} // namespace

Vec derivative_axis(const GridSpec& spec, std::span<const double> field, std::size_t axis,
                    int threads)
{
    if (axis >= spec.rank())
        throw std::invalid_argument("derivative_axis: axis out of range");
    if (field.size() != spec.cell_count())
        throw std::invalid_argument("derivative_axis: field size mismatch");
    const LineWalk w = make_walk(spec, axis);
    const double inv12h = 1.0 / (12.0 * spec.axes[axis].step());
    const bool periodic = spec.axes[axis].boundary == Boundary::periodic;
    Vec out(field.size());
    parallel_for(w.nlines, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t line = lo; line < hi; ++line) {
            const std::size_t b = w.base(line);
            if (periodic)
                derivative_line_periodic(field.data() + b, out.data() + b, w.len, w.stride,
                                         inv12h);
            else
                derivative_line_truncated(field.data() + b, out.data() + b, w.len, w.stride,
                                          inv12h);
        }
    });
    return out;
}

Vec flux_difference_axis(const GridSpec& spec, std::span<const double> g, std::size_t axis,
                         int threads)
{
    if (axis >= spec.rank())
        throw std::invalid_argument("flux_difference_axis: axis out of range");
    if (g.size() != spec.cell_count())
        throw std::invalid_argument("flux_difference_axis: field size mismatch");
    const LineWalk w = make_walk(spec, axis);
    const double invh = 1.0 / spec.axes[axis].step();
    const bool periodic = spec.axes[axis].boundary == Boundary::periodic;
    const std::size_t len = w.len;
    Vec out(g.size());
    parallel_for(w.nlines, threads, [&](std::size_t lo, std::size_t hi) {
        Vec face(len + 1);
        for (std::size_t line = lo; line < hi; ++line) {
            const std::size_t b = w.base(line);
            auto v = [&](std::size_t i) { return g[b + i * w.stride]; };
            if (periodic) {
                for (std::size_t k = 0; k < len; ++k) {
                    const std::size_t km2 = (k + len - 2) % len, km1 = (k + len - 1) % len;
                    const std::size_t kp1 = k % len;
                    const std::size_t kp2 = (k + 1) % len;
                    face[k] = (-v(km2) + 7.0 * v(km1) + 7.0 * v(kp1) - v(kp2)) / 12.0;
                }
                face[len] = face[0];
            } else {
                // faces outside the support carry zero flux; ghost cells are empty
                face[0] = 0.0;
                face[len] = 0.0;
                for (std::size_t k = 1; k < len; ++k) {
                    const double gm2 = k >= 2 ? v(k - 2) : 0.0;
                    const double gm1 = v(k - 1);
                    const double gp0 = v(k);
                    const double gp1 = k + 1 < len ? v(k + 1) : 0.0;
                    face[k] = (-gm2 + 7.0 * gm1 + 7.0 * gp0 - gp1) / 12.0;
                }
            }
            for (std::size_t i = 0; i < len; ++i)
                out[b + i * w.stride] = (face[i + 1] - face[i]) * invh;
        }
    });
    return out;
}

double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 32) {
        double acc = 0.0;
        for (double x : v)
            acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate_cells(const GridSpec& spec, std::span<const double> values)
{
    return pairwise_sum(values) * spec.cell_volume();
}

double l2_norm(const GridSpec& spec, std::span<const double> values)
{
    Vec sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        sq[i] = values[i] * values[i];
    return std::sqrt(integrate_cells(spec, sq));
}

double l2_distance(const GridSpec& spec, std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("l2_distance: size mismatch");
    Vec sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(integrate_cells(spec, sq));
}

double boundary_mass_fraction(const GridSpec& spec, std::span<const double> values,
                              std::size_t layers)
{
    const std::size_t rank = spec.rank();
    std::vector<std::size_t> idx(rank);
    Vec absval(values.size());
    Vec edge(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t rest = i;
        bool near = false;
        for (std::size_t a = rank; a-- > 0;) {
            idx[a] = rest % spec.axes[a].cells;
            rest /= spec.axes[a].cells;
        }
        for (std::size_t a = 0; a < rank; ++a) {
            if (spec.axes[a].boundary != Boundary::truncated)
                continue;
            if (idx[a] < layers || idx[a] + layers >= spec.axes[a].cells)
                near = true;
        }
        absval[i] = std::fabs(values[i]);
        if (near)
            edge[i] = absval[i];
    }
    const double total = pairwise_sum(absval);
    if (total == 0.0)
        return 0.0;
    return pairwise_sum(edge) / total;
}

} // namespace ckt
