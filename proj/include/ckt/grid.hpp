// Uniform cell-centered rectangular grids over phase space, 4th-order
// finite-difference stencils, conservative flux differences, and
// fixed-order (worker-count independent) reductions.
//
// Layout: symplectic n=1 grids are (q,p) with index iq*np + ip; contact n=1
// grids are (q,p,z) with index (iq*np + ip)*nz + iz. Cell centers sit at
// min + (i + 1/2) h. Periodic axes wrap; truncated axes use one-sided
// stencil closures and treat the outside as empty.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ckt/scalar_function.hpp"

namespace ckt {

enum class Boundary { periodic, truncated };

struct AxisSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t cells = 0;
    Boundary boundary = Boundary::truncated;

    double step() const { return (max - min) / static_cast<double>(cells); }
    double center(std::size_t i) const { return min + (static_cast<double>(i) + 0.5) * step(); }
};

struct GridSpec {
    std::vector<AxisSpec> axes; // (q,p) or (q,p,z)

    static GridSpec symplectic(AxisSpec q, AxisSpec p);
    static GridSpec contact(AxisSpec q, AxisSpec p, AxisSpec z);

    bool is_contact() const { return axes.size() == 3; }
    Arity arity() const { return is_contact() ? Arity::contact : Arity::symplectic; }
    std::size_t rank() const { return axes.size(); }
    std::size_t cell_count() const;
    double cell_volume() const;
    std::size_t stride(std::size_t axis) const;
    // cell center coordinates in flat (q,p[,z]) order
    void center(std::size_t flat_index, std::span<double> out) const;
    bool compatible(const GridSpec& other) const;

    void validate() const; // cells >= 8, max > min per axis
};

struct DensityGrid {
    GridSpec spec;
    Vec values;
    std::optional<double> cstar; // dual extension variable, conformal runs only

    DensityGrid() = default;
    explicit DensityGrid(GridSpec s, double fill = 0.0);
};

struct OneFormGrid {
    GridSpec spec;
    std::vector<Vec> comp; // per-axis covector components (dq, dp [, dz])

    OneFormGrid() = default;
    explicit OneFormGrid(GridSpec s);
};

// sample a scalar function at every cell center
Vec sample_on_grid(const GridSpec& spec, const std::function<double(std::span<const double>)>& f);
Vec sample_on_grid(const GridSpec& spec, const ScalarFunction& f);

// 4th-order first derivative along one axis (periodic wrap or one-sided)
Vec derivative_axis(const GridSpec& spec, std::span<const double> field, std::size_t axis,
                    int threads = 1);

// (F_{i+1/2} - F_{i-1/2})/h with 4th-order face fluxes of g; telescopes to
// zero total on periodic axes and on truncated axes (outer faces carry zero
// flux), so -sum over axes of this is a mass-conserving divergence
Vec flux_difference_axis(const GridSpec& spec, std::span<const double> g, std::size_t axis,
                         int threads = 1);

// deterministic pairwise summation (order fixed by the array, not by workers)
double pairwise_sum(std::span<const double> v);

// midpoint-rule integral: pairwise_sum * cell volume
double integrate_cells(const GridSpec& spec, std::span<const double> values);

double l2_norm(const GridSpec& spec, std::span<const double> values);
double l2_distance(const GridSpec& spec, std::span<const double> a, std::span<const double> b);

// fraction of |mass| within `layers` cells of any truncated boundary
double boundary_mass_fraction(const GridSpec& spec, std::span<const double> values,
                              std::size_t layers = 3);

// run fn over [0, count) split into contiguous chunks, one per worker
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace ckt
