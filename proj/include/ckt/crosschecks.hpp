// Cross-validation studies connecting the three levels of description:
// evolve-then-map against map-then-evolve, with grid/step refinement to
// measure the convergence order of the discrepancy.
#pragma once

#include "ckt/hierarchy.hpp"
#include "ckt/momentum_kinetics.hpp"

namespace ckt {

struct ConvergenceStudy {
    std::vector<std::size_t> cells;  // axis-0 cell counts per level
    std::vector<double> residuals;   // L2 discrepancy per level
    std::vector<double> extra;       // secondary scalar discrepancy (|dc*| etc.)
    std::vector<double> orders;      // log2(residual_k / residual_{k+1})
    double dt0 = 0.0;                // coarsest-level step
    double T = 0.0;

    double min_order() const;
};

GridSpec refine(const GridSpec& spec, std::size_t factor);

// conformal momentum flow mapped by (div sharp, c*) against the density-form
// flow of the mapped initial data; dt halves with h
ConvergenceStudy momentum_density_intertwining(const ScalarFunction& H, double c,
                                               const GridSpec& base, std::size_t levels,
                                               std::size_t steps0, int threads = 1);

// contact bracket-lift density flow for Hb = H - c z, projected by
// integral dz, against the conformal density flow of the projection
ConvergenceStudy contact_density_projection_study(const ScalarFunction& H, double c,
                                                  const GridSpec& contact_base,
                                                  std::size_t levels, std::size_t steps0,
                                                  int threads = 1);

// contact momentum flow projected componentwise against the conformal
// momentum flow of the projection (initial Pb_z odd in z)
ConvergenceStudy contact_oneform_projection_study(const ScalarFunction& H, double c,
                                                  const GridSpec& contact_base,
                                                  std::size_t levels, std::size_t steps0,
                                                  int threads = 1);

// one evolved contact one-form, two routes to a symplectic density:
// project_oneform then div sharp, against contact density map then project
double commuting_square_residual(const ScalarFunction& H, double c, const GridSpec& contact,
                                 std::size_t steps, int threads = 1);

} // namespace ckt
