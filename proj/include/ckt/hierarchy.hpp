// Maps between the contact, conformal, and Hamiltonian levels:
//   extension    Hb(q,p,z) = H(q,p) - c z  (dHb/dz = -c exactly)
//   trajectories drop z (diagnostic energy recomputed with the base H)
//   densities    f(q,p) = integral of fb dz,  c* = integral of z fb dmub
//   one-forms    Pi_a(q,p) = integral of Pb_a dz, a in {q,p}; Pb_z discarded
#pragma once

#include <utility>

#include "ckt/grid.hpp"
#include "ckt/particle.hpp"

namespace ckt {

struct ExtendedHamiltonian {
    ScalarFunction base;     // symplectic H(q,p)
    double c = 0.0;          // conformal factor
    ScalarFunction extended; // contact Hb = H - c z
};

ExtendedHamiltonian extend_hamiltonian(const ScalarFunction& H, double c);

// drops z from a contact trajectory; energy diagnostics are recomputed with
// the base Hamiltonian, volume diagnostics are not carried over
Trajectory project_trajectory(const Trajectory& tr, const ScalarFunction& base_hamiltonian);

// throws std::runtime_error when more than max_z_boundary_fraction of |fb|
// sits within 3 cells of the z boundary (decay requirement)
std::pair<DensityGrid, double> project_kinetic(const DensityGrid& fbar,
                                               double max_z_boundary_fraction = 1e-6);

OneFormGrid project_oneform(const OneFormGrid& Pibar, double max_z_boundary_fraction = 1e-6);

} // namespace ckt
