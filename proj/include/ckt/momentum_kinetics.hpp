// Momentum-form (one-form) kinetic evolution and the momentum/Poisson maps
// down to densities (n = 1):
//
//   hamiltonian    dPi/dt = -L_{X_H} Pi
//   conformal(c)   dPi/dt = -L_{X_H^c} Pi - c n Pi
//   contact        dPb/dt = -L_{xi_Hb} Pb + (n+1) (dHb/dz) Pb
//
//   density map    f = div sharp(Pi) = dPi_p/dq - dPi_q/dp   (Pi = p dq -> f = -n)
//   c* map         c* = integral of p Pi_p dmu
//   contact map    fb = dPb_p/dq - dPb_q/dp - p (dPb_z/dp - dPb_p/dz) - (n-1) Pb_z
//   strict map     f(q,p) = integral over z of (contact map + dPb_z/dz)
#pragma once

#include "ckt/grid.hpp"
#include "ckt/particle.hpp"

namespace ckt {

struct VectorFieldGrid {
    GridSpec spec;
    std::vector<Vec> comp; // per-axis components

    VectorFieldGrid() = default;
    explicit VectorFieldGrid(GridSpec s);
};

// sample X_H / X_H^c / xi_Hb at cell centers
VectorFieldGrid sample_particle_field(const FieldKind& kind, const ScalarFunction& H,
                                      const GridSpec& spec);

// (L_X Pi)_a = X^b d_b Pi_a + Pi_b d_a X^b, 4th-order stencils componentwise
OneFormGrid lie_derivative_oneform(const VectorFieldGrid& X, const OneFormGrid& Pi,
                                   int threads = 1);

struct MomentumModel {
    enum class Kind { hamiltonian, conformal, contact };
    Kind kind = Kind::hamiltonian;
    double c = 0.0;

    static MomentumModel hamiltonian() { return {Kind::hamiltonian, 0.0}; }
    static MomentumModel conformal(double c) { return {Kind::conformal, c}; }
    static MomentumModel contact() { return {Kind::contact, 0.0}; }
    bool contact_kind() const { return kind == Kind::contact; }
    std::string label() const;
};

OneFormGrid momentum_rhs(const MomentumModel& model, const OneFormGrid& Pi,
                         const ScalarFunction& H, int threads = 1);

DensityGrid density_from_oneform(const OneFormGrid& Pi, int threads = 1);

double cstar_from_oneform(const OneFormGrid& Pi);

DensityGrid contact_density_from_oneform(const OneFormGrid& Pibar, bool strict = false,
                                         int threads = 1);

class MomentumStepper {
  public:
    MomentumStepper(MomentumModel model, GridSpec spec, ScalarFunction H, int threads = 1);

    void step(OneFormGrid& Pi, double dt); // one RK4 step
    double cfl_limit() const;
    const MomentumModel& model() const { return model_; }
    const GridSpec& spec() const { return spec_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    void rhs(const OneFormGrid& Pi, OneFormGrid& out);

    MomentumModel model_;
    GridSpec spec_;
    ScalarFunction hamiltonian_;
    int threads_;
    VectorFieldGrid field_;
    std::vector<Vec> field_jac_; // d_a X^b arrays, index b * rank + a
    Vec reeb_derivative_;        // dHb/dz samples (contact)
    OneFormGrid k1_, k2_, k3_, k4_, ytmp_;
    std::vector<std::string> warnings_;
    std::size_t steps_ = 0;
};

} // namespace ckt
