// Grid right-hand sides and time stepping for the density-form kinetic
// equations (n = 1):
//
//   vlasov          df/dt = {H,f}^(S)
//   conformal(c)    df/dt = {H,f}^(S) + c Z(f) - c(n+1) f,   Z(f) = -p df/dp
//                   dc*/dt = integral of f (Z(H)+H) dmu
//   contact_vf      dfb/dt = -xi_Hb(fb) + (n+1) fb dHb/dz    [= -div(fb xi_Hb)]
//   contact_bracket same with coefficient (n+2)
//
// The c = 0 conformal path and the vlasov path share one kernel and are
// bit-identical. contact_vf also has a conservative flux form whose total
// mass is preserved to round-off.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckt/grid.hpp"

namespace ckt {

struct KineticModel {
    enum class Kind { vlasov, conformal, contact_vf, contact_bracket };
    Kind kind = Kind::vlasov;
    double c = 0.0;

    static KineticModel vlasov() { return {Kind::vlasov, 0.0}; }
    static KineticModel conformal(double c) { return {Kind::conformal, c}; }
    static KineticModel contact_vf() { return {Kind::contact_vf, 0.0}; }
    static KineticModel contact_bracket() { return {Kind::contact_bracket, 0.0}; }

    bool contact() const
    {
        return kind == Kind::contact_vf || kind == Kind::contact_bracket;
    }
    std::string label() const;
};

// per-cell samples of dH/dq, dH/dp and Z(H)+H = H - p dH/dp
struct HamiltonianSamples {
    GridSpec spec;
    Vec dHdq, dHdp, zh_plus_h;
};
HamiltonianSamples sample_hamiltonian(const GridSpec& spec, const ScalarFunction& H);

// per-cell samples of the contact field xi_Hb and dHb/dz
struct ContactFieldSamples {
    GridSpec spec;
    Vec xi_q, xi_p, xi_z, dHdz;
};
ContactFieldSamples sample_contact_field(const GridSpec& spec, const ScalarFunction& Hbar);

struct ConformalRate {
    DensityGrid rate;
    double cstar_rate = 0.0;
};

DensityGrid vlasov_density_rhs(const DensityGrid& f, const ScalarFunction& H, int threads = 1);

ConformalRate conformal_density_rhs(const DensityGrid& f, const ScalarFunction& H, double c,
                                    int threads = 1);

enum class ContactVariant { vector_field, bracket };

DensityGrid contact_density_rhs(const DensityGrid& fbar, const ScalarFunction& Hbar,
                                ContactVariant variant, int threads = 1);

// -div(fbar xi_Hb) in conservative flux form (the continuity-equation oracle
// for the vector_field variant; preserves discrete mass exactly)
DensityGrid contact_flux_rhs(const DensityGrid& fbar, const ScalarFunction& Hbar,
                             int threads = 1);

// midpoint-rule quadrature of a * f
double observable(const DensityGrid& f, const ScalarFunction& a);

struct DensityStepOptions {
    bool flux_form = true; // contact_vf only
    int threads = 1;
    double boundary_warn_fraction = 1e-6;
};

class DensityStepper {
  public:
    DensityStepper(KineticModel model, GridSpec spec, ScalarFunction H,
                   DensityStepOptions opts = {});

    // one RK4 step; advances f.values and, for conformal models, f.cstar
    void step(DensityGrid& f, double dt);

    // dt bound 0.5 * min_a(h_a / max|velocity_a|)
    double cfl_limit() const;

    const KineticModel& model() const { return model_; }
    const GridSpec& spec() const { return spec_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t steps_taken() const { return steps_; }

  private:
    struct Slope {
        Vec values;
        double cstar = 0.0;
    };
    void rhs(const Vec& f, Slope& out);

    KineticModel model_;
    GridSpec spec_;
    ScalarFunction hamiltonian_;
    DensityStepOptions opts_;
    HamiltonianSamples ham_samples_;   // symplectic models
    ContactFieldSamples field_samples_; // contact models
    std::vector<Vec> velocity_;         // sampled transport field, per axis
    std::vector<std::size_t> boundary_cells_;
    Vec scratch_;
    Slope k1_, k2_, k3_, k4_;
    Vec ytmp_;
    std::vector<std::string> warnings_;
    bool cfl_warned_ = false;
    std::size_t steps_ = 0;
};

// one free-standing RK4 step (allocating convenience wrapper)
DensityGrid step_density(const KineticModel& model, const DensityGrid& f,
                         const ScalarFunction& H, double dt, DensityStepOptions opts = {});

} // namespace ckt
