// Declarative run descriptions: flat "key = value" text with dotted section
// names, '#' comments, and a strict schema (unknown keys, missing keys, and
// out-of-range values are reported with line numbers).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckt/density_kinetics.hpp"
#include "ckt/momentum_kinetics.hpp"
#include "ckt/particle.hpp"

namespace ckt {

inline constexpr std::size_t max_grid_cells = std::size_t{1} << 27;

struct SchemaError {
    std::size_t line = 0;
    std::string message;
};

struct HamiltonianSpec {
    enum class Builtin { harmonic, plasma, polynomial };
    Builtin builtin = Builtin::harmonic;
    std::size_t n = 1;
    double mass = 1.0;       // plasma
    double charge = 1.0;     // plasma
    std::string phi_text;    // plasma potential, polynomial in q
    std::string poly_text;   // polynomial builtin, variables q and p
};

// H = |p|^2/2 + |q|^2/2, or p^2/2m + e*phi(q), or the parsed polynomial
ScalarFunction build_hamiltonian(const HamiltonianSpec& spec);

struct GaussianSpec {
    double amplitude = 1.0;
    Vec center; // per axis
    Vec sigma;  // per axis
    double value(std::span<const double> x) const;
};

struct Scenario {
    enum class RunKind { particle, kinetic_density, kinetic_momentum, verify, hierarchy };
    RunKind kind = RunKind::particle;

    HamiltonianSpec hamiltonian;
    double conformal_c = 0.0;

    // particle runs
    FieldKind::Tag particle_kind = FieldKind::Tag::hamiltonian;
    Vec state_q{0.0}, state_p{0.0};
    double state_z = 0.0;
    Method method = Method::rk4;
    double dt = 1e-3;
    double T = 1.0;

    // kinetic runs
    KineticModel::Kind kinetic_model = KineticModel::Kind::vlasov;
    bool flux_form = true;
    std::optional<GridSpec> grid;
    GaussianSpec initial;
    Vec oneform_amplitude; // per component, kinetic_momentum runs
    std::size_t steps = 0;
    std::size_t snapshot_every = 0; // 0: first and last only

    // verify runs
    std::size_t verify_instances = 100;

    std::string output_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;

    std::string raw_text; // verbatim scenario text, echoed into the manifest

    static std::string kind_name(RunKind k);
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<SchemaError> errors;
    bool ok() const { return errors.empty() && scenario.has_value(); }
};

ParseResult parse_scenario(std::string_view text);
ParseResult parse_scenario_file(const std::string& path);

} // namespace ckt
