#include "ckt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ckt/polynomial.hpp"

namespace ckt {

double GaussianSpec::value(std::span<const double> x) const
{
    double acc = amplitude;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double c = a < center.size() ? center[a] : 0.0;
        const double s = a < sigma.size() ? sigma[a] : 1.0;
        const double d = (x[a] - c) / s;
        acc *= std::exp(-0.5 * d * d);
    }
    return acc;
}

ScalarFunction build_hamiltonian(const HamiltonianSpec& spec)
{
    switch (spec.builtin) {
    case HamiltonianSpec::Builtin::harmonic: {
        const std::size_t n = spec.n;
        return ScalarFunction::symplectic(
            n,
            [n](std::span<const double> x) {
                double acc = 0.0;
                for (std::size_t i = 0; i < 2 * n; ++i)
                    acc += 0.5 * x[i] * x[i];
                return acc;
            },
            [n](std::span<const double> x, std::span<double> g) {
                for (std::size_t i = 0; i < 2 * n; ++i)
                    g[i] = x[i];
            },
            "harmonic");
    }
    case HamiltonianSpec::Builtin::plasma: {
        const std::vector<std::string> qvar = {"q"};
        auto phi = std::make_shared<Polynomial>(Polynomial::parse(spec.phi_text, qvar));
        auto dphi = std::make_shared<Polynomial>(phi->derivative(0));
        const double m = spec.mass, e = spec.charge;
        if (!(m > 0.0))
            throw std::invalid_argument("plasma Hamiltonian requires mass > 0");
        return ScalarFunction::symplectic(
            1,
            [phi, m, e](std::span<const double> x) {
                return x[1] * x[1] / (2.0 * m) + e * phi->value(x.first(1));
            },
            [dphi, m, e](std::span<const double> x, std::span<double> g) {
                g[0] = e * dphi->value(x.first(1));
                g[1] = x[1] / m;
            },
            "plasma");
    }
    case HamiltonianSpec::Builtin::polynomial: {
        const std::vector<std::string> vars = {"q", "p"};
        return to_scalar_function(Arity::symplectic, 1, Polynomial::parse(spec.poly_text, vars),
                                  "polynomial");
    }
    }
    throw std::invalid_argument("unknown Hamiltonian builtin");
}

std::string Scenario::kind_name(RunKind k)
{
    switch (k) {
    case RunKind::particle: return "particle";
    case RunKind::kinetic_density: return "kinetic_density";
    case RunKind::kinetic_momentum: return "kinetic_momentum";
    case RunKind::verify: return "verify";
    case RunKind::hierarchy: return "hierarchy";
    }
    return "?";
}

namespace {

struct RawEntry {
    std::string value;
    std::size_t line = 0;
    bool consumed = false;
};

struct Reader {
    std::map<std::string, RawEntry> entries;
    std::vector<SchemaError>& errors;

    bool has(const std::string& key)
    {
        return entries.find(key) != entries.end();
    }
    const RawEntry* take(const std::string& key)
    {
        auto it = entries.find(key);
        if (it == entries.end())
            return nullptr;
        it->second.consumed = true;
        return &it->second;
    }
    void fail(const RawEntry* e, const std::string& msg)
    {
        errors.push_back({e ? e->line : 0, msg});
    }

    std::string string_or(const std::string& key, const std::string& fallback)
    {
        const RawEntry* e = take(key);
        return e ? e->value : fallback;
    }
    double number_or(const std::string& key, double fallback)
    {
        const RawEntry* e = take(key);
        if (!e)
            return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(e->value, &used);
            if (used != e->value.size() || !std::isfinite(v))
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            fail(e, "key '" + key + "': expected a finite number, got '" + e->value + "'");
            return fallback;
        }
    }
    std::uint64_t u64_or(const std::string& key, std::uint64_t fallback)
    {
        const RawEntry* e = take(key);
        if (!e)
            return fallback;
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(e->value, &used);
            if (used != e->value.size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            fail(e, "key '" + key + "': expected a non-negative integer, got '" + e->value + "'");
            return fallback;
        }
    }
    Vec vector_or(const std::string& key, Vec fallback)
    {
        const RawEntry* e = take(key);
        if (!e)
            return fallback;
        Vec out;
        std::stringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(item, &used);
                while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                    ++used;
                if (used != item.size() || !std::isfinite(v))
                    throw std::invalid_argument("bad entry");
                out.push_back(v);
            } catch (const std::exception&) {
                fail(e, "key '" + key + "': expected comma-separated numbers, got '" + e->value +
                            "'");
                return fallback;
            }
        }
        if (out.empty()) {
            fail(e, "key '" + key + "': empty vector");
            return fallback;
        }
        return out;
    }
};

std::optional<AxisSpec> read_axis(Reader& r, const std::string& name, Boundary default_boundary,
                                  bool required)
{
    const std::string prefix = "grid." + name + ".";
    const bool any = r.has(prefix + "min") || r.has(prefix + "max") || r.has(prefix + "cells") ||
                     r.has(prefix + "boundary");
    if (!any) {
        if (required)
            r.errors.push_back({0, "missing required keys " + prefix + "{min,max,cells}"});
        return std::nullopt;
    }
    AxisSpec axis;
    axis.min = r.number_or(prefix + "min", 0.0);
    axis.max = r.number_or(prefix + "max", 1.0);
    const std::uint64_t cells = r.u64_or(prefix + "cells", 0);
    axis.cells = static_cast<std::size_t>(cells);
    axis.boundary = default_boundary;
    if (const RawEntry* e = r.take(prefix + "boundary")) {
        if (e->value == "periodic")
            axis.boundary = Boundary::periodic;
        else if (e->value == "truncated")
            axis.boundary = Boundary::truncated;
        else
            r.fail(e, "key '" + prefix + "boundary': expected periodic|truncated");
    }
    if (axis.cells < 8)
        r.errors.push_back({0, "axis " + name + ": cells must be >= 8"});
    if (!(axis.max > axis.min))
        r.errors.push_back({0, "axis " + name + ": max must exceed min"});
    return axis;
}

} // namespace

ParseResult parse_scenario(std::string_view text)
{
    ParseResult result;
    std::vector<SchemaError>& errors = result.errors;
    Reader r{{}, errors};

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                s.remove_suffix(1);
            return s;
        };
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back({lineno, "expected 'key = value'"});
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            errors.push_back({lineno, "expected 'key = value'"});
            continue;
        }
        if (r.entries.count(key)) {
            errors.push_back({lineno, "duplicate key '" + key + "'"});
            continue;
        }
        r.entries[key] = RawEntry{value, lineno, false};
    }

    Scenario s;
    s.raw_text = std::string(text);

    const RawEntry* kind = r.take("run.kind");
    if (!kind) {
        errors.push_back({0, "missing required key run.kind"});
    } else if (kind->value == "particle") {
        s.kind = Scenario::RunKind::particle;
    } else if (kind->value == "kinetic_density") {
        s.kind = Scenario::RunKind::kinetic_density;
    } else if (kind->value == "kinetic_momentum") {
        s.kind = Scenario::RunKind::kinetic_momentum;
    } else if (kind->value == "verify") {
        s.kind = Scenario::RunKind::verify;
    } else if (kind->value == "hierarchy") {
        s.kind = Scenario::RunKind::hierarchy;
    } else {
        r.fail(kind, "run.kind: expected "
                     "particle|kinetic_density|kinetic_momentum|verify|hierarchy");
    }

    // hamiltonian
    const std::string hname = r.string_or("hamiltonian.name", "harmonic");
    if (hname == "harmonic")
        s.hamiltonian.builtin = HamiltonianSpec::Builtin::harmonic;
    else if (hname == "plasma")
        s.hamiltonian.builtin = HamiltonianSpec::Builtin::plasma;
    else if (hname == "polynomial")
        s.hamiltonian.builtin = HamiltonianSpec::Builtin::polynomial;
    else
        errors.push_back({0, "hamiltonian.name: expected harmonic|plasma|polynomial"});
    s.hamiltonian.n = static_cast<std::size_t>(r.u64_or("hamiltonian.n", 1));
    if (s.hamiltonian.n == 0)
        errors.push_back({0, "hamiltonian.n must be >= 1"});
    s.hamiltonian.mass = r.number_or("hamiltonian.mass", 1.0);
    s.hamiltonian.charge = r.number_or("hamiltonian.charge", 1.0);
    s.hamiltonian.phi_text = r.string_or("hamiltonian.phi", "0.5*q^2");
    s.hamiltonian.poly_text = r.string_or("hamiltonian.poly", "0.5*q^2 + 0.5*p^2");
    if (s.hamiltonian.builtin != HamiltonianSpec::Builtin::harmonic && s.hamiltonian.n != 1)
        errors.push_back({0, "plasma/polynomial builtins support n = 1 only"});
    if (!(s.hamiltonian.mass > 0.0))
        errors.push_back({0, "hamiltonian.mass must be positive"});
    try {
        if (s.hamiltonian.builtin == HamiltonianSpec::Builtin::plasma) {
            const std::vector<std::string> qvar = {"q"};
            Polynomial::parse(s.hamiltonian.phi_text, qvar);
        } else if (s.hamiltonian.builtin == HamiltonianSpec::Builtin::polynomial) {
            const std::vector<std::string> vars = {"q", "p"};
            Polynomial::parse(s.hamiltonian.poly_text, vars);
        }
    } catch (const std::exception& ex) {
        errors.push_back({0, ex.what()});
    }

    s.conformal_c = r.number_or("conformal.c", 0.0);

    // particle section
    const std::string pkind = r.string_or("particle.kind", "hamiltonian");
    if (pkind == "hamiltonian")
        s.particle_kind = FieldKind::Tag::hamiltonian;
    else if (pkind == "conformal")
        s.particle_kind = FieldKind::Tag::conformal;
    else if (pkind == "contact")
        s.particle_kind = FieldKind::Tag::contact;
    else if (pkind == "strict_contact")
        s.particle_kind = FieldKind::Tag::strict_contact;
    else
        errors.push_back({0, "particle.kind: expected "
                             "hamiltonian|conformal|contact|strict_contact"});
    s.state_q = r.vector_or("state.q", {1.0});
    s.state_p = r.vector_or("state.p", {0.0});
    s.state_z = r.number_or("state.z", 0.0);
    if (s.state_q.size() != s.state_p.size())
        errors.push_back({0, "state.q and state.p must have equal length"});

    const std::string method = r.string_or("integrator.method", "rk4");
    if (method == "rk4")
        s.method = Method::rk4;
    else if (method == "conformal_splitting")
        s.method = Method::conformal_splitting;
    else
        errors.push_back({0, "integrator.method: expected rk4|conformal_splitting"});
    s.dt = r.number_or("integrator.dt", 1e-3);
    s.T = r.number_or("integrator.T", 1.0);
    if (!(s.dt > 0.0))
        errors.push_back({0, "dt must be positive"});
    if (!(s.T > 0.0))
        errors.push_back({0, "T must be positive"});
    if (s.dt > 0.0 && s.T > 0.0 && s.T < s.dt)
        errors.push_back({0, "T must be at least dt"});

    // kinetic section
    const std::string kmodel = r.string_or("kinetic.model", "vlasov");
    if (kmodel == "vlasov")
        s.kinetic_model = KineticModel::Kind::vlasov;
    else if (kmodel == "conformal")
        s.kinetic_model = KineticModel::Kind::conformal;
    else if (kmodel == "contact_vf")
        s.kinetic_model = KineticModel::Kind::contact_vf;
    else if (kmodel == "contact_bracket")
        s.kinetic_model = KineticModel::Kind::contact_bracket;
    else
        errors.push_back({0, "kinetic.model: expected "
                             "vlasov|conformal|contact_vf|contact_bracket"});
    const std::string flux = r.string_or("kinetic.flux_form", "true");
    if (flux == "true")
        s.flux_form = true;
    else if (flux == "false")
        s.flux_form = false;
    else
        errors.push_back({0, "kinetic.flux_form: expected true|false"});

    const bool needs_grid = s.kind == Scenario::RunKind::kinetic_density ||
                            s.kind == Scenario::RunKind::kinetic_momentum ||
                            s.kind == Scenario::RunKind::hierarchy;
    const bool contact_model = s.kinetic_model == KineticModel::Kind::contact_vf ||
                               s.kinetic_model == KineticModel::Kind::contact_bracket;
    const bool contact_grid = ((s.kind == Scenario::RunKind::kinetic_density ||
                                s.kind == Scenario::RunKind::kinetic_momentum) &&
                               contact_model) ||
                              s.kind == Scenario::RunKind::hierarchy;
    const auto qaxis = read_axis(r, "q", Boundary::periodic, needs_grid);
    const auto paxis = read_axis(r, "p", Boundary::truncated, needs_grid);
    const auto zaxis = read_axis(r, "z", Boundary::truncated, needs_grid && contact_grid);
    if (qaxis && paxis) {
        GridSpec spec;
        spec.axes = {*qaxis, *paxis};
        if (zaxis)
            spec.axes.push_back(*zaxis);
        std::size_t total = 1;
        for (const AxisSpec& a : spec.axes)
            total *= std::max<std::size_t>(a.cells, 1);
        if (total > max_grid_cells)
            errors.push_back({0, "grid exceeds the cell cap 2^27 (" + std::to_string(total) +
                                     " > " + std::to_string(max_grid_cells) + ")"});
        else if (errors.empty())
            s.grid = spec;
    }
    if (needs_grid && contact_grid && (qaxis && paxis) && !zaxis)
        errors.push_back({0, "contact kinetic runs require grid.z.{min,max,cells}"});
    if (needs_grid && !contact_grid && zaxis)
        errors.push_back({0, "grid.z axis is only valid for contact kinetic models"});

    s.initial.amplitude = r.number_or("initial.amplitude", 1.0);
    s.initial.center = r.vector_or("initial.center", {0.0, 0.0, 0.0});
    s.initial.sigma = r.vector_or("initial.sigma", {0.5, 0.5, 0.5});
    for (double v : s.initial.sigma)
        if (!(v > 0.0))
            errors.push_back({0, "initial.sigma entries must be positive"});
    s.oneform_amplitude = r.vector_or("initial.oneform_amplitude", {1.0, 1.0, 0.0});

    s.steps = static_cast<std::size_t>(r.u64_or("kinetic.steps", 100));
    s.snapshot_every = static_cast<std::size_t>(r.u64_or("kinetic.snapshot_every", 0));
    if (needs_grid && s.kind != Scenario::RunKind::hierarchy && s.steps == 0)
        errors.push_back({0, "kinetic.steps must be >= 1"});

    s.verify_instances = static_cast<std::size_t>(r.u64_or("verify.instances", 100));
    if (s.kind == Scenario::RunKind::verify && s.verify_instances == 0)
        errors.push_back({0, "verify.instances must be >= 1"});

    s.output_dir = r.string_or("output.dir", "out");
    s.seed = r.u64_or("seed", 0);
    const std::uint64_t threads = r.u64_or("threads", 1);
    if (threads < 1 || threads > 256)
        errors.push_back({0, "threads must be in [1,256]"});
    else
        s.threads = static_cast<int>(threads);

    for (const auto& [key, entry] : r.entries)
        if (!entry.consumed)
            errors.push_back({entry.line, "unknown key '" + key + "'"});

    if (errors.empty())
        result.scenario = std::move(s);
    return result;
}

ParseResult parse_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        ParseResult r;
        r.errors.push_back({0, "cannot open scenario file: " + path});
        return r;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace ckt
