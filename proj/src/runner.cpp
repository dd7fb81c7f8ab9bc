#include "ckt/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "ckt/brackets.hpp"
#include "ckt/crosschecks.hpp"
#include "ckt/io.hpp"
#include "ckt/lifts.hpp"

namespace ckt {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ManifestBuilder {
    RunManifest& manifest;
    fs::path dir;

    void add(const json& obj) { manifest.lines.push_back(obj.dump()); }

    void check(const std::string& name, double value, double tolerance)
    {
        const bool pass = std::isfinite(value) && value <= tolerance;
        add({{"type", "check"}, {"name", name}, {"value", value}, {"tolerance", tolerance},
             {"pass", pass}});
        if (!pass)
            manifest.all_checks_passed = false;
    }

    void warning(const std::string& message)
    {
        add({{"type", "warning"}, {"message", message}});
    }

    // register an already-written artifact with its content hash
    void file(const fs::path& path)
    {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(path)));
        add({{"type", "file"}, {"path", fs::relative(path, dir).generic_string()},
             {"fnv64", std::string(buf)}});
    }
};

ScalarFunction model_hamiltonian(const Scenario& s, bool contact)
{
    const ScalarFunction base = build_hamiltonian(s.hamiltonian);
    if (!contact)
        return base;
    // strict contact dynamics uses the z-independent extension (c = 0)
    const double c = s.particle_kind == FieldKind::Tag::strict_contact ? 0.0 : s.conformal_c;
    return extend_hamiltonian(base, c).extended;
}

void run_particle(const Scenario& s, ManifestBuilder& mb, int threads)
{
    (void)threads; // single trajectory, one worker
    const FieldKind kind = [&] {
        switch (s.particle_kind) {
        case FieldKind::Tag::conformal: return FieldKind::conformal(s.conformal_c);
        case FieldKind::Tag::contact: return FieldKind::contact();
        case FieldKind::Tag::strict_contact: return FieldKind::strict_contact();
        default: return FieldKind::hamiltonian();
        }
    }();
    const bool contact = kind.arity() == Arity::contact;
    const ScalarFunction H = model_hamiltonian(s, contact);
    const ScalarFunction base = build_hamiltonian(s.hamiltonian);

    Vec s0;
    s0.insert(s0.end(), s.state_q.begin(), s.state_q.end());
    s0.insert(s0.end(), s.state_p.begin(), s.state_p.end());
    if (contact)
        s0.push_back(s.state_z);

    IntegrateOptions opts;
    opts.method = s.method;
    opts.variational = true;
    const Trajectory tr = integrate(kind, H, s0, s.T, s.dt, opts);

    // trajectory.csv
    const std::size_t n = s.state_q.size();
    std::vector<std::string> header = {"t"};
    for (std::size_t i = 0; i < n; ++i)
        header.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        header.push_back("p" + std::to_string(i));
    if (contact)
        header.push_back("z");
    header.insert(header.end(), {"energy", "logvol", "detj"});
    std::vector<std::vector<double>> rows;
    rows.reserve(tr.times.size());
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<double> row;
        row.push_back(tr.times[k]);
        row.insert(row.end(), tr.states[k].begin(), tr.states[k].end());
        row.push_back(tr.diagnostics[k].energy);
        row.push_back(tr.diagnostics[k].logvol);
        row.push_back(tr.diagnostics[k].det_j);
        rows.push_back(std::move(row));
    }
    const fs::path traj_csv = mb.dir / "trajectory.csv";
    write_csv(traj_csv, header, rows);
    mb.file(traj_csv);

    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        // keep manifests bounded for long runs
        if (tr.times.size() > 2048 && k % (tr.times.size() / 1024) != 0 &&
            k + 1 != tr.times.size())
            continue;
        mb.add({{"type", "step"}, {"t", tr.times[k]}, {"energy", tr.diagnostics[k].energy},
                {"logvol", tr.diagnostics[k].logvol}, {"detj", tr.diagnostics[k].det_j}});
    }

    PlotSeries energy{"energy", tr.times, {}};
    for (const StepRecord& rec : tr.diagnostics)
        energy.y.push_back(rec.energy);
    const fs::path energy_svg = mb.dir / "energy.svg";
    write_svg_lineplot(energy_svg, "energy history", {energy});
    mb.file(energy_svg);
    if (n == 1) {
        PlotSeries phase{"(q,p)", {}, {}};
        for (const Vec& st : tr.states) {
            phase.x.push_back(st[0]);
            phase.y.push_back(st[1]);
        }
        const fs::path phase_svg = mb.dir / "phase.svg";
        write_svg_lineplot(phase_svg, "phase portrait", {phase});
        mb.file(phase_svg);
    }

    // invariant checks
    const double nd = static_cast<double>(n);
    const double detT = tr.diagnostics.back().det_j;
    switch (kind.tag) {
    case FieldKind::Tag::hamiltonian: {
        double drift = 0.0;
        const double scale = std::max(1.0, std::fabs(tr.diagnostics.front().energy));
        for (const StepRecord& rec : tr.diagnostics)
            drift = std::max(drift,
                             std::fabs(rec.energy - tr.diagnostics.front().energy) / scale);
        mb.check("energy-conservation", drift, 1e-8);
        mb.check("volume-preservation", std::fabs(detT - 1.0), 1e-6);
        break;
    }
    case FieldKind::Tag::conformal: {
        const double expected = std::exp(nd * kind.c * s.T);
        mb.check("conformal-volume-law", std::fabs(detT - expected) / expected, 1e-4);
        break;
    }
    case FieldKind::Tag::contact: {
        // Hb = H - c z has constant Reeb derivative, so Hb(t) = Hb(0) e^{ct}
        const double c = s.conformal_c;
        const double H0 = tr.diagnostics.front().energy;
        double law = 0.0, preserved = 0.0;
        const double scale = std::max(1e-12, std::fabs(H0));
        const double v0h0 = 1.0 / std::pow(std::fabs(H0), nd + 1.0);
        bool nonvanishing = std::fabs(H0) > 1e-12;
        for (const StepRecord& rec : tr.diagnostics) {
            law = std::max(law,
                           std::fabs(rec.energy - H0 * std::exp(c * rec.t)) / scale);
            nonvanishing = nonvanishing && std::fabs(rec.energy) > 1e-12;
            if (nonvanishing) {
                const double vh = rec.det_j / std::pow(std::fabs(rec.energy), nd + 1.0);
                preserved = std::max(preserved, std::fabs(vh - v0h0) / v0h0);
            }
        }
        mb.check("contact-energy-law", law, 1e-5);
        if (nonvanishing)
            mb.check("contact-preserved-quantity", preserved, 1e-4);
        break;
    }
    case FieldKind::Tag::strict_contact: {
        double drift = 0.0;
        const double scale = std::max(1.0, std::fabs(tr.diagnostics.front().energy));
        for (const StepRecord& rec : tr.diagnostics)
            drift = std::max(drift,
                             std::fabs(rec.energy - tr.diagnostics.front().energy) / scale);
        mb.check("strict-contact-energy", drift, 1e-8);
        mb.check("volume-preservation", std::fabs(detT - 1.0), 1e-6);
        break;
    }
    }
}

void run_kinetic_density(const Scenario& s, ManifestBuilder& mb, int threads)
{
    const KineticModel model = [&] {
        switch (s.kinetic_model) {
        case KineticModel::Kind::conformal: return KineticModel::conformal(s.conformal_c);
        case KineticModel::Kind::contact_vf: return KineticModel::contact_vf();
        case KineticModel::Kind::contact_bracket: return KineticModel::contact_bracket();
        default: return KineticModel::vlasov();
        }
    }();
    const ScalarFunction base = build_hamiltonian(s.hamiltonian);
    const ScalarFunction H =
        model.contact() ? extend_hamiltonian(base, s.conformal_c).extended : base;
    const GridSpec& spec = *s.grid;

    DensityGrid f(spec);
    f.values = sample_on_grid(spec, [&](std::span<const double> x) {
        return s.initial.value(x);
    });
    if (model.kind == KineticModel::Kind::conformal)
        f.cstar = 0.0;

    DensityStepOptions opts;
    opts.flux_form = s.flux_form;
    opts.threads = threads;
    DensityStepper stepper(model, spec, H, opts);

    const double cfl = stepper.cfl_limit();
    const double dt = s.dt;
    mb.add({{"type", "info"}, {"cfl_limit", cfl}, {"dt", dt}});

    auto snapshot = [&](std::size_t step) {
        const std::string tag = "f_" + std::to_string(step);
        const fs::path csv = mb.dir / (tag + ".csv");
        write_density_csv(csv, f);
        mb.file(csv);
        if (!spec.is_contact()) {
            const fs::path pgm = mb.dir / (tag + ".pgm");
            write_pgm_heatmap(pgm, f);
            mb.file(pgm);
        }
    };

    const double mass0 = integrate_cells(spec, f.values);
    auto record_step = [&](std::size_t step) {
        double lo = f.values[0], hi = f.values[0];
        for (double v : f.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        json rec = {{"type", "step"}, {"step", step},
                    {"t", static_cast<double>(step) * dt},
                    {"mass", integrate_cells(spec, f.values)}, {"fmin", lo}, {"fmax", hi}};
        if (f.cstar)
            rec["cstar"] = *f.cstar;
        mb.add(rec);
    };

    snapshot(0);
    record_step(0);
    for (std::size_t k = 1; k <= s.steps; ++k) {
        stepper.step(f, dt);
        record_step(k);
        if (s.snapshot_every && k % s.snapshot_every == 0 && k != s.steps)
            snapshot(k);
    }
    snapshot(s.steps);
    for (const std::string& w : stepper.warnings())
        mb.warning(w);

    const double massT = integrate_cells(spec, f.values);
    mb.add({{"type", "info"}, {"mass_initial", mass0}, {"mass_final", massT}});
    if (model.kind == KineticModel::Kind::contact_vf && s.flux_form)
        mb.check("mass-conservation",
                 std::fabs(massT - mass0) / std::max(1e-300, std::fabs(mass0)), 1e-10);

    PlotSeries mass_series{"mass", {}, {}};
    for (const std::string& line : mb.manifest.lines) {
        const json rec = json::parse(line);
        if (rec.value("type", "") == "step" && rec.contains("mass")) {
            mass_series.x.push_back(rec["t"].get<double>());
            mass_series.y.push_back(rec["mass"].get<double>());
        }
    }
    const fs::path mass_svg = mb.dir / "mass.svg";
    write_svg_lineplot(mass_svg, "total mass", {mass_series});
    mb.file(mass_svg);
}

void run_kinetic_momentum(const Scenario& s, ManifestBuilder& mb, int threads)
{
    const bool contact = s.kinetic_model == KineticModel::Kind::contact_vf ||
                         s.kinetic_model == KineticModel::Kind::contact_bracket;
    const MomentumModel model = [&] {
        if (contact)
            return MomentumModel::contact();
        if (s.kinetic_model == KineticModel::Kind::conformal)
            return MomentumModel::conformal(s.conformal_c);
        return MomentumModel::hamiltonian();
    }();
    const ScalarFunction base = build_hamiltonian(s.hamiltonian);
    const ScalarFunction H =
        contact ? extend_hamiltonian(base, s.conformal_c).extended : base;
    const GridSpec& spec = *s.grid;
    if (spec.is_contact() != contact)
        throw std::runtime_error("momentum model arity does not match the grid");

    OneFormGrid Pi(spec);
    for (std::size_t a = 0; a < spec.rank(); ++a) {
        const double amp =
            a < s.oneform_amplitude.size() ? s.oneform_amplitude[a] : 0.0;
        Pi.comp[a] = sample_on_grid(spec, [&](std::span<const double> x) {
            return amp * s.initial.value(x);
        });
    }

    MomentumStepper stepper(model, spec, H, threads);
    mb.add({{"type", "info"}, {"cfl_limit", stepper.cfl_limit()}, {"dt", s.dt}});

    auto snapshot = [&](std::size_t step) {
        const fs::path csv = mb.dir / ("pi_" + std::to_string(step) + ".csv");
        write_oneform_csv(csv, Pi);
        mb.file(csv);
    };
    auto record_step = [&](std::size_t step) {
        json rec = {{"type", "step"}, {"step", step},
                    {"t", static_cast<double>(step) * s.dt}};
        for (std::size_t a = 0; a < spec.rank(); ++a)
            rec["l2_comp" + std::to_string(a)] = l2_norm(spec, Pi.comp[a]);
        if (!spec.is_contact()) {
            const DensityGrid f = density_from_oneform(Pi, threads);
            rec["mapped_mass"] = integrate_cells(spec, f.values);
            rec["cstar"] = cstar_from_oneform(Pi);
        }
        mb.add(rec);
    };

    snapshot(0);
    record_step(0);
    for (std::size_t k = 1; k <= s.steps; ++k) {
        stepper.step(Pi, s.dt);
        record_step(k);
        if (s.snapshot_every && k % s.snapshot_every == 0 && k != s.steps)
            snapshot(k);
    }
    snapshot(s.steps);
    for (const std::string& w : stepper.warnings())
        mb.warning(w);

    const DensityGrid f = contact ? contact_density_from_oneform(Pi, false, threads)
                                  : density_from_oneform(Pi, threads);
    const fs::path fcsv = mb.dir / "f_mapped.csv";
    write_density_csv(fcsv, f);
    mb.file(fcsv);
    if (!spec.is_contact()) {
        const fs::path pgm = mb.dir / "f_mapped.pgm";
        write_pgm_heatmap(pgm, f);
        mb.file(pgm);
        // mapped density is a symplectic divergence, so its total mass stays 0
        mb.check("mapped-mass-zero",
                 std::fabs(integrate_cells(spec, f.values)) /
                     std::max(1e-12, l2_norm(spec, f.values)),
                 1e-6);
    }
}

void run_verify(const Scenario& s, ManifestBuilder& mb, std::uint64_t seed)
{
    std::vector<VerificationRecord> records = run_algebra_suite(seed, s.verify_instances);

    // bracket identities: Jacobi for both brackets, the contact Leibniz defect
    {
        std::mt19937_64 rng(seed * 6364136223846793005ULL + 11);
        std::uniform_real_distribution<double> box(-0.8, 0.8);
        double jac_s = 0.0, jac_c = 0.0, leib = 0.0;
        for (std::size_t k = 0; k < s.verify_instances; ++k) {
            const ScalarFunction F2 =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 4, rng), "F");
            const ScalarFunction G2 =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 4, rng), "G");
            const ScalarFunction H2 =
                to_scalar_function(Arity::symplectic, 1, random_polynomial(2, 4, rng), "H");
            const ScalarFunction F3 =
                to_scalar_function(Arity::contact, 1, random_polynomial(3, 4, rng), "F");
            const ScalarFunction G3 =
                to_scalar_function(Arity::contact, 1, random_polynomial(3, 4, rng), "G");
            const ScalarFunction H3 =
                to_scalar_function(Arity::contact, 1, random_polynomial(3, 4, rng), "H");
            std::vector<Vec> s2, s3;
            for (int i = 0; i < 4; ++i) {
                s2.push_back({box(rng), box(rng)});
                s3.push_back({box(rng), box(rng), box(rng)});
            }
            jac_s = std::max(jac_s, jacobi_residual(BracketKind::symplectic, F2, G2, H2, s2));
            jac_c = std::max(jac_c, jacobi_residual(BracketKind::contact, F3, G3, H3, s3));
            for (const Vec& x : s3)
                leib = std::max(leib, std::fabs(leibniz_defect(F3, G3, H3, x)));
        }
        records.push_back({"jacobi-symplectic", seed, jac_s, 1e-6, jac_s <= 1e-6});
        records.push_back({"jacobi-contact", seed, jac_c, 1e-6, jac_c <= 1e-6});
        records.push_back({"leibniz-defect", seed, leib, 1e-8, leib <= 1e-8});
    }

    JsonlWriter report(mb.dir / "verify.jsonl");
    for (const VerificationRecord& rec : records) {
        const json obj = {{"kind", rec.kind}, {"seed", rec.seed}, {"residual", rec.residual},
                          {"tolerance", rec.tolerance}, {"pass", rec.pass}};
        report.write_line(obj.dump());
        mb.check("algebra-" + rec.kind, rec.residual, rec.tolerance);
    }
    mb.file(mb.dir / "verify.jsonl");
}

void run_hierarchy(const Scenario& s, ManifestBuilder& mb, int threads)
{
    const ScalarFunction H = build_hamiltonian(s.hamiltonian);
    const double c = s.conformal_c;

    // particle square: contact flow with Hb = H - c z against the conformal flow
    {
        const ExtendedHamiltonian ext = extend_hamiltonian(H, c);
        Vec s0;
        s0.insert(s0.end(), s.state_q.begin(), s.state_q.end());
        s0.insert(s0.end(), s.state_p.begin(), s.state_p.end());
        s0.push_back(s.state_z);
        const Trajectory contact_tr =
            integrate(FieldKind::contact(), ext.extended, s0, s.T, s.dt);
        const Trajectory projected = project_trajectory(contact_tr, H);
        const Vec base0(s0.begin(), s0.end() - 1);
        const Trajectory conformal_tr =
            integrate(FieldKind::conformal(c), H, base0, s.T, s.dt);

        double worst = 0.0;
        for (std::size_t k = 0; k < projected.states.size(); ++k)
            for (std::size_t i = 0; i < projected.states[k].size(); ++i)
                worst = std::max(worst, std::fabs(projected.states[k][i] -
                                                  conformal_tr.states[k][i]));
        mb.check("particle-projection", worst, 1e-10);

        // z history obeys zdot = p dH/dp - H + c z (4th-order differencing
        // so the check measures the flow, not the difference quotient)
        double zres = 0.0;
        const std::size_t n = s.state_q.size();
        for (std::size_t k = 2; k + 2 < contact_tr.states.size(); ++k) {
            const Vec& st = contact_tr.states[k];
            auto z_at = [&](std::size_t j) { return contact_tr.states[j][2 * n]; };
            const double zdot = (-z_at(k + 2) + 8.0 * z_at(k + 1) - 8.0 * z_at(k - 1) +
                                 z_at(k - 2)) /
                                (12.0 * s.dt);
            Vec base(st.begin(), st.end() - 1);
            const Vec g = H.gradient(base);
            double pdot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                pdot += st[n + i] * g[n + i];
            zres = std::max(zres, std::fabs(zdot - (pdot - H.value(base) + c * st[2 * n])));
        }
        mb.check("z-equation-residual", zres, 1e-6);
    }

    // kinetic squares on the scenario grid and its refinement
    const GridSpec& contact_spec = *s.grid;
    const std::size_t steps0 = std::max<std::size_t>(s.steps, 4);
    const ConvergenceStudy density_study =
        contact_density_projection_study(H, c, contact_spec, 2, steps0, threads);
    const ConvergenceStudy oneform_study =
        contact_oneform_projection_study(H, c, contact_spec, 2, steps0, threads);
    const double square0 = commuting_square_residual(H, c, contact_spec, steps0, threads);
    const double square1 =
        commuting_square_residual(H, c, refine(contact_spec, 2), 2 * steps0, threads);

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < density_study.residuals.size(); ++k)
        rows.push_back({static_cast<double>(density_study.cells[k]),
                        density_study.residuals[k], oneform_study.residuals[k],
                        k == 0 ? square0 : square1});
    const fs::path table = mb.dir / "hierarchy_residuals.csv";
    write_csv(table, {"cells", "density_projection_l2", "oneform_projection_l2",
                      "commuting_square_l2"},
              rows);
    mb.file(table);

    mb.add({{"type", "info"}, {"density_order", density_study.orders.front()},
            {"oneform_order", oneform_study.orders.front()},
            {"square_order", std::log2(square0 / square1)}});
    mb.check("density-projection-order", 1.8 - density_study.orders.front(), 0.0);
    mb.check("oneform-projection-order", 1.8 - oneform_study.orders.front(), 0.0);
    mb.check("commuting-square-order", 1.8 - std::log2(square0 / square1), 0.0);
}

} // namespace

RunManifest run_scenario(const Scenario& scenario, const RunOptions& opts)
{
    Scenario s = scenario;
    if (opts.out_dir)
        s.output_dir = *opts.out_dir;
    if (opts.seed)
        s.seed = *opts.seed;
    if (opts.threads)
        s.threads = *opts.threads;

    RunManifest manifest;
    const fs::path dir(s.output_dir);
    fs::create_directories(dir);
    manifest.manifest_path = dir / "manifest.jsonl";
    ManifestBuilder mb{manifest, dir};

    mb.add({{"type", "scenario"}, {"kind", Scenario::kind_name(s.kind)}, {"seed", s.seed},
            {"threads", s.threads}, {"text", s.raw_text}});

    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (s.kind) {
        case Scenario::RunKind::particle: run_particle(s, mb, s.threads); break;
        case Scenario::RunKind::kinetic_density: run_kinetic_density(s, mb, s.threads); break;
        case Scenario::RunKind::kinetic_momentum: run_kinetic_momentum(s, mb, s.threads); break;
        case Scenario::RunKind::verify: run_verify(s, mb, s.seed); break;
        case Scenario::RunKind::hierarchy: run_hierarchy(s, mb, s.threads); break;
        }
    } catch (const std::exception& ex) {
        manifest.aborted = true;
        manifest.abort_message = ex.what();
        mb.add({{"type", "abort"}, {"message", manifest.abort_message}});
    }
    const auto t1 = std::chrono::steady_clock::now();

    mb.add({{"type", "summary"}, {"pass", manifest.all_checks_passed && !manifest.aborted},
            {"aborted", manifest.aborted}});
    manifest.timing_lines.push_back(
        json{{"type", "timing"},
             {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}}
            .dump());

    JsonlWriter out(manifest.manifest_path);
    for (const std::string& line : manifest.lines)
        out.write_line(line);
    for (const std::string& line : manifest.timing_lines)
        out.write_line(line);
    return manifest;
}

} // namespace ckt
