// Batch CLI: each subcommand loads a scenario file, checks that its
// run.kind matches, executes it, and exits 0 (all checks pass),
// 2 (numerical check failure), 3 (schema error), or 4 (runtime abort).
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ckt/runner.hpp"

namespace {

struct SubArgs {
    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

int execute(const SubArgs& args, ckt::Scenario::RunKind expected)
{
    const ckt::ParseResult parsed = ckt::parse_scenario_file(args.scenario_path);
    if (!parsed.ok()) {
        for (const ckt::SchemaError& err : parsed.errors)
            std::fprintf(stderr, "schema error (line %zu): %s\n", err.line, err.message.c_str());
        return 3;
    }
    if (parsed.scenario->kind != expected) {
        std::fprintf(stderr, "schema error: scenario run.kind is '%s' but this subcommand runs '%s'\n",
                     ckt::Scenario::kind_name(parsed.scenario->kind).c_str(),
                     ckt::Scenario::kind_name(expected).c_str());
        return 3;
    }
    ckt::RunOptions opts;
    if (!args.out_dir.empty())
        opts.out_dir = args.out_dir;
    opts.seed = args.seed;
    opts.threads = args.threads;
    const ckt::RunManifest manifest = ckt::run_scenario(*parsed.scenario, opts);
    if (manifest.aborted)
        std::fprintf(stderr, "run aborted: %s\n", manifest.abort_message.c_str());
    std::printf("manifest: %s\n", manifest.manifest_path.string().c_str());
    return manifest.exit_code();
}

void add_subcommand(CLI::App& app, const std::string& name, const std::string& desc,
                    ckt::Scenario::RunKind kind, int& rc)
{
    auto args = std::make_shared<SubArgs>();
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--scenario", args->scenario_path, "scenario file")->required();
    sub->add_option("--out", args->out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", [args](const CLI::results_t& res) {
        args->seed = std::stoull(res[0]);
        return true;
    }, "seed override (u64)");
    sub->add_option("--threads", [args](const CLI::results_t& res) {
        args->threads = std::stoi(res[0]);
        return true;
    }, "worker count override");
    sub->callback([args, kind, &rc] { rc = execute(*args, kind); });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conformal/contact kinetic theory toolkit"};
    app.require_subcommand(1);
    int rc = 0;
    add_subcommand(app, "simulate-particle", "integrate a particle trajectory",
                   ckt::Scenario::RunKind::particle, rc);
    add_subcommand(app, "simulate-kinetic", "step a density-form kinetic equation",
                   ckt::Scenario::RunKind::kinetic_density, rc);
    add_subcommand(app, "simulate-momentum", "step a momentum-form kinetic equation",
                   ckt::Scenario::RunKind::kinetic_momentum, rc);
    add_subcommand(app, "verify-algebra", "run the Lie-algebra verification suite",
                   ckt::Scenario::RunKind::verify, rc);
    add_subcommand(app, "hierarchy-check", "run the contact-to-conformal projection checks",
                   ckt::Scenario::RunKind::hierarchy, rc);
    CLI11_PARSE(app, argc, argv);
    return rc;
}
