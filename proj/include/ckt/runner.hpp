// Scenario-driven batch execution: dispatch a parsed Scenario to the
// solvers, persist CSV/JSON-lines/PGM/SVG artifacts, and collect the
// pass/fail summary. Exit codes: 0 all checks pass, 2 numerical check
// failure, 3 schema error (handled by the CLI), 4 runtime abort.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ckt/scenario.hpp"

namespace ckt {

struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

struct RunManifest {
    std::vector<std::string> lines;        // deterministic JSON-lines
    std::vector<std::string> timing_lines; // wall-clock, excluded from identity
    std::filesystem::path manifest_path;
    bool all_checks_passed = true;
    bool aborted = false;
    std::string abort_message;

    int exit_code() const { return aborted ? 4 : (all_checks_passed ? 0 : 2); }
};

RunManifest run_scenario(const Scenario& scenario, const RunOptions& opts = {});

} // namespace ckt
