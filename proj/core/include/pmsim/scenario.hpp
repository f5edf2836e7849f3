#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "pmsim/simulation.hpp"

namespace pmsim {

// Raised for malformed scenario files and invalid configuration; the CLI
// maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scenario file drives either a batch of identical-config runs or a
// one-parameter Monte Carlo sweep.
struct Scenario {
    enum class Experiment { single_run, sweep };

    Experiment experiment = Experiment::single_run;
    SimConfig simulation;
    std::optional<SweepSpec> sweep;
    int replications = 1;
    std::string output_dir = "out";
    bool plots = true;
};

// Parses a scenario JSON file. Unknown keys anywhere are rejected.
Scenario load_scenario(const std::filesystem::path& path);

// Same parser on an in-memory document.
Scenario scenario_from_json_text(const std::string& text);

// Fully resolved scenario as pretty-printed JSON, itself a valid scenario
// file: writing it next to the artifacts makes every output reproducible.
// The outcome-walk volatility is recorded both as the per-step stddev and as
// the variance it was derived from.
std::string scenario_echo(const Scenario& scenario);

}  // namespace pmsim
