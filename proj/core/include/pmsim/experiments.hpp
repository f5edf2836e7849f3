#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pmsim/scenario.hpp"
#include "pmsim/simulation.hpp"

namespace pmsim {

struct ExperimentOptions {
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 42;
    int replications = 0;  // 0 = suite default
    int threads = 1;
    bool plots = true;
    int region_resolution = 201;
    std::vector<double> alphas = {0.05, 0.1, 0.5};
};

// ---- canonical configurations --------------------------------------------

// 100 agents, 100 steps, initial price 0.5, outcome-walk variance 0.05
// (stored as the per-step stddev), default trait distributions.
SimConfig default_market_config(std::uint64_t seed);

// Same, but every agent has expertise 0.95 (low-noise signals).
SimConfig expert_market_config(std::uint64_t seed);

// Shock-recovery setting: frozen outcome (sigma_eta = 0), expertise 0.9,
// homogeneous herding level, and a whale holding 30% of capital at
// valuation 0.6.
SimConfig whale_shock_config(double herding_level, std::uint64_t seed);

// ---- experiment suites ----------------------------------------------------

struct AttributeSweepSuite {
    std::vector<SweepResult> sweeps;
    int replications = 0;
};

// One sweep per bettor attribute (stubbornness, expertise, bias,
// risk aversion, budget spread), 30 replications per grid point by default.
AttributeSweepSuite run_attribute_sweeps(const ExperimentOptions& options);

struct SteadyStateCell {
    double delta = 0.0;         // whale valuation error
    double theory_error = 0.0;  // rho * delta
    MetricSummary error;        // late-window mean price error across runs
};

struct WhaleSuite {
    SweepResult rho_sweep;  // capital-fraction grid under the expert market
    std::vector<SteadyStateCell> steady_state;  // rho = 0.5, frozen outcome
    int replications = 0;
};

WhaleSuite run_whale_suite(const ExperimentOptions& options);

struct HerdingRecoverySuite {
    std::vector<double> herding_levels;
    std::vector<int> snapshot_times;
    // mean absolute price error per step, averaged over runs: [h][t]
    std::vector<std::vector<double>> mean_abs_error;
    int replications = 0;
};

HerdingRecoverySuite run_herding_recovery(const ExperimentOptions& options);

// ---- artifact emission ----------------------------------------------------

// Executes a scenario (batch of runs or sweep) and writes trajectory CSVs,
// metric tables, a misclassification grid, a resolved-config echo, schema
// notes, and plots into the scenario's output directory.
void run_scenario_command(const Scenario& scenario, const ExperimentOptions& options);

void write_attribute_artifacts(const AttributeSweepSuite& suite, const ExperimentOptions& options);
void write_whale_artifacts(const WhaleSuite& suite, const ExperimentOptions& options);
void write_herding_artifacts(const HerdingRecoverySuite& suite, const ExperimentOptions& options);
void write_region_artifacts(const ExperimentOptions& options);

}  // namespace pmsim
