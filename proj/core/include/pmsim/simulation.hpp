#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmsim/agents.hpp"
#include "pmsim/election.hpp"
#include "pmsim/market.hpp"
#include "pmsim/rng.hpp"

namespace pmsim {

// Sampling spec for one agent attribute: a constant, Uniform(a, b), or
// Normal(a, b) draw. Attribute values are clipped into their valid range
// after sampling.
struct TraitSpec {
    enum class Kind { constant, uniform, normal };

    Kind kind = Kind::constant;
    double a = 0.0;  // value / lower bound / mean
    double b = 0.0;  // unused / upper bound / stddev

    static TraitSpec constant(double value) { return {Kind::constant, value, 0.0}; }
    static TraitSpec uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static TraitSpec normal(double mean, double stddev) { return {Kind::normal, mean, stddev}; }

    double sample(RandomStream& rng) const;
    double mean() const;
};

struct TraitConfig {
    TraitSpec budget = TraitSpec::uniform(100.0, 1000.0);
    TraitSpec valuation = TraitSpec::normal(0.5, 0.05);
    TraitSpec stubbornness = TraitSpec::normal(0.3, 0.05);
    TraitSpec expertise = TraitSpec::normal(0.9, 0.04);
    TraitSpec bias = TraitSpec::constant(0.0);
    TraitSpec risk_aversion = TraitSpec::uniform(0.0, 1.0);
    TraitSpec herding = TraitSpec::constant(0.0);
};

// Terminal contract accounting: mark holdings at the terminal outcome
// probability, or resolve the event as a Bernoulli draw.
enum class ContractResolution { expected_value, bernoulli };

struct SimConfig {
    int n_agents = 100;
    int horizon = 100;
    double initial_price = 0.5;
    double sigma_eta = 0.0;  // per-step stddev of the outcome walk
    double lambda = 0.05;
    TraitConfig traits;
    std::optional<WhaleSpec> whale;
    std::optional<double> max_order_volume;
    ContractResolution resolution = ContractResolution::expected_value;
    std::uint64_t master_seed = 0;
};

// Throws std::invalid_argument naming the first invalid field.
void validate(const SimConfig& config);

// Returns a copy of the config with a whale added: fixed valuation w, budget
// fraction rho of total market capital. Non-whale budgets are rescaled by
// (1 - rho) at population build time so total capital is unchanged.
SimConfig inject_whale(SimConfig config, double rho, double w);

// Draws the agent population in fixed agent order; the whale, when
// configured, is appended last and consumes no random draws.
Population build_population(const SimConfig& config, RandomStream& rng);

// Full record of one run. Series are indexed by step (length horizon):
// price[t] is the price posted after step t's trading, eta[t] the outcome
// value in force while step t traded.
struct Trajectory {
    std::vector<double> price;
    std::vector<double> eta;
    std::vector<double> net_demand;
    std::vector<double> gross_volume;
    std::vector<double> mean_valuation;    // non-whale mean, post-update
    std::vector<double> total_contracts;   // open interest: sum of positive holdings

    std::vector<AgentTraits> traits;
    std::vector<double> initial_budgets;
    std::vector<AgentState> final_states;
    double terminal_eta = 0.5;      // outcome value after the final step
    double terminal_mark = 0.5;     // contract mark: terminal_eta, or the Bernoulli draw
    double initial_capital = 0.0;   // total initial budget across all agents
    double initial_price = 0.5;

    // Per-agent series [step][agent]; populated only when has_snapshots.
    bool has_snapshots = false;
    std::vector<std::vector<double>> budget_snapshots;
    std::vector<std::vector<double>> holdings_snapshots;
    std::vector<std::vector<double>> valuation_snapshots;
};

// Per-agent snapshots are recorded for populations up to this size.
inline constexpr int kSnapshotAgentLimit = 1000;

// Executes the per-step loop: signal draw -> valuation update -> order
// collection -> matching -> settlement -> price update -> outcome step.
// Bit-reproducible given (config, master_seed).
Trajectory run_simulation(const SimConfig& config);

// ---- Monte Carlo sweeps -------------------------------------------------

enum class SweepParameter {
    stubbornness_mean,
    expertise_mean,
    bias_mean,
    risk_aversion_mean,
    budget_std,
    herding_level,
    whale_rho,
    whale_bias,
    lambda_scale,
};

std::string to_string(SweepParameter parameter);
// Throws std::invalid_argument("unknown sweep parameter ...") on bad names.
SweepParameter sweep_parameter_from_string(const std::string& name);

// Applies one grid value to a base config (e.g. shifts a trait mean while
// keeping the default spread).
SimConfig apply_sweep_value(SimConfig base, SweepParameter parameter, double value);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::stubbornness_mean;
    std::vector<double> values;
};

// Scalar metrics extracted from one run.
struct RunMetrics {
    double mse = 0.0;
    int dominant_lag = 0;
    double terminal_abs_error = 0.0;
    double late_window_mean_error = 0.0;    // signed mean of (m - eta), last 25 steps
    double median_nonwhale_return = 0.0;    // normalized by total initial capital
    double whale_return = 0.0;              // normalized; 0 when no whale
};

RunMetrics compute_run_metrics(const Trajectory& trajectory, int max_lag = 20);

struct MetricSummary {
    double mean = 0.0;
    double ci_lo = 0.0;  // empirical 2.5% quantile across runs
    double ci_hi = 0.0;  // empirical 97.5% quantile across runs
};

MetricSummary summarize_metric(const std::vector<double>& values);

struct SweepCell {
    double value = 0.0;
    std::vector<RunMetrics> runs;
    MetricSummary mse;
    MetricSummary dominant_lag;
    MetricSummary median_nonwhale_return;
    MetricSummary late_window_mean_error;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::stubbornness_mean;
    int replications = 0;
    std::vector<SweepCell> cells;
};

// Runs `replications` independent runs per grid value. Run seeds derive from
// (base.master_seed, global run index), so results do not depend on the
// thread count.
SweepResult run_sweep(const SimConfig& base, const SweepSpec& spec, int replications,
                      int threads = 1);

// Executes fn(0..count-1) on `threads` workers; any exception is rethrown.
void parallel_for_index(int count, int threads, const std::function<void(int)>& fn);

}  // namespace pmsim
