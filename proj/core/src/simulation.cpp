#include "pmsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace pmsim {

double TraitSpec::sample(RandomStream& rng) const {
    switch (kind) {
        case Kind::constant:
            return a;
        case Kind::uniform:
            return rng.uniform(a, b);
        case Kind::normal:
            return rng.normal(a, b);
    }
    return a;
}

double TraitSpec::mean() const {
    switch (kind) {
        case Kind::constant:
            return a;
        case Kind::uniform:
            return 0.5 * (a + b);
        case Kind::normal:
            return a;
    }
    return a;
}

namespace {

void validate_spec(const TraitSpec& spec, const std::string& field) {
    if (spec.kind == TraitSpec::Kind::uniform && !(spec.a <= spec.b))
        throw std::invalid_argument("SimConfig.traits." + field + ": uniform bounds out of order");
    if (spec.kind == TraitSpec::Kind::normal && !(spec.b >= 0.0))
        throw std::invalid_argument("SimConfig.traits." + field + ": normal stddev must be >= 0");
}

}  // namespace

void validate(const SimConfig& config) {
    if (config.n_agents < 1)
        throw std::invalid_argument("SimConfig.n_agents must be >= 1");
    if (config.horizon < 1)
        throw std::invalid_argument("SimConfig.horizon must be >= 1");
    if (!(config.initial_price > 0.0 && config.initial_price < 1.0))
        throw std::invalid_argument("SimConfig.initial_price must lie in (0, 1)");
    if (!(config.sigma_eta >= 0.0))
        throw std::invalid_argument("SimConfig.sigma_eta must be >= 0");
    if (!(config.lambda > 0.0))
        throw std::invalid_argument("SimConfig.lambda must be > 0");
    if (config.max_order_volume && !(*config.max_order_volume > 0.0))
        throw std::invalid_argument("SimConfig.max_order_volume must be > 0 when set");
    validate_spec(config.traits.budget, "budget");
    validate_spec(config.traits.valuation, "valuation");
    validate_spec(config.traits.stubbornness, "stubbornness");
    validate_spec(config.traits.expertise, "expertise");
    validate_spec(config.traits.bias, "bias");
    validate_spec(config.traits.risk_aversion, "risk_aversion");
    validate_spec(config.traits.herding, "herding");
    if (config.whale) {
        if (!(config.whale->budget_fraction >= 0.0 && config.whale->budget_fraction < 1.0))
            throw std::invalid_argument("SimConfig.whale.budget_fraction must lie in [0, 1)");
        if (!(config.whale->fixed_valuation >= 0.0 && config.whale->fixed_valuation <= 1.0))
            throw std::invalid_argument("SimConfig.whale.fixed_valuation must lie in [0, 1]");
        if (!(config.whale->risk_aversion >= 0.0))
            throw std::invalid_argument("SimConfig.whale.risk_aversion must be >= 0");
    }
}

SimConfig inject_whale(SimConfig config, double rho, double w) {
    WhaleSpec spec;
    spec.budget_fraction = rho;
    spec.fixed_valuation = w;
    if (config.whale) spec.risk_aversion = config.whale->risk_aversion;
    config.whale = spec;
    validate(config);
    return config;
}

Population build_population(const SimConfig& config, RandomStream& rng) {
    Population pop;
    const std::size_t n = static_cast<std::size_t>(config.n_agents);
    pop.traits.reserve(n + 1);
    pop.states.reserve(n + 1);

    for (std::size_t i = 0; i < n; ++i) {
        AgentTraits traits;
        AgentState state;
        state.budget = std::max(0.0, config.traits.budget.sample(rng));
        state.holdings = 0.0;
        state.valuation = std::clamp(config.traits.valuation.sample(rng), 0.0, 1.0);
        traits.stubbornness = std::clamp(config.traits.stubbornness.sample(rng), 0.0, 1.0);
        traits.expertise = std::clamp(config.traits.expertise.sample(rng), 0.0, 1.0);
        // Bias may point either direction; it is an offset, not a probability.
        traits.bias = std::clamp(config.traits.bias.sample(rng), -1.0, 1.0);
        traits.risk_aversion = std::max(0.0, config.traits.risk_aversion.sample(rng));
        traits.herding = std::clamp(config.traits.herding.sample(rng), 0.0, 1.0);
        pop.traits.push_back(traits);
        pop.states.push_back(state);
    }

    if (config.whale) {
        const double rho = config.whale->budget_fraction;
        double total = 0.0;
        for (const AgentState& s : pop.states) total += s.budget;
        for (AgentState& s : pop.states) s.budget *= (1.0 - rho);

        AgentTraits traits;
        traits.risk_aversion = config.whale->risk_aversion;
        traits.is_whale = true;
        AgentState state;
        state.budget = rho * total;
        state.holdings = 0.0;
        state.valuation = config.whale->fixed_valuation;
        pop.traits.push_back(traits);
        pop.states.push_back(state);
    }
    return pop;
}

Trajectory run_simulation(const SimConfig& config) {
    validate(config);
    RandomStream rng(config.master_seed);
    Population pop = build_population(config, rng);
    const int n = pop.size();

    Trajectory out;
    out.traits = pop.traits;
    out.initial_budgets.reserve(static_cast<std::size_t>(n));
    for (const AgentState& s : pop.states) out.initial_budgets.push_back(s.budget);
    out.initial_capital = std::accumulate(out.initial_budgets.begin(), out.initial_budgets.end(), 0.0);
    out.initial_price = config.initial_price;
    out.has_snapshots = n <= kSnapshotAgentLimit;

    const std::size_t horizon = static_cast<std::size_t>(config.horizon);
    out.price.reserve(horizon);
    out.eta.reserve(horizon);
    out.net_demand.reserve(horizon);
    out.gross_volume.reserve(horizon);
    out.mean_valuation.reserve(horizon);
    out.total_contracts.reserve(horizon);

    MarketState market{config.initial_price, config.lambda};
    double eta = config.initial_price;  // the outcome walk starts at the initial price

    int n_nonwhale = 0;
    for (const AgentTraits& t : pop.traits)
        if (!t.is_whale) ++n_nonwhale;

    for (int t = 0; t < config.horizon; ++t) {
        // Fresh signals inform this step's orders; the herding term sees the
        // currently posted price (from the previous step).
        for (int i = 0; i < n; ++i) {
            const AgentTraits& traits = pop.traits[static_cast<std::size_t>(i)];
            if (traits.is_whale) continue;
            AgentState& state = pop.states[static_cast<std::size_t>(i)];
            const double signal = draw_signal(eta, traits.expertise, rng);
            state.valuation = update_valuation(state, traits, signal, market.price);
        }

        const OrderBook book = collect_orders(pop, market, config.max_order_volume);
        const std::vector<Fill> fills = match_orders(book, market.price, rng);
        settle_fills(pop, fills, market.price);
        market = update_price(market, book.net_demand, book.gross_volume);

        double valuation_sum = 0.0;
        double open_interest = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!pop.traits[static_cast<std::size_t>(i)].is_whale)
                valuation_sum += pop.states[static_cast<std::size_t>(i)].valuation;
            open_interest += std::max(0.0, pop.states[static_cast<std::size_t>(i)].holdings);
        }

        out.price.push_back(market.price);
        out.eta.push_back(eta);
        out.net_demand.push_back(book.net_demand);
        out.gross_volume.push_back(book.gross_volume);
        out.mean_valuation.push_back(n_nonwhale > 0 ? valuation_sum / n_nonwhale : 0.0);
        out.total_contracts.push_back(open_interest);

        if (out.has_snapshots) {
            std::vector<double> budgets(static_cast<std::size_t>(n));
            std::vector<double> holdings(static_cast<std::size_t>(n));
            std::vector<double> valuations(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                budgets[static_cast<std::size_t>(i)] = pop.states[static_cast<std::size_t>(i)].budget;
                holdings[static_cast<std::size_t>(i)] = pop.states[static_cast<std::size_t>(i)].holdings;
                valuations[static_cast<std::size_t>(i)] =
                    pop.states[static_cast<std::size_t>(i)].valuation;
            }
            out.budget_snapshots.push_back(std::move(budgets));
            out.holdings_snapshots.push_back(std::move(holdings));
            out.valuation_snapshots.push_back(std::move(valuations));
        }

        eta = step_election(eta, config.sigma_eta, rng);
    }

    out.final_states = pop.states;
    out.terminal_eta = eta;
    out.terminal_mark = config.resolution == ContractResolution::bernoulli
                            ? (rng.uniform01() < eta ? 1.0 : 0.0)
                            : eta;
    return out;
}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::stubbornness_mean: return "stubbornness_mean";
        case SweepParameter::expertise_mean: return "expertise_mean";
        case SweepParameter::bias_mean: return "bias_mean";
        case SweepParameter::risk_aversion_mean: return "risk_aversion_mean";
        case SweepParameter::budget_std: return "budget_std";
        case SweepParameter::herding_level: return "herding_level";
        case SweepParameter::whale_rho: return "whale_rho";
        case SweepParameter::whale_bias: return "whale_bias";
        case SweepParameter::lambda_scale: return "lambda";
    }
    return "unknown";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
    for (SweepParameter p :
         {SweepParameter::stubbornness_mean, SweepParameter::expertise_mean,
          SweepParameter::bias_mean, SweepParameter::risk_aversion_mean, SweepParameter::budget_std,
          SweepParameter::herding_level, SweepParameter::whale_rho, SweepParameter::whale_bias,
          SweepParameter::lambda_scale}) {
        if (to_string(p) == name) return p;
    }
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

SimConfig apply_sweep_value(SimConfig base, SweepParameter parameter, double value) {
    switch (parameter) {
        case SweepParameter::stubbornness_mean:
            base.traits.stubbornness = TraitSpec::normal(value, 0.05);
            break;
        case SweepParameter::expertise_mean:
            base.traits.expertise = TraitSpec::normal(value, 0.04);
            break;
        case SweepParameter::bias_mean:
            base.traits.bias = TraitSpec::constant(value);
            break;
        case SweepParameter::risk_aversion_mean:
            base.traits.risk_aversion = TraitSpec::constant(value);
            break;
        case SweepParameter::budget_std:
            base.traits.budget = TraitSpec::normal(base.traits.budget.mean(), value);
            break;
        case SweepParameter::herding_level:
            base.traits.herding = TraitSpec::constant(value);
            break;
        case SweepParameter::whale_rho:
            if (!base.whale)
                throw std::invalid_argument("whale_rho sweep requires a whale in the base config");
            base.whale->budget_fraction = value;
            break;
        case SweepParameter::whale_bias:
            if (!base.whale)
                throw std::invalid_argument("whale_bias sweep requires a whale in the base config");
            base.whale->fixed_valuation = std::clamp(base.initial_price + value, 0.0, 1.0);
            break;
        case SweepParameter::lambda_scale:
            base.lambda = value;
            break;
    }
    return base;
}

MetricSummary summarize_metric(const std::vector<double>& values) {
    MetricSummary summary;
    if (values.empty()) return summary;
    summary.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    summary.ci_lo = quantile(0.025);
    summary.ci_hi = quantile(0.975);
    return summary;
}

void parallel_for_index(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&]() {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& worker : workers) worker.join();
    if (error) std::rethrow_exception(error);
}

SweepResult run_sweep(const SimConfig& base, const SweepSpec& spec, int replications,
                      int threads) {
    if (replications < 1)
        throw std::invalid_argument("run_sweep: replications must be >= 1");
    if (spec.values.empty())
        throw std::invalid_argument("run_sweep: sweep grid is empty");

    const int n_cells = static_cast<int>(spec.values.size());
    const int total = n_cells * replications;
    std::vector<RunMetrics> metrics(static_cast<std::size_t>(total));

    parallel_for_index(total, threads, [&](int idx) {
        const int cell = idx / replications;
        SimConfig config = apply_sweep_value(base, spec.parameter,
                                             spec.values[static_cast<std::size_t>(cell)]);
        config.master_seed = derive_run_seed(base.master_seed, static_cast<std::uint64_t>(idx));
        const Trajectory trajectory = run_simulation(config);
        metrics[static_cast<std::size_t>(idx)] = compute_run_metrics(trajectory);
    });

    SweepResult result;
    result.parameter = spec.parameter;
    result.replications = replications;
    result.cells.reserve(static_cast<std::size_t>(n_cells));
    for (int c = 0; c < n_cells; ++c) {
        SweepCell cell;
        cell.value = spec.values[static_cast<std::size_t>(c)];
        cell.runs.assign(metrics.begin() + static_cast<std::ptrdiff_t>(c) * replications,
                         metrics.begin() + static_cast<std::ptrdiff_t>(c + 1) * replications);
        std::vector<double> mse, lag, ret, late;
        mse.reserve(cell.runs.size());
        for (const RunMetrics& m : cell.runs) {
            mse.push_back(m.mse);
            lag.push_back(static_cast<double>(m.dominant_lag));
            ret.push_back(m.median_nonwhale_return);
            late.push_back(m.late_window_mean_error);
        }
        cell.mse = summarize_metric(mse);
        cell.dominant_lag = summarize_metric(lag);
        cell.median_nonwhale_return = summarize_metric(ret);
        cell.late_window_mean_error = summarize_metric(late);
        result.cells.push_back(std::move(cell));
    }
    return result;
}

}  // namespace pmsim
