#pragma once

#include <vector>

#include "pmsim/rng.hpp"

namespace pmsim {

// Post-trade cash and total wealth must stay strictly positive; this floor
// keeps the utility arguments away from the log/power singularity at 0.
inline constexpr double kWealthFloor = 1e-6;

// Optimizer outputs with magnitude below this are snapped to exactly zero so
// root-finder residue never enters the order book.
inline constexpr double kOrderEpsilon = 1e-8;

// Fixed behavioral attributes of one bettor. Whales never update their
// valuation; it stays at the configured fixed value for the whole run.
struct AgentTraits {
    double stubbornness = 0.0;    // weight on the previous valuation
    double expertise = 1.0;       // signal precision; signal variance is 1 - expertise
    double bias = 0.0;            // constant offset subtracted from the signal
    double risk_aversion = 1.0;   // CRRA coefficient, log utility at 1
    double herding = 0.0;         // weight on the posted market price
    bool is_whale = false;
};

// Evolving resources of one bettor.
struct AgentState {
    double budget = 0.0;     // cash, >= 0 at all times
    double holdings = 0.0;   // signed contract count
    double valuation = 0.5;  // belief about the outcome, in [0, 1]
};

// Configuration of the high-capital biased bettor.
struct WhaleSpec {
    double budget_fraction = 0.0;  // share of total market capital, in [0, 1)
    double fixed_valuation = 0.5;  // valuation held for the whole run
    double risk_aversion = 1.0;
};

// A market's worth of bettors; traits and states are index-aligned.
struct Population {
    std::vector<AgentTraits> traits;
    std::vector<AgentState> states;

    int size() const { return static_cast<int>(traits.size()); }
};

// Noisy private observation of the outcome: Normal(eta, 1 - expertise).
// Not clipped; bounds apply to the valuation, not the raw signal.
double draw_signal(double eta, double expertise, RandomStream& rng);

// Blends signal, previous valuation, and posted price, clipped to [0, 1]:
//   (1-h) * [ (1-s)(signal - b) + s * V ] + h * price
// Calling this for a whale is a contract violation (throws std::logic_error).
double update_valuation(const AgentState& state, const AgentTraits& traits, double signal,
                        double market_price);

// CRRA utility: wealth^(1-r) / (1-r), or log(wealth) at r = 1.
// Throws std::domain_error for wealth <= 0.
double crra_utility(double wealth, double risk_aversion);

// Expected utility of order volume x at price m:
//   V * u(B - m*x + C + x) + (1 - V) * u(B - m*x)
// Throws std::domain_error naming the branch whose wealth argument is <= 0.
double expected_utility(double order_volume, double budget, double holdings, double valuation,
                        double price, double risk_aversion);

struct OrderBounds {
    double min = 0.0;  // largest feasible sell (non-positive)
    double max = 0.0;  // largest feasible buy (non-negative)
};

// Order volumes keeping post-trade cash and post-trade total wealth above
// kWealthFloor. Always contains 0.
OrderBounds feasible_order_bounds(double budget, double holdings, double price);

// Closed-form log-utility maximizer, clamped into the feasible bounds:
//   x* = [ m (B + C - C V) - B V ] / [ m (m - 1) ]
double optimal_order_log(double budget, double holdings, double valuation, double price);

// Maximizer of expected CRRA utility over the feasible interval, found by
// bracketed bisection on the first-order condition, with a golden-section
// fallback when the marginal utility does not change sign (corner solution).
double optimal_order(double budget, double holdings, double valuation, double price,
                     double risk_aversion);

// First-order demand approximation B (V - m) / (m (1 - m)); unclamped.
double linearized_order(double budget, double valuation, double price);

}  // namespace pmsim
