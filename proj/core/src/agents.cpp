#include "pmsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmsim {

double draw_signal(double eta, double expertise, RandomStream& rng) {
    return rng.normal(eta, std::sqrt(1.0 - expertise));
}

double update_valuation(const AgentState& state, const AgentTraits& traits, double signal,
                        double market_price) {
    if (traits.is_whale)
        throw std::logic_error("update_valuation: whale valuations are fixed and never updated");
    const double learned =
        (1.0 - traits.stubbornness) * (signal - traits.bias) + traits.stubbornness * state.valuation;
    const double blended = (1.0 - traits.herding) * learned + traits.herding * market_price;
    return std::clamp(blended, 0.0, 1.0);
}

double crra_utility(double wealth, double risk_aversion) {
    if (!(wealth > 0.0))
        throw std::domain_error("crra_utility: wealth must be strictly positive");
    if (risk_aversion == 1.0) return std::log(wealth);
    return std::pow(wealth, 1.0 - risk_aversion) / (1.0 - risk_aversion);
}

double expected_utility(double order_volume, double budget, double holdings, double valuation,
                        double price, double risk_aversion) {
    const double cash = budget - price * order_volume;
    const double wealth = cash + holdings + order_volume;
    if (!(cash > 0.0))
        throw std::domain_error("expected_utility: post-trade cash non-positive (no-event branch)");
    if (!(wealth > 0.0))
        throw std::domain_error("expected_utility: post-trade wealth non-positive (event branch)");
    return valuation * crra_utility(wealth, risk_aversion) +
           (1.0 - valuation) * crra_utility(cash, risk_aversion);
}

OrderBounds feasible_order_bounds(double budget, double holdings, double price) {
    OrderBounds bounds;
    bounds.max = std::max(0.0, (budget - kWealthFloor) / price);
    bounds.min = std::min(0.0, -(budget + holdings - kWealthFloor) / (1.0 - price));
    return bounds;
}

double optimal_order_log(double budget, double holdings, double valuation, double price) {
    if (!(price > 0.0 && price < 1.0))
        throw std::domain_error("optimal_order_log: price must lie in (0, 1)");
    const double x = (price * (budget + holdings - holdings * valuation) - budget * valuation) /
                     (price * (price - 1.0));
    const OrderBounds bounds = feasible_order_bounds(budget, holdings, price);
    return std::clamp(x, bounds.min, bounds.max);
}

double linearized_order(double budget, double valuation, double price) {
    if (!(price > 0.0 && price < 1.0))
        throw std::domain_error("linearized_order: price must lie in (0, 1)");
    return budget * (valuation - price) / (price * (1.0 - price));
}

namespace {

// d/dx of expected utility; u'(w) = w^(-r).
double marginal_expected_utility(double x, double budget, double holdings, double valuation,
                                 double price, double risk_aversion) {
    const double cash = budget - price * x;
    const double wealth = cash + holdings + x;
    return valuation * (1.0 - price) * std::pow(wealth, -risk_aversion) -
           (1.0 - valuation) * price * std::pow(cash, -risk_aversion);
}

constexpr double kRootTolerance = 1e-9;

double golden_section_max(double lo, double hi, double budget, double holdings, double valuation,
                          double price, double risk_aversion) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = expected_utility(c, budget, holdings, valuation, price, risk_aversion);
    double fd = expected_utility(d, budget, holdings, valuation, price, risk_aversion);
    while (b - a > kRootTolerance) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = expected_utility(c, budget, holdings, valuation, price, risk_aversion);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = expected_utility(d, budget, holdings, valuation, price, risk_aversion);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double optimal_order(double budget, double holdings, double valuation, double price,
                     double risk_aversion) {
    if (!(price > 0.0 && price < 1.0)) return 0.0;
    if (!(budget >= 0.0) || !(budget + holdings >= 0.0)) return 0.0;

    const auto [lo, hi] = feasible_order_bounds(budget, holdings, price);
    if (hi - lo <= kOrderEpsilon) return 0.0;

    double x;
    if (risk_aversion == 0.0) {
        // Risk neutral: expected utility is linear in x with slope V - m.
        x = valuation > price ? hi : (valuation < price ? lo : 0.0);
    } else {
        const double glo = marginal_expected_utility(lo, budget, holdings, valuation, price,
                                                     risk_aversion);
        const double ghi = marginal_expected_utility(hi, budget, holdings, valuation, price,
                                                     risk_aversion);
        if ((glo > 0.0) != (ghi > 0.0)) {
            double a = lo, b = hi;
            bool ga_positive = glo > 0.0;
            while (b - a > kRootTolerance) {
                const double mid = 0.5 * (a + b);
                const double gm = marginal_expected_utility(mid, budget, holdings, valuation,
                                                            price, risk_aversion);
                if (gm == 0.0) {
                    a = mid;
                    b = mid;
                    break;
                }
                if ((gm > 0.0) == ga_positive) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            x = 0.5 * (a + b);
        } else {
            x = golden_section_max(lo, hi, budget, holdings, valuation, price, risk_aversion);
        }
    }

    if (std::abs(x) < kOrderEpsilon) return 0.0;
    return std::clamp(x, lo, hi);
}

}  // namespace pmsim
