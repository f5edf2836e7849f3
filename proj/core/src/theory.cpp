#include "pmsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmsim {

double TheoryInputs::weighted_stubbornness() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        sum += weights[i] * (1.0 - herding[i]) * stubbornness[i];
    return sum;
}

double TheoryInputs::weighted_herding() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * herding[i];
    return sum;
}

double steady_state_error(double rho, double delta_valuation) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("steady_state_error: rho must lie in [0, 1)");
    return rho * delta_valuation;
}

double net_demand_variance(std::span<const double> budgets,
                           std::span<const double> stubbornness,
                           std::span<const double> expertise, double price) {
    if (!(price > 0.0 && price < 1.0))
        throw std::domain_error("net_demand_variance: price must lie in (0, 1)");
    if (budgets.size() != stubbornness.size() || budgets.size() != expertise.size())
        throw std::invalid_argument("net_demand_variance: input lengths differ");
    const double scale = price * (1.0 - price);
    double variance = 0.0;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        const double demand_slope = budgets[i] / scale;
        const double responsiveness = 1.0 - stubbornness[i];
        variance += demand_slope * demand_slope * responsiveness * responsiveness *
                    (1.0 - expertise[i]);
    }
    return variance;
}

AR2Coefficients ar2_coefficients(double alpha, double weighted_stubbornness,
                                 double weighted_herding) {
    AR2Coefficients coeffs;
    coeffs.a = (1.0 - alpha) + weighted_stubbornness;
    coeffs.b = alpha * weighted_herding - (1.0 - alpha) * weighted_stubbornness;
    const double discriminant = coeffs.a * coeffs.a + 4.0 * coeffs.b;
    if (discriminant >= 0.0) {
        const double root = std::sqrt(discriminant);
        coeffs.root1 = {(coeffs.a + root) / 2.0, 0.0};
        coeffs.root2 = {(coeffs.a - root) / 2.0, 0.0};
    } else {
        const double imag = std::sqrt(-discriminant) / 2.0;
        coeffs.root1 = {coeffs.a / 2.0, imag};
        coeffs.root2 = {coeffs.a / 2.0, -imag};
    }
    return coeffs;
}

AR2Coefficients ar2_coefficients(const TheoryInputs& inputs) {
    return ar2_coefficients(inputs.alpha, inputs.weighted_stubbornness(),
                            inputs.weighted_herding());
}

StabilityVerdict ar2_stable(const AR2Coefficients& coefficients) {
    StabilityVerdict verdict;
    verdict.margin_i = 1.0 - coefficients.a - coefficients.b;
    verdict.margin_ii = 1.0 + coefficients.a - coefficients.b;
    verdict.margin_iii = coefficients.b + 1.0;
    verdict.cond_i = verdict.margin_i > 0.0;
    verdict.cond_ii = verdict.margin_ii > 0.0;
    verdict.cond_iii = verdict.margin_iii > 0.0;
    verdict.stable = verdict.cond_i && verdict.cond_ii && verdict.cond_iii;
    verdict.max_root_magnitude =
        std::max(std::abs(coefficients.root1), std::abs(coefficients.root2));
    if (verdict.max_root_magnitude < 1.0 - kMarginalTolerance)
        verdict.classification = StabilityClass::stable;
    else if (verdict.max_root_magnitude <= 1.0 + kMarginalTolerance)
        verdict.classification = StabilityClass::marginal;
    else
        verdict.classification = StabilityClass::unstable;
    return verdict;
}

StabilityRegion stability_region(double alpha, int resolution) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("stability_region: alpha must be >= 0");
    if (resolution < 2) throw std::invalid_argument("stability_region: resolution must be >= 2");

    StabilityRegion region;
    region.alpha = alpha;
    region.resolution = resolution;
    region.herding_axis.reserve(static_cast<std::size_t>(resolution));
    region.stubbornness_axis.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double v = static_cast<double>(i) / static_cast<double>(resolution - 1);
        region.herding_axis.push_back(v);
        region.stubbornness_axis.push_back(v);
    }
    region.cells.reserve(static_cast<std::size_t>(resolution) *
                         static_cast<std::size_t>(resolution));
    for (int si = 0; si < resolution; ++si) {
        for (int hi = 0; hi < resolution; ++hi) {
            const auto verdict = ar2_stable(ar2_coefficients(
                alpha, region.stubbornness_axis[static_cast<std::size_t>(si)],
                region.herding_axis[static_cast<std::size_t>(hi)]));
            region.cells.push_back(verdict.classification);
        }
    }
    return region;
}

double expected_valuation_error_step(std::span<const double> weights,
                                     std::span<const double> herding,
                                     std::span<const double> stubbornness,
                                     std::span<const double> valuation_errors, double delta) {
    if (weights.size() != herding.size() || weights.size() != stubbornness.size() ||
        weights.size() != valuation_errors.size())
        throw std::invalid_argument("expected_valuation_error_step: input lengths differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        sum += weights[i] *
               ((1.0 - herding[i]) * stubbornness[i] * valuation_errors[i] + herding[i] * delta);
    return sum;
}

double effective_feedback_gain(double lambda, double mean_price, double proportionality) {
    return proportionality * lambda * mean_price * (1.0 - mean_price);
}

}  // namespace pmsim
