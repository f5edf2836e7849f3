#include "pmsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmsim {

double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("mse: series lengths differ (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    if (a.empty()) throw std::invalid_argument("mse: empty series");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

namespace {

double continued_fraction_beta(double a, double b, double x) {
    // Modified Lentz evaluation of the incomplete-beta continued fraction.
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-12;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: parameters must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * continued_fraction_beta(a, b, x) / a;
    return 1.0 - front * continued_fraction_beta(b, a, 1.0 - x) / b;
}

double students_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("students_t_two_sided_p: dof must be > 0");
    if (std::isinf(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(0.5 * dof, 0.5, x);
}

double normal_cdf(double x, double mean, double sigma) {
    if (sigma <= 0.0) {
        if (x > mean) return 1.0;
        if (x < mean) return 0.0;
        return 0.5;
    }
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

SlopePValue ols_slope_pvalue(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("ols_slope_pvalue: series lengths differ");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("ols_slope_pvalue: need at least 3 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("ols_slope_pvalue: regressor has zero variance");

    SlopePValue result;
    result.slope = sxy / sxx;
    const double intercept = mean_y - result.slope * mean_x;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - intercept - result.slope * x[i];
        rss += r * r;
    }
    rss = std::max(rss, 0.0);

    const double dof = static_cast<double>(n - 2);
    const double se = std::sqrt(rss / dof / sxx);
    if (se == 0.0) {
        result.p_value = result.slope == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.p_value = students_t_two_sided_p(std::abs(result.slope / se), dof);
    return result;
}

LagRegressionResult dominant_lag(std::span<const double> m, std::span<const double> eta,
                                 int max_lag) {
    if (m.size() != eta.size())
        throw std::invalid_argument("dominant_lag: series lengths differ");
    const int n = static_cast<int>(m.size());
    if (n <= max_lag + 3)
        throw std::invalid_argument("dominant_lag: series too short for max_lag " +
                                    std::to_string(max_lag));

    LagRegressionResult result;
    result.table.reserve(static_cast<std::size_t>(max_lag) + 1);
    bool found = false;
    for (int lag = 0; lag <= max_lag; ++lag) {
        const std::size_t count = static_cast<std::size_t>(n - lag);
        LagFit fit;
        fit.lag = lag;
        try {
            const SlopePValue sp =
                ols_slope_pvalue(m.subspan(0, count), eta.subspan(static_cast<std::size_t>(lag)));
            fit.slope = sp.slope;
            fit.p_value = sp.p_value;
            if (!found || fit.p_value < result.p_value) {
                result.dominant_lag = lag;
                result.slope = fit.slope;
                result.p_value = fit.p_value;
                found = true;
            }
        } catch (const std::invalid_argument&) {
            fit.slope = std::numeric_limits<double>::quiet_NaN();
            fit.p_value = std::numeric_limits<double>::quiet_NaN();
        }
        result.table.push_back(fit);
    }
    if (!found)
        throw std::invalid_argument("dominant_lag: regressor degenerate at every lag");
    return result;
}

double misclassification_prob(double m, double eta, double sigma_m, double sigma_eta) {
    const double p_market_low = normal_cdf(0.5, m, sigma_m);
    const double p_outcome_low = normal_cdf(0.5, eta, sigma_eta);
    return (1.0 - p_market_low) * p_outcome_low + p_market_low * (1.0 - p_outcome_low);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ProfitSummary agent_returns(const Trajectory& trajectory) {
    ProfitSummary summary;
    const std::size_t n = trajectory.final_states.size();
    summary.returns.reserve(n);
    summary.total_initial_capital = trajectory.initial_capital;

    std::vector<double> nonwhale_normalized;
    nonwhale_normalized.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentState& state = trajectory.final_states[i];
        const double wealth = state.budget + state.holdings * trajectory.terminal_mark;
        const double ret = wealth - trajectory.initial_budgets[i];
        summary.returns.push_back(ret);
        const double normalized =
            trajectory.initial_capital > 0.0 ? ret / trajectory.initial_capital : 0.0;
        if (trajectory.traits[i].is_whale) {
            summary.has_whale = true;
            summary.whale_return_normalized = normalized;
        } else {
            nonwhale_normalized.push_back(normalized);
        }
    }
    if (!nonwhale_normalized.empty())
        summary.median_nonwhale_normalized = median(std::move(nonwhale_normalized));
    return summary;
}

std::vector<double> abs_error_series(const Trajectory& trajectory) {
    std::vector<double> errors;
    errors.reserve(trajectory.price.size());
    for (std::size_t t = 0; t < trajectory.price.size(); ++t)
        errors.push_back(std::abs(trajectory.price[t] - trajectory.eta[t]));
    return errors;
}

RunMetrics compute_run_metrics(const Trajectory& trajectory, int max_lag) {
    RunMetrics metrics;
    metrics.mse = mse(trajectory.price, trajectory.eta);

    const int n = static_cast<int>(trajectory.price.size());
    const int lag_cap = std::min(max_lag, n - 4);
    if (lag_cap >= 0) {
        try {
            metrics.dominant_lag = dominant_lag(trajectory.price, trajectory.eta, lag_cap).dominant_lag;
        } catch (const std::invalid_argument&) {
            metrics.dominant_lag = 0;  // constant series carry no lag information
        }
    }

    metrics.terminal_abs_error = std::abs(trajectory.price.back() - trajectory.eta.back());

    const int window = std::min(25, n);
    double late = 0.0;
    for (int t = n - window; t < n; ++t)
        late += trajectory.price[static_cast<std::size_t>(t)] -
                trajectory.eta[static_cast<std::size_t>(t)];
    metrics.late_window_mean_error = late / window;

    const ProfitSummary profit = agent_returns(trajectory);
    metrics.median_nonwhale_return = profit.median_nonwhale_normalized;
    metrics.whale_return = profit.whale_return_normalized;
    return metrics;
}

}  // namespace pmsim
