#pragma once

#include <span>
#include <vector>

#include "pmsim/simulation.hpp"

namespace pmsim {

// Mean squared pointwise difference. Throws std::invalid_argument on length
// mismatch or empty input.
double mse(std::span<const double> a, std::span<const double> b);

struct SlopePValue {
    double slope = 0.0;
    double p_value = 1.0;
};

// Simple OLS y = a + b x; two-sided p-value for b = 0 from the t statistic
// with n-2 degrees of freedom. Throws on n < 3 or a zero-variance regressor.
SlopePValue ols_slope_pvalue(std::span<const double> x, std::span<const double> y);

struct LagFit {
    int lag = 0;
    double slope = 0.0;
    double p_value = 1.0;
};

struct LagRegressionResult {
    int dominant_lag = 0;
    double slope = 0.0;
    double p_value = 1.0;
    std::vector<LagFit> table;
};

// Regresses eta_t on m_{t-lag} for lag = 0..max_lag over the overlapping
// window; the dominant lag minimizes the p-value, ties to the smallest lag.
LagRegressionResult dominant_lag(std::span<const double> m, std::span<const double> eta,
                                 int max_lag);

// Probability that price and outcome imply opposite winners when both are
// read through the 0.5 threshold with Gaussian noise. A zero sigma collapses
// that coordinate to an indicator (with value 0.5 exactly at the threshold).
double misclassification_prob(double m, double eta, double sigma_m, double sigma_eta);

struct ProfitSummary {
    std::vector<double> returns;  // terminal wealth - initial budget, per agent
    double total_initial_capital = 0.0;
    double median_nonwhale_normalized = 0.0;
    bool has_whale = false;
    double whale_return_normalized = 0.0;
};

// Terminal wealth marks holdings at the trajectory's terminal mark (the
// terminal outcome probability, or the Bernoulli draw when configured).
ProfitSummary agent_returns(const Trajectory& trajectory);

// Pointwise |m_t - eta_t|.
std::vector<double> abs_error_series(const Trajectory& trajectory);

// ---- numeric building blocks ---------------------------------------------

// Gaussian CDF; sigma = 0 gives the step function with 0.5 at the mean.
double normal_cdf(double x, double mean, double sigma);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic with `dof` degrees of freedom.
double students_t_two_sided_p(double t, double dof);

double median(std::vector<double> values);

}  // namespace pmsim
