#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pmsim {

// Aggregate inputs for the linearized price-error recursion: effective
// feedback gain alpha plus per-agent budget weights, herding weights, and
// stubbornness values.
struct TheoryInputs {
    double alpha = 0.0;
    std::vector<double> weights;       // sum to 1
    std::vector<double> herding;
    std::vector<double> stubbornness;

    // S_w = sum_i w_i (1 - h_i) s_i
    double weighted_stubbornness() const;
    // H_B = sum_i w_i h_i
    double weighted_herding() const;
};

// Persistent price error equals the biased agent's budget fraction times its
// valuation error: delta = rho * Delta.
double steady_state_error(double rho, double delta_valuation);

// Var(D) = sum_i (B_i / (m (1-m)))^2 (1 - s_i)^2 (1 - e_i).
double net_demand_variance(std::span<const double> budgets,
                           std::span<const double> stubbornness,
                           std::span<const double> expertise, double price);

// Coefficients of the order-2 recursion delta_t = a delta_{t-1} + b delta_{t-2}
// with a = (1 - alpha) + S_w and b = alpha H_B - (1 - alpha) S_w, plus the
// characteristic roots of r^2 - a r - b = 0.
struct AR2Coefficients {
    double a = 0.0;
    double b = 0.0;
    std::complex<double> root1;
    std::complex<double> root2;
};

AR2Coefficients ar2_coefficients(const TheoryInputs& inputs);
AR2Coefficients ar2_coefficients(double alpha, double weighted_stubbornness,
                                 double weighted_herding);

// Roots within this distance of the unit circle are classified marginal.
inline constexpr double kMarginalTolerance = 1e-9;

enum class StabilityClass { unstable, marginal, stable };

struct StabilityVerdict {
    bool cond_i = false;    // 1 - a > b  (equivalently H_B + S_w < 1)
    bool cond_ii = false;   // 1 + a > b
    bool cond_iii = false;  // b > -1
    double margin_i = 0.0;  // 1 - a - b
    double margin_ii = 0.0; // 1 + a - b
    double margin_iii = 0.0;// b + 1
    bool stable = false;    // all three strict inequalities hold
    double max_root_magnitude = 0.0;
    StabilityClass classification = StabilityClass::unstable;
};

// Evaluates the three stationarity inequalities and cross-checks them
// against the root magnitudes.
StabilityVerdict ar2_stable(const AR2Coefficients& coefficients);

// Dense stability map over (H_B, S_w) in [0,1]^2 at fixed alpha.
struct StabilityRegion {
    double alpha = 0.0;
    int resolution = 0;                     // grid points per axis
    std::vector<double> herding_axis;       // H_B values
    std::vector<double> stubbornness_axis;  // S_w values
    std::vector<StabilityClass> cells;      // row-major [s_index * resolution + h_index]

    StabilityClass at(int s_index, int h_index) const {
        return cells[static_cast<std::size_t>(s_index) * static_cast<std::size_t>(resolution) +
                     static_cast<std::size_t>(h_index)];
    }
};

StabilityRegion stability_region(double alpha, int resolution);

// Expected next budget-weighted valuation error:
//   sum_i w_i [ (1 - h_i) s_i verr_i + h_i delta ]
double expected_valuation_error_step(std::span<const double> weights,
                                     std::span<const double> herding,
                                     std::span<const double> stubbornness,
                                     std::span<const double> valuation_errors, double delta);

// Effective feedback gain implied by the price-impact scale at a given
// price level; `proportionality` is the fit constant (default 1).
double effective_feedback_gain(double lambda, double mean_price, double proportionality = 1.0);

}  // namespace pmsim
