#pragma once

#include <vector>

#include "pmsim/rng.hpp"

namespace pmsim {

// Bounded-random-walk model of the evolving true outcome probability.
struct ElectionConfig {
    double eta0 = 0.5;       // initial outcome probability
    double sigma_eta = 0.0;  // per-step standard deviation
    int horizon = 1;         // number of steps T
};

// Throws std::invalid_argument naming the offending field.
void validate(const ElectionConfig& config);

// eta_0 ... eta_T, every value in [0, 1].
struct ElectionPath {
    std::vector<double> values;
};

// One random-walk step, hard-clipped to [0, 1].
double step_election(double eta_prev, double sigma_eta, RandomStream& rng);

ElectionPath generate_path(const ElectionConfig& config, RandomStream& rng);

}  // namespace pmsim
