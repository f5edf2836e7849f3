#include "pmsim/election.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pmsim {

void validate(const ElectionConfig& config) {
    if (!(config.eta0 >= 0.0 && config.eta0 <= 1.0))
        throw std::invalid_argument("ElectionConfig.eta0 must lie in [0, 1], got " +
                                    std::to_string(config.eta0));
    if (!(config.sigma_eta >= 0.0))
        throw std::invalid_argument("ElectionConfig.sigma_eta must be >= 0, got " +
                                    std::to_string(config.sigma_eta));
    if (config.horizon < 1)
        throw std::invalid_argument("ElectionConfig.horizon must be >= 1, got " +
                                    std::to_string(config.horizon));
}

double step_election(double eta_prev, double sigma_eta, RandomStream& rng) {
    const double next = eta_prev + sigma_eta * rng.normal();
    return std::clamp(next, 0.0, 1.0);
}

ElectionPath generate_path(const ElectionConfig& config, RandomStream& rng) {
    validate(config);
    ElectionPath path;
    path.values.reserve(static_cast<std::size_t>(config.horizon) + 1);
    path.values.push_back(config.eta0);
    for (int t = 0; t < config.horizon; ++t)
        path.values.push_back(step_election(path.values.back(), config.sigma_eta, rng));
    return path;
}

}  // namespace pmsim
