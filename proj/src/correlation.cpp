#include "heralded_fock/correlation.hpp"

#include <cmath>

namespace hfock {

double cross_correlation(const OpoParams& params, double tau) {
    if (params.epsilon() == 0.0) return 0.0; // exact vacuum, no cancellation path
    const KernelSplit k(params);
    const double at = std::abs(tau);
    return k.p * std::exp(-k.mu * at) + k.q * std::exp(-k.lambda * at);
}

double auto_correlation(const OpoParams& params, double tau) {
    if (params.epsilon() == 0.0) return 0.0;
    const KernelSplit k(params);
    const double at = std::abs(tau);
    return k.p * std::exp(-k.mu * at) - k.q * std::exp(-k.lambda * at);
}

double cross_correlation_low_intensity(const OpoParams& params, double tau) {
    const double g = params.gamma();
    return params.epsilon() * std::exp(-0.5 * g * std::abs(tau));
}

double auto_correlation_low_intensity(const OpoParams& params, double tau) {
    const double g = params.gamma();
    const double at = std::abs(tau);
    return 2.0 * params.epsilon() * params.epsilon() / g * (1.0 + 0.5 * g * at) *
           std::exp(-0.5 * g * at);
}

GMode g_mode(double t_click, const TimeGrid& grid, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("g_mode: gamma must be positive");
    std::vector<double> v(grid.size());
    const double amp = std::sqrt(0.5 * gamma);
    for (std::size_t k = 0; k < grid.size(); ++k)
        v[k] = amp * std::exp(-0.5 * gamma * std::abs(grid.time(k) - t_click));
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    n2 *= grid.step();
    const bool truncated = n2 < 1.0 - 1e-6;
    return {SampledModeFunction::from_shape(grid, std::move(v)), truncated};
}

double overlap(double t_ci, double t_cj, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("overlap: gamma must be positive");
    const double x = 0.5 * gamma * std::abs(t_ci - t_cj);
    return (1.0 + x) * std::exp(-x);
}

double bunching_ratio(const OpoParams& params, double dt) {
    if (params.epsilon() == 0.0)
        throw std::domain_error("bunching_ratio: undefined (0/0) at epsilon = 0");
    const double mu = params.mu(), lambda = params.lambda();
    const double at = std::abs(dt);
    const double num = std::exp(-mu * at) / (2.0 * mu) - std::exp(-lambda * at) / (2.0 * lambda);
    const double den = 1.0 / (2.0 * mu) - 1.0 / (2.0 * lambda);
    const double r = num / den;
    return 1.0 + r * r;
}

TimeGrid default_grid(double t_min_click, double t_max_click, double gamma, double window,
                      double step) {
    if (t_max_click < t_min_click)
        throw std::invalid_argument("default_grid: t_max_click < t_min_click");
    return TimeGrid::covering(t_min_click - window / gamma, t_max_click + window / gamma,
                              step / gamma);
}

} // namespace hfock
