#pragma once

#include <optional>
#include <vector>

#include "heralded_fock/covariance.hpp"
#include "heralded_fock/grid.hpp"
#include "heralded_fock/opo.hpp"

namespace hfock {

struct OptimizerSettings {
    int basis_size = 8;   // cusped exponentials at several decay scales per click
    int max_iters = 4000; // simplex iterations per restart
    double tol = 1e-9;    // stop when F2 gains stay below this over 20 iterations
    int restarts = 3;

    void validate() const {
        if (basis_size < 2) throw std::invalid_argument("OptimizerSettings: basis_size >= 2");
        if (!(tol > 0.0)) throw std::invalid_argument("OptimizerSettings: tol > 0");
    }
};

/// Closed-form optimal signal mode in the epsilon -> 0 limit:
///   f(t) ~ exp(-(gamma/2)|t - t_c1|) + exp(-(gamma/2)|t - t_c2|),
/// renormalized on the grid.
SampledModeFunction optimal_mode_zero_intensity(double t_c1, double t_c2, const TimeGrid& grid,
                                                double gamma = 1.0);

/// Two-photon fidelity for a given signal mode: assembles the covariance with
/// single-sample trigger top hats at the click times and applies the closed
/// form.
double two_photon_fidelity_for_mode(const OpoParams& params, const ClickTimes& clicks,
                                    const SampledModeFunction& signal);

struct OptimizeResult {
    SampledModeFunction mode;
    double fidelity;
    bool converged;
};

/// Maximize the two-photon fidelity over real unit-norm signal modes by a
/// derivative-free simplex over coefficients in a basis of cusped
/// exponentials at the click times (several decay scales), restarted from the
/// zero-intensity optimum, from g_1 and from a symmetric perturbation.  The
/// returned mode is unit norm with f(t_c1) > 0.
OptimizeResult optimize_mode(const OpoParams& params, const ClickTimes& clicks,
                             const OptimizerSettings& settings = {},
                             std::optional<TimeGrid> grid = std::nullopt);

/// Free-form diagnostic optimizer: projected gradient ascent directly on the
/// samples, no basis.  Slow; used to confirm the basis introduces no bias.
OptimizeResult optimize_mode_per_sample(const OpoParams& params, const ClickTimes& clicks,
                                        const TimeGrid& grid, int max_steps = 400);

struct FidelityCurvePoint {
    double gamma_dt;
    double fidelity;
};

/// F2 versus click separation.  use_optimal selects the numerically optimized
/// mode; otherwise the fixed zero-intensity optimal mode is used.  epsilon = 0
/// is evaluated on the exact low-intensity branch (both modes coincide there).
std::vector<FidelityCurvePoint> fidelity_curve(const OpoParams& params,
                                               const std::vector<double>& separations,
                                               bool use_optimal,
                                               const OptimizerSettings& settings = {});

/// Exact low-intensity fidelity of the optimal mode at click separation
/// gamma_dt: (1+I)^2 / (2(1+I^2)) with I the click-mode overlap.
double fidelity_two_photon_low_intensity(double gamma_dt);

} // namespace hfock
