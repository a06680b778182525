#pragma once

#include "heralded_fock/grid.hpp"
#include "heralded_fock/opo.hpp"

namespace hfock {

/// Decomposition of the OPO two-time correlation kernels into the two
/// exponential branches:
///   cross(tau) = p e^{-mu|tau|} + q e^{-lambda|tau|}   (<a_+ a_->)
///   auto(tau)  = p e^{-mu|tau|} - q e^{-lambda|tau|}   (<a^dag_+ a_+>)
/// with p = (lambda^2-mu^2)/(8 mu), q = (lambda^2-mu^2)/(8 lambda).
struct KernelSplit {
    double mu;
    double lambda;
    double p;
    double q;

    explicit KernelSplit(const OpoParams& params)
        : mu(params.mu()), lambda(params.lambda()),
          p((params.lambda() * params.lambda() - params.mu() * params.mu()) / (8.0 * params.mu())),
          q((params.lambda() * params.lambda() - params.mu() * params.mu()) /
            (8.0 * params.lambda())) {}
};

/// <a_+(t) a_-(t')> as a function of tau = t - t'.  Symmetric, positive,
/// decreasing in |tau|; identically zero at epsilon = 0.
double cross_correlation(const OpoParams& params, double tau);

/// <a^dag_+(t) a_+(t')> (same for the signal beam).  Nonnegative; zero at
/// epsilon = 0.
double auto_correlation(const OpoParams& params, double tau);

/// Low-intensity (epsilon/gamma -> 0) limits of the kernels above.
double cross_correlation_low_intensity(const OpoParams& params, double tau);
double auto_correlation_low_intensity(const OpoParams& params, double tau);

/// Cusped exponential mode tied to a click instant:
///   g(t) = sqrt(gamma/2) exp(-(gamma/2)|t - t_click|).
/// The returned samples are renormalized to unit grid norm; `truncated` is set
/// when the grid captures less than 1 - 1e-6 of the continuum norm.
struct GMode {
    SampledModeFunction f;
    bool truncated;
};
GMode g_mode(double t_click, const TimeGrid& grid, double gamma = 1.0);

/// Overlap I_ij of two click modes, closed form:
///   (1 + (gamma/2)|dt|) exp(-(gamma/2)|dt|) in (0, 1].
double overlap(double t_ci, double t_cj, double gamma = 1.0);

/// Normalized two-time intensity correlation of the trigger beam,
///   g2(dt) = 1 + [(e^{-mu|dt|}/(2mu) - e^{-lambda|dt|}/(2lambda)) /
///                 (1/(2mu) - 1/(2lambda))]^2,
/// which falls from 2 at dt = 0 to 1 at large separation.
/// Undefined (0/0) at epsilon = 0: throws std::domain_error.
double bunching_ratio(const OpoParams& params, double dt);

/// Default sampling grid: spacing 0.01/gamma, window +-10/gamma around the
/// extreme click times.
TimeGrid default_grid(double t_min_click, double t_max_click, double gamma = 1.0,
                      double window = 10.0, double step = 0.01);

} // namespace hfock
