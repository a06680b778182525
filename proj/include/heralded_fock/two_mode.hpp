#pragma once

#include <vector>

namespace hfock {

/// Photon number distribution of the double-click conditioned two-mode
/// squeezed vacuum: p(n) = n(n-1) tanh^{2n} r / (2 cosh^2 r sinh^4 r).
/// p(0) = p(1) = 0 and p(2) = 1/cosh^6 r.  `tail` is the probability mass
/// beyond n_max (exact, from the analytic normalizer).
struct NumberDistribution {
    std::vector<double> p; // indices 0..n_max
    double tail;
};

/// Conditional photon-number distribution after two clicks on one mode of a
/// two-mode squeezed vacuum with squeezing parameter r > 0.
NumberDistribution conditional_number_distribution(double r, int n_max = 50);

/// Two-photon fidelity 1/cosh^6 r, closed form.
double two_mode_fidelity_closed_form(double r);

/// Conditional Wigner function of the single-pulse model after two clicks,
/// evaluated pointwise (depends on x, p only through x^2 + p^2).
double two_mode_wigner_click(double r, double x, double p);

/// Two-photon fidelity computed by the phase-space route: radial quadrature of
/// 2 pi Int W_click W_{n=2}; agrees with 1/cosh^6 r to quadrature tolerance.
double two_mode_fidelity_via_wigner(double r);

} // namespace hfock
