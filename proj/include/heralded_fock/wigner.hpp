#pragma once

#include "heralded_fock/covariance.hpp"

namespace hfock {

/// Coefficients of the conditional single-mode Wigner function after two
/// trigger clicks,
///   W(x3, p3) = (1/C1) [C2 + C3 r2 + C4 r2^2] exp(-C5 r2),  r2 = x3^2 + p3^2,
/// derived in closed form from the covariance entries V11, V13, V15, V33,
/// V35, V55.  The function is self-normalizing: C1 = D1 V55 pi.
struct WignerCoefficients {
    double c1, c2, c3, c4, c5;
    double d1, d2;
};

/// Extract the conditional-Wigner coefficients from an assembled covariance.
/// Throws std::domain_error when the conditioning is degenerate (D1 = 0 or
/// underflowed, e.g. epsilon = 0 exactly).
WignerCoefficients wigner_coefficients(const CovMatrix6& v);

/// Pointwise conditional Wigner value; may be negative.
double evaluate_wigner(const WignerCoefficients& co, double x, double p);

/// Wigner function of the n-photon Fock state,
///   W_n(x, p) = (-1)^n / pi * L_n(2 r2) exp(-r2).
double fock_wigner(int n, double x, double p);

/// Two-photon fidelity of the conditional state, closed form in the
/// covariance entries.  Falls back to the low-intensity limit
///   V15^2 V35^2 / (2 [(V11-1)(V33-1) + V13^2])
/// when D1 underflows; throws std::domain_error when that is degenerate too.
double fidelity_two_photon(const CovMatrix6& v);

/// The low-intensity limit formula by itself.
double fidelity_two_photon_zero_intensity(const CovMatrix6& v);

} // namespace hfock
