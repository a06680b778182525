#pragma once

// Shared test oracles, kept independent of the library's fast paths:
// iterated adaptive quadrature for kernel integrals, naive permutation-sum
// permanents, radial plane integrals for rotationally symmetric Wigner
// functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "heralded_fock/grid.hpp"

namespace testsupport {

/// Reference double integral  iint f(t) g(t') K(|t-t'|) dt dt'  for smooth
/// analytic f, g by iterated adaptive Simpson; the inner integral is split at
/// the kernel kink t' = t.
inline double kernel_double_integral_reference(const std::function<double(double)>& f,
                                               const std::function<double(double)>& g,
                                               const std::function<double(double)>& kernel,
                                               double lo, double hi, double tol = 1e-9) {
    const auto inner = [&](double t) {
        const auto h = [&](double tp) { return g(tp) * kernel(std::abs(t - tp)); };
        return hfock::adaptive_simpson(h, lo, t, tol) + hfock::adaptive_simpson(h, t, hi, tol);
    };
    return hfock::adaptive_simpson([&](double t) { return f(t) * inner(t); }, lo, hi, tol);
}

/// Closed form of  iint e^{-a|t - ti|} e^{-b|t' - tj|} e^{-kappa|t - t'|} dt dt'
/// over the whole line, with delta = |ti - tj|.  Requires kappa != b and
/// uses J(a, c, d) = int e^{-a|u|} e^{-c|u - d|} du.
inline double exp_pair_kernel_closed(double a, double b, double kappa, double delta) {
    const auto J = [](double a1, double c1, double d) {
        if (std::abs(c1 - a1) < 1e-12) return std::exp(-a1 * d) * (d + 1.0 / a1);
        return (std::exp(-a1 * d) + std::exp(-c1 * d)) / (a1 + c1) +
               (std::exp(-a1 * d) - std::exp(-c1 * d)) / (c1 - a1);
    };
    return 2.0 / (kappa * kappa - b * b) * (kappa * J(a, b, delta) - b * J(a, kappa, delta));
}

/// Plane integral of a rotationally symmetric function W(x, p) = W(r):
///   iint W dx dp = pi * int_0^inf W(sqrt(u)) du.
inline double radial_plane_integral(const std::function<double(double, double)>& w,
                                    double upper_r2 = 120.0, double tol = 1e-12) {
    const auto integrand = [&](double u) { return w(std::sqrt(u), 0.0); };
    return M_PI * hfock::adaptive_simpson(integrand, 0.0, upper_r2, tol);
}

/// Permanent by direct permutation enumeration (n <= 8), the slow oracle.
inline double naive_permanent(const Eigen::MatrixXd& m) {
    const auto n = static_cast<int>(m.rows());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= m(i, idx[static_cast<std::size_t>(i)]);
        total += prod;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return total;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(987654321u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace testsupport
