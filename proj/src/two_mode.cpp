#include "heralded_fock/two_mode.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heralded_fock/grid.hpp"
#include "heralded_fock/wigner.hpp"

namespace hfock {

NumberDistribution conditional_number_distribution(double r, int n_max) {
    if (!(r > 0.0))
        throw std::domain_error(
            "conditional_number_distribution: r = 0 admits no clicks (degenerate)");
    if (n_max < 2) throw std::invalid_argument("conditional_number_distribution: n_max >= 2");
    const double q = std::tanh(r) * std::tanh(r);
    const double ch = std::cosh(r), sh = std::sinh(r);
    const double norm = 2.0 * ch * ch * sh * sh * sh * sh;
    NumberDistribution d;
    d.p.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    double qn = q * q; // q^2
    double total = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        d.p[static_cast<std::size_t>(n)] = static_cast<double>(n) * (n - 1.0) * qn / norm;
        total += d.p[static_cast<std::size_t>(n)];
        qn *= q;
    }
    d.tail = std::max(0.0, 1.0 - total);
    return d;
}

double two_mode_fidelity_closed_form(double r) {
    const double c = std::cosh(r);
    return 1.0 / (c * c * c * c * c * c);
}

double two_mode_wigner_click(double r, double x, double p) {
    const double c = std::cosh(2.0 * r);
    const double r2 = x * x + p * p;
    return 1.0 / (std::numbers::pi * c * c * c) *
           (1.0 - 2.0 * (1.0 + c) / c * r2 + (1.0 + c) * (1.0 + c) / (2.0 * c * c) * r2 * r2) *
           std::exp(-r2 / c);
}

double two_mode_fidelity_via_wigner(double r) {
    if (!(r > 0.0)) throw std::domain_error("two_mode_fidelity_via_wigner: need r > 0");
    const double c = std::cosh(2.0 * r);
    // W_click and W_2 depend only on r2 = x^2 + p^2, so the plane integral
    // collapses to a radial one: dx dp = pi d(r2).
    const double decay = 1.0 + 1.0 / c;
    const double upper = 80.0 / decay;
    const auto integrand = [r](double u) {
        const double s = std::sqrt(u);
        return two_mode_wigner_click(r, s, 0.0) * fock_wigner(2, s, 0.0);
    };
    const double radial = adaptive_simpson(integrand, 0.0, upper, 1e-12);
    return 2.0 * std::numbers::pi * std::numbers::pi * radial;
}

} // namespace hfock
