#include "heralded_fock/wigner.hpp"

#include <cmath>
#include <numbers>

namespace hfock {

namespace {

struct XEntries {
    double v11, v13, v15, v33, v35, v55;
    double d1, d2;
};

XEntries extract(const CovMatrix6& v) {
    XEntries e{};
    e.v11 = v.v11();
    e.v13 = v.v13();
    e.v15 = v.v15();
    e.v33 = v.v33();
    e.v35 = v.v35();
    e.v55 = v.v55();
    const double v55_2 = e.v55 * e.v55;
    e.d1 = v55_2 * v55_2 * ((e.v11 - 1.0) * (e.v33 - 1.0) + e.v13 * e.v13);
    e.d2 = e.v55 * (2.0 * e.v15 * e.v35 * (e.v13 * e.v55 - e.v15 * e.v35) +
                    e.v55 * (e.v15 * e.v15 * (e.v33 - 1.0) + e.v35 * e.v35 * (e.v11 - 1.0)));
    return e;
}

constexpr double kDegenerateFloor = 1e-300;

} // namespace

WignerCoefficients wigner_coefficients(const CovMatrix6& v) {
    const XEntries e = extract(v);
    if (!(e.d1 > kDegenerateFloor))
        throw std::domain_error(
            "wigner_coefficients: degenerate conditioning (D1 vanished; epsilon = 0?)");
    WignerCoefficients co{};
    co.d1 = e.d1;
    co.d2 = e.d2;
    co.c1 = e.d1 * e.v55 * std::numbers::pi;
    co.c2 = e.d1 - e.v55 * e.d2;
    co.c3 = e.d2 - 2.0 * e.v55 * e.v15 * e.v15 * e.v35 * e.v35;
    co.c4 = e.v15 * e.v15 * e.v35 * e.v35;
    co.c5 = 1.0 / e.v55;
    return co;
}

double evaluate_wigner(const WignerCoefficients& co, double x, double p) {
    const double r2 = x * x + p * p;
    return (co.c2 + co.c3 * r2 + co.c4 * r2 * r2) * std::exp(-co.c5 * r2) / co.c1;
}

double fock_wigner(int n, double x, double p) {
    if (n < 0) throw std::invalid_argument("fock_wigner: n must be nonnegative");
    const double r2 = x * x + p * p;
    const double z = 2.0 * r2;
    // Laguerre recurrence (k+1) L_{k+1} = (2k+1-z) L_k - k L_{k-1}
    double lkm1 = 1.0, lk = 1.0 - z;
    if (n == 0) lk = 1.0;
    for (int k = 1; k < n; ++k) {
        const double lkp1 = ((2.0 * k + 1.0 - z) * lk - k * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / std::numbers::pi * lk * std::exp(-r2);
}

double fidelity_two_photon_zero_intensity(const CovMatrix6& v) {
    const XEntries e = extract(v);
    const double den = 2.0 * ((e.v11 - 1.0) * (e.v33 - 1.0) + e.v13 * e.v13);
    if (!(den > 0.0))
        throw std::domain_error("fidelity_two_photon_zero_intensity: degenerate covariance");
    return e.v15 * e.v15 * e.v35 * e.v35 / den;
}

double fidelity_two_photon(const CovMatrix6& v) {
    const XEntries e = extract(v);
    if (!(e.d1 > kDegenerateFloor)) return fidelity_two_photon_zero_intensity(v);
    const double v55 = e.v55;
    const double om = 1.0 - v55, op = 1.0 + v55;
    const double c4 = e.v15 * e.v15 * e.v35 * e.v35;
    const double num = e.d1 * om * om * op * op -
                       e.d2 * v55 * v55 * om * op * (5.0 - v55) +
                       2.0 * v55 * v55 * v55 * c4 * (4.0 * v55 - 5.0 * om * om);
    return 2.0 * num / (e.d1 * op * op * op * op * op);
}

} // namespace hfock
