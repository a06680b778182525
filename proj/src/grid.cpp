#include "heralded_fock/grid.hpp"

#include <cmath>

namespace hfock {

double trapezoid(const std::vector<double>& f, double step) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) s += f[k];
    return s * step;
}

double inner_product(const SampledModeFunction& f, const SampledModeFunction& g) {
    if (!(f.grid() == g.grid()))
        throw std::invalid_argument("inner_product: grid mismatch");
    const auto& a = f.values();
    const auto& b = g.values();
    double s = 0.5 * (a.front() * b.front() + a.back() * b.back());
    for (std::size_t k = 1; k + 1 < a.size(); ++k) s += a[k] * b[k];
    return s * f.grid().step();
}

std::vector<double> exp_smooth(const TimeGrid& grid, const std::vector<double>& f, double kappa) {
    if (f.size() != grid.size())
        throw std::invalid_argument("exp_smooth: value/grid size mismatch");
    if (!(kappa > 0.0))
        throw std::invalid_argument("exp_smooth: kappa must be positive");
    const std::size_t n = f.size();
    const double h = grid.step();
    const double E = std::exp(-kappa * h);
    // Segment integrals of the linear interpolant against the exponential:
    //   alpha = int_0^h (s/h) e^{-kappa s} ds,  beta = int_0^h e^{-kappa s} ds - alpha.
    // alpha weights the node far from the evaluation point, beta the near one.
    const double alpha = (1.0 - E * (1.0 + kappa * h)) / (h * kappa * kappa);
    const double beta = (1.0 - E) / kappa - alpha;

    std::vector<double> u(n, 0.0);
    // forward sweep: L_k = int_{t_0}^{t_k} f(t') e^{-kappa (t_k - t')} dt'
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        acc = E * acc + f[k] * alpha + f[k + 1] * beta;
        u[k + 1] += acc;
    }
    // backward sweep: R_k = int_{t_k}^{t_end} f(t') e^{-kappa (t' - t_k)} dt'
    acc = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = E * acc + f[k + 1] * alpha + f[k] * beta;
        u[k] += acc;
    }
    return u;
}

double exp_kernel_double_integral(const SampledModeFunction& f, const SampledModeFunction& g,
                                  double kappa) {
    if (!(f.grid() == g.grid()))
        throw std::invalid_argument("exp_kernel_double_integral: grid mismatch");
    const std::vector<double> u = exp_smooth(g.grid(), g.values(), kappa);
    const auto& a = f.values();
    double s = 0.5 * (a.front() * u.front() + a.back() * u.back());
    for (std::size_t k = 1; k + 1 < a.size(); ++k) s += a[k] * u[k];
    return s * f.grid().step();
}

double exp_kernel_single_integral(const SampledModeFunction& f, double t0, double kappa) {
    // Evaluate the smoothed function at the node nearest t0.  Click times are
    // grid-snapped everywhere in this library, so the lookup is exact.
    const std::vector<double> u = exp_smooth(f.grid(), f.values(), kappa);
    return u[f.grid().index_near(t0)];
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace hfock
