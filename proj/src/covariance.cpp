#include "heralded_fock/covariance.hpp"

#include <cmath>
#include <complex>

namespace hfock {

double CovMatrix6::physicality_min_eigenvalue() const {
    using CMat6 = Eigen::Matrix<std::complex<double>, 6, 6>;
    CMat6 h = m_.cast<std::complex<double>>();
    const std::complex<double> i1(0.0, 1.0);
    for (int m = 0; m < 3; ++m) {
        h(2 * m, 2 * m + 1) += i1;
        h(2 * m + 1, 2 * m) -= i1;
    }
    Eigen::SelfAdjointEigenSolver<CMat6> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SampledModeFunction trigger_top_hat(const TimeGrid& grid, double click_time, double width) {
    const double h = grid.step();
    if (width < h * (1.0 - 1e-12))
        throw std::invalid_argument("trigger_top_hat: width below grid step is unresolvable");
    const auto k = static_cast<std::size_t>(std::llround(width / h));
    const std::size_t center = grid.index_near(click_time);
    const std::size_t lo = center - std::min(center, (k - 1) / 2);
    if (lo + k > grid.size())
        throw std::invalid_argument("trigger_top_hat: top hat does not fit on the grid");
    std::vector<double> v(grid.size(), 0.0);
    const double height = 1.0 / std::sqrt(static_cast<double>(k) * h);
    for (std::size_t i = 0; i < k; ++i) v[lo + i] = height;
    return {grid, std::move(v)};
}

namespace {

struct SmoothedPair {
    std::vector<double> mu;     // exp_smooth against e^{-mu|tau|}
    std::vector<double> lambda; // exp_smooth against e^{-lambda|tau|}
};

SmoothedPair smooth_both(const SampledModeFunction& f, const KernelSplit& k) {
    return {exp_smooth(f.grid(), f.values(), k.mu), exp_smooth(f.grid(), f.values(), k.lambda)};
}

double dot_trapz(const SampledModeFunction& f, const std::vector<double>& u) {
    const auto& a = f.values();
    double s = 0.5 * (a.front() * u.front() + a.back() * u.back());
    for (std::size_t i = 1; i + 1 < a.size(); ++i) s += a[i] * u[i];
    return s * f.grid().step();
}

} // namespace

CovMatrix6 assemble_covariance(const OpoParams& params, const SampledModeFunction& trigger1,
                               const SampledModeFunction& trigger2,
                               const SampledModeFunction& signal) {
    const TimeGrid& grid = trigger1.grid();
    if (!(grid == trigger2.grid()) || !(grid == signal.grid()))
        throw std::invalid_argument("assemble_covariance: all modes must share one grid");

    const double eta_t = params.eta_t();
    const double eta_s = params.eta_s();

    double k_auto_11 = 0.0, k_auto_22 = 0.0, k_auto_33 = 0.0, k_auto_12 = 0.0;
    double k_cross_13 = 0.0, k_cross_23 = 0.0;

    if (params.epsilon() > 0.0) {
        const KernelSplit ker(params);
        const SmoothedPair u1 = smooth_both(trigger1, ker);
        const SmoothedPair u3 = smooth_both(signal, ker);

        const double i11_mu = dot_trapz(trigger1, u1.mu);
        const double i11_la = dot_trapz(trigger1, u1.lambda);
        const double i22_mu = dot_trapz(trigger2, exp_smooth(grid, trigger2.values(), ker.mu));
        const double i22_la = dot_trapz(trigger2, exp_smooth(grid, trigger2.values(), ker.lambda));
        const double i12_mu = dot_trapz(trigger2, u1.mu);
        const double i12_la = dot_trapz(trigger2, u1.lambda);
        const double i13_mu = dot_trapz(trigger1, u3.mu);
        const double i13_la = dot_trapz(trigger1, u3.lambda);
        const double i23_mu = dot_trapz(trigger2, u3.mu);
        const double i23_la = dot_trapz(trigger2, u3.lambda);
        const double i33_mu = dot_trapz(signal, u3.mu);
        const double i33_la = dot_trapz(signal, u3.lambda);

        k_auto_11 = ker.p * i11_mu - ker.q * i11_la;
        k_auto_22 = ker.p * i22_mu - ker.q * i22_la;
        k_auto_33 = ker.p * i33_mu - ker.q * i33_la;
        k_auto_12 = ker.p * i12_mu - ker.q * i12_la;
        k_cross_13 = ker.p * i13_mu + ker.q * i13_la;
        k_cross_23 = ker.p * i23_mu + ker.q * i23_la;
    }

    const double se = std::sqrt(eta_t * eta_s);
    CovMatrix6::Mat6 m = CovMatrix6::Mat6::Identity();
    // x block: indices 0 (x1), 2 (x2), 4 (x3)
    m(0, 0) = 1.0 + 2.0 * eta_t * k_auto_11;
    m(2, 2) = 1.0 + 2.0 * eta_t * k_auto_22;
    m(4, 4) = 1.0 + 2.0 * eta_s * k_auto_33;
    m(0, 2) = m(2, 0) = 2.0 * eta_t * k_auto_12;
    m(0, 4) = m(4, 0) = 2.0 * se * k_cross_13;
    m(2, 4) = m(4, 2) = 2.0 * se * k_cross_23;
    // p block: indices 1 (p1), 3 (p2), 5 (p3); trigger-signal terms flip sign
    m(1, 1) = m(0, 0);
    m(3, 3) = m(2, 2);
    m(5, 5) = m(4, 4);
    m(1, 3) = m(3, 1) = m(0, 2);
    m(1, 5) = m(5, 1) = -m(0, 4);
    m(3, 5) = m(5, 3) = -m(2, 4);
    return CovMatrix6(m);
}

} // namespace hfock
