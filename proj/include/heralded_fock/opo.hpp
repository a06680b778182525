#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hfock {

/// Thrown when an iterative routine fails to reach its target residual.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physical parameters of the below-threshold nondegenerate OPO.
///
/// epsilon is the nonlinear gain coefficient and gamma the output mirror
/// leakage rate (same units).  Below threshold means epsilon < gamma/2, so
/// that mu = gamma/2 - epsilon stays positive.  eta_t and eta_s are the
/// trigger and signal detector efficiencies.
class OpoParams {
  public:
    OpoParams(double epsilon, double gamma, double eta_t = 1.0, double eta_s = 1.0)
        : epsilon_(epsilon), gamma_(gamma), eta_t_(eta_t), eta_s_(eta_s) {
        if (!(gamma > 0.0))
            throw std::invalid_argument("OpoParams: gamma must be positive");
        if (!(epsilon >= 0.0) || !(epsilon < gamma / 2.0))
            throw std::invalid_argument(
                "OpoParams: need 0 <= epsilon < gamma/2 (below threshold), got epsilon/gamma = " +
                std::to_string(epsilon / gamma));
        if (!(eta_t >= 0.0 && eta_t <= 1.0) || !(eta_s >= 0.0 && eta_s <= 1.0))
            throw std::invalid_argument("OpoParams: efficiencies must lie in [0,1]");
    }

    double epsilon() const { return epsilon_; }
    double gamma() const { return gamma_; }
    double eta_t() const { return eta_t_; }
    double eta_s() const { return eta_s_; }

    /// lambda = gamma/2 + epsilon (fast decay branch).
    double lambda() const { return gamma_ / 2.0 + epsilon_; }
    /// mu = gamma/2 - epsilon (slow decay branch); positive below threshold.
    double mu() const { return gamma_ / 2.0 - epsilon_; }

    OpoParams with_epsilon(double eps) const { return {eps, gamma_, eta_t_, eta_s_}; }
    OpoParams with_eta_t(double eta) const { return {epsilon_, gamma_, eta, eta_s_}; }
    OpoParams with_eta_s(double eta) const { return {epsilon_, gamma_, eta_t_, eta}; }

  private:
    double epsilon_;
    double gamma_;
    double eta_t_;
    double eta_s_;
};

/// Ordered trigger detector click instants (nondecreasing, at least one).
class ClickTimes {
  public:
    explicit ClickTimes(std::vector<double> times) : times_(std::move(times)) {
        if (times_.empty())
            throw std::invalid_argument("ClickTimes: need at least one click");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (times_[i] < times_[i - 1])
                throw std::invalid_argument("ClickTimes: click instants must be nondecreasing");
    }
    ClickTimes(std::initializer_list<double> times) : ClickTimes(std::vector<double>(times)) {}

    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }

  private:
    std::vector<double> times_;
};

} // namespace hfock
