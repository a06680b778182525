#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hfock {

/// Uniform time grid t_k = start + k*step, k = 0..size-1.
class TimeGrid {
  public:
    TimeGrid(double start, double step, std::size_t size) : start_(start), step_(step), size_(size) {
        if (!(step > 0.0))
            throw std::invalid_argument("TimeGrid: step must be positive");
        if (size < 2)
            throw std::invalid_argument("TimeGrid: need at least two samples");
    }

    /// Grid spanning [lo, hi] with spacing <= step_hint (endpoints included).
    static TimeGrid covering(double lo, double hi, double step_hint) {
        if (!(hi > lo))
            throw std::invalid_argument("TimeGrid::covering: need hi > lo");
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step_hint)) + 1;
        return {lo, (hi - lo) / static_cast<double>(n - 1), n};
    }

    double start() const { return start_; }
    double step() const { return step_; }
    std::size_t size() const { return size_; }
    double time(std::size_t k) const { return start_ + step_ * static_cast<double>(k); }
    double end() const { return time(size_ - 1); }

    /// Index of the grid node nearest to t (t must lie inside the grid).
    std::size_t index_near(double t) const {
        if (t < start_ - 0.5 * step_ || t > end() + 0.5 * step_)
            throw std::invalid_argument("TimeGrid: time outside grid");
        auto k = static_cast<long>(std::llround((t - start_) / step_));
        if (k < 0) k = 0;
        if (k >= static_cast<long>(size_)) k = static_cast<long>(size_) - 1;
        return static_cast<std::size_t>(k);
    }

    bool operator==(const TimeGrid& o) const {
        return start_ == o.start_ && step_ == o.step_ && size_ == o.size_;
    }

  private:
    double start_;
    double step_;
    std::size_t size_;
};

/// Real temporal mode function sampled on a uniform grid.
///
/// The samples are normalized so that sum f_k^2 * step = 1 (unit L2 norm in
/// the rectangle-rule sense); the constructor rejects inputs off by more than
/// 1e-8.  Use from_shape() to build one from an arbitrary real shape.
class SampledModeFunction {
  public:
    SampledModeFunction(TimeGrid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("SampledModeFunction: value/grid size mismatch");
        const double n2 = norm_sq();
        if (std::abs(n2 - 1.0) > 1e-8)
            throw std::invalid_argument("SampledModeFunction: samples are not unit norm (|f|^2 = " +
                                        std::to_string(n2) + ")");
    }

    /// Normalize an arbitrary (nonzero) real shape to unit grid norm.
    static SampledModeFunction from_shape(TimeGrid grid, std::vector<double> shape) {
        if (shape.size() != grid.size())
            throw std::invalid_argument("SampledModeFunction: value/grid size mismatch");
        double n2 = 0.0;
        for (double v : shape) n2 += v * v;
        n2 *= grid.step();
        if (!(n2 > 0.0))
            throw std::invalid_argument("SampledModeFunction: zero shape cannot be normalized");
        const double s = 1.0 / std::sqrt(n2);
        for (double& v : shape) v *= s;
        return {grid, std::move(shape)};
    }

    /// Sample a callable shape on the grid and normalize.
    static SampledModeFunction from_function(TimeGrid grid, const std::function<double(double)>& f) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) v[k] = f(grid.time(k));
        return from_shape(grid, std::move(v));
    }

    const TimeGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }

    double norm_sq() const {
        double s = 0.0;
        for (double v : values_) s += v * v;
        return s * grid_.step();
    }

    SampledModeFunction negated() const {
        std::vector<double> v = values_;
        for (double& x : v) x = -x;
        return {grid_, std::move(v)};
    }

  private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Trapezoid rule for samples on a uniform grid.
double trapezoid(const std::vector<double>& f, double step);

/// L2 inner product of two equally sampled functions (trapezoid weights).
double inner_product(const SampledModeFunction& f, const SampledModeFunction& g);

/// Exact convolution of the piecewise-linear interpolant of f with the
/// two-sided exponential exp(-kappa|t - t'|), evaluated at every grid node.
/// Two O(N) sweeps; the |t - t'| kink is integrated in closed form on each
/// segment, so the only discretization error is the linear interpolation of f.
std::vector<double> exp_smooth(const TimeGrid& grid, const std::vector<double>& f, double kappa);

/// Double integral  \iint f(t) g(t') exp(-kappa|t-t'|) dt dt'  on a shared grid:
/// exp_smooth on g, trapezoid against f.
double exp_kernel_double_integral(const SampledModeFunction& f, const SampledModeFunction& g,
                                  double kappa);

/// Single integral  \int f(t') exp(-kappa|t0-t'|) dt'  for a grid node t0.
double exp_kernel_single_integral(const SampledModeFunction& f, double t0, double kappa);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

} // namespace hfock
