#pragma once

#include <Eigen/Dense>

#include "heralded_fock/correlation.hpp"
#include "heralded_fock/grid.hpp"
#include "heralded_fock/opo.hpp"

namespace hfock {

/// 6x6 covariance matrix over the quadrature order (x1, p1, x2, p2, x3, p3)
/// with the convention V_ij = <y_i y_j> + <y_j y_i>, so vacuum has V = I.
/// Modes 1 and 2 are the trigger click modes, mode 3 the signal mode.
class CovMatrix6 {
  public:
    using Mat6 = Eigen::Matrix<double, 6, 6>;

    explicit CovMatrix6(const Mat6& m) : m_(m) {}

    const Mat6& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    // x-quadrature entries, 1-based over (x1, p1, x2, p2, x3, p3)
    double v11() const { return m_(0, 0); }
    double v13() const { return m_(0, 2); }
    double v15() const { return m_(0, 4); }
    double v33() const { return m_(2, 2); }
    double v35() const { return m_(2, 4); }
    double v55() const { return m_(4, 4); }

    double symmetry_defect() const { return (m_ - m_.transpose()).cwiseAbs().maxCoeff(); }

    /// Smallest eigenvalue of V + i Omega (physicality requires >= 0 up to
    /// roundoff).  Omega is the standard symplectic form.
    double physicality_min_eigenvalue() const;

  private:
    Mat6 m_;
};

/// Unit-norm top hat of the given width centered at click_time, grid-snapped.
/// Width below one grid step is unresolvable and rejected.
SampledModeFunction trigger_top_hat(const TimeGrid& grid, double click_time, double width);

/// Covariance matrix of (trigger mode 1, trigger mode 2, signal mode) for the
/// OPO twin beams with detector efficiencies applied as scalar factors:
///   same-beam blocks   V_xx = V_pp = 1 + 2 eta K[f,f'; auto kernel]
///   trigger-signal     V_x1x3 = +2 sqrt(eta_t eta_s) K[f1,f3; cross kernel]
///                      V_p1p3 = -V_x1x3
/// and no x-p mixing.  The two trigger modes are treated as belonging to
/// distinct detector arms, so no mode-overlap commutator term enters their
/// cross element; this keeps the conditional state continuous when the click
/// separation goes to zero (the beam-splitting argument makes the conditional
/// state independent of that choice of arms).
CovMatrix6 assemble_covariance(const OpoParams& params, const SampledModeFunction& trigger1,
                               const SampledModeFunction& trigger2,
                               const SampledModeFunction& signal);

} // namespace hfock
