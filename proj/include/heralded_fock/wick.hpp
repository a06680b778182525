#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "heralded_fock/opo.hpp"

namespace hfock {

/// Which continuum field an operator acts on.
enum class BeamKind { TriggerPlus, SignalMinus, Vacuum };

/// One (possibly weighted) field operator in a normally ordered product.
struct FieldOp {
    BeamKind kind = BeamKind::TriggerPlus;
    bool dagger = false;
    double time = 0.0;
    std::complex<double> weight{1.0, 0.0};
    int vac_channel = 0; // distinguishes independent vacuum ports
};

using OperatorString = std::vector<FieldOp>;

struct MomentResult {
    std::complex<double> value;
    std::uint64_t pairings; // perfect pairings visited: (2k-1)!!
};

/// Expectation value of a normally ordered operator product in the Gaussian
/// OPO state, by explicit enumeration of all Wick pairings of the two-time
/// kernels.  Odd operator counts give exactly zero.  Strings that are not
/// normally ordered per beam are rejected (their pair moments would involve
/// delta functions).  At most 12 operators.
MomentResult gaussian_moment_detailed(const OperatorString& ops, const OpoParams& params);
std::complex<double> gaussian_moment(const OperatorString& ops, const OpoParams& params);

/// Builders for the conditional-moment strings:
/// numerator   [a+^dag(t_ci)] [a-^dag(t'_j)] [a-(t''_k)] [a+(t_cq)],
/// denominator [a+^dag(t_ci)] [a+(t_cq)].
OperatorString conditional_numerator_ops(const ClickTimes& clicks,
                                         const std::vector<double>& primed,
                                         const std::vector<double>& double_primed);
OperatorString conditional_denominator_ops(const ClickTimes& clicks);

/// Normalized conditional signal moment at one finite epsilon (ratio of the
/// two Wick enumerations above).
double conditional_moment_at_epsilon(const ClickTimes& clicks, const std::vector<double>& primed,
                                     const std::vector<double>& double_primed,
                                     const OpoParams& params);

struct ConditionalMoment {
    double value;
    bool truncation_warning; // requested epsilon is outside the low-order regime
};

/// epsilon -> 0 limit of the normalized conditional moment, by evaluating the
/// Wick ratio at epsilon/gamma = 1e-3 and 1e-4 and Richardson-extrapolating in
/// epsilon^2 (the ratio is an even series in epsilon).  Exactly zero when the
/// operator counts are unbalanced (m != p) or exceed the click number (m > n).
ConditionalMoment conditional_moment_lhs(const ClickTimes& clicks,
                                         const std::vector<double>& primed,
                                         const std::vector<double>& double_primed,
                                         const OpoParams& params);

/// The same conditional moment from the delta-contraction combinatorics of
/// the mode-occupation state: double permutation sums over g-function values
/// and overlaps, normalized by the Gram permanent.
double conditional_moment_rhs(const ClickTimes& clicks, const std::vector<double>& primed,
                              const std::vector<double>& double_primed, double gamma = 1.0);

struct SplitReport {
    double max_rel_deviation;
    int configurations; // (detector pair, probe) combinations compared
};

/// Verify that normalized conditional signal moments do not depend on how the
/// trigger beam is divided over detectors.  `split` has one row per detector;
/// column 0 multiplies the trigger field, the remaining columns independent
/// vacuum ports.  Rows must be unit norm.  Every ordered detector pair is
/// compared against the unsplit computation on a fixed set of probe moments.
SplitReport detector_splitting_check(const ClickTimes& clicks,
                                     const std::vector<std::vector<std::complex<double>>>& split,
                                     const OpoParams& params);

} // namespace hfock
