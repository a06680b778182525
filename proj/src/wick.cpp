#include "heralded_fock/wick.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>

#include "heralded_fock/correlation.hpp"

namespace hfock {

namespace {

int channel_key(const FieldOp& op) {
    switch (op.kind) {
        case BeamKind::TriggerPlus: return -1;
        case BeamKind::SignalMinus: return -2;
        case BeamKind::Vacuum: return op.vac_channel;
    }
    return -3;
}

void require_normal_order(const OperatorString& ops) {
    std::map<int, bool> annihilator_seen;
    for (const auto& op : ops) {
        const int key = channel_key(op);
        if (!op.dagger)
            annihilator_seen[key] = true;
        else if (annihilator_seen.count(key) && annihilator_seen[key])
            throw std::invalid_argument(
                "gaussian_moment: operator string must be normally ordered per beam");
    }
}

/// Pair expectation <op_i op_j> with op_i left of op_j, weights excluded.
double pair_moment(const FieldOp& a, const FieldOp& b, const OpoParams& params) {
    if (a.kind == BeamKind::Vacuum || b.kind == BeamKind::Vacuum)
        return 0.0; // vacuum creators pair to nothing in normal order
    const double tau = a.time - b.time;
    if (a.kind == b.kind) {
        // same beam: only <a^dag a> survives
        if (a.dagger && !b.dagger) return auto_correlation(params, tau);
        return 0.0;
    }
    // opposite beams: <a a> and <a^dag a^dag> survive (both real, equal)
    if (a.dagger == b.dagger) return cross_correlation(params, tau);
    return 0.0;
}

std::complex<double> pairing_sum(const std::vector<std::vector<double>>& pm,
                                 std::vector<int>& unpaired, std::uint64_t& count) {
    if (unpaired.empty()) {
        ++count;
        return 1.0;
    }
    const int first = unpaired.front();
    std::complex<double> total = 0.0;
    for (std::size_t pick = 1; pick < unpaired.size(); ++pick) {
        const int partner = unpaired[pick];
        std::vector<int> rest;
        rest.reserve(unpaired.size() - 2);
        for (std::size_t i = 1; i < unpaired.size(); ++i)
            if (i != pick) rest.push_back(unpaired[i]);
        const double w = pm[static_cast<std::size_t>(first)][static_cast<std::size_t>(partner)];
        // still recurse on zero-weight branches so the pairing count is exact
        total += w * pairing_sum(pm, rest, count);
    }
    return total;
}

} // namespace

MomentResult gaussian_moment_detailed(const OperatorString& ops, const OpoParams& params) {
    if (ops.size() > 12) {
        const std::size_t k = ops.size() / 2;
        std::uint64_t est = 1;
        for (std::size_t i = 1; i <= k; ++i) est *= 2 * i - 1;
        throw std::invalid_argument("gaussian_moment: " + std::to_string(ops.size()) +
                                    " operators refused (about " + std::to_string(est) +
                                    " pairings)");
    }
    if (ops.size() % 2 == 1) return {0.0, 0};
    if (ops.empty()) return {1.0, 1};
    require_normal_order(ops);

    std::complex<double> prefactor = 1.0;
    for (const auto& op : ops) prefactor *= op.dagger ? std::conj(op.weight) : op.weight;

    const std::size_t n = ops.size();
    std::vector<std::vector<double>> pm(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pm[i][j] = pair_moment(ops[i], ops[j], params);

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::uint64_t count = 0;
    const std::complex<double> value = pairing_sum(pm, idx, count);
    return {prefactor * value, count};
}

std::complex<double> gaussian_moment(const OperatorString& ops, const OpoParams& params) {
    return gaussian_moment_detailed(ops, params).value;
}

OperatorString conditional_numerator_ops(const ClickTimes& clicks,
                                         const std::vector<double>& primed,
                                         const std::vector<double>& double_primed) {
    OperatorString ops;
    ops.reserve(2 * clicks.size() + primed.size() + double_primed.size());
    for (std::size_t i = 0; i < clicks.size(); ++i)
        ops.push_back({BeamKind::TriggerPlus, true, clicks[i]});
    for (double t : primed) ops.push_back({BeamKind::SignalMinus, true, t});
    for (double t : double_primed) ops.push_back({BeamKind::SignalMinus, false, t});
    for (std::size_t i = clicks.size(); i-- > 0;)
        ops.push_back({BeamKind::TriggerPlus, false, clicks[i]});
    return ops;
}

OperatorString conditional_denominator_ops(const ClickTimes& clicks) {
    OperatorString ops;
    for (std::size_t i = 0; i < clicks.size(); ++i)
        ops.push_back({BeamKind::TriggerPlus, true, clicks[i]});
    for (std::size_t i = clicks.size(); i-- > 0;)
        ops.push_back({BeamKind::TriggerPlus, false, clicks[i]});
    return ops;
}

double conditional_moment_at_epsilon(const ClickTimes& clicks, const std::vector<double>& primed,
                                     const std::vector<double>& double_primed,
                                     const OpoParams& params) {
    if (params.epsilon() <= 0.0)
        throw std::domain_error("conditional_moment_at_epsilon: need epsilon > 0");
    const std::complex<double> num =
        gaussian_moment(conditional_numerator_ops(clicks, primed, double_primed), params);
    const std::complex<double> den =
        gaussian_moment(conditional_denominator_ops(clicks), params);
    return (num / den).real();
}

ConditionalMoment conditional_moment_lhs(const ClickTimes& clicks,
                                         const std::vector<double>& primed,
                                         const std::vector<double>& double_primed,
                                         const OpoParams& params) {
    if (primed.size() != double_primed.size() || primed.size() > clicks.size())
        return {0.0, false};
    const double g = params.gamma();
    const double e1 = 1e-3 * g, e2 = 1e-4 * g;
    const OpoParams p1 = params.with_epsilon(e1);
    const OpoParams p2 = params.with_epsilon(e2);
    const double r1 = conditional_moment_at_epsilon(clicks, primed, double_primed, p1);
    const double r2 = conditional_moment_at_epsilon(clicks, primed, double_primed, p2);
    // the ratio is an even series in epsilon; eliminate the epsilon^2 term
    const double value = (e1 * e1 * r2 - e2 * e2 * r1) / (e1 * e1 - e2 * e2);
    const double correction = std::abs(value - r2);
    const bool warn = params.epsilon() > 0.02 * g ||
                      correction > 1e-3 * std::max(std::abs(value), 1e-30);
    return {value, warn};
}

double conditional_moment_rhs(const ClickTimes& clicks, const std::vector<double>& primed,
                              const std::vector<double>& double_primed, double gamma) {
    const auto n = clicks.size();
    const auto m = primed.size();
    if (m != double_primed.size() || m > n) return 0.0;
    if (n > 6)
        throw std::invalid_argument("conditional_moment_rhs: n > 6 permutation sum refused");

    const auto g_val = [&](std::size_t i, double t) {
        return std::sqrt(0.5 * gamma) * std::exp(-0.5 * gamma * std::abs(t - clicks[i]));
    };
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram[i][j] = overlap(clicks[i], clicks[j], gamma);

    std::vector<std::size_t> pi(n), pj(n);
    std::iota(pi.begin(), pi.end(), 0);
    double numerator = 0.0;
    double denominator = 0.0;
    do {
        // denominator permutation sum: sum_Pj prod_r I_{r, Pj(r)}
        double dprod = 1.0;
        for (std::size_t r = 0; r < n; ++r) dprod *= gram[r][pi[r]];
        denominator += dprod;

        std::iota(pj.begin(), pj.end(), 0);
        do {
            double term = 1.0;
            for (std::size_t r = 0; r < m; ++r)
                term *= g_val(pi[r], primed[r]) * g_val(pj[r], double_primed[r]);
            for (std::size_t r = m; r < n; ++r) term *= gram[pi[r]][pj[r]];
            numerator += term;
        } while (std::next_permutation(pj.begin(), pj.end()));
    } while (std::next_permutation(pi.begin(), pi.end()));

    double fact = 1.0;
    for (std::size_t i = 2; i <= n - m; ++i) fact *= static_cast<double>(i);
    return numerator / fact / denominator;
}

namespace {

using Composite = std::vector<FieldOp>; // alternatives to be summed

std::complex<double> composite_moment(const std::vector<Composite>& slots,
                                      const OpoParams& params) {
    std::vector<std::size_t> choice(slots.size(), 0);
    std::complex<double> total = 0.0;
    while (true) {
        OperatorString ops;
        ops.reserve(slots.size());
        for (std::size_t s = 0; s < slots.size(); ++s) ops.push_back(slots[s][choice[s]]);
        total += gaussian_moment(ops, params);
        std::size_t s = 0;
        for (; s < slots.size(); ++s) {
            if (++choice[s] < slots[s].size()) break;
            choice[s] = 0;
        }
        if (s == slots.size()) break;
    }
    return total;
}

} // namespace

SplitReport detector_splitting_check(const ClickTimes& clicks,
                                     const std::vector<std::vector<std::complex<double>>>& split,
                                     const OpoParams& params) {
    if (clicks.size() != 2)
        throw std::invalid_argument("detector_splitting_check: exactly two clicks");
    if (split.empty()) throw std::invalid_argument("detector_splitting_check: empty split");
    const std::size_t cols = split.front().size();
    for (const auto& row : split) {
        if (row.size() != cols || cols < 1)
            throw std::invalid_argument("detector_splitting_check: ragged split matrix");
        double norm = 0.0;
        for (const auto& c : row) norm += std::norm(c);
        if (std::abs(norm - 1.0) > 1e-10)
            throw std::invalid_argument(
                "detector_splitting_check: split rows must be unit norm (sum |c|^2 = 1)");
    }

    const double g = params.gamma();
    const double t1 = clicks[0], t2 = clicks[1];
    // fixed probe moments: (primed, double_primed) time lists
    const std::vector<std::pair<std::vector<double>, std::vector<double>>> probes = {
        {{t1 + 0.3 / g}, {t1 + 0.3 / g}},
        {{t2 - 0.2 / g}, {t1 + 0.5 / g}},
        {{t1 + 0.1 / g, t2 + 0.4 / g}, {t1 - 0.3 / g, t2 + 0.2 / g}},
    };

    const auto detector_op = [&](std::size_t det, bool dagger, double time) {
        Composite alts;
        alts.push_back({BeamKind::TriggerPlus, dagger, time, split[det][0], 0});
        for (std::size_t v = 1; v < cols; ++v)
            alts.push_back({BeamKind::Vacuum, dagger, time, split[det][v], static_cast<int>(v)});
        return alts;
    };

    double worst = 0.0;
    int configs = 0;
    for (std::size_t j = 0; j < split.size(); ++j) {
        for (std::size_t k = 0; k < split.size(); ++k) {
            for (const auto& probe : probes) {
                // baseline: clicks taken directly on the undivided beam
                const std::complex<double> base_num =
                    gaussian_moment(conditional_numerator_ops(clicks, probe.first, probe.second),
                                    params);
                const std::complex<double> base_den =
                    gaussian_moment(conditional_denominator_ops(clicks), params);
                const std::complex<double> baseline = base_num / base_den;

                std::vector<Composite> num_slots, den_slots;
                num_slots.push_back(detector_op(j, true, t1));
                num_slots.push_back(detector_op(k, true, t2));
                for (double t : probe.first)
                    num_slots.push_back({FieldOp{BeamKind::SignalMinus, true, t}});
                for (double t : probe.second)
                    num_slots.push_back({FieldOp{BeamKind::SignalMinus, false, t}});
                num_slots.push_back(detector_op(k, false, t2));
                num_slots.push_back(detector_op(j, false, t1));

                den_slots.push_back(detector_op(j, true, t1));
                den_slots.push_back(detector_op(k, true, t2));
                den_slots.push_back(detector_op(k, false, t2));
                den_slots.push_back(detector_op(j, false, t1));

                const std::complex<double> num = composite_moment(num_slots, params);
                const std::complex<double> den = composite_moment(den_slots, params);
                if (std::abs(den) == 0.0)
                    throw std::domain_error(
                        "detector_splitting_check: vanishing click probability for detector pair");
                const std::complex<double> ratio = num / den;
                const double dev = std::abs(ratio - baseline) / std::max(std::abs(baseline), 1e-30);
                worst = std::max(worst, dev);
                ++configs;
            }
        }
    }
    return {worst, configs};
}

} // namespace hfock
