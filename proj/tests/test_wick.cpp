#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "heralded_fock/correlation.hpp"
#include "heralded_fock/wick.hpp"
#include "support.hpp"

using namespace hfock;

namespace {

double g1(double t, double tc) { return std::sqrt(0.5) * std::exp(-0.5 * std::abs(t - tc)); }

std::vector<std::vector<std::complex<double>>> balanced_split() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{s, s}, {s, -s}};
}

std::vector<std::vector<std::complex<double>>> random_unitary_rows(int m) {
    // QR of a random complex matrix; rows of Q are orthonormal
    Eigen::MatrixXcd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = std::complex<double>(testsupport::uniform(-1, 1), testsupport::uniform(-1, 1));
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
    std::vector<std::vector<std::complex<double>>> rows(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) rows[static_cast<std::size_t>(i)].push_back(q(i, j));
    return rows;
}

} // namespace

TEST_CASE("single pair reproduces the auto correlation") {
    const OpoParams p(0.08, 1.0);
    for (double tau : {0.0, 0.7, 3.0}) {
        const OperatorString ops = {{BeamKind::TriggerPlus, true, tau},
                                    {BeamKind::TriggerPlus, false, 0.0}};
        CHECK(gaussian_moment(ops, p).real() ==
              doctest::Approx(auto_correlation(p, tau)).epsilon(1e-14));
    }
}

TEST_CASE("four-operator equal-time moment is twice the squared intensity") {
    const OpoParams p(0.08, 1.0);
    const OperatorString ops = {{BeamKind::TriggerPlus, true, 0.0},
                                {BeamKind::TriggerPlus, true, 0.0},
                                {BeamKind::TriggerPlus, false, 0.0},
                                {BeamKind::TriggerPlus, false, 0.0}};
    const double a0 = auto_correlation(p, 0.0);
    CHECK(gaussian_moment(ops, p).real() == doctest::Approx(2.0 * a0 * a0).epsilon(1e-13));
    // consistent with the bunching ratio at zero separation
    CHECK(gaussian_moment(ops, p).real() / (a0 * a0) ==
          doctest::Approx(bunching_ratio(p, 0.0)).epsilon(1e-13));
}

TEST_CASE("odd operator counts vanish and pairings are counted") {
    const OpoParams p(0.1, 1.0);
    OperatorString odd = {{BeamKind::TriggerPlus, true, 0.0},
                          {BeamKind::TriggerPlus, true, 0.5},
                          {BeamKind::TriggerPlus, false, 0.0}};
    CHECK(gaussian_moment(odd, p) == std::complex<double>(0.0, 0.0));

    OperatorString ops;
    for (int i = 0; i < 4; ++i) ops.push_back({BeamKind::TriggerPlus, true, 0.1 * i});
    for (int i = 0; i < 4; ++i) ops.push_back({BeamKind::TriggerPlus, false, 0.1 * i});
    const MomentResult r = gaussian_moment_detailed(ops, p);
    CHECK(r.pairings == 105); // (2k-1)!! for k = 4
}

TEST_CASE("operator count guard") {
    const OpoParams p(0.1, 1.0);
    OperatorString ops(14, {BeamKind::TriggerPlus, true, 0.0});
    CHECK_THROWS_AS(gaussian_moment(ops, p), std::invalid_argument);
}

TEST_CASE("non normally ordered strings are rejected") {
    const OpoParams p(0.1, 1.0);
    const OperatorString bad = {{BeamKind::TriggerPlus, false, 0.0},
                                {BeamKind::TriggerPlus, true, 0.5}};
    CHECK_THROWS_AS(gaussian_moment(bad, p), std::invalid_argument);
    // opposite beams commute, so this order is fine
    const OperatorString ok = {{BeamKind::SignalMinus, false, 0.0},
                               {BeamKind::TriggerPlus, true, 0.5}};
    CHECK_NOTHROW(gaussian_moment(ok, p));
}

TEST_CASE("moments are multilinear in the operator weights") {
    const OpoParams p(0.15, 1.0);
    OperatorString ops = {{BeamKind::TriggerPlus, true, 0.0},
                          {BeamKind::SignalMinus, true, 0.4},
                          {BeamKind::SignalMinus, false, 0.9},
                          {BeamKind::TriggerPlus, false, 0.2}};
    const std::complex<double> base = gaussian_moment(ops, p);
    const std::complex<double> w1(1.3, -0.4), w2(0.2, 0.9);
    ops[0].weight = w1; // daggered: conjugated in the moment
    ops[2].weight = w2;
    CHECK(std::abs(gaussian_moment(ops, p) - std::conj(w1) * w2 * base) < 1e-14);
}

TEST_CASE("unbalanced conditional moments vanish exactly") {
    const OpoParams p(0.01, 1.0);
    const ClickTimes clicks{0.0, 1.0};
    CHECK(conditional_moment_lhs(clicks, {0.3}, {}, p).value == 0.0);
    CHECK(conditional_moment_lhs(clicks, {0.3, 0.5, 0.7}, {0.3, 0.5, 0.7}, p).value == 0.0);
    CHECK(conditional_moment_rhs(clicks, {0.3}, {}) == 0.0);
    CHECK(conditional_moment_rhs(clicks, {0.3, 0.5, 0.7}, {0.3, 0.5, 0.7}) == 0.0);
}

TEST_CASE("trivial conditional moments") {
    const OpoParams p(0.01, 1.0);
    const ClickTimes clicks{0.0, 2.0};
    CHECK(conditional_moment_rhs(clicks, {}, {}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(conditional_moment_lhs(clicks, {}, {}, p).value == doctest::Approx(1.0).epsilon(1e-12));

    // n = 1, m = p = 1 at equal probe times: g_1(t)^2
    const ClickTimes one{0.7};
    for (double t : {0.7, 1.2, 2.5}) {
        CHECK(conditional_moment_rhs(one, {t}, {t}) ==
              doctest::Approx(g1(t, 0.7) * g1(t, 0.7)).epsilon(1e-12));
        CHECK(conditional_moment_lhs(one, {t}, {t}, p).value ==
              doctest::Approx(g1(t, 0.7) * g1(t, 0.7)).epsilon(1e-8));
    }
}

TEST_CASE("coincident two-click moment matches two photons in g1") {
    const OpoParams p(0.01, 1.0);
    const ClickTimes clicks{0.0, 0.0};
    const double t1 = 0.4, t2 = -0.6;
    // <a^dag a^dag a a> of two photons in g_1: 2 g(t'_1) g(t'_2) g(t''_1) g(t''_2)
    const double expected = 2.0 * g1(t1, 0) * g1(t2, 0) * g1(t1, 0) * g1(t2, 0);
    CHECK(conditional_moment_rhs(clicks, {t1, t2}, {t1, t2}) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(conditional_moment_lhs(clicks, {t1, t2}, {t1, t2}, p).value ==
          doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("raw small-epsilon ratio is already close to the limit") {
    const OpoParams p(1e-4, 1.0);
    const ClickTimes clicks{0.0, 1.7};
    const std::vector<double> primed = {0.2, 1.9};
    const double raw = conditional_moment_at_epsilon(clicks, primed, primed, p);
    const double rhs = conditional_moment_rhs(clicks, primed, primed);
    CHECK(std::abs(raw - rhs) / std::abs(rhs) < 1e-3);
}

TEST_CASE("appendix identity on randomized configurations") {
    const OpoParams p(0.01, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(testsupport::uniform(0.0, 2.999));
        std::vector<double> ct(n);
        ct[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) ct[i] = ct[i - 1] + testsupport::uniform(0.0, 2.5);
        const ClickTimes clicks(ct);
        const std::size_t m = static_cast<std::size_t>(testsupport::uniform(0.0, 0.999 + n));
        std::vector<double> primed(m), dprimed(m);
        for (auto& t : primed) t = testsupport::uniform(-2.0, ct.back() + 2.0);
        for (auto& t : dprimed) t = testsupport::uniform(-2.0, ct.back() + 2.0);
        const double lhs = conditional_moment_lhs(clicks, primed, dprimed, p).value;
        const double rhs = conditional_moment_rhs(clicks, primed, dprimed);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("numerator scales as epsilon^max(2n, 2m)") {
    const struct {
        std::size_t n, m;
    } cases[] = {{1, 1}, {2, 1}, {2, 2}, {3, 2}};
    for (const auto& c : cases) {
        std::vector<double> ct(c.n);
        for (std::size_t i = 0; i < c.n; ++i) ct[i] = 0.8 * static_cast<double>(i);
        const ClickTimes clicks(ct);
        std::vector<double> primed(c.m), dprimed(c.m);
        for (std::size_t i = 0; i < c.m; ++i) {
            primed[i] = 0.3 + 0.5 * static_cast<double>(i);
            dprimed[i] = -0.2 + 0.4 * static_cast<double>(i);
        }
        const double e1 = 1e-3, e2 = 1e-4;
        const double n1 =
            std::abs(gaussian_moment(conditional_numerator_ops(clicks, primed, dprimed),
                                     OpoParams(e1, 1.0)));
        const double n2 =
            std::abs(gaussian_moment(conditional_numerator_ops(clicks, primed, dprimed),
                                     OpoParams(e2, 1.0)));
        const double slope = std::log(n1 / n2) / std::log(e1 / e2);
        const double expected = static_cast<double>(2 * std::max(c.n, c.m));
        CHECK(std::abs(slope - expected) < 0.01 * expected);
    }
}

TEST_CASE("truncation warning for large epsilon") {
    const ClickTimes clicks{0.0, 1.0};
    CHECK_FALSE(conditional_moment_lhs(clicks, {0.5}, {0.5}, OpoParams(1e-3, 1.0)).truncation_warning);
    CHECK(conditional_moment_lhs(clicks, {0.5}, {0.5}, OpoParams(0.2, 1.0)).truncation_warning);
}

TEST_CASE("detector splitting invariance") {
    const OpoParams p(0.08, 1.0);
    const ClickTimes clicks{0.0, 1.3};

    // trivial split
    const SplitReport trivial = detector_splitting_check(clicks, {{1.0}}, p);
    CHECK(trivial.max_rel_deviation < 1e-14);

    // balanced two-way split, clicks land on different detectors among others
    const SplitReport fifty = detector_splitting_check(clicks, balanced_split(), p);
    CHECK(fifty.max_rel_deviation < 1e-10);

    // random three-way split
    const SplitReport three = detector_splitting_check(clicks, random_unitary_rows(3), p);
    CHECK(three.max_rel_deviation < 1e-10);
    CHECK(three.configurations == 27); // 9 detector pairs x 3 probes

    // malformed split rows
    CHECK_THROWS_AS(detector_splitting_check(clicks, {{0.5, 0.5}}, p), std::invalid_argument);
}
