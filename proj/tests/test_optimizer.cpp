#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heralded_fock/optimizer.hpp"
#include "heralded_fock/wigner.hpp"
#include "support.hpp"

using namespace hfock;

TEST_CASE("zero-intensity optimal mode") {
    // coincident clicks: single cusped exponential = g_1
    const TimeGrid grid = default_grid(0.0, 0.0, 1.0);
    const SampledModeFunction f = optimal_mode_zero_intensity(0.0, 0.0, grid);
    const GMode g1 = g_mode(0.0, grid);
    for (std::size_t k = 0; k < f.size(); k += 13)
        CHECK(f[k] == doctest::Approx(g1.f[k]).epsilon(1e-12));

    // separated clicks: matches (g1 + g2) normalized, pointwise
    const TimeGrid grid8 = default_grid(0.0, 8.0, 1.0);
    const SampledModeFunction fa = optimal_mode_zero_intensity(0.0, 8.0, grid8);
    CHECK(fa.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    const GMode ga = g_mode(0.0, grid8);
    const GMode gb = g_mode(8.0, grid8);
    std::vector<double> sum(grid8.size());
    for (std::size_t k = 0; k < grid8.size(); ++k) sum[k] = ga.f[k] + gb.f[k];
    const SampledModeFunction ref = SampledModeFunction::from_shape(grid8, std::move(sum));
    double max_dev = 0.0;
    for (std::size_t k = 0; k < grid8.size(); ++k)
        max_dev = std::max(max_dev, std::abs(fa[k] - ref[k]));
    CHECK(max_dev < 1e-8);
}

TEST_CASE("optimized mode at low intensity stays at the analytic optimum") {
    const OpoParams p(1e-3, 1.0, 1.0, 1.0);
    const ClickTimes clicks{0.0, 0.0};
    const OptimizeResult res = optimize_mode(p, clicks);
    CHECK(res.fidelity > 1.0 - 1e-3);
    CHECK(res.mode.norm_sq() == doctest::Approx(1.0).epsilon(1e-8));

    const SampledModeFunction f0 = optimal_mode_zero_intensity(0.0, 0.0, res.mode.grid());
    double l2 = 0.0;
    for (std::size_t k = 0; k < f0.size(); ++k)
        l2 += (res.mode[k] - f0[k]) * (res.mode[k] - f0[k]);
    CHECK(std::sqrt(l2 * res.mode.grid().step()) < 1e-2);

    // numerical optimum barely improves on the analytic mode
    const double f_fixed = two_photon_fidelity_for_mode(p, clicks, f0);
    CHECK(res.fidelity >= f_fixed - 1e-12);
    CHECK(res.fidelity - f_fixed < 1e-4);
}

TEST_CASE("optimized mode sharpens and dips at eps/gamma = 0.08") {
    const OpoParams p(0.08, 1.0, 1.0, 1.0);
    const ClickTimes clicks{-2.0, 2.0};
    const OptimizeResult res = optimize_mode(p, clicks);
    const TimeGrid& grid = res.mode.grid();
    const SampledModeFunction f0 = optimal_mode_zero_intensity(-2.0, 2.0, grid);

    CHECK(res.fidelity > two_photon_fidelity_for_mode(p, clicks, f0));
    // sign gauge
    CHECK(res.mode[grid.index_near(-2.0)] > 0.0);
    // sharper peaks than the zero-intensity shape
    CHECK(res.mode[grid.index_near(-2.0)] > f0[grid.index_near(-2.0)]);
    // a dip on the outer flanks: the optimized mode falls below the
    // zero-intensity curve there
    double min_gap = 1e9;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.time(k);
        if (std::abs(t) > 3.0 && std::abs(t) < 8.0)
            min_gap = std::min(min_gap, res.mode[k] - f0[k]);
    }
    CHECK(min_gap < 0.0);
}

TEST_CASE("fidelity decreases with intensity") {
    const ClickTimes clicks{0.0, 0.0};
    double prev = 1.0;
    for (double eps : {1e-3, 0.08, 0.2}) {
        const double f = optimize_mode(OpoParams(eps, 1.0), clicks).fidelity;
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("objective is sign-gauge invariant") {
    const OpoParams p(0.08, 1.0);
    const ClickTimes clicks{0.0, 1.0};
    const TimeGrid grid = default_grid(0.0, 1.0, 1.0);
    const SampledModeFunction f = optimal_mode_zero_intensity(0.0, 1.0, grid);
    CHECK(two_photon_fidelity_for_mode(p, clicks, f) ==
          two_photon_fidelity_for_mode(p, clicks, f.negated()));
}

TEST_CASE("low intensity fidelity curve") {
    const OpoParams p(0.0, 1.0);
    const auto curve = fidelity_curve(p, {0.0, 0.4, 40.0}, true);
    CHECK(curve[0].fidelity == doctest::Approx(1.0).epsilon(1e-14));
    // exact closed form at gamma dt = 0.4
    const double i12 = overlap(0.0, 0.4);
    CHECK(curve[1].fidelity ==
          doctest::Approx((1 + i12) * (1 + i12) / (2 * (1 + i12 * i12))).epsilon(1e-14));
    CHECK(curve[2].fidelity == doctest::Approx(0.5).epsilon(1e-6));

    // quartic law is asymptotic: the ratio tends to 1 as the separation shrinks
    for (double gdt : {0.02, 0.05}) {
        const double f = fidelity_two_photon_low_intensity(gdt);
        const double law = std::pow(gdt / 4.0, 4);
        CHECK(std::abs((1.0 - f) / law - 1.0) < 0.05);
    }
}

TEST_CASE("finite-intensity curve sits below the low-intensity one") {
    const std::vector<double> seps = {0.0, 1.0, 3.0, 6.0};
    const auto low = fidelity_curve(OpoParams(0.0, 1.0), seps, true);
    OptimizerSettings quick;
    quick.max_iters = 1500;
    const auto finite = fidelity_curve(OpoParams(0.08, 1.0), seps, true, quick);
    const auto fixed = fidelity_curve(OpoParams(0.08, 1.0), seps, false);
    for (std::size_t i = 0; i < seps.size(); ++i) {
        CHECK(finite[i].fidelity < low[i].fidelity);
        CHECK(finite[i].fidelity >= fixed[i].fidelity - 1e-9);
        CHECK(finite[i].fidelity - fixed[i].fidelity < 0.01);
    }
}

TEST_CASE("per-sample ascent confirms the basis optimum") {
    // coarse grid keeps the free-form path cheap
    const OpoParams p(0.08, 1.0);
    const ClickTimes clicks{0.0, 1.0};
    const TimeGrid grid = TimeGrid::covering(-6.0, 7.0, 0.02);
    const OptimizeResult basis = optimize_mode(p, clicks, {}, grid);
    const OptimizeResult free = optimize_mode_per_sample(p, clicks, grid, 300);
    CHECK(free.fidelity <= basis.fidelity + 1e-3);
    CHECK(basis.fidelity <= free.fidelity + 1e-3);
    CHECK(free.mode.norm_sq() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("settings validation") {
    OptimizerSettings bad;
    bad.basis_size = 1;
    CHECK_THROWS_AS(optimize_mode(OpoParams(0.1, 1.0), ClickTimes{0.0, 1.0}, bad),
                    std::invalid_argument);
}

TEST_CASE("starved optimizer reports non-convergence but still a valid mode") {
    OptimizerSettings starved;
    starved.max_iters = 1;
    const OpoParams p(0.08, 1.0);
    const ClickTimes clicks{0.0, 1.0};
    const OptimizeResult res = optimize_mode(p, clicks, starved);
    CHECK_FALSE(res.converged);
    CHECK(res.mode.norm_sq() == doctest::Approx(1.0).epsilon(1e-8));
    // never worse than its best seed, the zero-intensity mode
    const SampledModeFunction f0 =
        optimal_mode_zero_intensity(clicks[0], clicks[1], res.mode.grid());
    CHECK(res.fidelity >= two_photon_fidelity_for_mode(p, clicks, f0) - 1e-12);
}
