#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heralded_fock/two_mode.hpp"
#include "heralded_fock/wigner.hpp"
#include "support.hpp"

using namespace hfock;

TEST_CASE("conditional number distribution") {
    const double r = 0.5;
    const NumberDistribution d = conditional_number_distribution(r, 60);
    CHECK(d.p[0] == 0.0);
    CHECK(d.p[1] == 0.0);
    // p(2) = 1/cosh^6 r, closed form oracle
    CHECK(d.p[2] == doctest::Approx(1.0 / std::pow(std::cosh(r), 6)).epsilon(1e-13));
    CHECK(d.p[2] == doctest::Approx(0.4864179516924279).epsilon(1e-12));

    double total = 0.0;
    for (double v : d.p) total += v;
    CHECK(total + d.tail == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.tail < 1e-8);

    CHECK_THROWS_AS(conditional_number_distribution(0.0), std::domain_error);
    CHECK_THROWS_AS(conditional_number_distribution(0.5, 1), std::invalid_argument);
}

TEST_CASE("distribution is unimodal beyond n = 2 for small r") {
    const NumberDistribution d = conditional_number_distribution(0.3, 40);
    for (std::size_t n = 2; n + 1 < d.p.size(); ++n) CHECK(d.p[n + 1] < d.p[n]);
}

TEST_CASE("phase-space route reproduces the closed form") {
    for (double r : {0.1, 0.3, 0.5, 0.7, 1.0, 1.5}) {
        const double closed = two_mode_fidelity_closed_form(r);
        CHECK(std::abs(two_mode_fidelity_via_wigner(r) - closed) < 1e-6);
    }
    // r -> 0+: fidelity approaches unity
    CHECK(two_mode_fidelity_via_wigner(1e-3) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("wigner route agrees with the number-basis route") {
    for (double r : {0.1, 0.3, 0.7}) {
        const NumberDistribution d = conditional_number_distribution(r, 80);
        CHECK(std::abs(two_mode_fidelity_via_wigner(r) - d.p[2]) < 1e-6);
    }
}

TEST_CASE("click wigner function is normalized") {
    for (double r : {0.2, 0.8}) {
        const double total = testsupport::radial_plane_integral(
            [r](double x, double p) { return two_mode_wigner_click(r, x, p); },
            120.0 * std::cosh(2 * r));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}
