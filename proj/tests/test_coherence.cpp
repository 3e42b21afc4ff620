#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rtnecho/coherence.hpp"

using namespace rtnecho;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("free coherence boundary values") {
    CHECK(free_coherence(RtnParams::from_g(3.0), 0.0).value == std::complex<double>(1.0));

    // no coupling: g = 0 implies mu = 1, A = 1, flat unit coherence
    const auto quiet = free_coherence(RtnParams(0.0, 1.0), 5.0);
    CHECK(std::abs(quiet.value) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quiet.value.real() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(free_coherence(RtnParams::from_g(1.0), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(free_coherence(RtnParams::from_g(1.0), NAN), std::invalid_argument);
}

TEST_CASE("free coherence at the branch point") {
    // mu -> 0 limit of the closed form: |q| = e^{-x/2} (1 + x/2); at
    // gamma t = 2 this is 2/e. Cross-checked against the direct formula
    // evaluated just off the branch point.
    const auto at_branch = free_coherence(RtnParams::from_g(1.0), 2.0);
    CHECK(std::abs(at_branch.value) == doctest::Approx(0.7357588823428846).epsilon(1e-12));

    for (double g : {1.0 - 1e-6, 1.0 + 1e-6}) {
        const auto nearby = free_coherence(RtnParams::from_g(g), 2.0);
        CHECK(std::abs(nearby.value - at_branch.value) < 10.0 * 1e-6);
    }
}

TEST_CASE("echo coherence boundary values") {
    CHECK(echo_coherence(RtnParams::from_g(3.0), 0.0).value == std::complex<double>(1.0));
    CHECK_THROWS_AS(echo_coherence(RtnParams::from_g(1.0), -1.0), std::invalid_argument);

    // reported time is the total 2*dt
    CHECK(echo_coherence(RtnParams::from_g(2.0), 0.3).time == doctest::Approx(0.6));
}

TEST_CASE("echo coherence at the branch point") {
    // mu -> 0 limit e^{-x}(1 + x + x^2/2); at x = 1 this is 2.5/e.
    const auto at_branch = echo_coherence(RtnParams::from_g(1.0), 1.0);
    CHECK(at_branch.value.real() == doctest::Approx(0.9196986029286058).epsilon(1e-12));

    for (double g : {1.0 - 1e-6, 1.0 + 1e-6}) {
        const auto nearby = echo_coherence(RtnParams::from_g(g), 1.0);
        CHECK(std::abs(nearby.value - at_branch.value) < 10.0 * 1e-6);
    }
}

TEST_CASE("echo coherence is real over the parameter grid") {
    for (double g : {0.0, 0.3, 0.7, 0.999, 1.001, 2.0, 7.0, 20.0}) {
        for (double x = 0.0; x <= 10.0; x += 0.05) {
            const auto q = echo_coherence(RtnParams::from_g(g), x);
            CHECK(std::abs(q.value.imag()) <= 1e-10);
        }
    }
}

TEST_CASE("coherence magnitudes never exceed one") {
    for (double g = 0.0; g <= 20.0; g += 0.25) {
        const RtnParams params = RtnParams::from_g(g);
        for (double x = 0.0; x <= 10.0; x += 0.05) {
            CHECK(std::abs(free_coherence(params, x).value) <= 1.0 + 1e-10);
            CHECK(std::abs(echo_coherence(params, x).value) <= 1.0 + 1e-10);
        }
    }
    // near the branch tolerance crossover as well
    for (double g : {1.0 - 1e-5, 1.0 - 1e-9, 1.0, 1.0 + 1e-9, 1.0 + 1e-5}) {
        const RtnParams params = RtnParams::from_g(g);
        for (double x : {0.1, 1.0, 5.0}) {
            CHECK(std::abs(free_coherence(params, x).value) <= 1.0 + 1e-10);
            CHECK(std::abs(echo_coherence(params, x).value) <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("free coherence with delta_p0 keeps unit bound and t=0 value") {
    for (double dp0 : {-1.0, -0.5, 0.5, 1.0}) {
        const RtnParams params = RtnParams::from_g(2.0, 1.0, dp0);
        CHECK(free_coherence(params, 0.0).value == std::complex<double>(1.0));
        for (double x : {0.2, 1.0, 4.0})
            CHECK(std::abs(free_coherence(params, x).value) <= 1.0 + 1e-10);
    }
}

TEST_CASE("weak coupling decay follows the golden-rule rate") {
    // g = 0.1: |q| non-increasing and within 1% of exp(-(v^2/4gamma) t)
    // for gamma t in [5, 20].
    const RtnParams params(0.1, 1.0);
    double prev = 1.0;
    for (double x = 0.0; x <= 20.0; x += 0.1) {
        const double mag = std::abs(free_coherence(params, x).value);
        CHECK(mag <= prev + 1e-12);
        prev = mag;
        if (x >= 5.0) {
            const double golden = std::exp(-params.v * params.v / (4.0 * params.gamma) * x);
            CHECK(mag == doctest::Approx(golden).epsilon(0.01));
        }
    }
}

TEST_CASE("strong coupling free envelope matches the large-g form") {
    // The approximation replaces the beat frequency sqrt(g^2-1) by g and
    // drops an O(1/g) phase shift, so near the displaced coherence zeros
    // the pointwise error peaks at 0.125 for g = 7 (at gamma t near 0.5).
    const RtnParams params = RtnParams::from_g(7.0);
    double max_diff = 0.0;
    for (double x = 0.0; x <= 3.0; x += 0.01) {
        const double exact = std::abs(free_coherence(params, x).value);
        const double approx = free_coherence_large_g(params, x).value.real();
        max_diff = std::max(max_diff, std::abs(exact - approx));
    }
    CHECK(max_diff <= 0.13);
    CHECK(max_diff >= 0.05); // the measured worst case really is this large
    // cosine zero: e^{-pi/14} cos(pi/2) = 0
    CHECK(free_coherence_large_g(params, kPi / 7.0).value.real() ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(free_coherence_large_g(params, 0.0).value.real() == 1.0);
}

TEST_CASE("strong coupling echo approximation") {
    const RtnParams params = RtnParams::from_g(7.0);
    CHECK(echo_coherence_large_g(params, 0.0).value == std::complex<double>(1.0));

    // sin(2 pi) = 0: plain e^{-2 pi / 7}
    const double at_plateau = echo_coherence_large_g(params, 2.0 * kPi / 7.0).value.real();
    CHECK(at_plateau == doctest::Approx(0.40754745421264837).epsilon(1e-12));

    double max_diff = 0.0;
    for (double x = 0.2; x <= 3.0; x += 0.005) {
        const double exact = echo_coherence(params, x).value.real();
        const double approx = echo_coherence_large_g(params, x).value.real();
        max_diff = std::max(max_diff, std::abs(exact - approx));
    }
    CHECK(max_diff <= 0.05);
}

TEST_CASE("echo protection is third order in the pulse separation") {
    // (1 - q_e) / (g^2 x^3 / 6) -> 1 as x -> 0; Richardson-style check at
    // x = 1e-3 and 1e-4.
    for (double g : {0.5, 2.0, 7.0}) {
        const RtnParams params = RtnParams::from_g(g);
        // at 1e-4 the loss 1-q_e sits a few orders above the double
        // cancellation floor, so 1% still holds but not much tighter
        for (double x : {1e-3, 1e-4}) {
            const double q = echo_coherence(params, x).value.real();
            const double ratio = (1.0 - q) / (g * g * x * x * x / 6.0);
            CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
        }
    }
}

TEST_CASE("strong coupling free magnitude oscillates as e^{-x/2} |cos(g x / 2)|") {
    const RtnParams params = RtnParams::from_g(7.0);
    for (double x : {0.5, 1.0, 2.0, 3.0}) {
        const double exact = std::abs(free_coherence(params, x).value);
        const double approx = std::exp(-x / 2.0) * std::abs(std::cos(7.0 * x / 2.0));
        CHECK(std::abs(exact - approx) <= 0.13);
    }
}
