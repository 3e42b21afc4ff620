#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rtnecho/noise_model.hpp"
#include "rtnecho/rng.hpp"

using namespace rtnecho;

TEST_CASE("derived g is the coupling-to-switching ratio") {
    CHECK(derived_g(RtnParams(0.7, 1.0)) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(derived_g(RtnParams(7.0, 1.0)) == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(derived_g(RtnParams(0.0, 5.0)) == 0.0);
    CHECK(RtnParams::from_g(7.0, 2.0).v == doctest::Approx(14.0));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(RtnParams(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RtnParams(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RtnParams(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(RtnParams(1.0, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(RtnParams(NAN, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RtnParams(1.0, INFINITY), std::invalid_argument);
}

TEST_CASE("branch parameter mu") {
    // real branch, g <= 1
    auto mu_weak = RtnParams::from_g(0.6).mu();
    CHECK(mu_weak.real() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(mu_weak.imag() == 0.0);
    // imaginary branch, g > 1, positive imaginary part
    auto mu_strong = RtnParams::from_g(7.0).mu();
    CHECK(mu_strong.real() == 0.0);
    CHECK(mu_strong.imag() == doctest::Approx(std::sqrt(48.0)).epsilon(1e-15));
}

TEST_CASE("Lorentzian spectrum values") {
    CHECK(spectrum(RtnParams(1.0, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spectrum(RtnParams(1.0, 1.0), 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(spectrum(RtnParams(2.0, 1.0), 0.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("trajectory sampling basics") {
    RtnParams params(1.0, 1.0);

    SUBCASE("vanishing horizon leaves no time to switch") {
        SplitMix64 rng(7);
        const auto traj = sample_trajectory(params, 1e-12, rng);
        CHECK(traj.switch_times.empty());
        CHECK(traj.horizon == 1e-12);
    }

    SUBCASE("non-finite or non-positive horizon is rejected") {
        SplitMix64 rng(7);
        CHECK_THROWS_AS(sample_trajectory(params, INFINITY, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_trajectory(params, NAN, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_trajectory(params, 0.0, rng), std::invalid_argument);
    }

    SUBCASE("identical seeds give identical trajectories") {
        SplitMix64 rng1(123), rng2(123);
        const auto a = sample_trajectory(params, 10.0, rng1);
        const auto b = sample_trajectory(params, 10.0, rng2);
        CHECK(a.initial_level == b.initial_level);
        CHECK(a.switch_times == b.switch_times);
    }

    SUBCASE("switch times are strictly increasing and within the horizon") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            SplitMix64 rng = trajectory_stream(42, 0, seed);
            const auto traj = sample_trajectory(params, 5.0, rng);
            for (std::size_t i = 0; i < traj.switch_times.size(); ++i) {
                CHECK(traj.switch_times[i] <= traj.horizon);
                CHECK(traj.switch_times[i] > 0.0);
                if (i > 0) CHECK(traj.switch_times[i] > traj.switch_times[i - 1]);
            }
        }
    }
}

TEST_CASE("level_at and occupation_time walk the switch sequence") {
    Trajectory traj;
    traj.initial_level = 1;
    traj.switch_times = {1.0, 2.5, 4.0};
    traj.horizon = 5.0;
    CHECK(traj.level_at(0.5) == 1);
    CHECK(traj.level_at(1.5) == 0);
    CHECK(traj.level_at(3.0) == 1);
    CHECK(traj.level_at(4.5) == 0);
    // occupied in level 1: [0,1) and [2.5,4)
    CHECK(traj.occupation_time(0.0, 5.0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(traj.occupation_time(0.5, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(traj.occupation_time(4.0, 5.0) == doctest::Approx(0.0));
    CHECK(traj.occupation_time(2.0, 2.5) == doctest::Approx(0.0));
}

TEST_CASE("mean switch count matches the Poisson rate gamma/2") {
    // Equal dwell rates make the switch process Poisson(horizon * gamma / 2).
    RtnParams params(1.0, 1.0);
    const double horizon = 10.0;
    const std::size_t n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng = trajectory_stream(314, 0, i);
        const auto traj = sample_trajectory(params, horizon, rng);
        const double count = static_cast<double>(traj.switch_times.size());
        sum += count;
        sum_sq += count * count;
    }
    const double mean = sum / n;
    const double var = (sum_sq - sum * sum / n) / (n - 1.0);
    const double se = std::sqrt(var / n);
    const double expected = horizon * params.gamma / 2.0;
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("initial level distribution follows delta_p0") {
    const std::size_t n = 20000;

    SUBCASE("symmetric for delta_p0 = 0") {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            SplitMix64 rng = trajectory_stream(99, 0, i);
            ones += sample_trajectory(RtnParams(1.0, 1.0, 0.0), 0.1, rng).initial_level;
        }
        const double frac = static_cast<double>(ones) / n;
        const double se = std::sqrt(0.25 / n);
        CHECK(std::abs(frac - 0.5) <= 3.0 * se);
    }

    SUBCASE("deterministic at the extremes") {
        for (std::size_t i = 0; i < 100; ++i) {
            SplitMix64 rng_up = trajectory_stream(5, 0, i);
            CHECK(sample_trajectory(RtnParams(1.0, 1.0, 1.0), 0.1, rng_up).initial_level == 1);
            SplitMix64 rng_dn = trajectory_stream(5, 1, i);
            CHECK(sample_trajectory(RtnParams(1.0, 1.0, -1.0), 0.1, rng_dn).initial_level == 0);
        }
    }
}

TEST_CASE("first dwell time is Exponential(gamma/2)") {
    // Kolmogorov-Smirnov at the 1% level on 1e4 samples.
    const RtnParams params(1.0, 2.0); // rate gamma/2 = 1
    const std::size_t n = 10000;
    std::vector<double> first_dwell;
    first_dwell.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng = trajectory_stream(2718, 0, i);
        const auto traj = sample_trajectory(params, 50.0, rng);
        REQUIRE(!traj.switch_times.empty());
        first_dwell.push_back(traj.switch_times.front());
    }
    std::sort(first_dwell.begin(), first_dwell.end());
    const double rate = params.gamma / 2.0;
    double d_stat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = 1.0 - std::exp(-rate * first_dwell[i]);
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i + 1) / n));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
    }
    const double critical = 1.628 / std::sqrt(static_cast<double>(n));
    CHECK(d_stat < critical);
}

TEST_CASE("autocorrelation of v*xi decays as (v^2/4) exp(-gamma |lag|)") {
    // Time-domain counterpart of the Lorentzian spectrum; pins the dwell
    // rate convention. 1e5 equilibrium trajectories, coarse lag grid.
    const RtnParams params(1.0, 1.0, 0.0);
    const std::size_t n = 100000;
    const double t0 = 0.5;
    const std::vector<double> lags{0.0, 0.5, 1.0, 2.0};
    const double horizon = t0 + 2.0 + 0.1;

    std::vector<std::vector<double>> samples(lags.size());
    std::vector<double> base(n);
    for (auto& s : samples) s.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng = trajectory_stream(1618, 0, i);
        const auto traj = sample_trajectory(params, horizon, rng);
        base[i] = params.v * traj.level_at(t0);
        for (std::size_t k = 0; k < lags.size(); ++k)
            samples[k][i] = params.v * traj.level_at(t0 + lags[k]);
    }
    const double mean0 = [&] {
        double s = 0.0;
        for (double b : base) s += b;
        return s / n;
    }();

    for (std::size_t k = 0; k < lags.size(); ++k) {
        double mean_k = 0.0;
        for (double s : samples[k]) mean_k += s;
        mean_k /= n;
        double cov = 0.0, var_prod = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = (base[i] - mean0) * (samples[k][i] - mean_k);
            cov += p;
            var_prod += p * p;
        }
        cov /= n;
        const double se = std::sqrt((var_prod / n - cov * cov) / n);
        const double expected = params.v * params.v / 4.0 * std::exp(-params.gamma * lags[k]);
        INFO("lag ", lags[k], " cov ", cov, " expected ", expected, " se ", se);
        CHECK(std::abs(cov - expected) <= 3.0 * se + 1e-12);
    }
}
