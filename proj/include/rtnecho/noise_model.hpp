// Random-telegraph noise channel: parameters and trajectory sampling.
//
// A fluctuator xi(t) switches between 0 and 1 with rate gamma; its
// equilibrium power spectrum is the Lorentzian v^2 gamma / (2(gamma^2 + w^2)).
// Matching the width of that Lorentzian fixes the per-direction flip rate to
// gamma/2, i.e. dwell times are Exponential(gamma/2) in either level.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rtnecho/rng.hpp"

namespace rtnecho {

/// One qubit-fluctuator channel.
struct RtnParams {
    double v;        ///< coupling strength (angular frequency units), >= 0
    double gamma;    ///< switching rate (inverse time), > 0
    double delta_p0; ///< initial impurity population difference in [-1, 1]

    /// Validates on construction; throws std::invalid_argument.
    RtnParams(double v, double gamma, double delta_p0 = 0.0);

    /// Dimensionless coupling-to-switching ratio g = v / gamma.
    double g() const { return v / gamma; }

    /// Branch parameter mu = principal sqrt(1 - g^2): real in [0,1] for
    /// g <= 1, purely imaginary with positive imaginary part for g > 1.
    std::complex<double> mu() const;

    /// Channel with the ratio g prescribed directly (v = g * gamma).
    static RtnParams from_g(double g, double gamma = 1.0, double delta_p0 = 0.0);
};

/// g = v / gamma.
double derived_g(const RtnParams& params);

/// Lorentzian spectral density v^2 gamma / (2 (gamma^2 + omega^2)).
double spectrum(const RtnParams& params, double omega);

/// One telegraph realization: initial level plus ordered switch times.
struct Trajectory {
    int initial_level = 0;            ///< xi(0), 0 or 1
    std::vector<double> switch_times; ///< strictly increasing, all <= horizon
    double horizon = 0.0;

    /// Level at time t (piecewise constant, flips at each switch).
    int level_at(double t) const;

    /// Time spent in level 1 within [t0, t1], exact per-segment integral.
    double occupation_time(double t0, double t1) const;
};

/// Draws a trajectory on [0, horizon].
///
/// P(xi(0) = 1) = (1 + delta_p0) / 2; dwell times in each level are
/// Exponential(gamma/2). Pure function of (params, horizon, rng state).
/// Throws std::invalid_argument for non-finite or non-positive horizon.
Trajectory sample_trajectory(const RtnParams& params, double horizon, SplitMix64& rng);

} // namespace rtnecho
