#include "rtnecho/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtnecho {

RtnParams::RtnParams(double v_, double gamma_, double delta_p0_)
    : v(v_), gamma(gamma_), delta_p0(delta_p0_) {
    if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("RtnParams: coupling v must be finite and >= 0");
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw std::invalid_argument("RtnParams: switching rate gamma must be finite and > 0");
    if (!std::isfinite(delta_p0) || std::abs(delta_p0) > 1.0)
        throw std::invalid_argument("RtnParams: delta_p0 must lie in [-1, 1]");
}

std::complex<double> RtnParams::mu() const {
    const double gg = g();
    // Principal square root of 1 - g^2 with +0 imaginary part, so the
    // g > 1 branch lands on the positive imaginary axis.
    return std::sqrt(std::complex<double>(1.0 - gg * gg, 0.0));
}

RtnParams RtnParams::from_g(double g, double gamma, double delta_p0) {
    return RtnParams(g * gamma, gamma, delta_p0);
}

double derived_g(const RtnParams& params) { return params.g(); }

double spectrum(const RtnParams& params, double omega) {
    return params.v * params.v * params.gamma /
           (2.0 * (params.gamma * params.gamma + omega * omega));
}

int Trajectory::level_at(double t) const {
    const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
    const auto flips = static_cast<std::size_t>(it - switch_times.begin());
    return (flips % 2 == 0) ? initial_level : 1 - initial_level;
}

double Trajectory::occupation_time(double t0, double t1) const {
    double occupied = 0.0;
    double seg_start = 0.0;
    int level = initial_level;
    for (double s : switch_times) {
        if (s >= t1) break;
        if (level == 1) occupied += std::max(0.0, std::min(s, t1) - std::max(seg_start, t0));
        seg_start = s;
        level = 1 - level;
    }
    if (level == 1) occupied += std::max(0.0, t1 - std::max(seg_start, t0));
    return occupied;
}

Trajectory sample_trajectory(const RtnParams& params, double horizon, SplitMix64& rng) {
    if (!std::isfinite(horizon) || horizon <= 0.0)
        throw std::invalid_argument("sample_trajectory: horizon must be finite and > 0");

    Trajectory traj;
    traj.horizon = horizon;
    const double p1 = 0.5 * (1.0 + params.delta_p0);
    traj.initial_level = (rng.next_unit() < p1) ? 1 : 0;

    // Symmetric telegraph: dwell rate gamma/2 in both levels.
    const double rate = 0.5 * params.gamma;
    double t = rng.next_exponential(rate);
    while (t <= horizon) {
        traj.switch_times.push_back(t);
        t += rng.next_exponential(rate);
    }
    return traj;
}

} // namespace rtnecho
