// Brute-force Monte-Carlo estimator of the free and echo coherences by
// averaging exact per-trajectory phase factors over sampled telegraph
// realizations. Independent of the closed-form module: the only shared
// ingredient is the channel parameter struct, so agreement between the two
// validates both the formulas and the sampling conventions.
//
// Phase integrals are computed segment-wise from the switch times (no time
// discretization), so the only error is statistical.
#pragma once

#include <complex>
#include <cstdint>

#include "rtnecho/entanglement.hpp"
#include "rtnecho/noise_model.hpp"

namespace rtnecho {

/// Monte-Carlo coherence estimate.
struct McEstimate {
    std::complex<double> mean;
    double std_error = 0.0; ///< standard error of the complex mean,
                            ///< sqrt((var_re + var_im) / n)
    std::size_t n_traj = 0;
    std::uint64_t master_seed = 0;
};

struct McOptions {
    unsigned n_threads = 1;        ///< worker count; results do not depend on it
    std::uint64_t channel_tag = 0; ///< stream namespace, decorrelates channels
};

inline constexpr std::size_t kMcMinTrajectories = 1000;

/// Average of exp(-i v Int_0^t xi dt') over n_traj realizations.
/// Deterministic for fixed (params, t, n_traj, master_seed) regardless of
/// n_threads. Throws std::invalid_argument below the n_traj floor.
McEstimate mc_free_coherence(const RtnParams& params, double t, std::size_t n_traj,
                             std::uint64_t master_seed, const McOptions& options = {});

/// Echo average with the interaction sign reversed in the second window:
/// exp(-i v [Int_0^{dt} xi - Int_{dt}^{2 dt} xi]), horizon 2*dt.
McEstimate mc_echo_coherence(const RtnParams& params, double delta_t, std::size_t n_traj,
                             std::uint64_t master_seed, const McOptions& options = {});

/// Concurrence from Monte-Carlo coherence magnitudes with first-order
/// propagated error.
struct McConcurrence {
    double value = 0.0;
    double std_error = 0.0; ///< delta-method estimate; approximate near C = 0
                            ///< where the max{0, .} kink breaks linearization
    McEstimate channel_a;
    McEstimate channel_b;
};

/// Channels A and B are averaged independently on decorrelated seed streams.
/// `time` is the evolution time t for free evolution and the pulse
/// separation delta_t for echo (total time 2*delta_t).
McConcurrence mc_concurrence(const EwlState& state, const RtnParams& params_a,
                             const RtnParams& params_b, TraceProtocol protocol,
                             double time, std::size_t n_traj, std::uint64_t master_seed,
                             const McOptions& options = {});

} // namespace rtnecho
