#include "rtnecho/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rtnecho/rng.hpp"

namespace rtnecho {

namespace {

// Work is split into fixed-size blocks claimed by whichever thread is free;
// block partial sums are combined in block order afterwards, so the result
// is bit-identical for any worker count.
constexpr std::size_t kBlockSize = 1024;

struct BlockSums {
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
};

template <typename PhaseFn>
McEstimate average_phase(std::size_t n_traj, std::uint64_t master_seed,
                         unsigned n_threads, PhaseFn&& phase_of) {
    const std::size_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> blocks(n_blocks);

    std::atomic<std::size_t> next_block{0};
    auto worker = [&] {
        for (std::size_t b = next_block.fetch_add(1); b < n_blocks;
             b = next_block.fetch_add(1)) {
            BlockSums sums;
            const std::size_t begin = b * kBlockSize;
            const std::size_t end = std::min(n_traj, begin + kBlockSize);
            for (std::size_t i = begin; i < end; ++i) {
                const std::complex<double> phase = phase_of(i);
                sums.re += phase.real();
                sums.im += phase.imag();
                sums.re2 += phase.real() * phase.real();
                sums.im2 += phase.imag() * phase.imag();
            }
            blocks[b] = sums;
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0, sum_im2 = 0.0;
    for (const BlockSums& sums : blocks) {
        sum_re += sums.re;
        sum_im += sums.im;
        sum_re2 += sums.re2;
        sum_im2 += sums.im2;
    }

    const double n = static_cast<double>(n_traj);
    McEstimate estimate;
    estimate.mean = {sum_re / n, sum_im / n};
    estimate.n_traj = n_traj;
    estimate.master_seed = master_seed;
    const double var_re = std::max(0.0, (sum_re2 - sum_re * sum_re / n) / (n - 1.0));
    const double var_im = std::max(0.0, (sum_im2 - sum_im * sum_im / n) / (n - 1.0));
    estimate.std_error = std::sqrt((var_re + var_im) / n);
    return estimate;
}

void require_samples(std::size_t n_traj) {
    if (n_traj < kMcMinTrajectories)
        throw std::invalid_argument("monte carlo: insufficient samples, need n_traj >= 1000");
}

void require_time(double t, const char* what) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument(std::string(what) + ": time must be finite and >= 0");
}

} // namespace

McEstimate mc_free_coherence(const RtnParams& params, double t, std::size_t n_traj,
                             std::uint64_t master_seed, const McOptions& options) {
    require_samples(n_traj);
    require_time(t, "mc_free_coherence");
    if (t == 0.0 || params.v == 0.0) return {1.0, 0.0, n_traj, master_seed};

    return average_phase(n_traj, master_seed, options.n_threads, [&](std::size_t i) {
        SplitMix64 rng = trajectory_stream(master_seed, options.channel_tag, i);
        const Trajectory traj = sample_trajectory(params, t, rng);
        const double occupied = traj.occupation_time(0.0, t);
        return std::polar(1.0, -params.v * occupied);
    });
}

McEstimate mc_echo_coherence(const RtnParams& params, double delta_t, std::size_t n_traj,
                             std::uint64_t master_seed, const McOptions& options) {
    require_samples(n_traj);
    require_time(delta_t, "mc_echo_coherence");
    if (delta_t == 0.0 || params.v == 0.0) return {1.0, 0.0, n_traj, master_seed};

    return average_phase(n_traj, master_seed, options.n_threads, [&](std::size_t i) {
        SplitMix64 rng = trajectory_stream(master_seed, options.channel_tag, i);
        const Trajectory traj = sample_trajectory(params, 2.0 * delta_t, rng);
        const double signed_area = traj.occupation_time(0.0, delta_t) -
                                   traj.occupation_time(delta_t, 2.0 * delta_t);
        return std::polar(1.0, -params.v * signed_area);
    });
}

McConcurrence mc_concurrence(const EwlState& state, const RtnParams& params_a,
                             const RtnParams& params_b, TraceProtocol protocol,
                             double time, std::size_t n_traj, std::uint64_t master_seed,
                             const McOptions& options) {
    McOptions opts_a = options;
    opts_a.channel_tag = 1;
    McOptions opts_b = options;
    opts_b.channel_tag = 2;

    McConcurrence result;
    if (protocol == TraceProtocol::echo) {
        result.channel_a = mc_echo_coherence(params_a, time, n_traj, master_seed, opts_a);
        result.channel_b = mc_echo_coherence(params_b, time, n_traj, master_seed, opts_b);
    } else {
        result.channel_a = mc_free_coherence(params_a, time, n_traj, master_seed, opts_a);
        result.channel_b = mc_free_coherence(params_b, time, n_traj, master_seed, opts_b);
    }

    // Statistical fluctuation can push |mean| marginally above 1.
    const double q_a = std::min(1.0, std::abs(result.channel_a.mean));
    const double q_b = std::min(1.0, std::abs(result.channel_b.mean));
    result.value = concurrence(state, q_a, q_b);

    const double coupling = 2.0 * state.r * state.a_mag * state.b_mag();
    result.std_error = coupling * std::hypot(q_b * result.channel_a.std_error,
                                             q_a * result.channel_b.std_error);
    return result;
}

} // namespace rtnecho
