#include "rtnecho/coherence.hpp"

#include <cmath>
#include <stdexcept>

namespace rtnecho {

namespace {

constexpr double kImagTolerance = 1e-10;

void require_time(double t, const char* what) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument(std::string(what) + ": time must be finite and >= 0");
}

} // namespace

CoherenceValue free_coherence(const RtnParams& params, double t) {
    require_time(t, "free_coherence");
    if (t == 0.0) return {1.0, Protocol::free_evolution, 0.0};

    const double g = params.g();
    const double x = params.gamma * t;
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> phase = std::exp(-i * (params.v * t / 2.0));

    std::complex<double> envelope;
    if (std::abs(1.0 - g * g) < kBranchTolerance) {
        // mu -> 0 series, exact at the branch point.
        envelope = std::exp(-0.5 * x) *
                   (1.0 + (1.0 - i * g * params.delta_p0) * 0.5 * x);
    } else {
        const std::complex<double> mu = params.mu();
        const std::complex<double> A = (1.0 + mu - i * g * params.delta_p0) / (2.0 * mu);
        envelope = A * std::exp(-0.5 * x * (1.0 - mu)) +
                   (1.0 - A) * std::exp(-0.5 * x * (1.0 + mu));
    }
    return {phase * envelope, Protocol::free_evolution, t};
}

CoherenceValue echo_coherence(const RtnParams& params, double delta_t) {
    require_time(delta_t, "echo_coherence");
    if (delta_t == 0.0) return {1.0, Protocol::echo, 0.0};

    const double g = params.g();
    const double x = params.gamma * delta_t;

    std::complex<double> q;
    if (std::abs(1.0 - g * g) < kBranchTolerance) {
        q = std::exp(-x) * (1.0 + x + 0.5 * x * x);
    } else {
        const std::complex<double> mu = params.mu();
        const std::complex<double> mu2 = mu * mu;
        const std::complex<double> bracket =
            0.5 * (1.0 + mu) * std::exp(mu * x) +
            0.5 * (1.0 - mu) * std::exp(-mu * x) - (1.0 - mu2);
        q = std::exp(-x) / mu2 * bracket;
    }
    if (std::abs(q.imag()) > kImagTolerance)
        throw std::logic_error("echo_coherence: non-real result, evaluation is broken");
    return {q, Protocol::echo, 2.0 * delta_t};
}

CoherenceValue echo_coherence_large_g(const RtnParams& params, double delta_t) {
    require_time(delta_t, "echo_coherence_large_g");
    if (delta_t == 0.0) return {1.0, Protocol::echo_large_g, 0.0};
    const double g = params.g();
    const double x = params.gamma * delta_t;
    // sin(g x)/g -> x as g -> 0
    const double modulation = (g == 0.0) ? x : std::sin(g * x) / g;
    const double q = std::exp(-x) * (1.0 + modulation);
    return {q, Protocol::echo_large_g, 2.0 * delta_t};
}

CoherenceValue free_coherence_large_g(const RtnParams& params, double t) {
    require_time(t, "free_coherence_large_g");
    if (t == 0.0) return {1.0, Protocol::free_large_g, 0.0};
    const double g = params.g();
    const double x = params.gamma * t;
    const double q = std::exp(-0.5 * x) * std::abs(std::cos(0.5 * g * x));
    return {q, Protocol::free_large_g, t};
}

} // namespace rtnecho
