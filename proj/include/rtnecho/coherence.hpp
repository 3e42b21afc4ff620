// Exact single-qubit coherence ratios q(t)/q(0) under random-telegraph
// dephasing, for free evolution and for a two-pulse echo, plus the strong
// coupling (g >> 1) approximations.
//
// All values are frame-relative: the deterministic qubit-splitting phase
// e^{-i Omega t} is dropped everywhere, since no downstream quantity
// (concurrence uses |q_A q_B| only) depends on it.
#pragma once

#include <complex>

#include "rtnecho/noise_model.hpp"

namespace rtnecho {

enum class Protocol { free_evolution, echo, free_large_g, echo_large_g };

struct CoherenceValue {
    std::complex<double> value; ///< q(t)/q(0); |value| <= 1 + 1e-10
    Protocol protocol;
    double time; ///< physical duration; for echo protocols the total time 2*dt
};

/// Free-evolution coherence.
///
///   q(t) = e^{-i v t/2} [ A e^{-gamma(1-mu)t/2} + (1-A) e^{-gamma(1+mu)t/2} ],
///   A = (1 + mu - i g dp0) / (2 mu),  mu = sqrt(1 - g^2) (complex).
///
/// Within |1-g^2| < 1e-8 of the branch point the 1/mu cancellation costs
/// half the significant digits, so the exact mu->0 series
/// e^{-i v t/2} e^{-gamma t/2} [1 + (1 - i g dp0) gamma t / 2] is used instead.
CoherenceValue free_coherence(const RtnParams& params, double t);

/// Echo coherence at total time 2*delta_t, as a function of the pulse
/// separation delta_t:
///
///   q_e = (e^{-x}/mu^2) [ (1+mu)/2 e^{mu x} + (1-mu)/2 e^{-mu x} - (1-mu^2) ],
///   x = gamma * delta_t.
///
/// The expression is real for every g; evaluation is done with complex mu
/// and an imaginary residue above 1e-10 throws (it would indicate a bug).
/// Near the branch point the mu->0 limit e^{-x}(1 + x + x^2/2) is used.
/// Independent of delta_p0.
CoherenceValue echo_coherence(const RtnParams& params, double delta_t);

/// Strong-coupling echo approximation e^{-x} [1 + sin(g x)/g], x = gamma dt.
/// Intended for g >> 1 and g >> sqrt(1/x).
CoherenceValue echo_coherence_large_g(const RtnParams& params, double delta_t);

/// Strong-coupling free-evolution magnitude e^{-gamma t/2} |cos(g gamma t/2)|.
/// Magnitude-only; assumes delta_p0 = 0.
CoherenceValue free_coherence_large_g(const RtnParams& params, double t);

/// Tolerance on |1 - g^2| below which the series limits replace the
/// direct formulas.
inline constexpr double kBranchTolerance = 1e-8;

} // namespace rtnecho
