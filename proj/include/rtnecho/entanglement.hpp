// Two-qubit entanglement under independent telegraph dephasing channels:
// extended Werner-like initial states, the closed-form concurrence
//
//   C(t) = 2 max{0, r |a| sqrt(1-|a|^2) |q_A(t) q_B(t)| - (1-r)/4},
//
// trace evaluation over dimensionless time grids, and detection of the
// dynamical features: sudden-death time, dark periods and revivals, echo
// plateaus, and the coupling threshold separating decay from revivals.
#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rtnecho/coherence.hpp"
#include "rtnecho/noise_model.hpp"

namespace rtnecho {

enum class Family { one_excitation, two_excitation };

/// Extended Werner-like state: Bell-like pure part a|01> + b|10> (or
/// a|00> + b|11>) with weight r, mixed with the maximally mixed state.
/// The concurrence dynamics is identical for both families.
struct EwlState {
    double r;     ///< purity parameter in [0, 1]
    double a_mag; ///< amplitude magnitude |a| in [0, 1]
    Family family = Family::one_excitation;

    EwlState(double r, double a_mag, Family family = Family::one_excitation);

    double b_mag() const; ///< sqrt(1 - |a|^2)
};

/// C(0) = 2 max{0, (|ab| + 1/4) r - 1/4}.
double initial_concurrence(const EwlState& state);

/// Purity threshold r* = (1 + 4|ab|)^{-1}; the state is entangled for r > r*.
double critical_purity(double a_mag);

/// State purity P = (1 + 3 r^2) / 4.
double purity(double r);

/// Concurrence from coherence magnitudes; throws if a magnitude lies
/// outside [0, 1 + 1e-10].
double concurrence(const EwlState& state, double q_a_mag, double q_b_mag);

enum class TraceProtocol { free_evolution, echo };

struct GridTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Concurrence sampled on a dimensionless time grid, carrying everything
/// needed to re-evaluate the underlying analytic curve at arbitrary points
/// (used by feature refinement).
///
/// Grid convention: x = gamma_A * t for free evolution, x = gamma_A * dt for
/// echo (physical time 2 dt). `time_factor` scales the physical time per
/// unit x: the Fig.-1 style "free curve on the echo axis" uses factor 2,
/// i.e. free evolution evaluated at total time 2 dt.
struct ConcurrenceTrace {
    std::vector<double> grid;
    std::vector<double> values;
    TraceProtocol protocol;
    RtnParams params_a;
    RtnParams params_b;
    EwlState state;
    double time_factor = 1.0;

    /// Analytic concurrence at dimensionless time x.
    double eval(double x) const;
    /// Signed margin r|ab| |q_A q_B| - (1-r)/4 (zero where C hits zero).
    double margin(double x) const;
};

/// Pointwise trace over a strictly increasing nonnegative grid.
ConcurrenceTrace concurrence_trace(const EwlState& state,
                                   const RtnParams& params_a,
                                   const RtnParams& params_b,
                                   TraceProtocol protocol,
                                   const std::vector<double>& grid);

/// Free-evolution concurrence indexed by the echo axis x = gamma * dt,
/// evaluated at total time 2 dt. This is the "no pulses" reference curve
/// plotted against echo traces.
ConcurrenceTrace free_trace_on_echo_axis(const EwlState& state,
                                         const RtnParams& params_a,
                                         const RtnParams& params_b,
                                         const std::vector<double>& grid);

struct Plateau {
    double x;     ///< window center (grid units)
    double level; ///< concurrence at the center
    int k;        ///< ordinal, >= 1
};

struct FeatureReport {
    std::optional<double> esd_time;                       ///< first C -> 0 crossing
    std::vector<std::pair<double, double>> revival_windows; ///< (start, end)
    std::vector<Plateau> plateaus;
    bool has_revivals = false;
};

namespace features {
inline constexpr double kGridSpacingMax = 0.01;
inline constexpr double kDarkMinLength = 0.05;   ///< minimal dark-period length
inline constexpr double kRevivalThreshold = 1e-6; ///< C above this counts as revived
inline constexpr double kPlateauMinWidth = 0.1;
inline constexpr double kPlateauSlopeFraction = 0.025; ///< of C(0), per unit x
inline constexpr double kEsdTolerance = 1e-6;
} // namespace features

/// Scans a trace for sudden death, revivals and plateaus.
///
/// ESD is the first grid-bracketed positive-to-zero crossing, refined by
/// bisection on the analytic margin to 1e-6. A dark period is a maximal
/// zero run of length >= 0.05; revival windows are the maximal runs with
/// C > 1e-6 after the first dark period. A plateau is a maximal run with
/// |dC/dx| < 0.025 C(0) and C > 1e-6 spanning at least 0.1 in x, reported
/// at the window center with ordinal k.
///
/// Throws GridTooCoarse when consecutive spacing exceeds 0.01.
FeatureReport detect_features(const ConcurrenceTrace& trace);

namespace threshold {
inline constexpr double kHorizon = 20.0;    ///< revival search range in gamma*t
inline constexpr double kResolution = 1e-3; ///< bisection resolution in g
} // namespace threshold

/// Coupling threshold separating plain decay from the revival regime, for
/// identical channels (g_A = g_B = g, delta_p0 = 0). Bisects the boolean
/// has_revivals predicate of the free trace over gamma*t in [0, 20] down to
/// 1e-3 in g. Throws BracketInvalid when the predicate does not differ
/// between the bracket ends.
double threshold_g(const EwlState& state, double g_lo, double g_hi);

/// Revival predicate backing threshold_g, exposed for direct scans.
bool has_revivals_at_g(const EwlState& state, double g);

/// Predicted echo plateau for identical channels: position x = 2 pi k / g
/// and level 2 max{0, r|ab| e^{-4 pi k / g} - (1-r)/4}.
std::pair<double, double> plateau_prediction(const EwlState& state, double g, int k);

/// Uniform grid with `count` points from start to stop inclusive.
std::vector<double> linspace(double start, double stop, std::size_t count);

} // namespace rtnecho
