#include "rtnecho/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rtnecho {

namespace {

constexpr double kMagnitudeSlack = 1e-10;

double clamp_nonnegative(double x) { return x > 0.0 ? x : 0.0; }

} // namespace

EwlState::EwlState(double r_, double a_mag_, Family family_)
    : r(r_), a_mag(a_mag_), family(family_) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0)
        throw std::invalid_argument("EwlState: purity parameter r must lie in [0, 1]");
    if (!std::isfinite(a_mag) || a_mag < 0.0 || a_mag > 1.0)
        throw std::invalid_argument("EwlState: amplitude |a| must lie in [0, 1]");
}

double EwlState::b_mag() const { return std::sqrt(1.0 - a_mag * a_mag); }

double initial_concurrence(const EwlState& state) {
    return 2.0 * clamp_nonnegative((state.a_mag * state.b_mag() + 0.25) * state.r - 0.25);
}

double critical_purity(double a_mag) {
    if (!std::isfinite(a_mag) || a_mag < 0.0 || a_mag > 1.0)
        throw std::invalid_argument("critical_purity: |a| must lie in [0, 1]");
    const double ab = a_mag * std::sqrt(1.0 - a_mag * a_mag);
    return 1.0 / (1.0 + 4.0 * ab);
}

double purity(double r) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0)
        throw std::invalid_argument("purity: r must lie in [0, 1]");
    return (1.0 + 3.0 * r * r) / 4.0;
}

double concurrence(const EwlState& state, double q_a_mag, double q_b_mag) {
    for (double q : {q_a_mag, q_b_mag}) {
        if (!std::isfinite(q) || q < 0.0 || q > 1.0 + kMagnitudeSlack)
            throw std::invalid_argument("concurrence: coherence magnitude outside [0, 1]");
    }
    const double margin =
        state.r * state.a_mag * state.b_mag() * q_a_mag * q_b_mag - 0.25 * (1.0 - state.r);
    return 2.0 * clamp_nonnegative(margin);
}

double ConcurrenceTrace::margin(double x) const {
    const double scaled = x / params_a.gamma;
    double q_a, q_b;
    if (protocol == TraceProtocol::echo) {
        q_a = std::abs(echo_coherence(params_a, scaled).value);
        q_b = std::abs(echo_coherence(params_b, scaled).value);
    } else {
        q_a = std::abs(free_coherence(params_a, time_factor * scaled).value);
        q_b = std::abs(free_coherence(params_b, time_factor * scaled).value);
    }
    return state.r * state.a_mag * state.b_mag() * q_a * q_b - 0.25 * (1.0 - state.r);
}

double ConcurrenceTrace::eval(double x) const { return 2.0 * clamp_nonnegative(margin(x)); }

namespace {

void require_grid(const std::vector<double>& grid) {
    if (grid.size() < 2)
        throw std::invalid_argument("trace grid needs at least two points");
    if (grid.front() < 0.0)
        throw std::invalid_argument("trace grid must be nonnegative");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("trace grid must be strictly increasing");
}

ConcurrenceTrace make_trace(const EwlState& state, const RtnParams& params_a,
                            const RtnParams& params_b, TraceProtocol protocol,
                            const std::vector<double>& grid, double time_factor) {
    require_grid(grid);
    ConcurrenceTrace trace{grid, {}, protocol, params_a, params_b, state, time_factor};
    trace.values.reserve(grid.size());
    for (double x : grid) trace.values.push_back(trace.eval(x));
    return trace;
}

} // namespace

ConcurrenceTrace concurrence_trace(const EwlState& state, const RtnParams& params_a,
                                   const RtnParams& params_b, TraceProtocol protocol,
                                   const std::vector<double>& grid) {
    return make_trace(state, params_a, params_b, protocol, grid, 1.0);
}

ConcurrenceTrace free_trace_on_echo_axis(const EwlState& state, const RtnParams& params_a,
                                         const RtnParams& params_b,
                                         const std::vector<double>& grid) {
    return make_trace(state, params_a, params_b, TraceProtocol::free_evolution, grid, 2.0);
}

namespace {

struct Run {
    std::size_t first, last; // inclusive index range
};

// Maximal index runs where pred(i) holds.
template <typename Pred>
std::vector<Run> find_runs(std::size_t n, Pred pred) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < n) {
        if (pred(i)) {
            std::size_t j = i;
            while (j + 1 < n && pred(j + 1)) ++j;
            runs.push_back({i, j});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return runs;
}

double refine_esd(const ConcurrenceTrace& trace, double lo, double hi) {
    // margin(lo) > 0 >= margin(hi); shrink to kEsdTolerance.
    while (hi - lo > features::kEsdTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (trace.margin(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

FeatureReport detect_features(const ConcurrenceTrace& trace) {
    const auto& x = trace.grid;
    const auto& c = trace.values;
    const std::size_t n = x.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] - x[i - 1] > features::kGridSpacingMax * (1.0 + 1e-9))
            throw GridTooCoarse("detect_features: grid spacing exceeds 0.01");
    }

    FeatureReport report;

    // Sudden death: first positive-to-zero transition, refined analytically.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (c[i] > 0.0 && c[i + 1] <= 0.0) {
            report.esd_time = refine_esd(trace, x[i], x[i + 1]);
            break;
        }
    }

    // Dark periods and revivals.
    const auto zero_runs = find_runs(n, [&](std::size_t i) { return c[i] <= 0.0; });
    std::optional<std::size_t> first_dark_end;
    for (const Run& run : zero_runs) {
        if (x[run.last] - x[run.first] >= features::kDarkMinLength) {
            first_dark_end = run.last;
            break;
        }
    }
    if (first_dark_end) {
        const auto revived = find_runs(n, [&](std::size_t i) {
            return i > *first_dark_end && c[i] > features::kRevivalThreshold;
        });
        for (const Run& run : revived)
            report.revival_windows.emplace_back(x[run.first], x[run.last]);
    }
    report.has_revivals = !report.revival_windows.empty();

    // Plateaus: flat positive stretches of sufficient width.
    const double slope_tol =
        features::kPlateauSlopeFraction * initial_concurrence(trace.state);
    std::vector<double> slope(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = (i + 1 == n) ? i : i + 1;
        slope[i] = (c[hi] - c[lo]) / (x[hi] - x[lo]);
    }
    const auto flat = find_runs(n, [&](std::size_t i) {
        return std::abs(slope[i]) < slope_tol && c[i] > features::kRevivalThreshold;
    });
    int ordinal = 0;
    for (const Run& run : flat) {
        if (x[run.last] - x[run.first] < features::kPlateauMinWidth) continue;
        const double center = 0.5 * (x[run.first] + x[run.last]);
        report.plateaus.push_back({center, trace.eval(center), ++ordinal});
    }
    return report;
}

bool has_revivals_at_g(const EwlState& state, double g) {
    const RtnParams channel = RtnParams::from_g(g, 1.0, 0.0);
    const auto grid = linspace(0.0, threshold::kHorizon, 2001);
    const auto trace =
        concurrence_trace(state, channel, channel, TraceProtocol::free_evolution, grid);
    return detect_features(trace).has_revivals;
}

double threshold_g(const EwlState& state, double g_lo, double g_hi) {
    if (!(g_lo > 0.0) || !(g_hi > g_lo))
        throw std::invalid_argument("threshold_g: need 0 < g_lo < g_hi");
    const bool p_lo = has_revivals_at_g(state, g_lo);
    const bool p_hi = has_revivals_at_g(state, g_hi);
    if (p_lo == p_hi)
        throw BracketInvalid("threshold_g: revival predicate equal at both bracket ends");
    while (g_hi - g_lo > threshold::kResolution) {
        const double mid = 0.5 * (g_lo + g_hi);
        if (has_revivals_at_g(state, mid) == p_lo)
            g_lo = mid;
        else
            g_hi = mid;
    }
    return 0.5 * (g_lo + g_hi);
}

std::pair<double, double> plateau_prediction(const EwlState& state, double g, int k) {
    if (k < 1) throw std::invalid_argument("plateau_prediction: k must be >= 1");
    if (!(g > 0.0)) throw std::invalid_argument("plateau_prediction: g must be > 0");
    const double x = 2.0 * std::numbers::pi * k / g;
    const double margin =
        state.r * state.a_mag * state.b_mag() * std::exp(-4.0 * std::numbers::pi * k / g) -
        0.25 * (1.0 - state.r);
    return {x, 2.0 * clamp_nonnegative(margin)};
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
    if (count < 2) throw std::invalid_argument("linspace: need at least two points");
    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = start + static_cast<double>(i) * step;
    grid.back() = stop;
    return grid;
}

} // namespace rtnecho
