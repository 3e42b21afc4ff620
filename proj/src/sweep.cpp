#include "rtnecho/sweep.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include <json.hpp>

#include "rtnecho/montecarlo.hpp"
#include "rtnecho/rng.hpp"
#include "rtnecho/version.hpp"

namespace rtnecho {

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

namespace {

std::string format_size(std::size_t value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

std::string format_u64(std::uint64_t value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ConfigError(key + ": cannot parse number '" + text + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    std::uint64_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ConfigError(key + ": cannot parse integer '" + text + "'");
    return value;
}

std::string iso_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string grid_to_string(const GridSpec& grid) {
    return format_double(grid.start) + ":" + format_double(grid.stop) + ":" +
           format_size(grid.count);
}

GridSpec grid_from_string(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("--grid: expected start:stop:count, got '" + text + "'");
    GridSpec grid;
    grid.start = parse_double(text.substr(0, c1), "--grid start");
    grid.stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "--grid stop");
    grid.count = static_cast<std::size_t>(parse_u64(text.substr(c2 + 1), "--grid count"));
    return grid;
}

std::string variable_name(const SweepConfig& config) {
    switch (config.command) {
        case Command::g_sweep:
            return "g";
        case Command::reproduce:
            return config.preset == "fig2" ? "g" : "gamma_dt";
        default:
            return config.protocol == ProtocolChoice::free_evolution ? "gamma_t" : "gamma_dt";
    }
}

// Deterministic per-grid-point master seed; keeps points statistically
// independent while preserving reproducibility.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    return detail::mix64(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

std::string feature_payload(const std::string& label_key, const std::string& label_value,
                            const FeatureReport& report) {
    std::string payload = label_key + "=" + label_value;
    payload += " esd_time=";
    payload += report.esd_time ? format_double(*report.esd_time) : "none";
    payload += " revivals=[";
    for (std::size_t i = 0; i < report.revival_windows.size(); ++i) {
        if (i) payload += ",";
        payload += "(" + format_double(report.revival_windows[i].first) + "," +
                   format_double(report.revival_windows[i].second) + ")";
    }
    payload += "] plateaus=[";
    for (std::size_t i = 0; i < report.plateaus.size(); ++i) {
        if (i) payload += ",";
        payload += "(" + format_double(report.plateaus[i].x) + "," +
                   format_double(report.plateaus[i].level) + "," +
                   std::to_string(report.plateaus[i].k) + ")";
    }
    payload += "]";
    return payload;
}

// Features are detected on a refinement of the requested range so that a
// coarse output grid still yields valid annotations.
std::vector<double> feature_grid(const GridSpec& grid) {
    const double span = grid.stop - grid.start;
    const auto dense = static_cast<std::size_t>(std::ceil(span / 0.005)) + 1;
    return linspace(grid.start, grid.stop, std::max(grid.count, dense));
}

EwlState state_of(const SweepConfig& config) {
    return EwlState(config.r, config.a_mag, config.family);
}

SweepResult new_result(const SweepConfig& config) {
    SweepResult result;
    result.config_record = config_record(config);
    result.timestamp = iso_utc_now();
    return result;
}

} // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::coherence: return "coherence";
        case Command::sweep: return "sweep";
        case Command::g_sweep: return "g-sweep";
        case Command::threshold: return "threshold";
        case Command::mc_validate: return "mc-validate";
        case Command::reproduce: return "reproduce";
    }
    return "?";
}

std::string to_string(ProtocolChoice protocol) {
    switch (protocol) {
        case ProtocolChoice::free_evolution: return "free";
        case ProtocolChoice::echo: return "echo";
        case ProtocolChoice::both: return "both";
    }
    return "?";
}

std::string to_string(Family family) {
    return family == Family::one_excitation ? "one_excitation" : "two_excitation";
}

namespace {

Command command_from(const std::string& text) {
    if (text == "coherence") return Command::coherence;
    if (text == "sweep") return Command::sweep;
    if (text == "g-sweep") return Command::g_sweep;
    if (text == "threshold") return Command::threshold;
    if (text == "mc-validate") return Command::mc_validate;
    if (text == "reproduce") return Command::reproduce;
    throw ConfigError("command: unknown '" + text + "'");
}

ProtocolChoice protocol_from(const std::string& text) {
    if (text == "free") return ProtocolChoice::free_evolution;
    if (text == "echo") return ProtocolChoice::echo;
    if (text == "both") return ProtocolChoice::both;
    throw ConfigError("--protocol: expected free|echo|both, got '" + text + "'");
}

Family family_from(const std::string& text) {
    if (text == "one_excitation") return Family::one_excitation;
    if (text == "two_excitation") return Family::two_excitation;
    throw ConfigError("--family: expected one_excitation|two_excitation, got '" + text + "'");
}

} // namespace

std::string config_record(const SweepConfig& config) {
    std::string record = "{";
    record += "command=" + to_string(config.command);
    record += ", version=" + std::string(kVersion);
    record += ", r=" + format_double(config.r);
    record += ", a_mag=" + format_double(config.a_mag);
    record += ", family=" + to_string(config.family);
    record += ", g_a=" + format_double(config.g_a);
    record += ", g_b=" + format_double(config.g_b);
    record += ", gamma=" + format_double(config.gamma);
    record += ", delta_p0=" + format_double(config.delta_p0);
    record += ", protocol=" + to_string(config.protocol);
    record += ", variable=" + variable_name(config);
    record += ", grid=" + grid_to_string(config.grid);
    record += ", gamma_dt=" + format_double(config.gamma_dt);
    record += ", g_lo=" + format_double(config.g_lo);
    record += ", g_hi=" + format_double(config.g_hi);
    record += ", large_g=" + std::string(config.large_g ? "1" : "0");
    record += ", mc=" + std::string(config.with_mc ? "1" : "0");
    record += ", n_traj=" + format_size(config.n_traj);
    record += ", seed=" + format_u64(config.seed);
    record += ", preset=" + config.preset;
    record += "}";
    return record;
}

SweepConfig parse_config_record(const std::string& record) {
    std::string body = record;
    if (const auto pos = body.find("# config: "); pos != std::string::npos)
        body = body.substr(pos + 10);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw ConfigError("config record: expected {key=value, ...}");
    body = body.substr(1, body.size() - 2);

    SweepConfig config;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto end = body.find(", ", pos);
        if (end == std::string::npos) end = body.size();
        const std::string pair = body.substr(pos, end - pos);
        pos = end + 2;

        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config record: malformed pair '" + pair + "'");
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);

        if (key == "command") config.command = command_from(value);
        else if (key == "r") config.r = parse_double(value, key);
        else if (key == "a_mag") config.a_mag = parse_double(value, key);
        else if (key == "family") config.family = family_from(value);
        else if (key == "g_a") config.g_a = parse_double(value, key);
        else if (key == "g_b") config.g_b = parse_double(value, key);
        else if (key == "gamma") config.gamma = parse_double(value, key);
        else if (key == "delta_p0") config.delta_p0 = parse_double(value, key);
        else if (key == "protocol") config.protocol = protocol_from(value);
        else if (key == "grid") config.grid = grid_from_string(value);
        else if (key == "gamma_dt") config.gamma_dt = parse_double(value, key);
        else if (key == "g_lo") config.g_lo = parse_double(value, key);
        else if (key == "g_hi") config.g_hi = parse_double(value, key);
        else if (key == "large_g") config.large_g = (value == "1");
        else if (key == "mc") config.with_mc = (value == "1");
        else if (key == "n_traj") config.n_traj = static_cast<std::size_t>(parse_u64(value, key));
        else if (key == "seed") config.seed = parse_u64(value, key);
        else if (key == "preset") config.preset = value;
        // version and variable are informational
    }
    return config;
}

void validate(const SweepConfig& config) {
    if (!std::isfinite(config.r) || config.r < 0.0 || config.r > 1.0)
        throw ConfigError("--r: must lie in [0, 1]");
    if (!std::isfinite(config.a_mag) || config.a_mag < 0.0 || config.a_mag > 1.0)
        throw ConfigError("--a-mag: must lie in [0, 1]");
    for (auto [g, name] : {std::pair{config.g_a, "--g-a"}, std::pair{config.g_b, "--g-b"}}) {
        if (!std::isfinite(g) || g < 0.0)
            throw ConfigError(std::string(name) + ": must be finite and >= 0");
    }
    if (!std::isfinite(config.gamma) || config.gamma <= 0.0)
        throw ConfigError("--gamma: must be finite and > 0");
    if (!std::isfinite(config.delta_p0) || std::abs(config.delta_p0) > 1.0)
        throw ConfigError("--delta-p0: must lie in [-1, 1]");
    if (config.grid.count < 2)
        throw ConfigError("--grid: count must be >= 2");
    if (!std::isfinite(config.grid.start) || !std::isfinite(config.grid.stop) ||
        config.grid.start < 0.0 || config.grid.start >= config.grid.stop)
        throw ConfigError("--grid: need 0 <= start < stop");

    switch (config.command) {
        case Command::g_sweep:
            if (!std::isfinite(config.gamma_dt) || config.gamma_dt < 0.0)
                throw ConfigError("--gamma-dt: must be finite and >= 0");
            break;
        case Command::threshold:
            if (!(config.g_lo > 0.0) || !(config.g_hi > config.g_lo))
                throw ConfigError("--g-lo/--g-hi: need 0 < g_lo < g_hi");
            break;
        case Command::mc_validate:
            if (config.protocol == ProtocolChoice::both)
                throw ConfigError("--protocol: mc-validate needs free or echo");
            if (config.n_traj < kMcMinTrajectories)
                throw ConfigError("--n-traj: must be >= 1000");
            break;
        case Command::reproduce:
            if (config.preset != "fig1a" && config.preset != "fig1b" && config.preset != "fig2")
                throw ConfigError("reproduce: unknown preset '" + config.preset +
                                  "' (expected fig1a|fig1b|fig2)");
            break;
        case Command::coherence:
            if (config.with_mc)
                throw ConfigError("--mc: not supported for coherence; use mc-validate");
            break;
        case Command::sweep:
            break;
    }
    if (config.with_mc) {
        if (config.command != Command::sweep)
            throw ConfigError("--mc: only supported for sweep");
        if (config.protocol == ProtocolChoice::both)
            throw ConfigError("--mc: needs --protocol free or echo");
        if (config.n_traj < kMcMinTrajectories)
            throw ConfigError("--n-traj: must be >= 1000");
    }
}

SweepResult run_coherence(const SweepConfig& config) {
    validate(config);
    SweepResult result = new_result(config);
    const RtnParams channel = RtnParams::from_g(config.g_a, config.gamma, config.delta_p0);
    const auto grid = config.grid.points();
    const bool want_free = config.protocol != ProtocolChoice::echo;
    const bool want_echo = config.protocol != ProtocolChoice::free_evolution;
    // With both protocols the shared axis is gamma*dt and the free column is
    // evaluated at the same total time 2*dt as the echo.
    const double free_factor = (config.protocol == ProtocolChoice::both) ? 2.0 : 1.0;

    result.columns.push_back("x");
    if (want_free) {
        result.columns.insert(result.columns.end(), {"q_free_re", "q_free_im", "q_free_abs"});
        if (config.large_g) result.columns.push_back("q_free_large_g_abs");
    }
    if (want_echo) {
        result.columns.push_back("q_echo");
        if (config.large_g) result.columns.push_back("q_echo_large_g");
    }

    for (double x : grid) {
        std::vector<double> row{x};
        const double scaled = x / config.gamma;
        if (want_free) {
            const auto q = free_coherence(channel, free_factor * scaled).value;
            row.insert(row.end(), {q.real(), q.imag(), std::abs(q)});
            if (config.large_g)
                row.push_back(free_coherence_large_g(channel, free_factor * scaled).value.real());
        }
        if (want_echo) {
            row.push_back(echo_coherence(channel, scaled).value.real());
            if (config.large_g)
                row.push_back(echo_coherence_large_g(channel, scaled).value.real());
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

SweepResult run_concurrence_sweep(const SweepConfig& config) {
    validate(config);
    SweepResult result = new_result(config);
    const EwlState state = state_of(config);
    const RtnParams chan_a = RtnParams::from_g(config.g_a, config.gamma, config.delta_p0);
    const RtnParams chan_b = RtnParams::from_g(config.g_b, config.gamma, config.delta_p0);
    const auto grid = config.grid.points();
    const auto dense = feature_grid(config.grid);

    const bool want_free = config.protocol != ProtocolChoice::echo;
    const bool want_echo = config.protocol != ProtocolChoice::free_evolution;
    const bool both = config.protocol == ProtocolChoice::both;

    result.columns.push_back("x");
    if (want_free) result.columns.push_back("C_free");
    if (want_echo) {
        result.columns.push_back("C_echo");
        if (config.large_g) result.columns.push_back("C_echo_large_g");
    }
    if (config.with_mc) {
        result.columns.push_back("mc_mean");
        result.columns.push_back("mc_stderr");
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double scaled = x / config.gamma;
        std::vector<double> row{x};
        if (want_free) {
            const double t = both ? 2.0 * scaled : scaled;
            const double q_a = std::abs(free_coherence(chan_a, t).value);
            const double q_b = std::abs(free_coherence(chan_b, t).value);
            row.push_back(concurrence(state, q_a, q_b));
        }
        if (want_echo) {
            const double q_a = std::abs(echo_coherence(chan_a, scaled).value);
            const double q_b = std::abs(echo_coherence(chan_b, scaled).value);
            row.push_back(concurrence(state, q_a, q_b));
            if (config.large_g) {
                const double l_a = echo_coherence_large_g(chan_a, scaled).value.real();
                const double l_b = echo_coherence_large_g(chan_b, scaled).value.real();
                row.push_back(concurrence(state, l_a, l_b));
            }
        }
        if (config.with_mc) {
            const auto protocol = config.protocol == ProtocolChoice::echo
                                      ? TraceProtocol::echo
                                      : TraceProtocol::free_evolution;
            const auto mc = mc_concurrence(state, chan_a, chan_b, protocol, scaled,
                                           config.n_traj, point_seed(config.seed, i),
                                           {config.threads, 0});
            row.push_back(mc.value);
            row.push_back(mc.std_error);
        }
        result.rows.push_back(std::move(row));
    }

    if (want_free) {
        const auto trace = both
                               ? free_trace_on_echo_axis(state, chan_a, chan_b, dense)
                               : concurrence_trace(state, chan_a, chan_b,
                                                   TraceProtocol::free_evolution, dense);
        result.feature_lines.push_back(
            feature_payload("protocol", "free", detect_features(trace)));
    }
    if (want_echo) {
        const auto trace =
            concurrence_trace(state, chan_a, chan_b, TraceProtocol::echo, dense);
        result.feature_lines.push_back(
            feature_payload("protocol", "echo", detect_features(trace)));
    }
    return result;
}

SweepResult run_g_sweep(const SweepConfig& config) {
    validate(config);
    SweepResult result = new_result(config);
    const EwlState state = state_of(config);
    const auto grid = config.grid.points();
    const double delta_t = config.gamma_dt / config.gamma;

    result.columns = {"x", "C_free", "C_echo"};
    if (config.large_g) result.columns.push_back("C_echo_large_g");

    for (double g : grid) {
        const RtnParams channel = RtnParams::from_g(g, config.gamma, config.delta_p0);
        const double q_free = std::abs(free_coherence(channel, 2.0 * delta_t).value);
        const double q_echo = std::abs(echo_coherence(channel, delta_t).value);
        std::vector<double> row{g, concurrence(state, q_free, q_free),
                                concurrence(state, q_echo, q_echo)};
        if (config.large_g) {
            const double q_lg = echo_coherence_large_g(channel, delta_t).value.real();
            row.push_back(concurrence(state, q_lg, q_lg));
        }
        result.rows.push_back(std::move(row));
    }

    // gbar marker for the plotted range, when the revival predicate brackets.
    try {
        const double gbar = threshold_g(state, config.g_lo, config.g_hi);
        result.feature_lines.push_back("gbar=" + format_double(gbar));
    } catch (const BracketInvalid&) {
        result.feature_lines.push_back("gbar=none");
    }
    return result;
}

std::string ThresholdReport::to_text() const {
    std::string text;
    text += "gbar = " + format_double(gbar) + "\n";
    text += "bracket = [" + format_double(g_lo) + ", " + format_double(g_hi) + "]\n";
    text += "resolution = " + format_double(resolution) + "\n";
    text += "predicate_horizon = gamma_t in [0, " + format_double(horizon) +
            "], grid spacing 0.01\n";
    text += "state: r=" + format_double(config.r) + " a_mag=" + format_double(config.a_mag) +
            "\n";
    return text;
}

ThresholdReport run_threshold(const SweepConfig& config) {
    validate(config);
    const EwlState state = state_of(config);
    if (initial_concurrence(state) <= 0.0)
        throw ConfigError("--r: state is never entangled (r <= critical purity " +
                          format_double(critical_purity(config.a_mag)) + ")");
    ThresholdReport report;
    report.gbar = threshold_g(state, config.g_lo, config.g_hi);
    report.g_lo = config.g_lo;
    report.g_hi = config.g_hi;
    report.resolution = threshold::kResolution;
    report.horizon = threshold::kHorizon;
    report.config = config;
    return report;
}

McValidateResult run_mc_validate(const SweepConfig& config) {
    validate(config);
    McValidateResult result;
    result.table = new_result(config);
    result.table.columns = {"x",     "analytic_re", "analytic_im", "mc_re",
                            "mc_im", "mc_stderr",   "z"};

    const RtnParams channel = RtnParams::from_g(config.g_a, config.gamma, config.delta_p0);
    const bool echo = config.protocol == ProtocolChoice::echo;
    const auto grid = config.grid.points();

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double scaled = x / config.gamma;
        const std::complex<double> analytic =
            echo ? echo_coherence(channel, scaled).value : free_coherence(channel, scaled).value;
        // channel_tag = point index keeps the grid points statistically
        // independent under one master seed.
        const McOptions options{config.threads, i};
        const McEstimate mc =
            echo ? mc_echo_coherence(channel, scaled, config.n_traj, config.seed, options)
                 : mc_free_coherence(channel, scaled, config.n_traj, config.seed, options);
        const double diff = std::abs(mc.mean - analytic);
        const double z = mc.std_error > 0.0 ? diff / mc.std_error : (diff == 0.0 ? 0.0 : INFINITY);
        result.max_abs_z = std::max(result.max_abs_z, z);
        result.table.rows.push_back({x, analytic.real(), analytic.imag(), mc.mean.real(),
                                     mc.mean.imag(), mc.std_error, z});
    }
    return result;
}

namespace {

SweepResult reproduce_fig1a(SweepConfig config) {
    config.r = 0.91;
    config.a_mag = 0.70710678118654752;
    config.gamma = 1.0;
    config.delta_p0 = 0.0;
    config.g_a = 0.7;
    config.g_b = 7.0;
    config.protocol = ProtocolChoice::both;
    config.grid = {0.0, 3.0, 601};

    SweepResult result = new_result(config);
    const EwlState state = state_of(config);
    result.columns = {"x", "C_free_g0.7", "C_echo_g0.7", "C_free_g7", "C_echo_g7"};

    const auto grid = config.grid.points();
    const double couplings[2] = {0.7, 7.0};
    for (double x : grid) {
        std::vector<double> row{x};
        for (double g : couplings) {
            const RtnParams channel = RtnParams::from_g(g, 1.0, 0.0);
            const double q_free = std::abs(free_coherence(channel, 2.0 * x).value);
            const double q_echo = std::abs(echo_coherence(channel, x).value);
            row.push_back(concurrence(state, q_free, q_free));
            row.push_back(concurrence(state, q_echo, q_echo));
        }
        result.rows.push_back(std::move(row));
    }

    const auto dense = feature_grid(config.grid);
    for (double g : couplings) {
        const RtnParams channel = RtnParams::from_g(g, 1.0, 0.0);
        const std::string tag = format_double(g);
        result.feature_lines.push_back(feature_payload(
            "curve", "C_free_g" + tag,
            detect_features(free_trace_on_echo_axis(state, channel, channel, dense))));
        result.feature_lines.push_back(feature_payload(
            "curve", "C_echo_g" + tag,
            detect_features(
                concurrence_trace(state, channel, channel, TraceProtocol::echo, dense))));
    }
    return result;
}

SweepResult reproduce_fig1b(SweepConfig config) {
    config.r = 0.91;
    config.a_mag = 0.70710678118654752;
    config.gamma = 1.0;
    config.delta_p0 = 0.0;
    config.g_a = 0.3;
    config.g_b = 4.0;
    config.protocol = ProtocolChoice::both;
    config.grid = {0.0, 3.0, 601};

    SweepResult result = new_result(config);
    const EwlState state = state_of(config);
    const RtnParams chan_a = RtnParams::from_g(config.g_a, 1.0, 0.0);
    const RtnParams chan_b = RtnParams::from_g(config.g_b, 1.0, 0.0);
    result.columns = {"x", "C_free", "C_echo"};

    for (double x : config.grid.points()) {
        const double qf_a = std::abs(free_coherence(chan_a, 2.0 * x).value);
        const double qf_b = std::abs(free_coherence(chan_b, 2.0 * x).value);
        const double qe_a = std::abs(echo_coherence(chan_a, x).value);
        const double qe_b = std::abs(echo_coherence(chan_b, x).value);
        result.rows.push_back(
            {x, concurrence(state, qf_a, qf_b), concurrence(state, qe_a, qe_b)});
    }

    const auto dense = feature_grid(config.grid);
    result.feature_lines.push_back(feature_payload(
        "curve", "C_free",
        detect_features(free_trace_on_echo_axis(state, chan_a, chan_b, dense))));
    result.feature_lines.push_back(feature_payload(
        "curve", "C_echo",
        detect_features(
            concurrence_trace(state, chan_a, chan_b, TraceProtocol::echo, dense))));
    return result;
}

SweepResult reproduce_fig2(SweepConfig config) {
    config.r = 0.91;
    config.a_mag = 0.70710678118654752;
    config.gamma = 1.0;
    config.delta_p0 = 0.0;
    config.protocol = ProtocolChoice::both;
    config.grid = {0.0, 10.0, 601};
    config.gamma_dt = 0.1;

    SweepResult result = new_result(config);
    const EwlState state = state_of(config);
    const double separations[2] = {0.1, 1.1};

    result.columns = {"x"};
    for (double gdt : separations) {
        const std::string tag = format_double(gdt);
        result.columns.push_back("C_free_gdt" + tag);
        result.columns.push_back("C_echo_gdt" + tag);
        result.columns.push_back("C_free_large_g_gdt" + tag);
        result.columns.push_back("C_echo_large_g_gdt" + tag);
    }

    for (double g : config.grid.points()) {
        const RtnParams channel = RtnParams::from_g(g, 1.0, 0.0);
        std::vector<double> row{g};
        for (double gdt : separations) {
            const double q_free = std::abs(free_coherence(channel, 2.0 * gdt).value);
            const double q_echo = std::abs(echo_coherence(channel, gdt).value);
            const double q_free_lg = free_coherence_large_g(channel, 2.0 * gdt).value.real();
            const double q_echo_lg = echo_coherence_large_g(channel, gdt).value.real();
            row.push_back(concurrence(state, q_free, q_free));
            row.push_back(concurrence(state, q_echo, q_echo));
            row.push_back(concurrence(state, q_free_lg, q_free_lg));
            row.push_back(concurrence(state, q_echo_lg, q_echo_lg));
        }
        result.rows.push_back(std::move(row));
    }

    try {
        const double gbar = threshold_g(state, config.g_lo, config.g_hi);
        result.feature_lines.push_back("gbar=" + format_double(gbar));
    } catch (const BracketInvalid&) {
        result.feature_lines.push_back("gbar=none");
    }
    return result;
}

} // namespace

SweepResult run_reproduce(const SweepConfig& config) {
    validate(config);
    if (config.preset == "fig1a") return reproduce_fig1a(config);
    if (config.preset == "fig1b") return reproduce_fig1b(config);
    return reproduce_fig2(config);
}

SweepResult run_rows(const SweepConfig& config) {
    switch (config.command) {
        case Command::coherence: return run_coherence(config);
        case Command::sweep: return run_concurrence_sweep(config);
        case Command::g_sweep: return run_g_sweep(config);
        case Command::mc_validate: return run_mc_validate(config).table;
        case Command::reproduce: return run_reproduce(config);
        case Command::threshold: break;
    }
    throw ConfigError("run_rows: threshold produces a text report, not rows");
}

std::string to_csv(const SweepResult& result) {
    std::string out;
    out += "# rtn-echo-lab v";
    out += kVersion;
    out += "\n# config: " + result.config_record + "\n";
    for (std::size_t i = 0; i < result.columns.size(); ++i) {
        if (i) out += ",";
        out += result.columns[i];
    }
    out += "\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    for (const auto& line : result.feature_lines) out += "# feature: " + line + "\n";
    return out;
}

std::string to_json(const SweepResult& result) {
    nlohmann::json j;
    j["tool"] = "rtn-echo-lab";
    j["version"] = kVersion;
    j["config"] = result.config_record;
    j["timestamp"] = result.timestamp;
    j["columns"] = result.columns;
    j["rows"] = result.rows;
    j["features"] = result.feature_lines;
    return j.dump(2) + "\n";
}

} // namespace rtnecho
