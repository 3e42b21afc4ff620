// Run configurations, sweep execution and serialization.
//
// Output contract (CSV): first line "# rtn-echo-lab v<version>", second line
// "# config: {key=value, ...}" holding the full resolved run configuration,
// then the column header row and data rows (separator ",", newline "\n",
// shortest round-trip decimals). Feature annotations are appended as
// "# feature: ..." comment lines. Re-running a parsed config line
// reproduces the CSV byte for byte; wall-clock metadata therefore lives in
// the JSON output only.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtnecho/entanglement.hpp"

namespace rtnecho {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { coherence, sweep, g_sweep, threshold, mc_validate, reproduce };
enum class ProtocolChoice { free_evolution, echo, both };
enum class OutputFormat { csv, json };

struct GridSpec {
    double start = 0.0;
    double stop = 3.0;
    std::size_t count = 601;

    std::vector<double> points() const { return linspace(start, stop, count); }
};

/// Fully resolved run configuration. Everything that affects emitted rows is
/// serialized into the output metadata; execution details (worker count,
/// output path, format) are not.
struct SweepConfig {
    Command command = Command::sweep;

    // initial state
    double r = 0.91;
    double a_mag = 0.70710678118654752;
    Family family = Family::one_excitation;

    // channels (v = g * gamma)
    double g_a = 0.7;
    double g_b = 0.7;
    double gamma = 1.0;
    double delta_p0 = 0.0;

    ProtocolChoice protocol = ProtocolChoice::both;
    GridSpec grid;
    double gamma_dt = 0.1; // fixed pulse separation for g-sweep
    double g_lo = 1.05;    // threshold bracket
    double g_hi = 8.0;
    bool large_g = false;
    bool with_mc = false;
    std::size_t n_traj = 200000;
    std::uint64_t seed = 1;
    std::string preset; // reproduce subcommand target

    // execution-only, never serialized
    unsigned threads = 1;
    std::string out;
    OutputFormat format = OutputFormat::csv;
};

/// Tabular result of a run.
struct SweepResult {
    std::string config_record; ///< payload of the "# config:" line
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> feature_lines; ///< payloads of "# feature:" lines
    std::string timestamp;                  ///< ISO-8601 UTC; JSON output only
};

struct ThresholdReport {
    double gbar = 0.0;
    double g_lo = 0.0;
    double g_hi = 0.0;
    double resolution = 0.0;
    double horizon = 0.0;
    SweepConfig config;

    std::string to_text() const;
};

struct McValidateResult {
    SweepResult table;
    double max_abs_z = 0.0;
};

/// Throws ConfigError with a field-level message when invalid.
void validate(const SweepConfig& config);

SweepResult run_coherence(const SweepConfig& config);
SweepResult run_concurrence_sweep(const SweepConfig& config);
SweepResult run_g_sweep(const SweepConfig& config);
ThresholdReport run_threshold(const SweepConfig& config);
McValidateResult run_mc_validate(const SweepConfig& config);
SweepResult run_reproduce(const SweepConfig& config);

/// Dispatch for the row-producing commands (everything except threshold).
SweepResult run_rows(const SweepConfig& config);

std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Serializes the resolved configuration into the metadata record.
std::string config_record(const SweepConfig& config);

/// Parses a "# config:" payload (with or without the comment prefix) back
/// into a configuration; the returned config re-runs to identical rows.
SweepConfig parse_config_record(const std::string& record);

std::string to_string(Command command);
std::string to_string(ProtocolChoice protocol);
std::string to_string(Family family);

} // namespace rtnecho
