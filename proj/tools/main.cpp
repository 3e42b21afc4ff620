// rtn-echo-lab: two-qubit entanglement under random-telegraph dephasing,
// with and without spin echo. Emits CSV/JSON sweep data with embedded
// run configuration.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rtnecho/sweep.hpp"
#include "rtnecho/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

int write_output(const rtnecho::SweepConfig& config, const std::string& text) {
    if (config.out.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open '" << config.out << "' for writing\n";
        return kExitIo;
    }
    file << text;
    file.flush();
    if (!file) {
        std::cerr << "error: write to '" << config.out << "' failed\n";
        return kExitIo;
    }
    return kExitOk;
}

int emit(const rtnecho::SweepConfig& config, const rtnecho::SweepResult& result) {
    const std::string text = config.format == rtnecho::OutputFormat::json
                                 ? rtnecho::to_json(result)
                                 : rtnecho::to_csv(result);
    return write_output(config, text);
}

void add_state_flags(CLI::App* cmd, rtnecho::SweepConfig& config, std::string& family) {
    cmd->add_option("--r", config.r, "purity parameter r in [0, 1]");
    cmd->add_option("--a-mag", config.a_mag, "amplitude magnitude |a| in [0, 1]");
    cmd->add_option("--family", family, "EWL family: one_excitation|two_excitation");
}

void add_channel_flags(CLI::App* cmd, rtnecho::SweepConfig& config) {
    cmd->add_option("--g-a", config.g_a, "coupling ratio g = v/gamma, qubit A");
    cmd->add_option("--g-b", config.g_b, "coupling ratio g = v/gamma, qubit B");
    cmd->add_option("--gamma", config.gamma, "fluctuator switching rate");
    cmd->add_option("--delta-p0", config.delta_p0, "initial impurity population difference");
}

void add_output_flags(CLI::App* cmd, rtnecho::SweepConfig& config, std::string& format) {
    cmd->add_option("--out", config.out, "output path (default: stdout)");
    cmd->add_option("--format", format, "output format: csv|json");
}

void add_grid_flag(CLI::App* cmd, std::string& grid) {
    cmd->add_option("--grid", grid, "grid as start:stop:count");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit concurrence under random-telegraph dephasing with spin echo"};
    app.set_version_flag("--version", std::string("rtn-echo-lab v") + rtnecho::kVersion);
    app.require_subcommand(1);

    rtnecho::SweepConfig config;
    std::string protocol = "both";
    std::string family = "one_excitation";
    std::string format = "csv";
    std::string grid;
    std::string preset;
    bool g_b_given = false;

    auto* coherence = app.add_subcommand("coherence", "single-qubit coherence sweep");
    auto* sweep = app.add_subcommand("sweep", "concurrence sweep over dimensionless time");
    auto* g_sweep = app.add_subcommand("g-sweep", "concurrence sweep over the coupling ratio g");
    auto* threshold = app.add_subcommand("threshold", "revival threshold for identical channels");
    auto* mc_validate =
        app.add_subcommand("mc-validate", "Monte-Carlo cross-check of the analytic coherences");
    auto* reproduce = app.add_subcommand("reproduce", "named preset sweeps (fig1a|fig1b|fig2)");

    for (CLI::App* cmd : {coherence, sweep, g_sweep, mc_validate}) {
        add_channel_flags(cmd, config);
        add_grid_flag(cmd, grid);
        add_output_flags(cmd, config, format);
    }
    for (CLI::App* cmd : {sweep, g_sweep, threshold}) add_state_flags(cmd, config, family);

    for (CLI::App* cmd : {coherence, sweep, mc_validate})
        cmd->add_option("--protocol", protocol, "free|echo|both");
    for (CLI::App* cmd : {coherence, sweep})
        cmd->add_flag("--large-g", config.large_g, "add strong-coupling approximation columns");
    for (CLI::App* cmd : {sweep, mc_validate}) {
        cmd->add_option("--n-traj", config.n_traj, "Monte-Carlo trajectories per point");
        cmd->add_option("--seed", config.seed, "Monte-Carlo master seed");
        cmd->add_option("--threads", config.threads, "worker threads (result-invariant)");
    }
    sweep->add_flag("--mc", config.with_mc, "append Monte-Carlo concurrence columns");

    g_sweep->add_option("--gamma-dt", config.gamma_dt, "fixed pulse separation gamma*dt");
    for (CLI::App* cmd : {g_sweep, threshold}) {
        cmd->add_option("--g-lo", config.g_lo, "threshold bracket lower end");
        cmd->add_option("--g-hi", config.g_hi, "threshold bracket upper end");
    }
    threshold->add_option("--out", config.out, "output path (default: stdout)");

    reproduce->add_option("preset", preset, "fig1a|fig1b|fig2")->required();
    add_output_flags(reproduce, config, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (format == "csv") config.format = rtnecho::OutputFormat::csv;
        else if (format == "json") config.format = rtnecho::OutputFormat::json;
        else throw rtnecho::ConfigError("--format: expected csv|json, got '" + format + "'");

        if (protocol == "free") config.protocol = rtnecho::ProtocolChoice::free_evolution;
        else if (protocol == "echo") config.protocol = rtnecho::ProtocolChoice::echo;
        else if (protocol == "both") config.protocol = rtnecho::ProtocolChoice::both;
        else throw rtnecho::ConfigError("--protocol: expected free|echo|both");

        if (family == "one_excitation") config.family = rtnecho::Family::one_excitation;
        else if (family == "two_excitation") config.family = rtnecho::Family::two_excitation;
        else throw rtnecho::ConfigError("--family: expected one_excitation|two_excitation");

        g_b_given = sweep->count("--g-b") || coherence->count("--g-b") ||
                    g_sweep->count("--g-b") || mc_validate->count("--g-b");
        if (!g_b_given) config.g_b = config.g_a; // identical channels by default

        if (coherence->parsed()) config.command = rtnecho::Command::coherence;
        if (sweep->parsed()) config.command = rtnecho::Command::sweep;
        if (g_sweep->parsed()) config.command = rtnecho::Command::g_sweep;
        if (threshold->parsed()) config.command = rtnecho::Command::threshold;
        if (mc_validate->parsed()) config.command = rtnecho::Command::mc_validate;
        if (reproduce->parsed()) {
            config.command = rtnecho::Command::reproduce;
            config.preset = preset;
        }

        if (!grid.empty()) {
            const auto parsed = rtnecho::parse_config_record("{grid=" + grid + "}");
            config.grid = parsed.grid;
        } else if (config.command == rtnecho::Command::g_sweep ||
                   (config.command == rtnecho::Command::reproduce && preset == "fig2")) {
            config.grid = {0.0, 10.0, 601};
        } else if (config.command == rtnecho::Command::mc_validate) {
            config.grid = {0.0, 2.0, 9};
        }

        if (config.command == rtnecho::Command::threshold) {
            const auto report = rtnecho::run_threshold(config);
            return write_output(config, report.to_text());
        }
        if (config.command == rtnecho::Command::mc_validate) {
            const auto result = rtnecho::run_mc_validate(config);
            const int io = emit(config, result.table);
            if (io != kExitOk) return io;
            if (result.max_abs_z > 4.0) {
                std::cerr << "validation failed: max |z| = "
                          << rtnecho::format_double(result.max_abs_z) << " > 4\n";
                return kExitValidation;
            }
            return kExitOk;
        }
        return emit(config, rtnecho::run_rows(config));
    } catch (const rtnecho::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtnecho::BracketInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
