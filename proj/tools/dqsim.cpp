// dqsim: run the digital-simulation experiments from JSON configs.
//
//   dqsim run <config.json> [--output DIR] [--points N] [--fock-dim D] ...
//   dqsim emit-schedule <config.json> [--steps S]
//   dqsim presets list
//   dqsim presets dump <name>
//
// Exit codes: 0 success, 2 invalid input, 3 numerical abort.

#include "dqsim/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
    std::optional<std::string> output;
    std::optional<int> points;
    std::optional<int> fock_dim;
    std::optional<double> grid_max;
    std::optional<double> max_dt;
    std::optional<std::string> zzz_mode;
    bool expand_h2 = false;
};

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw dqsim::ValidationError("config: cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw dqsim::ValidationError("config: " + path + ": " + e.what());
    }
}

dqsim::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o)
{
    nlohmann::json j = read_json(path);
    if (!j.is_object())
        throw dqsim::ValidationError("config: expected a JSON object");
    if (o.output)
        j["output"] = *o.output;
    if (o.points)
        j["grid"]["points"] = *o.points;
    if (o.fock_dim)
        j["fock_dim"] = *o.fock_dim;
    if (o.grid_max) {
        const bool itc = j.value("experiment", "") == "itc";
        j["grid"][itc ? "max_time" : "max_phase"] = *o.grid_max;
    }
    if (o.max_dt)
        j["max_dt"] = *o.max_dt;
    if (o.zzz_mode)
        j["zzz_mode"] = *o.zzz_mode;
    if (o.expand_h2)
        j["expand_h2"] = true;
    return dqsim::config_from_json(j);
}

int cmd_run(const std::string& path, const Overrides& o)
{
    const auto config = load_with_overrides(path, o);
    const auto dir = dqsim::output_directory(config);
    const auto start = std::chrono::steady_clock::now();
    const auto result = dqsim::run_experiment(config);
    dqsim::write_outputs(config, result, dir);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::cout << dqsim::to_string(config.experiment) << ": wrote " << dir.string() << " (" << seconds << " s)\n";
    for (const auto& [s, f] : result.final_fidelity())
        std::cout << "  s=" << s << "  final fidelity " << f << '\n';
    std::cout << "  final fidelity increasing in s: " << (result.final_fidelity_increasing() ? "yes" : "no") << '\n';
    return 0;
}

int cmd_emit(const std::string& path, std::optional<int> steps, const Overrides& o)
{
    const auto config = load_with_overrides(path, o);
    const auto schedule = dqsim::emit_gate_schedule(config, steps);
    const auto dir = dqsim::output_directory(config);
    std::filesystem::create_directories(dir);
    const auto file = dir / ("schedule_s" + std::to_string(schedule.steps) + ".txt");
    std::ofstream(file, std::ios::binary) << schedule.sequence.to_text();
    auto summary = schedule.summary();
    summary["experiment"] = dqsim::to_string(config.experiment);
    summary["file"] = file.string();
    if (config.experiment == dqsim::ExperimentKind::extended_ising)
        summary["zzz_mode"] = dqsim::to_string(config.zzz_mode);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Digital quantum simulation of spin chains and spin-boson models"};
    app.require_subcommand(1);

    Overrides overrides;
    const auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--output", overrides.output, "Output directory (DQSIM_OUTPUT_DIR takes precedence)");
        cmd->add_option("--points", overrides.points, "Grid points");
        cmd->add_option("--grid-max", overrides.grid_max, "Grid extent (phase, or time in us for itc)");
        cmd->add_option("--fock-dim", overrides.fock_dim, "Fock truncation (itc)");
        cmd->add_option("--max-dt", overrides.max_dt, "RK4 step ceiling in us (itc)");
        cmd->add_option("--zzz-mode", overrides.zzz_mode, "direct | collective | two_qubit (extended_ising)");
        cmd->add_flag("--expand-h2", overrides.expand_h2, "Run H2 as its commuting H(j,k) blocks (itc)");
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment and write CSV + summary");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_overrides(run);

    std::optional<int> steps;
    auto* emit = app.add_subcommand("emit-schedule", "Write the gate sequence of a spin-model experiment");
    emit->add_option("config", config_path, "Experiment config (JSON)")->required();
    emit->add_option("--steps", steps, "Trotter steps (default: first configured value)");
    add_overrides(emit);

    auto* presets = app.add_subcommand("presets", "Built-in experiment configs");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List preset names");
    std::string preset_name;
    auto* dump = presets->add_subcommand("dump", "Print a preset as JSON");
    dump->add_option("name", preset_name, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, overrides);
        if (emit->parsed())
            return cmd_emit(config_path, steps, overrides);
        if (list->parsed()) {
            for (const auto& name : dqsim::preset_names())
                std::cout << name << '\n';
            return 0;
        }
        if (dump->parsed()) {
            std::cout << dqsim::config_to_json(dqsim::preset(preset_name)).dump(2) << '\n';
            return 0;
        }
    } catch (const dqsim::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const dqsim::NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
