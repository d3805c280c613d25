#pragma once

// Declarative experiment configs and the runner behind the `dqsim` CLI.

#include "dqsim/lindblad.hpp"
#include "dqsim/metrics.hpp"
#include "dqsim/trotter.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dqsim {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { ising_tf, itc, extended_ising };

std::string_view to_string(ExperimentKind kind);

/// Explicit product state: one bit per qubit (0 = σz +1) and mode amplitudes.
struct ProductSpec {
    std::vector<int> qubit_bits;
    std::vector<Complex> mode_amplitudes;
};

/// A named preset ("all_zero", "first_excited_photons_1_2"), a product
/// state or a full amplitude vector.
using InitialStateSpec = std::variant<std::string, ProductSpec, std::vector<Complex>>;

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ising_tf;
    int n_qubits = 4;
    ModelParams params;
    double grid_max = 4.0;  ///< phase |J|t for the spin models, time in µs for itc
    int grid_points = 200;
    std::vector<int> trotter_steps;
    int fock_dim = 0;
    InitialStateSpec initial_state = std::string("all_zero");
    ZzzMode zzz_mode = ZzzMode::direct;
    bool expand_h2 = false;  ///< itc: run H2 as its commuting H(j,k) blocks
    double max_dt = 0.0;     ///< itc: RK4 step ceiling, 0 = automatic
    std::string output = "out";

    std::string axis() const { return experiment == ExperimentKind::itc ? "time" : "phase"; }
    SpaceShape shape() const;
    std::vector<double> grid() const;
    /// Physical evolution time of a grid value.
    double time_of(double grid_value) const;
};

/// Parse and validate; throws ValidationError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

PureState make_initial_state(const ExperimentConfig& c);

struct OpenSystemStats {
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
    double max_purity = 0.0;
    double max_top_fock_population = 0.0;
};

/// Per-grid-point observables of one digital itc run.
struct ItcSample {
    double time;
    double fidelity;         ///< against the closed H_ITC evolution
    double fidelity_damped;  ///< against H_ITC evolution with photon loss
    double photons;
    std::vector<double> sigma_z;
    double trace;
    double purity;
};

struct RunResult {
    FidelityReport report;
    std::map<int, std::vector<ItcSample>> itc_samples;  ///< itc only
    std::optional<OpenSystemStats> open_system;         ///< itc only

    std::map<int, double> final_fidelity() const;
    bool final_fidelity_increasing() const;
    nlohmann::json summary(const ExperimentConfig& c) const;
};

/// Compute everything without touching the filesystem.
RunResult run_experiment(const ExperimentConfig& c);

/// Directory the run writes to: $DQSIM_OUTPUT_DIR when set, else c.output.
std::filesystem::path output_directory(const ExperimentConfig& c);

/// fidelity.csv, summary.json and (itc) trajectory_s<k>.csv.
void write_outputs(const ExperimentConfig& c, const RunResult& r, const std::filesystem::path& dir);

std::string itc_trajectory_csv(const std::vector<ItcSample>& samples, int n_qubits);

struct ScheduleExport {
    GateSequence sequence;
    int steps;
    double time;
    StepCounts per_step;
    nlohmann::json summary() const;
};

/// Gate-level schedule of a spin-model experiment at the full grid extent.
/// Throws ValidationError for itc, which is only Hamiltonian-level here.
ScheduleExport emit_gate_schedule(const ExperimentConfig& c, std::optional<int> steps = std::nullopt);

}  // namespace dqsim
