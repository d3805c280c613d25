#include "dqsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace dqsim {

using nlohmann::json;

namespace {

constexpr const char* kAllZero = "all_zero";
constexpr const char* kFirstExcitedPhotons12 = "first_excited_photons_1_2";

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad(const std::string& field, const std::string& why)
{
    throw ValidationError("config: " + field + ": " + why);
}

void reject_unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            bad(where.empty() ? key : where + "." + key, "unknown field");
    }
}

double read_number(const json& j, const std::string& field)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_object() && j.size() == 1 && j.contains("two_pi_mhz") && j["two_pi_mhz"].is_number())
        return two_pi_mhz(j["two_pi_mhz"].get<double>());
    bad(field, "expected a number (rad/us) or {\"two_pi_mhz\": value}");
}

int read_int(const json& j, const std::string& field)
{
    if (!j.is_number_integer())
        bad(field, "expected an integer");
    return j.get<int>();
}

Complex read_complex(const json& j, const std::string& field)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    bad(field, "expected a real number or [re, im]");
}

std::vector<Complex> read_complex_list(const json& j, const std::string& field)
{
    if (!j.is_array())
        bad(field, "expected an array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(read_complex(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

json complex_list_to_json(const std::vector<Complex>& v)
{
    json out = json::array();
    for (const Complex& c : v)
        out.push_back(c.imag() == 0.0 ? json(c.real()) : json::array({c.real(), c.imag()}));
    return out;
}

ModelParams read_params(const json& j)
{
    if (!j.is_object())
        bad("params", "expected an object");
    ModelParams p;
    const std::pair<const char*, double*> fields[] = {
        {"J", &p.J},
        {"B", &p.B},
        {"G", &p.G},
        {"omega", &p.omega},
        {"Omega", &p.Omega},
        {"g", &p.g},
        {"omega1", &p.omega1},
        {"Omega1", &p.Omega1},
        {"omega_prime", &p.omega_prime},
        {"Omega_prime", &p.Omega_prime},
        {"omega2", &p.omega2},
        {"Omega2", &p.Omega2},
        {"kappa", &p.kappa},
    };
    for (const auto& [key, value] : j.items()) {
        auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
        if (it == std::end(fields))
            bad("params." + key, "unknown parameter");
        *it->second = read_number(value, "params." + key);
    }
    try {
        validate(p);
    } catch (const ValidationError& e) {
        bad("params", e.what());
    }
    return p;
}

json params_to_json(const ModelParams& p, ExperimentKind kind)
{
    json j;
    switch (kind) {
    case ExperimentKind::ising_tf:
        j = {{"J", p.J}, {"B", p.B}};
        break;
    case ExperimentKind::extended_ising:
        j = {{"J", p.J}, {"G", p.G}, {"B", p.B}};
        break;
    case ExperimentKind::itc:
        j = {{"omega1", p.omega1}, {"Omega1", p.Omega1}, {"g", p.g},       {"omega2", p.omega2},
             {"Omega2", p.Omega2}, {"J", p.J},           {"kappa", p.kappa}};
        if (p.omega_prime != 0.0)
            j["omega_prime"] = p.omega_prime;
        if (p.Omega_prime != 0.0)
            j["Omega_prime"] = p.Omega_prime;
        break;
    }
    return j;
}

InitialStateSpec read_initial_state(const json& j)
{
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name != kAllZero && name != kFirstExcitedPhotons12)
            bad("initial_state", "unknown preset '" + name + "'");
        return name;
    }
    if (j.is_object() && j.contains("amplitudes")) {
        reject_unknown_keys(j, "initial_state", {"amplitudes"});
        return read_complex_list(j["amplitudes"], "initial_state.amplitudes");
    }
    if (j.is_object() && j.contains("qubit_bits")) {
        reject_unknown_keys(j, "initial_state", {"qubit_bits", "mode_amplitudes"});
        ProductSpec spec;
        if (!j["qubit_bits"].is_array())
            bad("initial_state.qubit_bits", "expected an array");
        for (const auto& b : j["qubit_bits"])
            spec.qubit_bits.push_back(read_int(b, "initial_state.qubit_bits"));
        if (j.contains("mode_amplitudes"))
            spec.mode_amplitudes = read_complex_list(j["mode_amplitudes"], "initial_state.mode_amplitudes");
        return spec;
    }
    bad("initial_state", "expected a preset name, {\"qubit_bits\": ...} or {\"amplitudes\": ...}");
}

json initial_state_to_json(const InitialStateSpec& s)
{
    if (const auto* name = std::get_if<std::string>(&s))
        return *name;
    if (const auto* spec = std::get_if<ProductSpec>(&s)) {
        json j = {{"qubit_bits", spec->qubit_bits}};
        if (!spec->mode_amplitudes.empty())
            j["mode_amplitudes"] = complex_list_to_json(spec->mode_amplitudes);
        return j;
    }
    return json{{"amplitudes", complex_list_to_json(std::get<std::vector<Complex>>(s))}};
}

void validate_config(const ExperimentConfig& c)
{
    const int min_qubits = c.experiment == ExperimentKind::extended_ising ? 3 : 2;
    if (c.experiment == ExperimentKind::itc && c.n_qubits < 2)
        bad("n_qubits", "itc needs at least 2 qubits");
    if (c.n_qubits < min_qubits)
        bad("n_qubits", "must be at least " + std::to_string(min_qubits));
    if (c.n_qubits > 10)
        bad("n_qubits", "dense simulation is limited to 10 qubits");
    if (c.trotter_steps.empty())
        bad("trotter_steps", "must not be empty");
    for (int s : c.trotter_steps)
        if (s < 1)
            bad("trotter_steps", "step counts must be >= 1");
    if (std::set<int>(c.trotter_steps.begin(), c.trotter_steps.end()).size() != c.trotter_steps.size())
        bad("trotter_steps", "duplicate step count");
    if (c.grid_points < 2)
        bad("grid.points", "need at least 2 points");
    if (!(c.grid_max > 0.0) || !std::isfinite(c.grid_max))
        bad("grid", "maximum must be positive");
    if (c.experiment == ExperimentKind::itc) {
        if (c.fock_dim < 2)
            bad("fock_dim", "itc needs fock_dim >= 2");
        try {
            complete_h2_frequencies(c.params, c.n_qubits);
        } catch (const ValidationError& e) {
            bad("params", e.what());
        }
        if (c.max_dt < 0.0)
            bad("max_dt", "must be non-negative");
    } else {
        if (c.fock_dim != 0)
            bad("fock_dim", "only the itc experiment carries a bosonic mode");
        if (c.params.J == 0.0)
            bad("params.J", "phase axis |J|t needs a non-zero J");
    }
    if (c.output.empty())
        bad("output", "must not be empty");
    // Building the state checks bit counts, amplitude lengths and norms.
    try {
        make_initial_state(c);
    } catch (const ValidationError& e) {
        bad("initial_state", e.what());
    }
}

// Projector weight on the highest retained Fock level.
double top_fock_population(const DensityMatrix& rho)
{
    const auto& s = rho.shape();
    const auto md = s.mode_dim();
    double p = 0.0;
    for (Eigen::Index q = 0; q < s.qubit_dim(); ++q)
        p += rho.matrix()(q * md + md - 1, q * md + md - 1).real();
    return p;
}

FidelityReport make_report(const ExperimentConfig& c)
{
    FidelityReport r;
    r.axis = c.axis();
    r.grid = c.grid();
    return r;
}

RunResult run_spin_model(const ExperimentConfig& c)
{
    const SpaceShape shape = c.shape();
    const ModelParams& p = c.params;
    const TermList terms = c.experiment == ExperimentKind::ising_tf
                               ? build_ising_tf(c.n_qubits, p.J, p.B, shape)
                               : build_extended_ising(c.n_qubits, p.J, p.G, p.B, shape);
    const PureState psi0 = make_initial_state(c);

    RunResult result;
    result.report = make_report(c);
    const auto& grid = result.report.grid;

    // Ideal trajectory from one diagonalization of H.
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(terms.sum().matrix());
    const VectorXc coeffs = es.eigenvectors().adjoint() * psi0.amplitudes();
    std::vector<PureState> ideal;
    for (double v : grid) {
        const double t = c.time_of(v);
        VectorXc phased(coeffs.size());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            phased(i) = std::polar(1.0, -t * es.eigenvalues()(i)) * coeffs(i);
        ideal.push_back(PureState::normalized(shape, es.eigenvectors() * phased));
    }
    result.report.inset_overlap = overlap_with_initial(ideal, psi0);

    std::vector<std::future<std::vector<double>>> tasks;
    for (int s : c.trotter_steps) {
        tasks.push_back(std::async(std::launch::async, [&, s] {
            std::vector<double> f;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = c.time_of(grid[i]);
                const GateSequence seq = c.experiment == ExperimentKind::ising_tf
                                             ? digital_sequence_ising(c.n_qubits, p.J, p.B, t, s)
                                             : digital_sequence_extended(c.n_qubits, p.J, p.G, p.B, t, s, c.zzz_mode);
                f.push_back(fidelity_pure(ideal[i], seq.apply_to(psi0)));
            }
            return f;
        }));
    }
    for (std::size_t k = 0; k < tasks.size(); ++k)
        result.report.fidelity[c.trotter_steps[k]] = tasks[k].get();
    return result;
}

struct DigitalItcRun {
    std::vector<ItcSample> samples;
    OpenSystemStats stats;
};

RunResult run_itc(const ExperimentConfig& c)
{
    const SpaceShape shape = c.shape();
    const int n = c.n_qubits;
    const ModelParams p = complete_h2_frequencies(c.params, n);
    const Operator h1 = build_h1(n, p.omega1, p.Omega1, p.g, shape);
    const Operator h2 = build_h2(n, p.omega_prime, p.Omega_prime, p.J, shape);
    const Operator h_itc = h1 + h2;
    const DensityMatrix rho0 = DensityMatrix::from_pure(make_initial_state(c));

    RunResult result;
    result.report = make_report(c);
    const auto& grid = result.report.grid;

    // Closed ideal evolution.
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(h_itc.matrix());
    std::vector<DensityMatrix> ideal;
    for (double t : grid) {
        VectorXc phases(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            phases(i) = std::polar(1.0, -t * es.eigenvalues()(i));
        const Operator u(shape, es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
        ideal.push_back(conjugate(u, rho0));
    }
    result.report.inset_overlap = overlap_with_initial(ideal, rho0);

    MasterOptions options;
    options.max_dt = c.max_dt;
    options.record_every_segment = false;

    // Ideal evolution with photon loss, sampled on the grid.
    std::vector<DensityMatrix> ideal_damped;
    OpenSystemStats stats;
    if (p.kappa > 0.0) {
        std::vector<Segment> continuous;
        for (std::size_t i = 1; i < grid.size(); ++i)
            continuous.emplace_back(h_itc, grid[i] - grid[i - 1]);
        MasterOptions record_all = options;
        record_all.record_every_segment = true;
        const Trajectory traj = evolve_master(rho0, continuous, p.kappa, record_all);
        for (const auto& point : traj.points)
            ideal_damped.push_back(point.rho);
    } else {
        ideal_damped = ideal;
    }

    const Operator number = number_operator(shape);
    std::vector<Operator> sigma_z;
    for (int j = 1; j <= n; ++j)
        sigma_z.push_back(pauli(Axis::z, j, shape));

    std::vector<std::future<DigitalItcRun>> tasks;
    for (int s : c.trotter_steps) {
        tasks.push_back(std::async(std::launch::async, [&, s] {
            DigitalItcRun run;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const std::vector<Segment> schedule = itc_schedule(n, p, shape, grid[i], s, c.expand_h2);
                std::optional<Trajectory> traj;
                if (!schedule.empty()) {
                    traj = evolve_master(rho0, schedule, p.kappa, options);
                    run.stats.max_trace_drift = std::max(run.stats.max_trace_drift, traj->max_trace_drift);
                }
                const DensityMatrix& rho = traj ? traj->final_state() : rho0;
                const double top = top_fock_population(rho);
                run.stats.max_top_fock_population = std::max(run.stats.max_top_fock_population, top);
                if (top > 1e-6)
                    throw NumericalAbort("Fock truncation overflow: top-level population " + fmt17(top) +
                                         " at t = " + fmt17(grid[i]) + "; increase fock_dim");
                ItcSample sample;
                sample.time = grid[i];
                sample.fidelity = fidelity_trace(ideal[i], rho);
                sample.fidelity_damped = fidelity_trace(ideal_damped[i], rho);
                sample.photons = rho.expectation(number);
                for (const Operator& z : sigma_z)
                    sample.sigma_z.push_back(rho.expectation(z));
                sample.trace = rho.trace();
                sample.purity = rho.purity();
                run.stats.min_eigenvalue = std::min(run.stats.min_eigenvalue, rho.min_eigenvalue());
                run.stats.max_purity = std::max(run.stats.max_purity, sample.purity);
                run.samples.push_back(std::move(sample));
            }
            return run;
        }));
    }

    for (std::size_t k = 0; k < tasks.size(); ++k) {
        DigitalItcRun run = tasks[k].get();
        const int s = c.trotter_steps[k];
        std::vector<double> f;
        for (const ItcSample& sample : run.samples)
            f.push_back(sample.fidelity);
        result.report.fidelity[s] = std::move(f);
        result.itc_samples[s] = std::move(run.samples);
        stats.max_trace_drift = std::max(stats.max_trace_drift, run.stats.max_trace_drift);
        stats.min_eigenvalue = std::min(stats.min_eigenvalue, run.stats.min_eigenvalue);
        stats.max_purity = std::max(stats.max_purity, run.stats.max_purity);
        stats.max_top_fock_population = std::max(stats.max_top_fock_population, run.stats.max_top_fock_population);
    }
    result.open_system = stats;
    return result;
}

}  // namespace

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::ising_tf:
        return "ising_tf";
    case ExperimentKind::itc:
        return "itc";
    case ExperimentKind::extended_ising:
        return "extended_ising";
    }
    return "?";
}

SpaceShape ExperimentConfig::shape() const
{
    return experiment == ExperimentKind::itc ? SpaceShape::with_mode(n_qubits, fock_dim) : SpaceShape::qubits(n_qubits);
}

std::vector<double> ExperimentConfig::grid() const
{
    std::vector<double> g(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
        g[std::size_t(i)] = grid_max * i / (grid_points - 1);
    return g;
}

double ExperimentConfig::time_of(double grid_value) const
{
    if (experiment == ExperimentKind::itc)
        return grid_value;
    return grid_value / std::abs(params.J);
}

// ---------------------------------------------------------------------------
// Config I/O

ExperimentConfig config_from_json(const json& j)
{
    if (!j.is_object())
        bad("<root>", "expected a JSON object");
    reject_unknown_keys(j, "", {"schema_version", "experiment", "n_qubits", "params", "grid", "trotter_steps",
                                "fock_dim", "initial_state", "zzz_mode", "expand_h2", "max_dt", "output"});
    for (const char* required : {"schema_version", "experiment", "n_qubits", "params", "grid", "trotter_steps"})
        if (!j.contains(required))
            bad(required, "missing");
    if (read_int(j["schema_version"], "schema_version") != kSchemaVersion)
        bad("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");

    ExperimentConfig c;
    const json& kind = j["experiment"];
    if (!kind.is_string())
        bad("experiment", "expected a string");
    const auto name = kind.get<std::string>();
    if (name == "ising_tf")
        c.experiment = ExperimentKind::ising_tf;
    else if (name == "itc")
        c.experiment = ExperimentKind::itc;
    else if (name == "extended_ising")
        c.experiment = ExperimentKind::extended_ising;
    else
        bad("experiment", "unknown experiment '" + name + "'");

    c.n_qubits = read_int(j["n_qubits"], "n_qubits");
    c.params = read_params(j["params"]);

    const json& grid = j["grid"];
    if (!grid.is_object())
        bad("grid", "expected an object");
    const char* max_key = c.experiment == ExperimentKind::itc ? "max_time" : "max_phase";
    reject_unknown_keys(grid, "grid", {max_key, "points"});
    if (!grid.contains(max_key))
        bad(std::string("grid.") + max_key, "missing");
    c.grid_max = read_number(grid[max_key], std::string("grid.") + max_key);
    if (grid.contains("points"))
        c.grid_points = read_int(grid["points"], "grid.points");

    const json& steps = j["trotter_steps"];
    if (!steps.is_array())
        bad("trotter_steps", "expected an array");
    for (const auto& s : steps)
        c.trotter_steps.push_back(read_int(s, "trotter_steps"));

    if (j.contains("fock_dim"))
        c.fock_dim = read_int(j["fock_dim"], "fock_dim");
    if (j.contains("initial_state"))
        c.initial_state = read_initial_state(j["initial_state"]);
    if (j.contains("zzz_mode")) {
        if (c.experiment != ExperimentKind::extended_ising)
            bad("zzz_mode", "only meaningful for extended_ising");
        const auto mode = j["zzz_mode"].is_string() ? parse_zzz_mode(j["zzz_mode"].get<std::string>()) : std::nullopt;
        if (!mode)
            bad("zzz_mode", "expected one of direct, collective, two_qubit");
        c.zzz_mode = *mode;
    }
    if (j.contains("expand_h2")) {
        if (!j["expand_h2"].is_boolean())
            bad("expand_h2", "expected a boolean");
        c.expand_h2 = j["expand_h2"].get<bool>();
    }
    if (j.contains("max_dt"))
        c.max_dt = read_number(j["max_dt"], "max_dt");
    if (j.contains("output")) {
        if (!j["output"].is_string())
            bad("output", "expected a string");
        c.output = j["output"].get<std::string>();
    }
    validate_config(c);
    return c;
}

json config_to_json(const ExperimentConfig& c)
{
    json j;
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = to_string(c.experiment);
    j["n_qubits"] = c.n_qubits;
    j["params"] = params_to_json(c.params, c.experiment);
    j["grid"] = {{c.experiment == ExperimentKind::itc ? "max_time" : "max_phase", c.grid_max},
                 {"points", c.grid_points}};
    j["trotter_steps"] = c.trotter_steps;
    j["initial_state"] = initial_state_to_json(c.initial_state);
    if (c.experiment == ExperimentKind::itc) {
        j["fock_dim"] = c.fock_dim;
        j["expand_h2"] = c.expand_h2;
        j["max_dt"] = c.max_dt;
    }
    if (c.experiment == ExperimentKind::extended_ising)
        j["zzz_mode"] = to_string(c.zzz_mode);
    j["output"] = c.output;
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config: " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

std::vector<std::string> preset_names() { return {"ising_tf", "itc", "extended_ising"}; }

ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig c;
    if (name == "ising_tf") {
        // Ferromagnetic chain, J/B = 2, phase |J|t up to 4.
        c.experiment = ExperimentKind::ising_tf;
        c.n_qubits = 4;
        c.params.J = -1.0;
        c.params.B = -0.5;
        c.grid_max = 4.0;
        c.grid_points = 200;
        c.trotter_steps = {6, 8, 10};
        c.initial_state = std::string(kAllZero);
        c.output = "out/ising_tf";
    } else if (name == "itc") {
        c.experiment = ExperimentKind::itc;
        c.n_qubits = 4;
        c.fock_dim = 8;
        c.params.omega1 = two_pi_mhz(200);
        c.params.Omega1 = two_pi_mhz(180);
        c.params.g = two_pi_mhz(80);
        c.params.omega2 = two_pi_mhz(600);
        c.params.Omega2 = two_pi_mhz(18);
        c.params.J = two_pi_mhz(200);
        c.params.kappa = two_pi_mhz(0.01);
        // 2 ns: a quarter of the 2π/g vacuum-Rabi scale; the inset overlap
        // has decayed to ~1% by then.
        c.grid_max = 0.002;
        c.grid_points = 101;
        c.trotter_steps = {3, 4, 5};
        c.initial_state = std::string(kFirstExcitedPhotons12);
        c.output = "out/itc";
    } else if (name == "extended_ising") {
        c.experiment = ExperimentKind::extended_ising;
        c.n_qubits = 4;
        c.params.J = two_pi_mhz(400);
        c.params.G = two_pi_mhz(400);
        c.params.B = two_pi_mhz(200);
        c.grid_max = 4.0;
        c.grid_points = 200;
        c.trotter_steps = {7, 9, 11};
        c.initial_state = std::string(kAllZero);
        c.zzz_mode = ZzzMode::direct;
        c.output = "out/extended_ising";
    } else {
        throw ValidationError("unknown preset '" + std::string(name) + "'");
    }
    validate_config(c);
    return c;
}

PureState make_initial_state(const ExperimentConfig& c)
{
    const SpaceShape shape = c.shape();
    if (const auto* name = std::get_if<std::string>(&c.initial_state)) {
        if (*name == kAllZero) {
            const std::vector<int> bits(std::size_t(c.n_qubits), 0);
            return PureState::product(shape, bits);
        }
        if (*name == kFirstExcitedPhotons12) {
            // Qubit 1 excited (σz = +1), the rest in the ground state, and
            // (|1⟩ + |2⟩)/√2 in the resonator.
            if (shape.fock_dim < 3)
                throw ValidationError("initial state '" + *name + "' needs fock_dim >= 3");
            std::vector<int> bits(std::size_t(c.n_qubits), 1);
            bits[0] = 0;
            const Complex mode[] = {0.0, 1.0, 1.0};
            return PureState::product(shape, bits, mode);
        }
        throw ValidationError("unknown initial state '" + *name + "'");
    }
    if (const auto* spec = std::get_if<ProductSpec>(&c.initial_state))
        return PureState::product(shape, spec->qubit_bits, spec->mode_amplitudes);
    const auto& amps = std::get<std::vector<Complex>>(c.initial_state);
    if (std::ssize(amps) != shape.total_dim())
        throw ValidationError("initial state needs " + std::to_string(shape.total_dim()) + " amplitudes");
    return PureState::normalized(shape, Eigen::Map<const VectorXc>(amps.data(), Eigen::Index(amps.size())));
}

// ---------------------------------------------------------------------------
// Running

RunResult run_experiment(const ExperimentConfig& c)
{
    validate_config(c);
    return c.experiment == ExperimentKind::itc ? run_itc(c) : run_spin_model(c);
}

std::map<int, double> RunResult::final_fidelity() const
{
    std::map<int, double> out;
    for (const auto& [s, f] : report.fidelity)
        out[s] = f.back();
    return out;
}

bool RunResult::final_fidelity_increasing() const
{
    const auto finals = final_fidelity();
    double previous = -1.0;
    for (const auto& [_, f] : finals) {
        if (!(f > previous))
            return false;
        previous = f;
    }
    return true;
}

json RunResult::summary(const ExperimentConfig& c) const
{
    json j;
    j["experiment"] = to_string(c.experiment);
    j["n_qubits"] = c.n_qubits;
    j["axis"] = c.axis();
    j["grid_max"] = c.grid_max;
    j["grid_points"] = c.grid_points;
    j["trotter_steps"] = c.trotter_steps;
    json finals = json::object(), minima = json::object();
    for (const auto& [s, f] : report.fidelity) {
        finals[std::to_string(s)] = f.back();
        minima[std::to_string(s)] = *std::min_element(f.begin(), f.end());
    }
    j["final_fidelity"] = finals;
    j["min_fidelity"] = minima;
    j["final_fidelity_increasing"] = final_fidelity_increasing();
    const auto& lo = report.fidelity.begin()->second;
    const auto& hi = report.fidelity.rbegin()->second;
    bool dominates = true;
    for (std::size_t i = 0; i < lo.size(); ++i)
        dominates = dominates && hi[i] >= lo[i] - 1e-9;
    j["largest_s_dominates_pointwise"] = dominates;
    j["final_inset_overlap"] = report.inset_overlap.back();
    if (!itc_samples.empty()) {
        json damped = json::object();
        for (const auto& [s, samples] : itc_samples)
            damped[std::to_string(s)] = samples.back().fidelity_damped;
        j["final_fidelity_damped"] = damped;
    }
    if (open_system) {
        j["open_system"] = {{"max_trace_drift", open_system->max_trace_drift},
                            {"min_eigenvalue", open_system->min_eigenvalue},
                            {"max_purity", open_system->max_purity},
                            {"max_top_fock_population", open_system->max_top_fock_population}};
    }
    return j;
}

std::filesystem::path output_directory(const ExperimentConfig& c)
{
    if (const char* env = std::getenv("DQSIM_OUTPUT_DIR"); env && *env)
        return env;
    return c.output;
}

std::string itc_trajectory_csv(const std::vector<ItcSample>& samples, int n_qubits)
{
    std::ostringstream os;
    os << "time,fidelity,fidelity_damped,photons";
    for (int j = 1; j <= n_qubits; ++j)
        os << ",sigma_z_" << j;
    os << ",trace,purity\n";
    for (const ItcSample& s : samples) {
        os << fmt17(s.time) << ',' << fmt17(s.fidelity) << ',' << fmt17(s.fidelity_damped) << ',' << fmt17(s.photons);
        for (double z : s.sigma_z)
            os << ',' << fmt17(z);
        os << ',' << fmt17(s.trace) << ',' << fmt17(s.purity) << '\n';
    }
    return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

void write_outputs(const ExperimentConfig& c, const RunResult& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_file(dir / "fidelity.csv", r.report.to_csv());
    write_file(dir / "summary.json", r.summary(c).dump(2) + "\n");
    for (const auto& [s, samples] : r.itc_samples)
        write_file(dir / ("trajectory_s" + std::to_string(s) + ".csv"), itc_trajectory_csv(samples, c.n_qubits));
}

// ---------------------------------------------------------------------------
// Gate schedules

json ScheduleExport::summary() const
{
    return {{"steps", steps},
            {"time", time},
            {"total_gates", sequence.size()},
            {"per_step",
             {{"zz", per_step.zz},
              {"zzz", per_step.zzz},
              {"single_qubit", per_step.single},
              {"two_qubit", per_step.two_qubit},
              {"three_qubit", per_step.three_qubit}}}};
}

ScheduleExport emit_gate_schedule(const ExperimentConfig& c, std::optional<int> steps)
{
    if (c.experiment == ExperimentKind::itc)
        throw ValidationError("emit-schedule: the itc experiment is simulated at Hamiltonian level, not as gates");
    const int s = steps.value_or(c.trotter_steps.front());
    if (s < 1)
        throw ValidationError("emit-schedule: steps must be >= 1");
    const double t = c.time_of(c.grid_max);
    const ModelParams& p = c.params;
    const auto build = [&](double time, int k) {
        return c.experiment == ExperimentKind::ising_tf
                   ? digital_sequence_ising(c.n_qubits, p.J, p.B, time, k)
                   : digital_sequence_extended(c.n_qubits, p.J, p.G, p.B, time, k, c.zzz_mode);
    };
    return {build(t, s), s, t, count_step(build(t / s, 1))};
}

}  // namespace dqsim
