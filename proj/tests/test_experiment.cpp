#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqsim/experiment.hpp"
#include "oracles.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace dqsim;
using nlohmann::json;

namespace {

std::filesystem::path source_dir()
{
    const char* env = std::getenv("DQSIM_SOURCE_DIR");
    return env ? std::filesystem::path(env) : std::filesystem::current_path();
}

json base_ising()
{
    return json::parse(R"({
        "schema_version": 1,
        "experiment": "ising_tf",
        "n_qubits": 3,
        "params": {"J": -1.0, "B": -0.5},
        "grid": {"max_phase": 2.0, "points": 5},
        "trotter_steps": [2, 4],
        "output": "out/test"
    })");
}

json small_itc()
{
    return json::parse(R"({
        "schema_version": 1,
        "experiment": "itc",
        "n_qubits": 2,
        "params": {
            "omega1": {"two_pi_mhz": 200}, "Omega1": {"two_pi_mhz": 180}, "g": {"two_pi_mhz": 80},
            "omega_prime": {"two_pi_mhz": 600}, "Omega_prime": {"two_pi_mhz": 18},
            "J": {"two_pi_mhz": 200}, "kappa": {"two_pi_mhz": 0.01}
        },
        "grid": {"max_time": 0.001, "points": 4},
        "trotter_steps": [2, 4],
        "fock_dim": 6,
        "initial_state": "first_excited_photons_1_2",
        "output": "out/test_itc"
    })");
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string error_of(const json& j)
{
    try {
        config_from_json(j);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config round trip")
{
    const ExperimentConfig c = config_from_json(base_ising());
    CHECK(c.experiment == ExperimentKind::ising_tf);
    CHECK(c.n_qubits == 3);
    CHECK(c.grid_points == 5);
    CHECK(c.trotter_steps == std::vector<int>{2, 4});
    CHECK(c.axis() == "phase");
    CHECK(c.grid() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(c.time_of(2.0) == doctest::Approx(2.0));
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));

    const ExperimentConfig itc = config_from_json(small_itc());
    CHECK(itc.params.g == doctest::Approx(two_pi_mhz(80)));
    CHECK(itc.axis() == "time");
    CHECK(itc.shape() == SpaceShape::with_mode(2, 6));
    CHECK(config_to_json(config_from_json(config_to_json(itc))) == config_to_json(itc));
}

TEST_CASE("grid defaults to 200 points")
{
    json j = base_ising();
    j["grid"].erase("points");
    CHECK(config_from_json(j).grid_points == 200);
}

TEST_CASE("config validation names the offending field")
{
    const auto mutate = [](auto f) {
        json j = base_ising();
        f(j);
        return error_of(j);
    };
    CHECK(mutate([](json& j) { j["colour"] = 1; }).find("colour") != std::string::npos);
    CHECK(mutate([](json& j) { j["params"]["Q"] = 1; }).find("params.Q") != std::string::npos);
    CHECK(mutate([](json& j) { j["grid"]["max_time"] = 1; }).find("grid.max_time") != std::string::npos);
    CHECK(mutate([](json& j) { j.erase("trotter_steps"); }).find("trotter_steps") != std::string::npos);
    CHECK(mutate([](json& j) { j["trotter_steps"] = json::array(); }).find("trotter_steps") != std::string::npos);
    CHECK(mutate([](json& j) { j["trotter_steps"] = {2, 2}; }).find("duplicate") != std::string::npos);
    CHECK(mutate([](json& j) { j["trotter_steps"] = {0}; }).find("trotter_steps") != std::string::npos);
    CHECK(mutate([](json& j) { j["schema_version"] = 2; }).find("schema_version") != std::string::npos);
    CHECK(mutate([](json& j) { j["experiment"] = "heisenberg"; }).find("experiment") != std::string::npos);
    CHECK(mutate([](json& j) { j["n_qubits"] = 1; }).find("n_qubits") != std::string::npos);
    CHECK(mutate([](json& j) { j["n_qubits"] = 2.5; }).find("n_qubits") != std::string::npos);
    CHECK(mutate([](json& j) { j["params"]["J"] = "big"; }).find("params.J") != std::string::npos);
    CHECK(mutate([](json& j) { j["params"]["J"] = 0.0; }).find("params.J") != std::string::npos);
    CHECK(mutate([](json& j) { j["params"]["kappa"] = -1.0; }).find("params") != std::string::npos);
    CHECK(mutate([](json& j) { j["grid"]["points"] = 1; }).find("grid.points") != std::string::npos);
    CHECK(mutate([](json& j) { j["grid"]["max_phase"] = -1; }).find("grid") != std::string::npos);
    CHECK(mutate([](json& j) { j["fock_dim"] = 4; }).find("fock_dim") != std::string::npos);
    CHECK(mutate([](json& j) { j["zzz_mode"] = "direct"; }).find("zzz_mode") != std::string::npos);
    CHECK(mutate([](json& j) { j["initial_state"] = "plus"; }).find("initial_state") != std::string::npos);
    CHECK(mutate([](json& j) { j["initial_state"] = {{"qubit_bits", {0, 1}}}; }).find("initial_state") !=
          std::string::npos);
    CHECK(mutate([](json& j) { j["output"] = ""; }).find("output") != std::string::npos);
    CHECK(error_of(json::array()).find("<root>") != std::string::npos);

    const auto mutate_itc = [](auto f) {
        json j = small_itc();
        f(j);
        return error_of(j);
    };
    CHECK(mutate_itc([](json& j) { j.erase("fock_dim"); }).find("fock_dim") != std::string::npos);
    CHECK(mutate_itc([](json& j) { j["fock_dim"] = 2; }).find("initial_state") != std::string::npos);
    CHECK(mutate_itc([](json& j) { j["params"]["omega2"] = 1.0; }).find("params") != std::string::npos);
    CHECK(mutate_itc([](json& j) { j["max_dt"] = -1.0; }).find("max_dt") != std::string::npos);
    CHECK(mutate_itc([](json& j) { j["expand_h2"] = "yes"; }).find("expand_h2") != std::string::npos);
    CHECK(mutate_itc([](json& j) { j["params"]["g"] = {{"two_pi_ghz", 1}}; }).find("params.g") != std::string::npos);
}

TEST_CASE("explicit initial states")
{
    json j = base_ising();
    j["initial_state"] = {{"qubit_bits", {1, 0, 1}}};
    const PureState psi = make_initial_state(config_from_json(j));
    CHECK(psi.amplitudes()(0b101) == Complex(1.0));

    json amps = base_ising();
    std::vector<json> a(8, 0.0);
    a[3] = json::array({0.0, 1.0});
    amps["initial_state"] = {{"amplitudes", a}};
    const ExperimentConfig c = config_from_json(amps);
    CHECK(make_initial_state(c).amplitudes()(3) == Complex(0.0, 1.0));
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));

    a.pop_back();
    amps["initial_state"] = {{"amplitudes", a}};
    CHECK(error_of(amps).find("initial_state") != std::string::npos);
}

TEST_CASE("named initial states")
{
    const PureState zero = make_initial_state(config_from_json(base_ising()));
    CHECK(zero.amplitudes()(0) == Complex(1.0));

    const ExperimentConfig c = config_from_json(small_itc());
    const PureState psi = make_initial_state(c);
    // Qubit 1 excited, qubit 2 ground, (|1⟩ + |2⟩)/√2 in the mode.
    const Eigen::Index base = 0b01 * 6;
    CHECK(std::abs(psi.amplitudes()(base + 1) - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(psi.amplitudes()(base + 2) - 1 / std::sqrt(2.0)) < 1e-15);
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    CHECK(rho.expectation(number_operator(c.shape())) == doctest::Approx(1.5));
    CHECK(rho.expectation(pauli(Axis::z, 1, c.shape())) == doctest::Approx(1.0));
    CHECK(rho.expectation(pauli(Axis::z, 2, c.shape())) == doctest::Approx(-1.0));
}

TEST_CASE("presets match the shipped config files")
{
    for (const auto& name : preset_names()) {
        const auto path = source_dir() / "configs" / (name + ".json");
        INFO(path.string());
        REQUIRE(std::filesystem::exists(path));
        CHECK(config_to_json(load_config(path)) == config_to_json(preset(name)));
    }
    CHECK_THROWS_AS(preset("nope"), ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("preset parameter sets")
{
    const ExperimentConfig ising = preset("ising_tf");
    CHECK(ising.params.J / ising.params.B == doctest::Approx(2.0));
    CHECK(ising.trotter_steps == std::vector<int>{6, 8, 10});
    CHECK(ising.grid_max == 4.0);

    const ExperimentConfig itc = preset("itc");
    CHECK(itc.fock_dim == 8);
    CHECK(itc.trotter_steps == std::vector<int>{3, 4, 5});
    CHECK(itc.params.kappa == doctest::Approx(2 * std::numbers::pi * 0.01));
    const ModelParams q = complete_h2_frequencies(itc.params, itc.n_qubits);
    CHECK(q.omega_prime == doctest::Approx(two_pi_mhz(200)));
    CHECK(q.Omega_prime == doctest::Approx(two_pi_mhz(6)));

    const ExperimentConfig ext = preset("extended_ising");
    CHECK(ext.params.J == ext.params.G);
    CHECK(ext.params.B == doctest::Approx(two_pi_mhz(200)));
    CHECK(ext.trotter_steps == std::vector<int>{7, 9, 11});
}

TEST_CASE("spin-model run against an independent evolution")
{
    const ExperimentConfig c = config_from_json(base_ising());
    const RunResult r = run_experiment(c);
    REQUIRE(r.report.fidelity.size() == 2);
    const auto grid = c.grid();
    const TermList h = build_ising_tf(3, -1.0, -0.5, c.shape());
    const VectorXc psi0 = make_initial_state(c).amplitudes();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = c.time_of(grid[i]);
        const VectorXc ideal = oracle::evolve(h.sum().matrix(), t) * psi0;
        for (int s : {2, 4}) {
            const VectorXc digital = trotter_unitary(h, t, s).matrix() * psi0;
            CHECK(r.report.fidelity.at(s)[i] == doctest::Approx(std::norm(ideal.dot(digital))).epsilon(1e-12));
        }
        CHECK(r.report.inset_overlap[i] == doctest::Approx(std::norm(psi0.dot(ideal))).epsilon(1e-12));
    }
    CHECK(r.report.fidelity.at(2)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(r.open_system.has_value());

    const json s = r.summary(c);
    CHECK(s["experiment"] == "ising_tf");
    CHECK(s["final_fidelity"].contains("4"));
    CHECK(s.contains("final_fidelity_increasing"));
    CHECK(s.contains("largest_s_dominates_pointwise"));
}

TEST_CASE("extended model is independent of the ZZZ realization")
{
    ExperimentConfig c = preset("extended_ising");
    c.grid_points = 9;
    c.trotter_steps = {3, 5};
    std::map<int, std::vector<double>> reference;
    for (ZzzMode mode : {ZzzMode::direct, ZzzMode::collective, ZzzMode::two_qubit}) {
        c.zzz_mode = mode;
        const RunResult r = run_experiment(c);
        if (reference.empty()) {
            reference = r.report.fidelity;
            continue;
        }
        for (const auto& [s, f] : r.report.fidelity)
            for (std::size_t i = 0; i < f.size(); ++i)
                CHECK(std::abs(f[i] - reference.at(s)[i]) < 1e-8);
    }
}

TEST_CASE("open-system run")
{
    const ExperimentConfig c = config_from_json(small_itc());
    const RunResult r = run_experiment(c);
    REQUIRE(r.open_system.has_value());
    CHECK(r.open_system->max_trace_drift < 1e-8);
    CHECK(r.open_system->min_eigenvalue >= -1e-6);
    CHECK(r.open_system->max_purity <= 1 + 1e-8);
    CHECK(r.open_system->max_top_fock_population < 1e-6);
    REQUIRE(r.itc_samples.size() == 2);
    for (const auto& [s, samples] : r.itc_samples) {
        REQUIRE(samples.size() == 4);
        CHECK(samples[0].fidelity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(samples[0].photons == doctest::Approx(1.5));
        for (const ItcSample& x : samples) {
            CHECK(x.trace == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(x.sigma_z.size() == 2);
            CHECK(x.fidelity <= 1 + 1e-9);
            CHECK(x.fidelity_damped <= 1 + 1e-9);
        }
    }

    // Closed reference against an independent unitary evolution of H1 + H2.
    const ModelParams p = complete_h2_frequencies(c.params, 2);
    const MatrixXc h = build_h1(2, p.omega1, p.Omega1, p.g, c.shape()).matrix() +
                       build_h2(2, p.omega_prime, p.Omega_prime, p.J, c.shape()).matrix();
    const VectorXc psi0 = make_initial_state(c).amplitudes();
    const auto grid = c.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const VectorXc psi = oracle::evolve(h, grid[i]) * psi0;
        CHECK(r.report.inset_overlap[i] == doctest::Approx(std::norm(psi0.dot(psi))).epsilon(1e-9));
    }

    const std::string csv = itc_trajectory_csv(r.itc_samples.at(2), 2);
    CHECK(csv.rfind("time,fidelity,fidelity_damped,photons,sigma_z_1,sigma_z_2,trace,purity\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("truncation overflow aborts")
{
    json j = small_itc();
    j["fock_dim"] = 3;
    const ExperimentConfig c = config_from_json(j);
    CHECK_THROWS_AS(run_experiment(c), NumericalAbort);
}

TEST_CASE("outputs are written and reproducible")
{
    const auto dir = std::filesystem::temp_directory_path() / "dqsim_test_outputs";
    std::filesystem::remove_all(dir);
    const ExperimentConfig c = config_from_json(base_ising());
    write_outputs(c, run_experiment(c), dir / "a");
    write_outputs(c, run_experiment(c), dir / "b");
    CHECK(std::filesystem::exists(dir / "a" / "summary.json"));
    const std::string csv = slurp(dir / "a" / "fidelity.csv");
    CHECK(csv.rfind("phase,F_s2,F_s4,inset_overlap\n", 0) == 0);
    CHECK(csv == slurp(dir / "b" / "fidelity.csv"));
    CHECK(json::parse(slurp(dir / "a" / "summary.json"))["n_qubits"] == 3);

    const ExperimentConfig itc = config_from_json(small_itc());
    write_outputs(itc, run_experiment(itc), dir / "itc");
    CHECK(std::filesystem::exists(dir / "itc" / "trajectory_s2.csv"));
    CHECK(std::filesystem::exists(dir / "itc" / "trajectory_s4.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("output directory override")
{
    const ExperimentConfig c = config_from_json(base_ising());
    ::unsetenv("DQSIM_OUTPUT_DIR");
    CHECK(output_directory(c) == std::filesystem::path("out/test"));
    ::setenv("DQSIM_OUTPUT_DIR", "/tmp/elsewhere", 1);
    CHECK(output_directory(c) == std::filesystem::path("/tmp/elsewhere"));
    ::unsetenv("DQSIM_OUTPUT_DIR");
}

TEST_CASE("gate schedule export")
{
    ExperimentConfig c = preset("ising_tf");
    const ScheduleExport one = emit_gate_schedule(c, 1);
    CHECK(one.sequence.count(GateKind::ZZ) == 3);
    CHECK(one.sequence.count(GateKind::Xrot) == 4);
    CHECK(one.per_step.zz == 3);
    CHECK(one.time == doctest::Approx(4.0));
    CHECK(emit_gate_schedule(c).steps == 6);
    CHECK(emit_gate_schedule(c).sequence.size() == 6 * 7);

    ExperimentConfig ext = preset("extended_ising");
    const ScheduleExport direct = emit_gate_schedule(ext, 1);
    CHECK(direct.sequence.count(GateKind::ZZ) == 3);
    CHECK(direct.sequence.count(GateKind::ZZZ) == 2);
    CHECK(direct.sequence.count(GateKind::Xrot) == 4);
    ext.zzz_mode = ZzzMode::two_qubit;
    const ScheduleExport two = emit_gate_schedule(ext, 1);
    CHECK(two.per_step.zzz == 2);
    CHECK(two.sequence.count(GateKind::ZZZ) == 0);
    CHECK(phase_distance(two.sequence.evaluate().matrix(), direct.sequence.evaluate().matrix()) < 1e-10);
    const json summary = two.summary();
    CHECK(summary["per_step"]["zzz"] == 2);

    CHECK_THROWS_AS(emit_gate_schedule(preset("itc")), ValidationError);
    CHECK_THROWS_AS(emit_gate_schedule(c, 0), ValidationError);
}
