#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqsim/gates.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <numbers>

using namespace dqsim;

namespace {

constexpr double pi = std::numbers::pi;

// Oracles: Padé exponentials of explicit Kronecker products.
MatrixXc zz_oracle(double theta) { return oracle::evolve(dqsim::kron(oracle::Z(), oracle::Z()), theta); }

MatrixXc zzz_oracle(double alpha)
{
    return oracle::evolve(oracle::chain(3, {{1, oracle::Z()}, {2, oracle::Z()}, {3, oracle::Z()}}), alpha);
}

MatrixXc single_oracle(GateKind kind, double a)
{
    switch (kind) {
    case GateKind::Xrot:
        return oracle::evolve(oracle::X(), a);
    case GateKind::Yrot:
        return oracle::evolve(oracle::Y(), a / 2);
    case GateKind::Xflip:
        return oracle::evolve(oracle::X(), -a);
    default: {
        MatrixXc m = MatrixXc::Identity(2, 2);
        m(1, 1) = std::polar(1.0, a);
        return m;
    }
    }
}

}  // namespace

TEST_CASE("gate kind names round trip")
{
    for (GateKind k : {GateKind::Zrot, GateKind::Xrot, GateKind::Yrot, GateKind::Xflip, GateKind::CZ, GateKind::ZZ,
                       GateKind::ZZ_A, GateKind::ZZ_B, GateKind::ZZZ, GateKind::CollectiveSz2})
        CHECK(parse_gate_kind(to_string(k)) == k);
    CHECK_FALSE(parse_gate_kind("CNOT").has_value());
    CHECK(gate_arity(GateKind::ZZZ) == 3);
    CHECK(gate_arity(GateKind::CollectiveSz2) == 0);
}

TEST_CASE("z rotation and c-phase examples")
{
    CHECK(z_rotation(0.0).matrix() == MatrixXc::Identity(2, 2));
    const double phi = 0.81;
    CHECK(std::abs(cz_gate(phi).matrix()(3, 3) - std::polar(1.0, -2 * phi)) < 1e-15);
    MatrixXc standard = MatrixXc::Identity(4, 4);
    standard(3, 3) = -1;
    CHECK((cz_gate(pi / 2).matrix() - standard).norm() < 1e-15);
}

TEST_CASE("zz and zzz gate examples")
{
    CHECK((zz_gate(0.0).matrix() - MatrixXc::Identity(4, 4)).norm() == 0.0);
    const double t = 0.3;
    VectorXc d(4);
    d << std::polar(1.0, -t), std::polar(1.0, t), std::polar(1.0, t), std::polar(1.0, -t);
    CHECK((zz_gate(t).matrix() - MatrixXc(d.asDiagonal())).norm() < 1e-15);
    // |101⟩ has σz eigenvalues (−1, +1, −1), parity +1.
    const double beta = 0.45;
    CHECK(std::abs(zzz_gate(beta).matrix()(0b101, 0b101) - std::polar(1.0, -beta)) < 1e-15);
    CHECK(std::abs(zzz_gate(beta).matrix()(0b100, 0b100) - std::polar(1.0, beta)) < 1e-15);
    CHECK(std::abs(zzz_gate(beta).matrix()(0b000, 0b000) - std::polar(1.0, -beta)) < 1e-15);
    CHECK((zzz_gate(beta).matrix() - zzz_oracle(beta)).norm() < 1e-14);
}

TEST_CASE("every gate kind is unitary and matches its oracle")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = angle(rng);
        for (GateKind k : {GateKind::Zrot, GateKind::Xrot, GateKind::Yrot, GateKind::Xflip}) {
            const MatrixXc m = gate_matrix(k, a, 1);
            CHECK(unitary_defect(m) < 1e-10);
            CHECK((m - single_oracle(k, a)).norm() < 1e-12);
        }
        CHECK((gate_matrix(GateKind::ZZ, a, 2) - zz_oracle(a)).norm() < 1e-12);
        CHECK((gate_matrix(GateKind::ZZZ, a, 3) - zzz_oracle(a)).norm() < 1e-12);
        CHECK(unitary_defect(gate_matrix(GateKind::CZ, a, 2)) < 1e-10);
        for (int k = 2; k <= 4; ++k)
            CHECK(unitary_defect(gate_matrix(GateKind::CollectiveSz2, a, k)) < 1e-10);
    }
    CHECK((gate_matrix(GateKind::ZZ_A, 0.0, 2) - zz_oracle(-pi / 4)).norm() < 1e-14);
    CHECK((gate_matrix(GateKind::ZZ_B, 0.0, 2) - zz_oracle(pi / 4)).norm() < 1e-14);
    CHECK_THROWS_AS(gate_matrix(GateKind::CZ, 0.0, 3), ValidationError);
    CHECK_THROWS_AS(gate_matrix(GateKind::CollectiveSz2, 0.0, 1), ValidationError);
}

TEST_CASE("collective S_z^2 examples")
{
    const auto two = SpaceShape::qubits(2);
    const int pair[] = {1, 2};
    const double theta = 0.9;
    CHECK((collective_sz2(theta, pair, two).matrix() - zz_gate(theta / 2).matrix()).norm() < 1e-14);
    const auto three = SpaceShape::qubits(3);
    const int triple[] = {1, 2, 3};
    CHECK((collective_sz2(0.0, triple, three).matrix() - MatrixXc::Identity(8, 8)).norm() == 0.0);
    CHECK(std::abs(collective_sz2(theta, triple, three).matrix()(0, 0) - std::polar(1.0, -1.5 * theta)) < 1e-15);

    const MatrixXc pairs = oracle::chain(3, {{1, oracle::Z()}, {2, oracle::Z()}}) +
                           oracle::chain(3, {{1, oracle::Z()}, {3, oracle::Z()}}) +
                           oracle::chain(3, {{2, oracle::Z()}, {3, oracle::Z()}});
    CHECK((collective_sz2(theta, triple, three).matrix() - oracle::evolve(pairs, theta / 2)).norm() < 1e-13);

    const int one[] = {2};
    CHECK_THROWS_AS(collective_sz2(theta, one, three), ValidationError);
}

TEST_CASE("ZZ from c-phase examples")
{
    CHECK(phase_distance(zz_via_cz(0.0).evaluate().matrix(), MatrixXc::Identity(4, 4)) < 1e-15);
    VectorXc d(4);
    d << 1.0, kI, kI, 1.0;
    const MatrixXc quarter = zz_via_cz(pi / 4).evaluate().matrix();
    CHECK((quarter - MatrixXc(d.asDiagonal())).norm() < 1e-14);
    CHECK((quarter - std::polar(1.0, pi / 4) * zz_gate(pi / 4).matrix()).norm() < 1e-14);

    const GateSequence seq = zz_via_cz(0.2);
    CHECK(seq.count(GateKind::CZ) == 1);
    CHECK(seq.count(GateKind::Zrot) == 2);
    CHECK(seq.gates()[0].angle == doctest::Approx(0.4));
}

TEST_CASE("ZZ from c-phase for 100 random angles")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double theta = angle(rng);
        const MatrixXc u = zz_via_cz(theta).evaluate().matrix();
        worst = std::max(worst, phase_distance(u, zz_oracle(theta)));
        CHECK((u - std::polar(1.0, theta) * zz_oracle(theta)).norm() < 1e-12);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("ZZZ decompositions for 100 random angles")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = angle(rng);
        const MatrixXc target = zzz_oracle(alpha);
        CHECK(phase_distance(zzz_via_collective(alpha).evaluate().matrix(), target) < 1e-10);
        CHECK(phase_distance(zzz_via_two_qubit(alpha).evaluate().matrix(), target) < 1e-10);
    }
}

TEST_CASE("ZZZ decomposition examples")
{
    const MatrixXc id = MatrixXc::Identity(8, 8);
    CHECK(phase_distance(zzz_via_collective(0.0).evaluate().matrix(), id) < 1e-12);
    CHECK(phase_distance(zzz_via_two_qubit(0.0).evaluate().matrix(), id) < 1e-12);

    GateSequence ab(SpaceShape::qubits(2));
    ab.push(GateKind::ZZ_A, {1, 2}, 0.0).push(GateKind::ZZ_B, {1, 2}, 0.0);
    CHECK((ab.evaluate().matrix() - MatrixXc::Identity(4, 4)).norm() < 1e-15);

    // Phase pattern at α = π/4: the decompositions are diagonal up to phase
    // and follow the parity of the three σz eigenvalues.
    const MatrixXc u = zzz_via_collective(pi / 4).evaluate().matrix();
    const Complex ref = u(0, 0) / std::polar(1.0, -pi / 4);
    for (Eigen::Index i = 0; i < 8; ++i) {
        const int ones = int(((i >> 2) & 1) + ((i >> 1) & 1) + (i & 1));
        const double parity = ones % 2 ? -1.0 : 1.0;
        CHECK(std::abs(u(i, i) - ref * std::polar(1.0, -parity * pi / 4)) < 1e-12);
    }
    CHECK((u - MatrixXc(u.diagonal().asDiagonal())).norm() < 1e-12);
}

TEST_CASE("ZZZ decompositions on non-contiguous sites of a larger space")
{
    const auto shape = SpaceShape::with_mode(5, 2);
    const std::array<int, 3> sites{2, 3, 5};
    const MatrixXc target = oracle::evolve(
        oracle::chain(5, {{2, oracle::Z()}, {3, oracle::Z()}, {5, oracle::Z()}}, MatrixXc::Identity(2, 2)), 0.77);
    CHECK(phase_distance(zzz_via_collective(0.77, sites, shape).evaluate().matrix(), target) < 1e-10);
    CHECK(phase_distance(zzz_via_two_qubit(0.77, sites, shape).evaluate().matrix(), target) < 1e-10);
}

TEST_CASE("diagonal gates commute under permutation")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(-pi, pi);
    const auto shape = SpaceShape::qubits(4);
    std::vector<Gate> gates = {
        {GateKind::Zrot, {1}, angle(rng)},          {GateKind::Zrot, {3}, angle(rng)},
        {GateKind::CZ, {1, 2}, angle(rng)},         {GateKind::CZ, {4, 2}, angle(rng)},
        {GateKind::ZZ, {2, 3}, angle(rng)},         {GateKind::ZZ, {1, 4}, angle(rng)},
        {GateKind::ZZZ, {1, 2, 3}, angle(rng)},     {GateKind::ZZZ, {2, 3, 4}, angle(rng)},
        {GateKind::CollectiveSz2, {1, 3, 4}, angle(rng)},
    };
    for (const Gate& g : gates)
        CHECK(is_diagonal(g.kind));
    const auto evaluate = [&](const std::vector<Gate>& order) {
        GateSequence seq(shape);
        for (const Gate& g : order)
            seq.push(g.kind, g.sites, g.angle);
        return seq.evaluate().matrix();
    };
    const MatrixXc reference = evaluate(gates);
    for (int trial = 0; trial < 30; ++trial) {
        std::shuffle(gates.begin(), gates.end(), rng);
        CHECK((evaluate(gates) - reference).norm() < 1e-12);
    }
    CHECK_FALSE(is_diagonal(GateKind::Xrot));
    CHECK_FALSE(is_diagonal(GateKind::Yrot));
}

TEST_CASE("sequence evaluation order and application")
{
    const auto shape = SpaceShape::qubits(2);
    GateSequence seq(shape);
    seq.push(GateKind::Xrot, {1}, 0.3).push(GateKind::ZZ, {1, 2}, 0.7);
    const MatrixXc expected = oracle::evolve(dqsim::kron(oracle::Z(), oracle::Z()), 0.7) *
                              oracle::chain(2, {{1, oracle::evolve(oracle::X(), 0.3)}});
    CHECK((seq.evaluate().matrix() - expected).norm() < 1e-13);

    const PureState psi = PureState::basis(shape, 0);
    CHECK((seq.apply_to(psi).amplitudes() - expected.col(0)).norm() < 1e-13);
    CHECK(GateSequence(shape).evaluate().matrix() == MatrixXc::Identity(4, 4));
}

TEST_CASE("sequence push validation")
{
    GateSequence seq(SpaceShape::qubits(3));
    CHECK_THROWS_AS(seq.push(GateKind::ZZ, {1}, 0.1), ValidationError);
    CHECK_THROWS_AS(seq.push(GateKind::ZZ, {1, 1}, 0.1), ValidationError);
    CHECK_THROWS_AS(seq.push(GateKind::Xrot, {4}, 0.1), ValidationError);
    CHECK_THROWS_AS(seq.push(GateKind::Xrot, {0}, 0.1), ValidationError);
    CHECK_THROWS_AS(seq.push(GateKind::CollectiveSz2, {2}, 0.1), ValidationError);
    CHECK_THROWS_AS(seq.push(GateKind::Zrot, {1}, std::nan("")), ValidationError);
    CHECK(seq.empty());

    GateSequence other(SpaceShape::qubits(2));
    CHECK_THROWS_AS(seq.append(other), ValidationError);
}

TEST_CASE("text format round trip")
{
    const auto shape = SpaceShape::with_mode(3, 2);
    GateSequence seq = zzz_via_two_qubit(0.123456789012345678, {1, 2, 3}, shape);
    seq.append(zz_via_cz(-1.0 / 3.0, 3, 1, shape));
    seq.push(GateKind::CollectiveSz2, {1, 2, 3}, 1e-17);

    const std::string text = seq.to_text();
    CHECK(text.rfind("# dqsim gate sequence v1\n# qubits 3 fock 2\n", 0) == 0);
    const GateSequence back = GateSequence::from_text(text);
    CHECK(back.shape() == shape);
    REQUIRE(back.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(back.gates()[i].kind == seq.gates()[i].kind);
        CHECK(back.gates()[i].sites == seq.gates()[i].sites);
        CHECK(back.gates()[i].angle == seq.gates()[i].angle);
    }
    CHECK(back.to_text() == text);

    std::ostringstream os;
    os << seq;
    CHECK(os.str() == text);
}

TEST_CASE("text format errors")
{
    CHECK_THROWS_AS(GateSequence::from_text("ZZ 1,2 0.1\n"), ValidationError);
    CHECK_THROWS_AS(GateSequence::from_text("# qubits 2 fock 0\nCNOT 1,2 0.1\n"), ValidationError);
    CHECK_THROWS_AS(GateSequence::from_text("# qubits 2 fock 0\nZZ 1,x 0.1\n"), ValidationError);
    CHECK_THROWS_AS(GateSequence::from_text("# qubits 2 fock 0\nZZ 1,2\n"), ValidationError);
    CHECK_THROWS_AS(GateSequence::from_text("# qubits 2 fock 0\nZZ 1,3 0.1\n"), ValidationError);
    CHECK_THROWS_AS(GateSequence::from_text("# qubits two\n"), ValidationError);
    CHECK(GateSequence::from_text("# qubits 2 fock 0\n\n").empty());
}
