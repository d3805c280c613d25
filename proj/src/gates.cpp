#include "dqsim/gates.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dqsim {

namespace {

constexpr std::array kKindNames = {
    std::pair{GateKind::Zrot, "Zrot"},   std::pair{GateKind::Xrot, "Xrot"},
    std::pair{GateKind::Yrot, "Yrot"},   std::pair{GateKind::Xflip, "Xflip"},
    std::pair{GateKind::CZ, "CZ"},       std::pair{GateKind::ZZ, "ZZ"},
    std::pair{GateKind::ZZ_A, "ZZ_A"},   std::pair{GateKind::ZZ_B, "ZZ_B"},
    std::pair{GateKind::ZZZ, "ZZZ"},     std::pair{GateKind::CollectiveSz2, "CollectiveSz2"},
};

// Parity (+1/−1) of the σz eigenvalues in a local basis index of k bits.
double z_parity(Eigen::Index index)
{
    int ones = 0;
    for (; index != 0; index >>= 1)
        ones += int(index & 1);
    return ones % 2 == 0 ? 1.0 : -1.0;
}

MatrixXc diagonal(const VectorXc& d) { return d.asDiagonal(); }

// exp(−iθ·σz^{⊗k}) as a diagonal.
MatrixXc z_product_exp(double theta, int k)
{
    VectorXc d(Eigen::Index(1) << k);
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d(i) = std::polar(1.0, -theta * z_parity(i));
    return diagonal(d);
}

// cos(a)I − i sin(a)P for an involutory Pauli P.
MatrixXc pauli_exp(Axis axis, double a)
{
    return std::cos(a) * MatrixXc::Identity(2, 2) - kI * std::sin(a) * pauli_matrix(axis);
}

std::string format_angle(double angle)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", angle);
    return buf;
}

}  // namespace

std::string_view to_string(GateKind kind)
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name)
{
    for (const auto& [k, n] : kKindNames)
        if (name == n)
            return k;
    return std::nullopt;
}

int gate_arity(GateKind kind)
{
    switch (kind) {
    case GateKind::Zrot:
    case GateKind::Xrot:
    case GateKind::Yrot:
    case GateKind::Xflip:
        return 1;
    case GateKind::CZ:
    case GateKind::ZZ:
    case GateKind::ZZ_A:
    case GateKind::ZZ_B:
        return 2;
    case GateKind::ZZZ:
        return 3;
    case GateKind::CollectiveSz2:
        return 0;
    }
    return 0;
}

bool is_diagonal(GateKind kind)
{
    switch (kind) {
    case GateKind::Xrot:
    case GateKind::Yrot:
    case GateKind::Xflip:
        return false;
    default:
        return true;
    }
}

MatrixXc gate_matrix(GateKind kind, double angle, int n_sites)
{
    const int arity = gate_arity(kind);
    if (arity == 0 ? n_sites < 2 : n_sites != arity)
        throw ValidationError(std::string(to_string(kind)) + ": wrong number of sites (" + std::to_string(n_sites) + ")");

    constexpr double quarter_pi = std::numbers::pi / 4;
    switch (kind) {
    case GateKind::Zrot: {
        VectorXc d(2);
        d << 1.0, std::polar(1.0, angle);
        return diagonal(d);
    }
    case GateKind::Xrot:
        return pauli_exp(Axis::x, angle);
    case GateKind::Yrot:
        return pauli_exp(Axis::y, angle / 2);
    case GateKind::Xflip:
        return pauli_exp(Axis::x, -angle);
    case GateKind::CZ: {
        VectorXc d = VectorXc::Ones(4);
        d(3) = std::polar(1.0, -2.0 * angle);
        return diagonal(d);
    }
    case GateKind::ZZ:
        return z_product_exp(angle, 2);
    case GateKind::ZZ_A:
        return z_product_exp(-quarter_pi, 2);
    case GateKind::ZZ_B:
        return z_product_exp(quarter_pi, 2);
    case GateKind::ZZZ:
        return z_product_exp(angle, 3);
    case GateKind::CollectiveSz2: {
        // Σ_{i<j} z_i z_j = ((Σz)² − k)/2 with Σz = k − 2·popcount.
        VectorXc d(Eigen::Index(1) << n_sites);
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            int ones = 0;
            for (Eigen::Index b = i; b != 0; b >>= 1)
                ones += int(b & 1);
            const double total_z = n_sites - 2.0 * ones;
            const double pair_sum = (total_z * total_z - n_sites) / 2.0;
            d(i) = std::polar(1.0, -angle / 2.0 * pair_sum);
        }
        return diagonal(d);
    }
    }
    throw ValidationError("unknown gate kind");
}

// ---------------------------------------------------------------------------
// GateSequence

GateSequence::GateSequence(SpaceShape shape) : shape_(shape) {}

GateSequence& GateSequence::push(GateKind kind, std::vector<int> sites, double angle)
{
    const int arity = gate_arity(kind);
    const auto n = int(sites.size());
    if (arity == 0 ? n < 2 : n != arity)
        throw ValidationError(std::string(to_string(kind)) + ": expected " +
                              (arity == 0 ? std::string("at least 2") : std::to_string(arity)) + " sites, got " +
                              std::to_string(n));
    for (std::size_t i = 0; i < sites.size(); ++i) {
        require_site(shape_, sites[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (sites[j] == sites[i])
                throw ValidationError(std::string(to_string(kind)) + ": repeated site");
    }
    if (!std::isfinite(angle))
        throw ValidationError(std::string(to_string(kind)) + ": non-finite angle");
    gates_.push_back({kind, std::move(sites), angle});
    return *this;
}

GateSequence& GateSequence::append(const GateSequence& other)
{
    require_same_shape(shape_, other.shape_, "GateSequence::append");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Operator GateSequence::evaluate() const
{
    MatrixXc acc = MatrixXc::Identity(shape_.total_dim(), shape_.total_dim());
    for (const Gate& g : gates_) {
        const Operator full = embed(gate_matrix(g.kind, g.angle, int(g.sites.size())), g.sites, shape_);
        acc = full.matrix() * acc;
    }
    return {shape_, std::move(acc)};
}

PureState GateSequence::apply_to(const PureState& psi) const
{
    require_same_shape(shape_, psi.shape(), "GateSequence::apply_to");
    VectorXc v = psi.amplitudes();
    for (const Gate& g : gates_)
        v = embed(gate_matrix(g.kind, g.angle, int(g.sites.size())), g.sites, shape_).matrix() * v;
    return {shape_, std::move(v)};
}

std::map<GateKind, std::size_t> GateSequence::counts() const
{
    std::map<GateKind, std::size_t> out;
    for (const Gate& g : gates_)
        ++out[g.kind];
    return out;
}

std::size_t GateSequence::count(GateKind kind) const
{
    std::size_t n = 0;
    for (const Gate& g : gates_)
        n += g.kind == kind ? 1 : 0;
    return n;
}

std::string GateSequence::to_text() const
{
    std::ostringstream os;
    os << "# dqsim gate sequence v1\n";
    os << "# qubits " << shape_.n_qubits << " fock " << shape_.fock_dim << "\n";
    for (const Gate& g : gates_) {
        os << to_string(g.kind) << ' ';
        for (std::size_t i = 0; i < g.sites.size(); ++i)
            os << (i ? "," : "") << g.sites[i];
        os << ' ' << format_angle(g.angle) << '\n';
    }
    return os.str();
}

GateSequence GateSequence::from_text(std::string_view text)
{
    std::istringstream is{std::string(text)};
    std::string line;
    std::optional<GateSequence> seq;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        if (line[0] == '#') {
            std::string hash, key;
            ls >> hash >> key;
            if (key == "qubits") {
                int qubits = 0, fock = 0;
                std::string fock_key;
                ls >> qubits >> fock_key >> fock;
                if (!ls || fock_key != "fock")
                    throw ValidationError("gate sequence line " + std::to_string(line_no) + ": bad shape header");
                seq.emplace(SpaceShape(qubits, fock));
            }
            continue;
        }
        if (!seq)
            throw ValidationError("gate sequence: missing '# qubits' header before first gate");
        std::string name, site_list;
        double angle = 0.0;
        ls >> name >> site_list >> angle;
        if (!ls)
            throw ValidationError("gate sequence line " + std::to_string(line_no) + ": expected <kind> <sites> <angle>");
        const auto kind = parse_gate_kind(name);
        if (!kind)
            throw ValidationError("gate sequence line " + std::to_string(line_no) + ": unknown gate '" + name + "'");
        std::vector<int> sites;
        std::istringstream ss(site_list);
        for (std::string tok; std::getline(ss, tok, ',');) {
            try {
                sites.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ValidationError("gate sequence line " + std::to_string(line_no) + ": bad site '" + tok + "'");
            }
        }
        seq->push(*kind, std::move(sites), angle);
    }
    if (!seq)
        throw ValidationError("gate sequence: missing '# qubits' header");
    return std::move(*seq);
}

std::ostream& operator<<(std::ostream& os, const GateSequence& seq) { return os << seq.to_text(); }

// ---------------------------------------------------------------------------
// Stand-alone gates

Operator z_rotation(double phi) { return {SpaceShape::qubits(1), gate_matrix(GateKind::Zrot, phi, 1)}; }
Operator x_rotation(double phi) { return {SpaceShape::qubits(1), gate_matrix(GateKind::Xrot, phi, 1)}; }
Operator y_rotation(double theta) { return {SpaceShape::qubits(1), gate_matrix(GateKind::Yrot, theta, 1)}; }
Operator cz_gate(double phi) { return {SpaceShape::qubits(2), gate_matrix(GateKind::CZ, phi, 2)}; }
Operator zz_gate(double theta) { return {SpaceShape::qubits(2), gate_matrix(GateKind::ZZ, theta, 2)}; }
Operator zzz_gate(double beta) { return {SpaceShape::qubits(3), gate_matrix(GateKind::ZZZ, beta, 3)}; }

Operator collective_sz2(double theta, std::span<const int> sites, const SpaceShape& shape)
{
    if (sites.size() < 2)
        throw ValidationError("collective_sz2: needs at least two sites");
    return embed(gate_matrix(GateKind::CollectiveSz2, theta, int(sites.size())), sites, shape);
}

// ---------------------------------------------------------------------------
// Decompositions

GateSequence zz_via_cz(double theta, int j, int k, const SpaceShape& shape)
{
    const double phi = 2.0 * theta;
    GateSequence seq(shape);
    seq.push(GateKind::CZ, {j, k}, phi);
    seq.push(GateKind::Zrot, {j}, phi);
    seq.push(GateKind::Zrot, {k}, phi);
    return seq;
}

// For pivot p with neighbours a, b: W = e^{−iπ/4 z_p z_a} e^{−iπ/4 z_p z_b}
// (or U_{S_z²}(π/2), which adds a commuting z_a z_b factor) sends σx_p to
// −σx_p σz_a σz_b, and R_Y(−π/2) sends σx_p to σz_p. Hence
//   R_Y(−π/2) W e^{iασx_p} W† R_Y(π/2) = e^{−iα σz_p σz_a σz_b}.

GateSequence zzz_via_collective(double alpha, std::array<int, 3> sites, const SpaceShape& shape)
{
    constexpr double half_pi = std::numbers::pi / 2;
    const int pivot = sites[1];
    std::vector<int> all(sites.begin(), sites.end());
    GateSequence seq(shape);
    seq.push(GateKind::Yrot, {pivot}, half_pi);
    seq.push(GateKind::CollectiveSz2, all, -half_pi);
    seq.push(GateKind::Xflip, {pivot}, alpha);
    seq.push(GateKind::CollectiveSz2, all, half_pi);
    seq.push(GateKind::Yrot, {pivot}, -half_pi);
    return seq;
}

GateSequence zzz_via_two_qubit(double alpha, std::array<int, 3> sites, const SpaceShape& shape)
{
    constexpr double half_pi = std::numbers::pi / 2;
    constexpr double quarter_pi = std::numbers::pi / 4;
    const int pivot = sites[1];
    GateSequence seq(shape);
    seq.push(GateKind::Yrot, {pivot}, half_pi);
    seq.push(GateKind::ZZ_A, {sites[0], pivot}, quarter_pi);
    seq.push(GateKind::ZZ_A, {pivot, sites[2]}, quarter_pi);
    seq.push(GateKind::Xflip, {pivot}, alpha);
    seq.push(GateKind::ZZ_B, {sites[0], pivot}, quarter_pi);
    seq.push(GateKind::ZZ_B, {pivot, sites[2]}, quarter_pi);
    seq.push(GateKind::Yrot, {pivot}, -half_pi);
    return seq;
}

}  // namespace dqsim
