#pragma once

// Gate set of the superconducting-circuit protocols and the decompositions of
// ZZ (single-qubit Z rotations + c-phase) and ZZZ (collective S_z² gate, or
// fixed ±π/4 ZZ gates) into it.

#include "dqsim/hilbert.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dqsim {

enum class GateKind {
    Zrot,           ///< Z(φ) = diag(1, e^{iφ})
    Xrot,           ///< X(φ) = exp(−iφσx)
    Yrot,           ///< R_Y(θ) = exp(−iθσy/2)
    Xflip,          ///< exp(+iασx)
    CZ,             ///< CZ(φ) = diag(1, 1, 1, e^{−2iφ})
    ZZ,             ///< exp(−iθσzσz)
    ZZ_A,           ///< exp(+iπ/4 σzσz)
    ZZ_B,           ///< exp(−iπ/4 σzσz)
    ZZZ,            ///< exp(−iβσzσzσz)
    CollectiveSz2,  ///< exp(−i(θ/2)Σ_{i<j}σz_iσz_j) over its sites
};

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);

/// Number of sites the gate acts on; 0 for CollectiveSz2 (any set of ≥ 2).
int gate_arity(GateKind kind);
bool is_diagonal(GateKind kind);

/// Local 2^k × 2^k matrix of a gate acting on k sites.
MatrixXc gate_matrix(GateKind kind, double angle, int n_sites);

struct Gate {
    GateKind kind;
    std::vector<int> sites;
    double angle = 0.0;
};

class GateSequence {
public:
    explicit GateSequence(SpaceShape shape);

    const SpaceShape& shape() const { return shape_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    /// Append a gate after validating arity and site indices.
    GateSequence& push(GateKind kind, std::vector<int> sites, double angle);
    GateSequence& append(const GateSequence& other);

    /// Product of the gates, the first-applied gate rightmost.
    Operator evaluate() const;
    PureState apply_to(const PureState& psi) const;

    std::map<GateKind, std::size_t> counts() const;
    std::size_t count(GateKind kind) const;

    /// One `<kind> <site,site,...> <angle>` line per gate after a short header.
    std::string to_text() const;
    static GateSequence from_text(std::string_view text);

private:
    SpaceShape shape_;
    std::vector<Gate> gates_;
};

std::ostream& operator<<(std::ostream& os, const GateSequence& seq);

// Stand-alone gate matrices on the minimal number of qubits.
Operator z_rotation(double phi);
Operator x_rotation(double phi);
Operator y_rotation(double theta);
Operator cz_gate(double phi);
Operator zz_gate(double theta);
Operator zzz_gate(double beta);

/// U_{S_z²}(θ) on the listed sites of `shape`.
Operator collective_sz2(double theta, std::span<const int> sites, const SpaceShape& shape);

/// CZ(φ) followed by Z(φ) on both qubits with φ = 2θ. Equals zz_gate(θ) times
/// the global phase e^{iθ}.
GateSequence zz_via_cz(double theta, int j = 1, int k = 2, const SpaceShape& shape = SpaceShape::qubits(2));

/// exp(−iασz_aσz_bσz_c) from R_Y basis changes on the middle site around an
/// X kick conjugated by U_{S_z²}(±π/2).
GateSequence zzz_via_collective(double alpha, std::array<int, 3> sites = {1, 2, 3},
                                const SpaceShape& shape = SpaceShape::qubits(3));

/// Same unitary with the collective gate replaced by ZZ_A/ZZ_B on the two
/// nearest-neighbour pairs of the middle site.
GateSequence zzz_via_two_qubit(double alpha, std::array<int, 3> sites = {1, 2, 3},
                               const SpaceShape& shape = SpaceShape::qubits(3));

}  // namespace dqsim
