#pragma once

// Dense operator and state algebra on N qubits times an optional truncated
// bosonic mode.
//
// Basis layout: qubit 1 is the most significant tensor factor, the mode (when
// present) the least significant one, so
//     index = bits(q1 … qN) * mode_dim + n.
// Single-qubit basis: index 0 is the σz = +1 eigenstate ("|0⟩_z", excited),
// index 1 the σz = −1 eigenstate (ground). σ⁺ = (σx + iσy)/2 takes ground to
// excited, which keeps a†a + Σσ⁺σ⁻ conserved by the Tavis-Cummings coupling.

#include "dqsim/errors.hpp"
#include "dqsim/linalg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dqsim {

struct SpaceShape {
    int n_qubits = 1;
    int fock_dim = 0;  ///< 0 means no bosonic mode

    SpaceShape() = default;
    SpaceShape(int qubits, int fock);

    static SpaceShape qubits(int n) { return {n, 0}; }
    static SpaceShape with_mode(int n, int fock) { return {n, fock}; }

    bool has_mode() const { return fock_dim > 0; }
    Eigen::Index mode_dim() const { return fock_dim > 0 ? fock_dim : 1; }
    Eigen::Index qubit_dim() const { return Eigen::Index(1) << n_qubits; }
    Eigen::Index total_dim() const { return qubit_dim() * mode_dim(); }

    friend bool operator==(const SpaceShape&, const SpaceShape&) = default;
};

void require_same_shape(const SpaceShape& a, const SpaceShape& b, const char* what);
void require_site(const SpaceShape& shape, int site);

class Operator {
public:
    Operator(SpaceShape shape, MatrixXc entries);

    static Operator identity(const SpaceShape& shape);
    static Operator zero(const SpaceShape& shape);

    const SpaceShape& shape() const { return shape_; }
    const MatrixXc& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    bool is_hermitian(double tol = 1e-9) const { return hermitian_defect(m_) <= tol; }
    bool is_unitary(double tol = 1e-10) const { return unitary_defect(m_) <= tol; }

    Operator dagger() const { return {shape_, m_.adjoint()}; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex c)
    {
        m_ *= c;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex c, Operator a) { return a *= c; }
    friend Operator operator*(Operator a, Complex c) { return a *= c; }

private:
    SpaceShape shape_;
    MatrixXc m_;
};

Operator commutator(const Operator& a, const Operator& b);

class PureState {
public:
    /// Throws unless ‖amplitudes‖ = 1 within 1e-10.
    PureState(SpaceShape shape, VectorXc amplitudes);

    static PureState normalized(SpaceShape shape, VectorXc amplitudes);
    static PureState basis(const SpaceShape& shape, Eigen::Index index);
    /// Qubit product state (0 = σz +1, 1 = σz −1 per site) times mode amplitudes.
    static PureState product(const SpaceShape& shape, std::span<const int> qubit_bits,
                             std::span<const Complex> mode_amplitudes = {});

    const SpaceShape& shape() const { return shape_; }
    const VectorXc& amplitudes() const { return amps_; }

private:
    SpaceShape shape_;
    VectorXc amps_;
};

class DensityMatrix {
public:
    /// Throws unless Hermitian, unit trace and eigenvalues ≥ −positivity_tol.
    DensityMatrix(SpaceShape shape, MatrixXc entries, double trace_tol = 1e-10, double positivity_tol = 1e-8);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(const SpaceShape& shape);

    const SpaceShape& shape() const { return shape_; }
    const MatrixXc& matrix() const { return m_; }

    double trace() const { return m_.trace().real(); }
    double purity() const;
    double min_eigenvalue() const;
    /// Tr(ρ O) for Hermitian O.
    double expectation(const Operator& o) const;

private:
    SpaceShape shape_;
    MatrixXc m_;
};

enum class Axis { x, y, z };
enum class Ladder { lower, raise };
enum class SpinLadder { plus, minus };

/// 2×2 Pauli matrix in the single-qubit basis above.
MatrixXc pauli_matrix(Axis axis);

/// σ^axis on `site` (1-based), identity elsewhere.
Operator pauli(Axis axis, int site, const SpaceShape& shape);
Operator ladder(Ladder kind, const SpaceShape& shape);
Operator number_operator(const SpaceShape& shape);
Operator spin_ladder(SpinLadder kind, int site, const SpaceShape& shape);

/// Product of σz over the listed sites.
Operator z_string(std::span<const int> sites, const SpaceShape& shape);

/// Lift a 2^k × 2^k operator acting on `sites` (1-based, listed most
/// significant first) to the full space.
Operator embed(const MatrixXc& local, std::span<const int> sites, const SpaceShape& shape);

/// exp(−i·scale·H) through the eigendecomposition of H.
Operator expm_hermitian(const Operator& h, double scale);

PureState apply(const Operator& u, const PureState& psi);
DensityMatrix conjugate(const Operator& u, const DensityMatrix& rho);

}  // namespace dqsim
