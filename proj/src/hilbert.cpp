#include "dqsim/hilbert.hpp"

#include <cmath>
#include <string>

namespace dqsim {

namespace {

// Bit of `site` (1-based) inside the qubit part of a full basis index.
int qubit_shift(const SpaceShape& shape, int site) { return shape.n_qubits - site; }

}  // namespace

SpaceShape::SpaceShape(int qubits, int fock) : n_qubits(qubits), fock_dim(fock)
{
    if (qubits < 1)
        throw ValidationError("SpaceShape: n_qubits must be at least 1");
    if (fock < 0)
        throw ValidationError("SpaceShape: fock_dim must be non-negative");
    if (qubits > 20)
        throw ValidationError("SpaceShape: dense storage limited to 20 qubits");
}

void require_same_shape(const SpaceShape& a, const SpaceShape& b, const char* what)
{
    if (!(a == b))
        throw ValidationError(std::string(what) + ": shape mismatch");
}

void require_site(const SpaceShape& shape, int site)
{
    if (site < 1 || site > shape.n_qubits)
        throw ValidationError("site " + std::to_string(site) + " out of range 1.." + std::to_string(shape.n_qubits));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(SpaceShape shape, MatrixXc entries) : shape_(shape), m_(std::move(entries))
{
    const auto n = shape_.total_dim();
    if (m_.rows() != n || m_.cols() != n)
        throw ValidationError("Operator: matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                              ", shape requires " + std::to_string(n));
}

Operator Operator::identity(const SpaceShape& shape)
{
    const auto n = shape.total_dim();
    return {shape, MatrixXc::Identity(n, n)};
}

Operator Operator::zero(const SpaceShape& shape)
{
    const auto n = shape.total_dim();
    return {shape, MatrixXc::Zero(n, n)};
}

Operator& Operator::operator+=(const Operator& rhs)
{
    require_same_shape(shape_, rhs.shape_, "Operator +");
    m_ += rhs.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs)
{
    require_same_shape(shape_, rhs.shape_, "Operator -");
    m_ -= rhs.m_;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b)
{
    require_same_shape(a.shape_, b.shape_, "Operator *");
    return {a.shape_, a.m_ * b.m_};
}

Operator commutator(const Operator& a, const Operator& b)
{
    require_same_shape(a.shape(), b.shape(), "commutator");
    return {a.shape(), commutator(a.matrix(), b.matrix())};
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(SpaceShape shape, VectorXc amplitudes) : shape_(shape), amps_(std::move(amplitudes))
{
    if (amps_.size() != shape_.total_dim())
        throw ValidationError("PureState: amplitude count does not match shape");
    if (std::abs(amps_.norm() - 1.0) > 1e-10)
        throw ValidationError("PureState: amplitudes are not normalized");
}

PureState PureState::normalized(SpaceShape shape, VectorXc amplitudes)
{
    const double n = amplitudes.norm();
    if (n == 0.0)
        throw ValidationError("PureState: zero vector");
    amplitudes /= n;
    return {shape, std::move(amplitudes)};
}

PureState PureState::basis(const SpaceShape& shape, Eigen::Index index)
{
    if (index < 0 || index >= shape.total_dim())
        throw ValidationError("PureState: basis index out of range");
    VectorXc v = VectorXc::Zero(shape.total_dim());
    v(index) = 1.0;
    return {shape, std::move(v)};
}

PureState PureState::product(const SpaceShape& shape, std::span<const int> qubit_bits,
                             std::span<const Complex> mode_amplitudes)
{
    if (std::ssize(qubit_bits) != shape.n_qubits)
        throw ValidationError("PureState: one bit per qubit required");
    Eigen::Index q = 0;
    for (int b : qubit_bits) {
        if (b != 0 && b != 1)
            throw ValidationError("PureState: qubit bits must be 0 or 1");
        q = (q << 1) | b;
    }
    VectorXc mode = VectorXc::Zero(shape.mode_dim());
    if (mode_amplitudes.empty()) {
        mode(0) = 1.0;
    } else {
        if (std::ssize(mode_amplitudes) > shape.mode_dim())
            throw ValidationError("PureState: more mode amplitudes than Fock levels");
        for (std::size_t n = 0; n < mode_amplitudes.size(); ++n)
            mode(Eigen::Index(n)) = mode_amplitudes[n];
    }
    VectorXc v = VectorXc::Zero(shape.total_dim());
    v.segment(q * shape.mode_dim(), shape.mode_dim()) = mode;
    return normalized(shape, std::move(v));
}

DensityMatrix::DensityMatrix(SpaceShape shape, MatrixXc entries, double trace_tol, double positivity_tol)
    : shape_(shape), m_(std::move(entries))
{
    const auto n = shape_.total_dim();
    if (m_.rows() != n || m_.cols() != n)
        throw ValidationError("DensityMatrix: matrix does not match shape");
    if (hermitian_defect(m_) > 1e-10)
        throw ValidationError("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > trace_tol)
        throw ValidationError("DensityMatrix: trace is not 1");
    if (min_eigenvalue() < -positivity_tol)
        throw ValidationError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi)
{
    const VectorXc& v = psi.amplitudes();
    return {psi.shape(), v * v.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(const SpaceShape& shape)
{
    const auto n = shape.total_dim();
    return {shape, MatrixXc::Identity(n, n) / double(n)};
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double DensityMatrix::expectation(const Operator& o) const
{
    require_same_shape(shape_, o.shape(), "expectation");
    return (m_ * o.matrix()).trace().real();
}

// ---------------------------------------------------------------------------
// Elementary operators

MatrixXc pauli_matrix(Axis axis)
{
    MatrixXc p(2, 2);
    switch (axis) {
    case Axis::x:
        p << 0, 1, 1, 0;
        break;
    case Axis::y:
        p << 0, -kI, kI, 0;
        break;
    case Axis::z:
        p << 1, 0, 0, -1;
        break;
    }
    return p;
}

Operator pauli(Axis axis, int site, const SpaceShape& shape)
{
    require_site(shape, site);
    const auto n = shape.total_dim();
    const auto md = shape.mode_dim();
    const int shift = qubit_shift(shape, site);
    const auto flipped = [&](Eigen::Index col) {
        return ((col / md) ^ (Eigen::Index(1) << shift)) * md + col % md;
    };
    MatrixXc m = MatrixXc::Zero(n, n);
    // Built entrywise from the basis index, no Kronecker products.
    for (Eigen::Index col = 0; col < n; ++col) {
        const int bit = int(((col / md) >> shift) & 1);
        switch (axis) {
        case Axis::z:
            m(col, col) = bit == 0 ? 1.0 : -1.0;
            break;
        case Axis::x:
            m(flipped(col), col) = 1.0;
            break;
        case Axis::y:
            // σy|0⟩ = i|1⟩, σy|1⟩ = −i|0⟩
            m(flipped(col), col) = bit == 0 ? kI : -kI;
            break;
        }
    }
    return {shape, std::move(m)};
}

Operator ladder(Ladder kind, const SpaceShape& shape)
{
    if (shape.fock_dim < 2)
        throw ValidationError("ladder: shape has no bosonic mode");
    const auto d = shape.fock_dim;
    MatrixXc a = MatrixXc::Zero(d, d);
    for (Eigen::Index k = 1; k < d; ++k)
        a(k - 1, k) = std::sqrt(double(k));
    if (kind == Ladder::raise)
        a.adjointInPlace();
    const auto qd = shape.qubit_dim();
    return {shape, kron(MatrixXc::Identity(qd, qd), a)};
}

Operator number_operator(const SpaceShape& shape)
{
    if (shape.fock_dim < 2)
        throw ValidationError("number_operator: shape has no bosonic mode");
    VectorXc diag(shape.total_dim());
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        diag(i) = double(i % shape.mode_dim());
    return {shape, diag.asDiagonal()};
}

Operator spin_ladder(SpinLadder kind, int site, const SpaceShape& shape)
{
    require_site(shape, site);
    const double sign = kind == SpinLadder::plus ? 1.0 : -1.0;
    const MatrixXc local = (pauli_matrix(Axis::x) + sign * kI * pauli_matrix(Axis::y)) / 2.0;
    const int sites[] = {site};
    return embed(local, sites, shape);
}

Operator z_string(std::span<const int> sites, const SpaceShape& shape)
{
    const auto n = shape.total_dim();
    const auto md = shape.mode_dim();
    VectorXc diag = VectorXc::Ones(n);
    for (int site : sites) {
        require_site(shape, site);
        const int shift = qubit_shift(shape, site);
        for (Eigen::Index i = 0; i < n; ++i)
            if (((i / md) >> shift) & 1)
                diag(i) = -diag(i);
    }
    return {shape, diag.asDiagonal()};
}

Operator embed(const MatrixXc& local, std::span<const int> sites, const SpaceShape& shape)
{
    const auto k = std::ssize(sites);
    if (k == 0 || local.rows() != (Eigen::Index(1) << k) || local.cols() != local.rows())
        throw ValidationError("embed: local operator does not match site count");
    std::vector<int> shifts;
    for (auto it = sites.begin(); it != sites.end(); ++it) {
        require_site(shape, *it);
        for (auto jt = sites.begin(); jt != it; ++jt)
            if (*jt == *it)
                throw ValidationError("embed: repeated site");
        shifts.push_back(qubit_shift(shape, *it));
    }

    const auto n = shape.total_dim();
    const auto md = shape.mode_dim();
    const Eigen::Index local_dim = local.rows();
    MatrixXc m = MatrixXc::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const Eigen::Index q = col / md;
        const Eigen::Index mode = col % md;
        Eigen::Index local_col = 0;
        Eigen::Index rest = q;
        for (int s : shifts) {
            local_col = (local_col << 1) | ((q >> s) & 1);
            rest &= ~(Eigen::Index(1) << s);
        }
        for (Eigen::Index local_row = 0; local_row < local_dim; ++local_row) {
            const Complex value = local(local_row, local_col);
            if (value == Complex(0.0))
                continue;
            Eigen::Index row_q = rest;
            for (Eigen::Index b = 0; b < k; ++b)
                if ((local_row >> (k - 1 - b)) & 1)
                    row_q |= Eigen::Index(1) << shifts[std::size_t(b)];
            m(row_q * md + mode, col) = value;
        }
    }
    return {shape, std::move(m)};
}

Operator expm_hermitian(const Operator& h, double scale)
{
    if (!h.is_hermitian(1e-9))
        throw ValidationError("expm_hermitian: operator is not Hermitian");
    const MatrixXc sym = (h.matrix() + h.matrix().adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalAbort("expm_hermitian: eigendecomposition failed");
    const Eigen::VectorXd& lambda = es.eigenvalues();
    VectorXc phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        phases(i) = std::polar(1.0, -scale * lambda(i));
    const MatrixXc& v = es.eigenvectors();
    return {h.shape(), v * phases.asDiagonal() * v.adjoint()};
}

PureState apply(const Operator& u, const PureState& psi)
{
    require_same_shape(u.shape(), psi.shape(), "apply");
    return {psi.shape(), u.matrix() * psi.amplitudes()};
}

DensityMatrix conjugate(const Operator& u, const DensityMatrix& rho)
{
    require_same_shape(u.shape(), rho.shape(), "conjugate");
    MatrixXc out = u.matrix() * rho.matrix() * u.matrix().adjoint();
    out = (out + out.adjoint()).eval() / 2.0;
    return {rho.shape(), std::move(out), 1e-9};
}

}  // namespace dqsim
