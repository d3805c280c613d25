#pragma once

// Expression-friendly dense helpers shared by every module. All of them take
// Eigen expressions and are templated on the scalar type of their arguments.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace dqsim {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Kronecker product a ⊗ b; a is the more significant factor.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a * b;
    out.noalias() -= b * a;
    return out;
}

/// Largest singular value.
template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived>& m)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
    return svd.singularValues()(0);
}

/// ‖m - m†‖ measured relative to max(1, ‖m‖), Frobenius.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m)
{
    using Real = typename Derived::RealScalar;
    const Real scale = std::max<Real>(Real(1), m.norm());
    return (m - m.adjoint()).norm() / scale;
}

template <typename Derived>
typename Derived::RealScalar unitary_defect(const Eigen::MatrixBase<Derived>& m)
{
    const auto n = m.rows();
    return (m.adjoint() * m - Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n))
        .norm();
}

/// min over γ of ‖u − e^{iγ} v‖_F. The minimizer is γ = arg tr(v†u).
template <typename DerivedU, typename DerivedV>
typename DerivedU::RealScalar phase_distance(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v)
{
    using Real = typename DerivedU::RealScalar;
    const std::complex<Real> overlap = (v.adjoint() * u).trace();
    const Real gamma = std::abs(overlap) > Real(0) ? std::arg(overlap) : Real(0);
    return (u - std::polar(Real(1), gamma) * v).norm();
}

/// Trace norm of a Hermitian difference, halved.
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar trace_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    using Matrix = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix diff = a - b;
    diff = (diff + diff.adjoint()).eval() / typename DerivedA::RealScalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum() / typename DerivedA::RealScalar(2);
}

}  // namespace dqsim
