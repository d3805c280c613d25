#include "dqsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dqsim {

namespace {

using RowMatrixXc = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Compressed rows of a dense matrix.
struct Csr {
    std::vector<Eigen::Index> start{0};
    std::vector<Eigen::Index> col;
    std::vector<Complex> val;

    explicit Csr(const MatrixXc& m)
    {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (m(i, j) != Complex(0.0)) {
                    col.push_back(j);
                    val.push_back(m(i, j));
                }
            start.push_back(Eigen::Index(col.size()));
        }
    }
    Csr() = default;
};

// Plain product; std::complex operator* goes through the NaN-recovering libcall.
inline Complex mul(Complex x, Complex y)
{
    return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

// rhs(ρ) = Kρ + (Kρ)† + κ aρa† with K = −iH − (κ/2) a†a, on row-major ρ
// so that Kρ is a sum of row AXPYs.
class Generator {
public:
    Generator(const Operator& h, const Csr* a, const MatrixXc* number, double kappa) : a_(a), kappa_(kappa)
    {
        MatrixXc k = -kI * h.matrix();
        if (kappa > 0.0)
            k -= (kappa / 2.0) * *number;
        k_ = Csr(k);
    }

    void operator()(const RowMatrixXc& rho, RowMatrixXc& out) const
    {
        const Eigen::Index n = rho.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            auto row = out.row(i);
            row.setZero();
            for (Eigen::Index p = k_.start[i]; p < k_.start[i + 1]; ++p)
                row.noalias() += k_.val[p] * rho.row(k_.col[p]);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            out(i, i) = 2.0 * out(i, i).real();
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const Complex x = out(i, j);
                const Complex y = out(j, i);
                out(i, j) = x + std::conj(y);
                out(j, i) = y + std::conj(x);
            }
        }
        if (kappa_ > 0.0) {
            const Csr& a = *a_;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index p = a.start[i]; p < a.start[i + 1]; ++p) {
                    const Complex left = kappa_ * a.val[p];
                    for (Eigen::Index j = 0; j < n; ++j)
                        for (Eigen::Index q = a.start[j]; q < a.start[j + 1]; ++q)
                            out(i, j) += mul(mul(left, std::conj(a.val[q])), rho(a.col[p], a.col[q]));
                }
        }
    }

private:
    Csr k_;
    const Csr* a_;
    double kappa_;
};

}  // namespace

Segment::Segment(Operator hamiltonian, double dt) : h(std::move(hamiltonian)), duration(dt)
{
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw ValidationError("Segment: duration must be positive");
    if (!h.is_hermitian(1e-9))
        throw ValidationError("Segment: Hamiltonian is not Hermitian");
}

MatrixXc lindblad_rhs(const DensityMatrix& rho, const Operator& h, double kappa)
{
    require_same_shape(rho.shape(), h.shape(), "lindblad_rhs");
    if (kappa < 0.0)
        throw ValidationError("lindblad_rhs: kappa must be non-negative");
    const MatrixXc& r = rho.matrix();
    MatrixXc out = -kI * commutator(h.matrix(), r);
    if (kappa > 0.0) {
        const MatrixXc a = ladder(Ladder::lower, rho.shape()).matrix();
        const MatrixXc a_dag = a.adjoint();
        const MatrixXc n = a_dag * a;
        out += kappa * (2.0 * a * r * a_dag - n * r - r * n) / 2.0;
    }
    return out;
}

namespace {

double hermitian_norm(const MatrixXc& h)
{
    const Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double step_for_norm(double max_norm, double kappa)
{
    double dt = std::numeric_limits<double>::infinity();
    if (max_norm > 0.0)
        dt = 0.05 / max_norm;
    if (kappa > 0.0)
        dt = std::min(dt, 1e-4 / kappa);
    return dt;
}

}  // namespace

double default_step(std::span<const Segment> segments, double kappa)
{
    double max_norm = 0.0;
    for (const Segment& s : segments)
        max_norm = std::max(max_norm, hermitian_norm(s.h.matrix()));
    return step_for_norm(max_norm, kappa);
}

Trajectory evolve_master(const DensityMatrix& rho0, std::span<const Segment> segments, double kappa,
                         const MasterOptions& options)
{
    const SpaceShape shape = rho0.shape();
    if (kappa < 0.0 || !std::isfinite(kappa))
        throw ValidationError("evolve_master: kappa must be finite and non-negative");
    if (kappa > 0.0 && shape.fock_dim < 2)
        throw ValidationError("evolve_master: photon loss needs a bosonic mode");
    for (const Segment& s : segments)
        require_same_shape(shape, s.h.shape(), "evolve_master");

    // Without a ceiling each segment gets its own step; schedules repeat a
    // handful of Hamiltonians, so norms are cached by matrix.
    std::vector<std::pair<const MatrixXc*, double>> steps_seen;
    const auto step_of = [&](const Segment& seg) {
        if (options.max_dt > 0.0)
            return options.max_dt;
        for (const auto& [m, dt] : steps_seen)
            if (*m == seg.h.matrix())
                return dt;
        const double dt = step_for_norm(hermitian_norm(seg.h.matrix()), kappa);
        steps_seen.emplace_back(&seg.h.matrix(), dt);
        return dt;
    };

    Csr a;
    MatrixXc number;
    if (kappa > 0.0) {
        const MatrixXc dense_a = ladder(Ladder::lower, shape).matrix();
        a = Csr(dense_a);
        number = dense_a.adjoint() * dense_a;
    }

    Trajectory traj;
    traj.points.push_back({0.0, rho0});
    traj.min_eigenvalue = rho0.min_eigenvalue();
    traj.max_purity = rho0.purity();

    RowMatrixXc rho = rho0.matrix();
    const auto n = rho.rows();
    RowMatrixXc k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    double time = 0.0;

    const auto record = [&](double t) {
        // RK4 does not preserve positivity exactly; pure states pick up
        // negative eigenvalues of the order of the local error.
        DensityMatrix dm(shape, MatrixXc(rho), options.trace_abort, std::numeric_limits<double>::infinity());
        const double lowest = dm.min_eigenvalue();
        if (lowest < -options.positivity_abort) {
            std::ostringstream msg;
            msg << "evolve_master: eigenvalue " << lowest << " at t = " << t << "; reduce max_dt";
            throw NumericalAbort(msg.str());
        }
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, lowest);
        traj.max_purity = std::max(traj.max_purity, dm.purity());
        traj.points.push_back({t, std::move(dm)});
    };

    for (std::size_t idx = 0; idx < segments.size(); ++idx) {
        const Segment& seg = segments[idx];
        const Generator rhs(seg.h, &a, &number, kappa);
        const auto substeps = std::max<long>(1, long(std::ceil(seg.duration / step_of(seg) - 1e-9)));
        const double h = seg.duration / double(substeps);
        for (long step = 0; step < substeps; ++step) {
            rhs(rho, k1);
            tmp = rho + (h / 2) * k1;
            rhs(tmp, k2);
            tmp = rho + (h / 2) * k2;
            rhs(tmp, k3);
            tmp = rho + h * k3;
            rhs(tmp, k4);
            rho += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tmp = rho.adjoint();
            rho = (rho + tmp) / 2.0;

            const double drift = std::abs(rho.trace().real() - 1.0);
            traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
            if (!(drift <= options.trace_abort)) {
                std::ostringstream msg;
                msg << "evolve_master: trace drift " << drift << " exceeds " << options.trace_abort << " in segment "
                    << idx << " (step size " << h << "); reduce max_dt";
                throw NumericalAbort(msg.str());
            }
        }
        traj.rk_steps += std::size_t(substeps);
        time += seg.duration;
        if (options.record_every_segment || idx + 1 == segments.size())
            record(time);
    }
    return traj;
}

Operator schedule_unitary(std::span<const Segment> segments, const SpaceShape& shape)
{
    MatrixXc u = MatrixXc::Identity(shape.total_dim(), shape.total_dim());
    for (const Segment& s : segments) {
        require_same_shape(shape, s.h.shape(), "schedule_unitary");
        u = expm_hermitian(s.h, s.duration).matrix() * u;
    }
    return {shape, std::move(u)};
}

std::vector<Segment> itc_schedule(int n, const ModelParams& p, const SpaceShape& shape, double time, int steps,
                                  bool expand_h2)
{
    if (steps < 1)
        throw ValidationError("itc_schedule: step count must be at least 1");
    if (time < 0.0 || !std::isfinite(time))
        throw ValidationError("itc_schedule: time must be finite and non-negative");
    const ModelParams q = complete_h2_frequencies(p, n);
    std::vector<Segment> schedule;
    if (time == 0.0)
        return schedule;
    const double tau = time / steps;
    const Operator h1 = build_h1(n, q.omega1, q.Omega1, q.g, shape);
    const Operator h2 = build_h2(n, q.omega_prime, q.Omega_prime, q.J, shape);
    const std::vector<Operator> blocks =
        expand_h2 ? h2_blocks(n, q.omega_prime, q.Omega_prime, q.J, shape) : std::vector<Operator>{};
    for (int step = 0; step < steps; ++step) {
        schedule.emplace_back(h1, tau);
        if (expand_h2) {
            for (const Operator& b : blocks)
                schedule.emplace_back(b, tau);
        } else {
            schedule.emplace_back(h2, tau);
        }
    }
    return schedule;
}

}  // namespace dqsim
