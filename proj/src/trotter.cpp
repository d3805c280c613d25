#include "dqsim/trotter.hpp"

#include <cmath>

namespace dqsim {

namespace {

void require_steps(int steps)
{
    if (steps < 1)
        throw ValidationError("Trotter step count must be at least 1");
}

void require_time(double t)
{
    if (!std::isfinite(t))
        throw ValidationError("Trotter time must be finite");
}

MatrixXc matrix_power(const MatrixXc& m, int p)
{
    MatrixXc result = MatrixXc::Identity(m.rows(), m.cols());
    MatrixXc base = m;
    while (p > 0) {
        if (p & 1)
            result = result * base;
        p >>= 1;
        if (p > 0)
            base = base * base;
    }
    return result;
}

}  // namespace

Operator trotter_unitary(const TermList& terms, double time, int steps)
{
    require_steps(steps);
    require_time(time);
    const auto n = terms.shape().total_dim();
    MatrixXc step = MatrixXc::Identity(n, n);
    for (const Term& term : terms.terms())
        step = expm_hermitian(term.op, time / steps).matrix() * step;
    return {terms.shape(), matrix_power(step, steps)};
}

double trotter_error_first_order(const TermList& terms, double time, int steps)
{
    require_steps(steps);
    require_time(time);
    const auto n = terms.shape().total_dim();
    MatrixXc total = MatrixXc::Zero(n, n);
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            total += commutator(terms[i].op.matrix(), terms[j].op.matrix());
    return spectral_norm(total) * time * time / (2.0 * steps);
}

double trotter_tail_bound(const Operator& h, double time, int steps, int k)
{
    require_steps(steps);
    require_time(time);
    if (k < 3)
        throw ValidationError("trotter_tail_bound: order k must be at least 3");
    const double x = spectral_norm(h.matrix()) * std::abs(time) / steps;
    // s x^k / k! accumulated as a product to stay finite for large k.
    double term = 1.0;
    for (int i = 1; i <= k; ++i)
        term *= x / i;
    return steps * term;
}

std::string_view to_string(ZzzMode mode)
{
    switch (mode) {
    case ZzzMode::direct:
        return "direct";
    case ZzzMode::collective:
        return "collective";
    case ZzzMode::two_qubit:
        return "two_qubit";
    }
    return "?";
}

std::optional<ZzzMode> parse_zzz_mode(std::string_view name)
{
    for (ZzzMode m : {ZzzMode::direct, ZzzMode::collective, ZzzMode::two_qubit})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

GateSequence digital_sequence_ising(int n, double J, double B, double time, int steps)
{
    if (n < 2)
        throw ValidationError("digital_sequence_ising: need N >= 2");
    require_steps(steps);
    require_time(time);
    const double theta = J * time / steps;
    const double phi = B * time / steps;
    GateSequence seq(SpaceShape::qubits(n));
    for (int step = 0; step < steps; ++step) {
        for (int j = 1; j < n; ++j)
            seq.push(GateKind::ZZ, {j, j + 1}, theta);
        for (int j = 1; j <= n; ++j)
            seq.push(GateKind::Xrot, {j}, phi);
    }
    return seq;
}

GateSequence digital_sequence_extended(int n, double J, double G, double B, double time, int steps, ZzzMode mode)
{
    if (n < 3)
        throw ValidationError("digital_sequence_extended: need N >= 3");
    require_steps(steps);
    require_time(time);
    const SpaceShape shape = SpaceShape::qubits(n);
    const double theta = J * time / steps;
    const double beta = G * time / steps;
    const double phi = B * time / steps;
    GateSequence seq(shape);
    for (int step = 0; step < steps; ++step) {
        for (int j = 1; j < n; ++j)
            seq.push(GateKind::ZZ, {j, j + 1}, theta);
        for (int j = 1; j + 2 <= n; ++j) {
            const std::array<int, 3> triple{j, j + 1, j + 2};
            switch (mode) {
            case ZzzMode::direct:
                seq.push(GateKind::ZZZ, {j, j + 1, j + 2}, beta);
                break;
            case ZzzMode::collective:
                seq.append(zzz_via_collective(beta, triple, shape));
                break;
            case ZzzMode::two_qubit:
                seq.append(zzz_via_two_qubit(beta, triple, shape));
                break;
            }
        }
        for (int j = 1; j <= n; ++j)
            seq.push(GateKind::Xrot, {j}, phi);
    }
    return seq;
}

StepCounts count_step(const GateSequence& one_step)
{
    StepCounts c;
    for (const Gate& g : one_step.gates()) {
        const std::size_t arity = g.sites.size();
        if (arity == 1)
            ++c.single;
        else if (arity == 2)
            ++c.two_qubit;
        else
            ++c.three_qubit;
        if (g.kind == GateKind::ZZ)
            ++c.zz;
        // Each ZZZ decomposition carries exactly one Xflip kick.
        if (g.kind == GateKind::ZZZ || g.kind == GateKind::Xflip)
            ++c.zzz;
    }
    return c;
}

}  // namespace dqsim
