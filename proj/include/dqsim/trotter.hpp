#pragma once

// First-order (Lie-Trotter) product formulas. Terms are applied in list
// order: the first term of a TermList acts first within each step, so
//     U = (e^{−iH_n t/s} ⋯ e^{−iH_1 t/s})^s.

#include "dqsim/gates.hpp"
#include "dqsim/hamiltonians.hpp"

namespace dqsim {

struct TrotterPlan {
    TermList terms;
    double time = 0.0;
    int steps = 1;
};

Operator trotter_unitary(const TermList& terms, double time, int steps);
inline Operator trotter_unitary(const TrotterPlan& plan) { return trotter_unitary(plan.terms, plan.time, plan.steps); }

/// ‖Σ_{i<j} [H_i, H_j]‖ t² / (2s), spectral norm.
double trotter_error_first_order(const TermList& terms, double time, int steps);

/// s (‖H‖ t / s)^k / k!, the bound on the order-k remainder. Requires k ≥ 3.
double trotter_tail_bound(const Operator& h, double time, int steps, int k);

enum class ZzzMode { direct, collective, two_qubit };

std::string_view to_string(ZzzMode mode);
std::optional<ZzzMode> parse_zzz_mode(std::string_view name);

/// s × [ZZ(Jt/s) on the N−1 bonds, X(Bt/s) on the N sites].
GateSequence digital_sequence_ising(int n, double J, double B, double time, int steps);

/// s × [ZZ layer, ZZZ(Gt/s) layer on the N−2 triples, X layer]; each ZZZ is
/// a native gate or one of its two decompositions depending on `mode`.
GateSequence digital_sequence_extended(int n, double J, double G, double B, double time, int steps,
                                       ZzzMode mode = ZzzMode::direct);

/// Per-step gate census of a digital sequence.
struct StepCounts {
    std::size_t zz = 0;           ///< logical two-body interactions
    std::size_t zzz = 0;          ///< logical three-body interactions
    std::size_t single = 0;       ///< single-qubit gates, including those inside decompositions
    std::size_t two_qubit = 0;    ///< physical two-qubit gates (ZZ, ZZ_A, ZZ_B, CZ)
    std::size_t three_qubit = 0;  ///< physical gates on three or more qubits (ZZZ, collective)
};

StepCounts count_step(const GateSequence& one_step);

}  // namespace dqsim
