#pragma once

#include "dqsim/hilbert.hpp"

#include <map>
#include <string>
#include <vector>

namespace dqsim {

/// |⟨ψ₁|ψ₂⟩|²
double fidelity_pure(const PureState& a, const PureState& b);

/// Tr(ρ_I ρ_T). This is the plain overlap, not the Uhlmann fidelity.
double fidelity_trace(const DensityMatrix& ideal, const DensityMatrix& trial);

std::vector<double> overlap_with_initial(const std::vector<PureState>& trajectory, const PureState& initial);
std::vector<double> overlap_with_initial(const std::vector<DensityMatrix>& trajectory, const DensityMatrix& initial);

/// Fidelity curves for several Trotter step counts on one grid plus the
/// overlap of the ideal trajectory with the initial state.
struct FidelityReport {
    std::string axis;  ///< "phase" or "time"
    std::vector<double> grid;
    std::map<int, std::vector<double>> fidelity;  ///< keyed by step count
    std::vector<double> inset_overlap;

    /// Header `axis,F_s<steps>...,inset_overlap`, one row per grid point,
    /// values printed with 17 significant digits.
    std::string to_csv() const;
};

}  // namespace dqsim
