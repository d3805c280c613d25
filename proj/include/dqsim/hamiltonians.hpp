#pragma once

// Model Hamiltonians on open chains, each returned as an ordered list of
// labelled Hermitian summands so that Trotter products can be formed from it.
//
// Units: angular frequencies in rad/µs and times in µs for the resonator
// models; the spin-only models are often run with dimensionless couplings.

#include "dqsim/hilbert.hpp"

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace dqsim {

/// 2π × (frequency in MHz) → rad/µs.
constexpr double two_pi_mhz(double mhz) { return 2.0 * std::numbers::pi * mhz; }

struct ModelParams {
    double J = 0.0;  ///< nearest-neighbour σzσz coupling
    double B = 0.0;  ///< transverse field
    double G = 0.0;  ///< three-body coupling

    double omega = 0.0;  ///< mode frequency (full Ising-Tavis-Cummings model)
    double Omega = 0.0;  ///< qubit splitting (full model)
    double g = 0.0;      ///< qubit-resonator coupling

    double omega1 = 0.0;  ///< resonant Tavis-Cummings stage
    double Omega1 = 0.0;

    double omega_prime = 0.0;  ///< per-pair detuned block H(j,k)
    double Omega_prime = 0.0;
    double omega2 = 0.0;  ///< = (N−1)·omega_prime
    double Omega2 = 0.0;  ///< = (N−1)·Omega_prime

    double kappa = 0.0;  ///< resonator decay rate
};

/// Throws unless all rates are finite and κ ≥ 0.
void validate(const ModelParams& p);

/// Fill in whichever of (omega2, omega_prime) and (Omega2, Omega_prime) is
/// missing from the other, or check them for consistency when both are set.
ModelParams complete_h2_frequencies(ModelParams p, int n_qubits);

struct Term {
    std::string label;
    Operator op;
};

class TermList {
public:
    explicit TermList(SpaceShape shape) : shape_(shape) {}

    TermList& add(std::string label, Operator op);

    const SpaceShape& shape() const { return shape_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    const Term& operator[](std::size_t i) const { return terms_[i]; }
    const Operator& find(std::string_view label) const;

    Operator sum() const;

private:
    SpaceShape shape_;
    std::vector<Term> terms_;
};

/// H = J Σ σz_j σz_{j+1} + B Σ σx_j. Terms: "zz", "x".
TermList build_ising_tf(int n, double J, double B, const SpaceShape& shape);

/// H = ω a†a + Σ (Ω/2) σz_j − J Σ σz_j σz_{j+1} + g Σ (a σ⁺_j + a† σ⁻_j).
/// Terms: "mode", "spin", "zz", "tc".
TermList build_itc(int n, const ModelParams& p, const SpaceShape& shape);

/// Resonant Tavis-Cummings stage: build_itc with J = 0.
Operator build_h1(int n, double omega1, double Omega1, double g, const SpaceShape& shape);

/// H(j,k) = ω′ a†a + Σ_i (Ω′/2) σz_i − J σz_j σz_k for an adjacent pair.
Operator build_hjk(int j, int k, double omega_prime, double Omega_prime, double J, const SpaceShape& shape);

/// The N−1 mutually commuting blocks H(1,2), …, H(N−1,N).
std::vector<Operator> h2_blocks(int n, double omega_prime, double Omega_prime, double J, const SpaceShape& shape);

/// Σ H(j,k) = (N−1)ω′ a†a + Σ ((N−1)Ω′/2) σz − J Σ σzσz.
Operator build_h2(int n, double omega_prime, double Omega_prime, double J, const SpaceShape& shape);

/// H = J Σ σzσz + G Σ σz σz σz + B Σ σx over nearest-neighbour pairs and
/// triples. Terms: "zz", "zzz", "x".
TermList build_extended_ising(int n, double J, double G, double B, const SpaceShape& shape);

/// a†a + Σ σ⁺_j σ⁻_j.
Operator excitation_number(const SpaceShape& shape);

}  // namespace dqsim
