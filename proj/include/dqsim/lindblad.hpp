#pragma once

// Master equation with resonator photon loss,
//     dρ/dt = −i[H, ρ] + κ (2aρa† − a†aρ − ρa†a)/2,
// integrated with fixed-step RK4 through a piecewise-constant schedule.

#include "dqsim/hamiltonians.hpp"

#include <vector>

namespace dqsim {

struct Segment {
    Operator h;
    double duration;

    Segment(Operator hamiltonian, double dt);
};

/// −i[H, ρ] + κ L(a)ρ. The result is traceless but not a density matrix.
MatrixXc lindblad_rhs(const DensityMatrix& rho, const Operator& h, double kappa);

struct TrajectoryPoint {
    double time;
    DensityMatrix rho;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;  ///< t = 0, then the end of every segment
    double max_trace_drift = 0.0;         ///< max |Tr ρ − 1| over all RK steps
    double min_eigenvalue = 0.0;          ///< over all recorded points
    double max_purity = 0.0;              ///< over all recorded points
    std::size_t rk_steps = 0;

    const DensityMatrix& final_state() const { return points.back().rho; }
};

struct MasterOptions {
    double max_dt = 0.0;                  ///< RK4 step ceiling, 0 = default_step per segment
    double trace_abort = 1e-6;            ///< |Tr ρ − 1| beyond this throws NumericalAbort
    double positivity_abort = 1e-6;       ///< recorded eigenvalues below −this throw NumericalAbort
    bool record_every_segment = true;     ///< otherwise only t = 0 and the final state
};

/// Largest step satisfying ‖H‖·dt ≤ 0.05 and κ·dt ≤ 1e-4 for every segment.
double default_step(std::span<const Segment> segments, double kappa);

Trajectory evolve_master(const DensityMatrix& rho0, std::span<const Segment> segments, double kappa,
                         const MasterOptions& options);

/// Product of the segment exponentials; the closed-system (κ = 0) oracle.
Operator schedule_unitary(std::span<const Segment> segments, const SpaceShape& shape);

/// [H1 for t/s, H2 for t/s] × s. With `expand_h2` every H2 segment becomes
/// the N−1 commuting H(j,k) segments of the same duration. Empty for t = 0.
std::vector<Segment> itc_schedule(int n, const ModelParams& p, const SpaceShape& shape, double time, int steps,
                                  bool expand_h2 = false);

}  // namespace dqsim
