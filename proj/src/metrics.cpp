#include "dqsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dqsim {

double fidelity_pure(const PureState& a, const PureState& b)
{
    require_same_shape(a.shape(), b.shape(), "fidelity_pure");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity_trace(const DensityMatrix& ideal, const DensityMatrix& trial)
{
    require_same_shape(ideal.shape(), trial.shape(), "fidelity_trace");
    // Tr(AB) = Σ_ij A_ij B_ji, without forming the product.
    const Complex f = (ideal.matrix().transpose().cwiseProduct(trial.matrix())).sum();
    if (std::abs(f.imag()) > 1e-10)
        throw NumericalAbort("fidelity_trace: imaginary part " + std::to_string(f.imag()));
    return f.real();
}

std::vector<double> overlap_with_initial(const std::vector<PureState>& trajectory, const PureState& initial)
{
    std::vector<double> out;
    out.reserve(trajectory.size());
    for (const PureState& psi : trajectory)
        out.push_back(fidelity_pure(initial, psi));
    return out;
}

std::vector<double> overlap_with_initial(const std::vector<DensityMatrix>& trajectory, const DensityMatrix& initial)
{
    std::vector<double> out;
    out.reserve(trajectory.size());
    for (const DensityMatrix& rho : trajectory)
        out.push_back(fidelity_trace(rho, initial));
    return out;
}

std::string FidelityReport::to_csv() const
{
    const auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << axis;
    for (const auto& [steps, _] : fidelity)
        os << ",F_s" << steps;
    os << ",inset_overlap\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt(grid[i]);
        for (const auto& [_, values] : fidelity)
            os << ',' << fmt(values.at(i));
        os << ',' << fmt(inset_overlap.at(i)) << '\n';
    }
    return os.str();
}

}  // namespace dqsim
