#include "dqsim/hamiltonians.hpp"

#include <cmath>

namespace dqsim {

namespace {

void require_qubits(int n, const SpaceShape& shape, const char* what)
{
    if (shape.n_qubits != n)
        throw ValidationError(std::string(what) + ": N = " + std::to_string(n) + " but shape has " +
                              std::to_string(shape.n_qubits) + " qubits");
}

void require_mode(const SpaceShape& shape, const char* what)
{
    if (shape.fock_dim < 2)
        throw ValidationError(std::string(what) + ": shape has no bosonic mode");
}

Operator zz_chain(int n, const SpaceShape& shape)
{
    Operator h = Operator::zero(shape);
    for (int j = 1; j < n; ++j) {
        const int pair[] = {j, j + 1};
        h += z_string(pair, shape);
    }
    return h;
}

Operator zzz_chain(int n, const SpaceShape& shape)
{
    Operator h = Operator::zero(shape);
    for (int j = 1; j + 2 <= n; ++j) {
        const int triple[] = {j, j + 1, j + 2};
        h += z_string(triple, shape);
    }
    return h;
}

Operator field(Axis axis, int n, const SpaceShape& shape)
{
    Operator h = Operator::zero(shape);
    for (int j = 1; j <= n; ++j)
        h += pauli(axis, j, shape);
    return h;
}

Operator tavis_cummings(int n, const SpaceShape& shape)
{
    const Operator a = ladder(Ladder::lower, shape);
    const Operator a_dag = ladder(Ladder::raise, shape);
    Operator h = Operator::zero(shape);
    for (int j = 1; j <= n; ++j)
        h += a * spin_ladder(SpinLadder::plus, j, shape) + a_dag * spin_ladder(SpinLadder::minus, j, shape);
    return h;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

void validate(const ModelParams& p)
{
    for (double v : {p.J, p.B, p.G, p.omega, p.Omega, p.g, p.omega1, p.Omega1, p.omega_prime, p.Omega_prime, p.omega2,
                     p.Omega2, p.kappa})
        if (!std::isfinite(v))
            throw ValidationError("model parameters must be finite");
    if (p.kappa < 0)
        throw ValidationError("kappa must be non-negative");
}

ModelParams complete_h2_frequencies(ModelParams p, int n_qubits)
{
    if (n_qubits < 2)
        throw ValidationError("H2 needs at least two qubits");
    const double pairs = n_qubits - 1;
    const auto fill = [&](double& total, double& per_pair, const char* name) {
        if (total == 0.0)
            total = pairs * per_pair;
        else if (per_pair == 0.0)
            per_pair = total / pairs;
        else if (!close(total, pairs * per_pair))
            throw ValidationError(std::string(name) + " must equal (N-1) times its per-pair value");
    };
    fill(p.omega2, p.omega_prime, "omega2");
    fill(p.Omega2, p.Omega_prime, "Omega2");
    return p;
}

// ---------------------------------------------------------------------------

TermList& TermList::add(std::string label, Operator op)
{
    require_same_shape(shape_, op.shape(), "TermList::add");
    if (!op.is_hermitian(1e-9))
        throw ValidationError("TermList: term '" + label + "' is not Hermitian");
    terms_.push_back({std::move(label), std::move(op)});
    return *this;
}

const Operator& TermList::find(std::string_view label) const
{
    for (const Term& t : terms_)
        if (t.label == label)
            return t.op;
    throw ValidationError("TermList: no term labelled '" + std::string(label) + "'");
}

Operator TermList::sum() const
{
    Operator h = Operator::zero(shape_);
    for (const Term& t : terms_)
        h += t.op;
    return h;
}

// ---------------------------------------------------------------------------

TermList build_ising_tf(int n, double J, double B, const SpaceShape& shape)
{
    if (n < 2)
        throw ValidationError("build_ising_tf: need N >= 2");
    require_qubits(n, shape, "build_ising_tf");
    if (shape.has_mode())
        throw ValidationError("build_ising_tf: shape must not carry a bosonic mode");
    TermList h(shape);
    h.add("zz", J * zz_chain(n, shape));
    h.add("x", B * field(Axis::x, n, shape));
    return h;
}

TermList build_itc(int n, const ModelParams& p, const SpaceShape& shape)
{
    require_mode(shape, "build_itc");
    require_qubits(n, shape, "build_itc");
    validate(p);
    TermList h(shape);
    h.add("mode", p.omega * number_operator(shape));
    h.add("spin", (p.Omega / 2.0) * field(Axis::z, n, shape));
    h.add("zz", -p.J * zz_chain(n, shape));
    h.add("tc", p.g * tavis_cummings(n, shape));
    return h;
}

Operator build_h1(int n, double omega1, double Omega1, double g, const SpaceShape& shape)
{
    require_mode(shape, "build_h1");
    require_qubits(n, shape, "build_h1");
    return omega1 * number_operator(shape) + (Omega1 / 2.0) * field(Axis::z, n, shape) +
           g * tavis_cummings(n, shape);
}

Operator build_hjk(int j, int k, double omega_prime, double Omega_prime, double J, const SpaceShape& shape)
{
    require_mode(shape, "build_hjk");
    require_site(shape, j);
    require_site(shape, k);
    if (std::abs(j - k) != 1)
        throw ValidationError("build_hjk: sites " + std::to_string(j) + "," + std::to_string(k) + " are not adjacent");
    const int pair[] = {j, k};
    return omega_prime * number_operator(shape) + (Omega_prime / 2.0) * field(Axis::z, shape.n_qubits, shape) -
           J * z_string(pair, shape);
}

std::vector<Operator> h2_blocks(int n, double omega_prime, double Omega_prime, double J, const SpaceShape& shape)
{
    require_qubits(n, shape, "h2_blocks");
    if (n < 2)
        throw ValidationError("h2_blocks: need N >= 2");
    std::vector<Operator> blocks;
    for (int j = 1; j < n; ++j)
        blocks.push_back(build_hjk(j, j + 1, omega_prime, Omega_prime, J, shape));
    return blocks;
}

Operator build_h2(int n, double omega_prime, double Omega_prime, double J, const SpaceShape& shape)
{
    Operator h = Operator::zero(shape);
    for (const Operator& block : h2_blocks(n, omega_prime, Omega_prime, J, shape))
        h += block;
    return h;
}

TermList build_extended_ising(int n, double J, double G, double B, const SpaceShape& shape)
{
    if (n < 3)
        throw ValidationError("build_extended_ising: need N >= 3");
    require_qubits(n, shape, "build_extended_ising");
    if (shape.has_mode())
        throw ValidationError("build_extended_ising: shape must not carry a bosonic mode");
    TermList h(shape);
    h.add("zz", J * zz_chain(n, shape));
    h.add("zzz", G * zzz_chain(n, shape));
    h.add("x", B * field(Axis::x, n, shape));
    return h;
}

Operator excitation_number(const SpaceShape& shape)
{
    require_mode(shape, "excitation_number");
    Operator n = number_operator(shape);
    for (int j = 1; j <= shape.n_qubits; ++j)
        n += spin_ladder(SpinLadder::plus, j, shape) * spin_ladder(SpinLadder::minus, j, shape);
    return n;
}

}  // namespace dqsim
