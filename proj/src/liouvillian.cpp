#include "ppe/liouvillian.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace ppe {

namespace {

using Triplet = Eigen::Triplet<cd>;

struct Entry {
    int row;
    int col;
    cd value;
};

std::vector<Entry> nonzeros(const Matrix& m) {
    std::vector<Entry> out;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (m(i, j) != cd{0.0}) out.push_back({i, j, m(i, j)});
    return out;
}

/// Sparse X ⊗ Y built from the nonzeros of dense factors.
void kron_into(std::vector<Triplet>& out, const Matrix& x, const Matrix& y, cd scale) {
    const auto nx = nonzeros(x);
    const auto ny = nonzeros(y);
    const int ry = static_cast<int>(y.rows());
    const int cy = static_cast<int>(y.cols());
    out.reserve(out.size() + nx.size() * ny.size());
    for (const Entry& a : nx)
        for (const Entry& b : ny)
            out.emplace_back(a.row * ry + b.row, a.col * cy + b.col, scale * a.value * b.value);
}

Superoperator from_triplets(const HilbertSpace& space, const std::vector<Triplet>& triplets) {
    const int n = space.dim * space.dim;
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(cd{0.0});
    return {space, std::move(m)};
}

void check_phase(double phi) {
    if (!(phi >= 0.0 && phi < 2.0 * kPi))
        throw InvalidArgument("phase must lie in [0, 2π), got " + std::to_string(phi));
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ToyPhase: return "toy";
        case ModelKind::Interacting: return "interacting";
        case ModelKind::CollectivePump: return "collective-pump";
        case ModelKind::AuxiliaryChannels: return "auxiliary";
        case ModelKind::HPToy: return "hp-toy";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    for (ModelKind k : {ModelKind::ToyPhase, ModelKind::Interacting, ModelKind::CollectivePump,
                        ModelKind::AuxiliaryChannels, ModelKind::HPToy})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown model '" + name +
                          "' (expected toy, interacting, collective-pump, auxiliary or hp-toy)");
}

ModelSpec ModelSpec::toy(int n, double w, double phi) {
    ModelSpec s;
    s.model = ModelKind::ToyPhase;
    s.n_unpumped = n;
    s.w = w;
    s.phi = phi;
    return s;
}

ModelSpec ModelSpec::hp_toy(int n, double w, double phi, int n_cut) {
    ModelSpec s = toy(n, w, phi);
    s.model = ModelKind::HPToy;
    s.basis = CollectiveBasis::HolsteinPrimakoff;
    s.n_cut = n_cut;
    return s;
}

ModelSpec ModelSpec::interacting(int n, double w, double V) {
    ModelSpec s;
    s.model = ModelKind::Interacting;
    s.n_unpumped = n;
    s.w = w;
    s.V = V;
    return s;
}

ModelSpec ModelSpec::collective_pump(int n, double w, double phi) {
    ModelSpec s = toy(n, w, phi);
    s.model = ModelKind::CollectivePump;
    return s;
}

ModelSpec ModelSpec::auxiliary(int n, double w, double kappa, double phi) {
    ModelSpec s = toy(n, w, phi);
    s.model = ModelKind::AuxiliaryChannels;
    s.kappa = kappa;
    return s;
}

void ModelSpec::validate() const {
    if (n_unpumped < 1) throw InvalidArgument("N must be >= 1");
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("pump rate w must be >= 0");
    if (!(V >= 0.0) || !std::isfinite(V)) throw InvalidArgument("coupling V must be >= 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be >= 0");
    check_phase(phi);
    const bool hp = basis == CollectiveBasis::HolsteinPrimakoff;
    if (hp && n_cut < 2) throw InvalidArgument("HP basis requires n_cut >= 2");
    switch (model) {
        case ModelKind::ToyPhase:
        case ModelKind::CollectivePump:
            if (V != 0.0 || kappa != 0.0)
                throw InvalidArgument(to_string(model) + " model requires V = 0 and kappa = 0");
            if (model == ModelKind::CollectivePump && hp)
                throw InvalidArgument("collective-pump model drives J away from the ground state; HP basis not allowed");
            break;
        case ModelKind::Interacting:
            if (phi != 0.0) throw InvalidArgument("interacting model fixes phi = 0");
            if (kappa != 0.0) throw InvalidArgument("interacting model requires kappa = 0");
            break;
        case ModelKind::AuxiliaryChannels:
            if (!(kappa > 0.0)) throw InvalidArgument("auxiliary-channel model requires kappa > 0");
            if (V != 0.0) throw InvalidArgument("auxiliary-channel model requires V = 0");
            break;
        case ModelKind::HPToy:
            if (!hp) throw InvalidArgument("hp-toy model requires the Holstein-Primakoff basis");
            if (V != 0.0 || kappa != 0.0) throw InvalidArgument("hp-toy model requires V = 0 and kappa = 0");
            break;
    }
}

HilbertSpace ModelSpec::space() const {
    return basis == CollectiveBasis::Dicke ? HilbertSpace::pumped_dicke(n_unpumped)
                                           : HilbertSpace::pumped_boson(n_unpumped, n_cut);
}

double ModelSpec::jump_phase() const {
    switch (model) {
        case ModelKind::ToyPhase:
        case ModelKind::HPToy:
        case ModelKind::CollectivePump: return phi;
        default: return 0.0;
    }
}

std::string ModelSpec::describe() const {
    std::ostringstream out;
    out << to_string(model) << "(N=" << n_unpumped << ", w=" << w << ", phi=" << phi;
    if (V != 0.0) out << ", V=" << V;
    if (kappa != 0.0) out << ", kappa=" << kappa;
    if (basis == CollectiveBasis::HolsteinPrimakoff) out << ", n_cut=" << n_cut;
    out << ")";
    return out.str();
}

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim)
        throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                                " is not a vectorized " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix Superoperator::apply(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim())
        throw DimensionMismatch("density matrix does not match superoperator space");
    return unvectorize(matrix * vectorize(rho), dim());
}

Matrix Superoperator::dense(double max_entries) const {
    const double entries = static_cast<double>(matrix.rows()) * static_cast<double>(matrix.cols());
    if (entries > max_entries)
        throw DimensionOverflow("dense superoperator would need " + std::to_string(entries) +
                                " entries (cap " + std::to_string(max_entries) + ")");
    return Matrix(matrix);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
    if (!(space == other.space)) throw DimensionMismatch("adding superoperators on different spaces");
    matrix += other.matrix;
    return *this;
}

Superoperator operator+(Superoperator a, const Superoperator& b) {
    a += b;
    return a;
}

Superoperator sandwich_superop(const OperatorMatrix& left, const OperatorMatrix& right) {
    if (!(left.space == right.space)) throw DimensionMismatch("sandwich factors on different spaces");
    std::vector<Triplet> t;
    kron_into(t, right.entries.transpose(), left.entries, 1.0);
    return from_triplets(left.space, t);
}

Superoperator dissipator_superop(const OperatorMatrix& jump, double rate) {
    if (jump.entries.rows() != jump.entries.cols()) throw DimensionMismatch("jump operator is not square");
    if (!(rate >= 0.0)) throw InvalidArgument("dissipator rate must be non-negative");
    const int d = jump.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix ada = jump.entries.adjoint() * jump.entries;
    std::vector<Triplet> t;
    kron_into(t, jump.entries.conjugate(), jump.entries, rate);
    kron_into(t, id, ada, -0.5 * rate);
    kron_into(t, ada.transpose(), id, -0.5 * rate);
    return from_triplets(jump.space, t);
}

Superoperator hamiltonian_superop(const OperatorMatrix& hamiltonian, double tolerance) {
    const Matrix& h = hamiltonian.entries;
    const double skew = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (skew > tolerance)
        throw InvalidArgument("Hamiltonian is not Hermitian (max |H - H†| = " + std::to_string(skew) + ")");
    const Matrix id = Matrix::Identity(h.rows(), h.cols());
    std::vector<Triplet> t;
    kron_into(t, id, h, -kI);
    kron_into(t, h.transpose(), id, kI);
    return from_triplets(hamiltonian.space, t);
}

Superoperator unitary_superop(const OperatorMatrix& unitary) {
    std::vector<Triplet> t;
    kron_into(t, unitary.entries.conjugate(), unitary.entries, 1.0);
    return from_triplets(unitary.space, t);
}

Superoperator lindblad(const HilbertSpace& space, const std::optional<OperatorMatrix>& hamiltonian,
                       std::span<const Channel> channels) {
    const int n = space.dim * space.dim;
    Superoperator out{space, SparseMatrix(n, n)};
    if (hamiltonian) out += hamiltonian_superop(*hamiltonian);
    for (const Channel& c : channels) {
        if (!(c.jump.space == space)) throw DimensionMismatch("jump operator on the wrong space");
        if (c.rate == 0.0) continue;
        out += dissipator_superop(c.jump, c.rate);
    }
    out.matrix.prune(cd{0.0});
    return out;
}

ModelOperators model_operators(const ModelSpec& spec) {
    spec.validate();
    return composite_operators(spec.space());
}

Superoperator assemble(const ModelSpec& spec, const AssemblyLimits& limits) {
    spec.validate();
    const HilbertSpace space = spec.space();
    if (space.dim > limits.max_dim)
        throw DimensionOverflow(spec.describe() + " needs dim " + std::to_string(space.dim) +
                                " above the cap " + std::to_string(limits.max_dim) +
                                "; use the HP basis");
    const ModelOperators ops = composite_operators(space);
    const cd phase = std::polar(1.0, spec.jump_phase());
    std::vector<Channel> channels;
    std::optional<OperatorMatrix> hamiltonian;
    switch (spec.model) {
        case ModelKind::ToyPhase:
        case ModelKind::HPToy:
            channels.push_back({phase * ops.sigma_minus + ops.j_minus, 1.0});
            channels.push_back({ops.sigma_plus, spec.w});
            break;
        case ModelKind::Interacting:
            channels.push_back({ops.sigma_minus + ops.j_minus, 1.0});
            channels.push_back({ops.sigma_plus, spec.w});
            if (spec.V != 0.0)
                hamiltonian = cd{spec.V} * (ops.j_plus * ops.sigma_minus + ops.sigma_plus * ops.j_minus);
            break;
        case ModelKind::CollectivePump:
            channels.push_back({phase * ops.j_minus + ops.sigma_minus, 1.0});
            channels.push_back({ops.j_plus, spec.w});
            break;
        case ModelKind::AuxiliaryChannels:
            channels.push_back({ops.sigma_minus + ops.j_minus, 1.0});
            channels.push_back({ops.sigma_minus, spec.kappa});
            channels.push_back({ops.j_minus, spec.kappa});
            channels.push_back({ops.sigma_plus, spec.w});
            break;
    }
    return lindblad(space, hamiltonian, channels);
}

OperatorMatrix pumped_phase_unitary(const HilbertSpace& space, double phi) {
    Matrix u = Matrix::Identity(2, 2);
    u(0, 0) = std::polar(1.0, -phi);
    return embed({HilbertSpace::pumped_spin(), u, "U(φ)"}, Slot::PumpedFactor, space);
}

std::vector<int> sector_indices(const HilbertSpace& space, int charge) {
    const std::vector<int> exc = space.excitation_numbers();
    const int d = space.dim;
    std::vector<int> out;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            if (exc[i] - exc[j] == charge) out.push_back(i + d * j);
    return out;
}

bool conserves_coherence_charge(const Superoperator& op) {
    const std::vector<int> exc = op.space.excitation_numbers();
    const int d = op.dim();
    auto charge = [&](int k) { return exc[k % d] - exc[k / d]; };
    for (int col = 0; col < op.matrix.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(op.matrix, col); it; ++it)
            if (charge(static_cast<int>(it.row())) != charge(col)) return false;
    return true;
}

Matrix restrict_to(const Superoperator& op, const std::vector<int>& indices) {
    std::unordered_map<int, int> local;
    local.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) local.emplace(indices[k], static_cast<int>(k));
    const int n = static_cast<int>(indices.size());
    Matrix block = Matrix::Zero(n, n);
    for (int c = 0; c < n; ++c)
        for (SparseMatrix::InnerIterator it(op.matrix, indices[c]); it; ++it) {
            auto found = local.find(static_cast<int>(it.row()));
            if (found != local.end()) block(found->second, c) = it.value();
        }
    return block;
}

}  // namespace ppe
