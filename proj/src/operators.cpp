#include "ppe/operators.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace ppe {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

Matrix kron(const Matrix& left, const Matrix& right) {
    Matrix out = Matrix::Zero(left.rows() * right.rows(), left.cols() * right.cols());
    for (Eigen::Index i = 0; i < left.rows(); ++i)
        for (Eigen::Index j = 0; j < left.cols(); ++j)
            if (left(i, j) != cd{0.0})
                out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) =
                    left(i, j) * right;
    return out;
}

void require_same_space(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.space == b.space))
        throw DimensionMismatch("operators act on different spaces: " + a.space.describe() +
                                " vs " + b.space.describe());
}

}  // namespace

HilbertSpace HilbertSpace::pumped_spin() { return {SpaceKind::PumpedSpin, 2, 0, 0, 0}; }

HilbertSpace HilbertSpace::dicke(int n_unpumped) {
    require(n_unpumped >= 1, "Dicke manifold needs N >= 1");
    return {SpaceKind::CollectiveDicke, n_unpumped + 1, n_unpumped, 0, 0};
}

HilbertSpace HilbertSpace::boson(int n_unpumped, int n_cut) {
    require(n_unpumped >= 1, "bosonized collective spin needs N >= 1");
    require(n_cut >= 2, "boson cutoff must satisfy n_cut >= 2");
    return {SpaceKind::Boson, n_cut + 1, n_unpumped, n_cut, 0};
}

HilbertSpace HilbertSpace::pumped_dicke(int n_unpumped) {
    require(n_unpumped >= 1, "Dicke manifold needs N >= 1");
    return {SpaceKind::PumpedSpinTensorDicke, 2 * (n_unpumped + 1), n_unpumped, 0, 0};
}

HilbertSpace HilbertSpace::pumped_boson(int n_unpumped, int n_cut) {
    require(n_unpumped >= 1, "bosonized collective spin needs N >= 1");
    require(n_cut >= 2, "boson cutoff must satisfy n_cut >= 2");
    return {SpaceKind::PumpedSpinTensorBoson, 2 * (n_cut + 1), n_unpumped, n_cut, 0};
}

HilbertSpace HilbertSpace::full_chain(int n_atoms) {
    require(n_atoms >= 2 && n_atoms <= 5, "full spin chain supports 2..5 atoms");
    return {SpaceKind::FullSpinChain, 1 << n_atoms, n_atoms - 1, 0, n_atoms};
}

int HilbertSpace::collective_dim() const {
    switch (kind) {
        case SpaceKind::PumpedSpinTensorDicke: return n_unpumped + 1;
        case SpaceKind::PumpedSpinTensorBoson: return n_cut + 1;
        default: throw InvalidArgument("collective_dim on a non-composite space");
    }
}

std::vector<int> HilbertSpace::excitation_numbers() const {
    std::vector<int> exc(static_cast<std::size_t>(dim));
    switch (kind) {
        case SpaceKind::PumpedSpin:
            exc = {1, 0};
            break;
        case SpaceKind::CollectiveDicke:
        case SpaceKind::Boson:
            for (int k = 0; k < dim; ++k) exc[k] = k;
            break;
        case SpaceKind::PumpedSpinTensorDicke:
        case SpaceKind::PumpedSpinTensorBoson: {
            const int dc = collective_dim();
            for (int s = 0; s < 2; ++s)
                for (int k = 0; k < dc; ++k) exc[s * dc + k] = (s == 0 ? 1 : 0) + k;
            break;
        }
        case SpaceKind::FullSpinChain:
            // bit value 0 is |↑⟩ on that site
            for (int idx = 0; idx < dim; ++idx)
                exc[idx] = n_atoms - std::popcount(static_cast<unsigned>(idx));
            break;
    }
    return exc;
}

std::string HilbertSpace::describe() const {
    std::ostringstream out;
    switch (kind) {
        case SpaceKind::PumpedSpin: out << "pumped-spin"; break;
        case SpaceKind::CollectiveDicke: out << "dicke(N=" << n_unpumped << ")"; break;
        case SpaceKind::Boson: out << "boson(n_cut=" << n_cut << ")"; break;
        case SpaceKind::PumpedSpinTensorDicke: out << "pumped⊗dicke(N=" << n_unpumped << ")"; break;
        case SpaceKind::PumpedSpinTensorBoson:
            out << "pumped⊗boson(N=" << n_unpumped << ",n_cut=" << n_cut << ")";
            break;
        case SpaceKind::FullSpinChain: out << "chain(" << n_atoms << ")"; break;
    }
    out << "[dim " << dim << "]";
    return out.str();
}

OperatorMatrix::OperatorMatrix(HilbertSpace space_, Matrix entries_, std::string label_)
    : space(space_), entries(std::move(entries_)), label(std::move(label_)) {
    if (entries.rows() != space.dim || entries.cols() != space.dim)
        throw DimensionMismatch("operator '" + label + "' has shape " +
                                std::to_string(entries.rows()) + "x" +
                                std::to_string(entries.cols()) + " on " + space.describe());
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return {space, entries.adjoint(), label + "^†"};
}

OperatorMatrix identity(const HilbertSpace& space) {
    return {space, Matrix::Identity(space.dim, space.dim), "1"};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space, a.entries * b.entries, a.label + "·" + b.label};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space, a.entries + b.entries, a.label + "+" + b.label};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space, a.entries - b.entries, a.label + "-" + b.label};
}

OperatorMatrix operator*(cd scale, const OperatorMatrix& a) {
    return {a.space, scale * a.entries, a.label};
}

OperatorMatrix power(const OperatorMatrix& a, int exponent) {
    require(exponent >= 0, "negative operator power");
    OperatorMatrix out = identity(a.space);
    for (int k = 0; k < exponent; ++k) out.entries = out.entries * a.entries;
    out.label = "(" + a.label + ")^" + std::to_string(exponent);
    return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.space, a.entries * b.entries - b.entries * a.entries,
            "[" + a.label + "," + b.label + "]"};
}

LadderOperators build_dicke_ladder(int n_unpumped) {
    if (n_unpumped < 1)
        throw InvalidArgument("Dicke ladder needs N >= 1; use the single-atom closed forms for N = 0");
    const HilbertSpace space = HilbertSpace::dicke(n_unpumped);
    const double j = 0.5 * n_unpumped;
    Matrix plus = Matrix::Zero(space.dim, space.dim);
    Matrix z = Matrix::Zero(space.dim, space.dim);
    for (int k = 0; k < space.dim; ++k) {
        const double m = k - j;
        z(k, k) = m;
        if (k + 1 < space.dim) plus(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    Matrix minus = plus.adjoint();
    return {{space, std::move(plus), "J+"}, {space, std::move(minus), "J-"}, {space, std::move(z), "Jz"}};
}

LadderOperators build_pumped_spin() {
    const HilbertSpace space = HilbertSpace::pumped_spin();
    Matrix plus = Matrix::Zero(2, 2);
    plus(0, 1) = 1.0;  // |↓⟩ → |↑⟩
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 0.5;
    z(1, 1) = -0.5;
    Matrix minus = plus.adjoint();
    return {{space, std::move(plus), "σ+"}, {space, std::move(minus), "σ-"}, {space, std::move(z), "σz"}};
}

OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const HilbertSpace& target) {
    if (!target.is_composite())
        throw DimensionMismatch("embed target must be a pumped⊗collective space, got " +
                                target.describe());
    const int dc = target.collective_dim();
    if (slot == Slot::PumpedFactor) {
        if (op.space.kind != SpaceKind::PumpedSpin)
            throw DimensionMismatch("pumped factor expects a 2-dim pumped-spin operator, got " +
                                    op.space.describe());
        return {target, kron(op.entries, Matrix::Identity(dc, dc)), op.label};
    }
    const bool kind_ok =
        (target.kind == SpaceKind::PumpedSpinTensorDicke && op.space.kind == SpaceKind::CollectiveDicke) ||
        (target.kind == SpaceKind::PumpedSpinTensorBoson && op.space.kind == SpaceKind::Boson);
    if (!kind_ok || op.dim() != dc)
        throw DimensionMismatch("collective factor " + op.space.describe() + " does not fit " +
                                target.describe());
    return {target, kron(Matrix::Identity(2, 2), op.entries), op.label};
}

HpOperators build_hp_operators(int n_unpumped, int n_cut) {
    if (n_cut < 2) throw InvalidArgument("HP cutoff must satisfy n_cut >= 2");
    const HilbertSpace space = HilbertSpace::boson(n_unpumped, n_cut);
    Matrix a = Matrix::Zero(n_cut + 1, n_cut + 1);
    for (int n = 1; n <= n_cut; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix a_dag = a.adjoint();
    const double root_n = std::sqrt(static_cast<double>(n_unpumped));
    Matrix z = Matrix::Zero(n_cut + 1, n_cut + 1);
    for (int n = 0; n <= n_cut; ++n) z(n, n) = -0.5 * n_unpumped + n;
    return {{space, a, "a"},
            {space, a_dag, "a†"},
            {space, root_n * a_dag, "J+"},
            {space, root_n * a, "J-"},
            {space, std::move(z), "Jz"}};
}

FullSpaceOperators build_full_space_operators(int n_atoms) {
    const HilbertSpace space = HilbertSpace::full_chain(n_atoms);
    const LadderOperators single = build_pumped_spin();
    auto site_op = [&](const Matrix& local, int site) {
        Matrix out = Matrix::Identity(1, 1);
        for (int s = 0; s < n_atoms; ++s)
            out = kron(out, s == site ? local : Matrix::Identity(2, 2));
        return out;
    };
    FullSpaceOperators ops{space, {}, {}, {}, identity(space), identity(space), identity(space),
                           identity(space), identity(space), identity(space)};
    Matrix jp = Matrix::Zero(space.dim, space.dim);
    Matrix jz = Matrix::Zero(space.dim, space.dim);
    for (int s = 0; s < n_atoms; ++s) {
        const std::string tag = std::to_string(s + 1);
        ops.site_plus.emplace_back(space, site_op(single.plus.entries, s), "σ" + tag + "+");
        ops.site_minus.emplace_back(space, site_op(single.minus.entries, s), "σ" + tag + "-");
        ops.site_z.emplace_back(space, site_op(single.z.entries, s), "σ" + tag + "z");
        if (s + 1 < n_atoms) {
            jp += ops.site_plus.back().entries;
            jz += ops.site_z.back().entries;
        }
    }
    ops.sigma_plus = ops.site_plus.back();
    ops.sigma_minus = ops.site_minus.back();
    ops.sigma_z = ops.site_z.back();
    ops.j_plus = {space, jp, "J+"};
    ops.j_minus = {space, jp.adjoint(), "J-"};
    ops.j_z = {space, jz, "Jz"};
    return ops;
}

ModelOperators composite_operators(const HilbertSpace& space) {
    const LadderOperators sigma = build_pumped_spin();
    LadderOperators collective = [&]() -> LadderOperators {
        if (space.kind == SpaceKind::PumpedSpinTensorDicke) return build_dicke_ladder(space.n_unpumped);
        if (space.kind == SpaceKind::PumpedSpinTensorBoson) {
            HpOperators hp = build_hp_operators(space.n_unpumped, space.n_cut);
            return {hp.plus, hp.minus, hp.z};
        }
        throw DimensionMismatch("composite_operators needs a pumped⊗collective space, got " +
                                space.describe());
    }();
    return {space,
            embed(sigma.plus, Slot::PumpedFactor, space),
            embed(sigma.minus, Slot::PumpedFactor, space),
            embed(sigma.z, Slot::PumpedFactor, space),
            embed(collective.plus, Slot::CollectiveFactor, space),
            embed(collective.minus, Slot::CollectiveFactor, space),
            embed(collective.z, Slot::CollectiveFactor, space)};
}

}  // namespace ppe
