#include "ppe/steady.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>

namespace ppe {

namespace {

void require_trace_preserving(const Superoperator& L) {
    const int d = L.dim();
    // Row vector vec(1)ᵀ L: sum of the rows that index diagonal elements.
    double worst = 0.0;
    double scale = 0.0;
    for (int col = 0; col < L.matrix.outerSize(); ++col) {
        cd sum{0.0};
        for (SparseMatrix::InnerIterator it(L.matrix, col); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
            const int row = static_cast<int>(it.row());
            if (row % d == row / d) sum += it.value();
        }
        worst = std::max(worst, std::abs(sum));
    }
    if (worst > 1e-10 * std::max(1.0, scale))
        throw InvalidArgument("superoperator is not trace preserving (defect " + std::to_string(worst) + ")");
}

struct NullVector {
    Vector v;
    double smallest;
    double second;
    std::string method;
};

NullVector dense_null_vector(const Matrix& block, double degeneracy_ratio) {
    Eigen::BDCSVD<Matrix> svd(block, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index n = s.size();
    if (n == 1) return {svd.matrixV().col(0), s(0), 0.0, "dense-svd"};
    const double largest = s(0);
    if (s(n - 2) < degeneracy_ratio * largest)
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "second-smallest singular value %.3g is below %.1e of the largest: steady state is not unique",
                      s(n - 2) / largest, degeneracy_ratio);
        throw NullSpaceDegenerate(buf);
    }
    return {svd.matrixV().col(n - 1), s(n - 1), s(n - 2), "dense-svd"};
}

NullVector iterative_null_vector(const SparseMatrix& block, int max_iterations) {
    const Eigen::Index n = block.rows();
    double norm = 0.0;
    for (int col = 0; col < block.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(block, col); it; ++it) norm = std::max(norm, std::abs(it.value()));
    const double shift = 1e-9 * std::max(1.0, norm);
    SparseMatrix shifted = block;
    for (Eigen::Index k = 0; k < n; ++k) shifted.coeffRef(k, k) -= shift;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) throw NoConvergence("shift-invert factorization failed");
    Vector x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double residual = 0.0;
    for (int iter = 0; iter < max_iterations; ++iter) {
        x = lu.solve(x);
        x.normalize();
        residual = (block * x).norm();
        if (residual <= 1e-12 * std::max(1.0, norm)) return {x, residual, std::nan(""), "shift-invert"};
    }
    throw NoConvergence("shift-invert iteration stalled at residual " + std::to_string(residual));
}

}  // namespace

SteadyState solve_steady_state(const Superoperator& L, const SteadyOptions& options) {
    require_trace_preserving(L);
    const int d = L.dim();
    const bool blocked = conserves_coherence_charge(L);
    std::vector<int> indices;
    if (blocked) {
        indices = sector_indices(L.space, 0);
    } else {
        indices.resize(static_cast<std::size_t>(d) * d);
        for (std::size_t k = 0; k < indices.size(); ++k) indices[k] = static_cast<int>(k);
    }
    const double n = static_cast<double>(indices.size());

    NullVector nv = [&] {
        if (n * n <= options.dense_entry_limit)
            return dense_null_vector(restrict_to(L, indices), options.degeneracy_ratio);
        SparseMatrix block = blocked ? SparseMatrix(restrict_to(L, indices).sparseView()) : L.matrix;
        return iterative_null_vector(block, options.max_iterations);
    }();

    Vector full = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    for (std::size_t k = 0; k < indices.size(); ++k) full(indices[k]) = nv.v(static_cast<Eigen::Index>(k));
    Matrix rho = unvectorize(full, d);
    const cd trace = rho.trace();
    if (std::abs(trace) < 1e-14) throw NoConvergence("null vector has vanishing trace");
    rho *= std::conj(trace) / std::abs(trace);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();

    SteadyState out;
    out.rho = rho;
    out.method = nv.method;
    out.smallest_singular = nv.smallest;
    out.second_singular = nv.second;
    out.residual_norm = (L.matrix * vectorize(rho)).norm() / vectorize(rho).norm();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (out.min_eigenvalue < -options.positivity_tolerance)
        throw PositivityViolation("steady state has eigenvalue " + std::to_string(out.min_eigenvalue));
    if (out.residual_norm > options.max_residual)
        throw NoConvergence("steady-state residual " + std::to_string(out.residual_norm) +
                            " exceeds " + std::to_string(options.max_residual));
    return out;
}

SteadyState solve_steady_state(const ModelSpec& spec, const SteadyOptions& options) {
    SteadyState out = solve_steady_state(assemble(spec), options);
    out.spec = spec;
    return out;
}

SingleAtomReference single_atom_reference(double w) {
    if (!(w >= 0.0)) throw InvalidArgument("pump rate must be non-negative");
    const double sz = (w - 1.0) / (2.0 * (w + 1.0));
    return {sz, 0.5 + sz, w + 1.0};
}

}  // namespace ppe
