#include "ppe/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace ppe {

namespace {

constexpr double kMaxDenseBlock = 3000;

struct Block {
    std::vector<int> indices;  // empty: whole space
    Matrix A;
};

Block block_of(const Superoperator& L, SpectrumBlock which) {
    Block b;
    if (which == SpectrumBlock::Emission && conserves_coherence_charge(L)) {
        b.indices = sector_indices(L.space, -1);
        if (b.indices.empty()) throw InvalidArgument("emission block is empty");
        b.A = restrict_to(L, b.indices);
        return b;
    }
    const double n = static_cast<double>(L.dim()) * L.dim();
    if (n > kMaxDenseBlock)
        throw DimensionOverflow("dense eigendecomposition of a " + std::to_string(static_cast<long>(n)) +
                                "-dimensional superoperator refused; use the emission block");
    b.A = L.dense();
    return b;
}

Vector gather(const std::vector<int>& indices, const Vector& full) {
    if (indices.empty()) return full;
    Vector out(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) out(static_cast<Eigen::Index>(k)) = full(indices[k]);
    return out;
}

double leak(const std::vector<int>& indices, const Vector& full) {
    if (indices.empty()) return 0.0;
    double inside = 0.0;
    for (int k : indices) inside += std::norm(full(k));
    return std::sqrt(std::max(0.0, full.squaredNorm() - inside));
}

std::vector<int> mode_order(const Vector& eig) {
    const Eigen::Index n = eig.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(eig(a).real()) < std::abs(eig(b).real()); });
    double scale = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) scale = std::max(scale, std::abs(eig(k)));
    const double tie = 1e-9 * scale;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               std::abs(std::abs(eig(order[end]).real()) - std::abs(eig(order[start]).real())) <= tie)
            ++end;
        std::sort(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end),
                  [&](int a, int b) { return eig(a).imag() < eig(b).imag(); });
        start = end;
    }
    return order;
}

// vec(S⁺ᵀ): tr(X S⁺) = vec(S⁺ᵀ)ᵀ vec(X).
Vector trace_weights(const OperatorMatrix& s_plus) {
    return vectorize(s_plus.entries.transpose());
}

Vector lowered_state(const OperatorMatrix& s_minus, const Matrix& rho) {
    return vectorize(s_minus.entries * rho);
}

double max_abs(const RealVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double trapezoid(const RealVector& x, const RealVector& y) {
    double s = 0.0;
    for (Eigen::Index k = 1; k < x.size(); ++k) s += 0.5 * (x(k) - x(k - 1)) * (y(k) + y(k - 1));
    return s;
}

// Crossing of level between samples a (above) and b (below).
double crossing(const RealVector& omega, const RealVector& v, Eigen::Index a, Eigen::Index b, double level) {
    const double t = (v(a) - level) / (v(a) - v(b));
    return omega(a) + t * (omega(b) - omega(a));
}

// Walks from the peak in direction dir until the level is crossed.
double walk_edge(const RealVector& omega, const RealVector& v, Eigen::Index peak, int dir, double level,
                 Eigen::Index stop = -1) {
    Eigen::Index i = peak;
    while (true) {
        const Eigen::Index next = i + dir;
        if (next < 0 || next >= v.size())
            throw GridTooNarrow("half maximum not bracketed within the frequency grid");
        if (stop >= 0 && next == stop + dir) return omega(stop);
        if (v(next) < level) return crossing(omega, v, i, next, level);
        i = next;
    }
}

void add_moments(double theta, cd m[6]) {
    if (std::abs(theta) < 1.0) {
        // Σ_n (iθ)ⁿ / (n! (j+n+1))
        for (int j = 0; j < 6; ++j) {
            cd term{1.0, 0.0};
            cd sum{0.0, 0.0};
            for (int n = 0; n < 30; ++n) {
                sum += term / static_cast<double>(j + n + 1);
                term *= kI * theta / static_cast<double>(n + 1);
            }
            m[j] = sum;
        }
        return;
    }
    const cd e = std::exp(kI * theta);
    const cd inv = 1.0 / (kI * theta);
    m[0] = (e - 1.0) * inv;
    for (int j = 1; j < 6; ++j) m[j] = (e - static_cast<double>(j) * m[j - 1]) * inv;
}

using HermiteCoeffs = std::array<cd, 6>;

// Quintic on s ∈ [0, 1] matching value, h·C′ and h²·C″ at both ends.
HermiteCoeffs hermite(cd f0, cd d0, cd e0, cd f1, cd d1, cd e1) {
    const cd a0 = f0, a1 = d0, a2 = 0.5 * e0;
    const cd A = f1 - a0 - a1 - a2;
    const cd B = d1 - a1 - 2.0 * a2;
    const cd C = e1 - 2.0 * a2;
    return {a0, a1, a2, 10.0 * A - 4.0 * B + 0.5 * C, -15.0 * A + 7.0 * B - C, 6.0 * A - 3.0 * B + 0.5 * C};
}

cd hermite_value(const HermiteCoeffs& a, double s) {
    cd v{0.0, 0.0};
    for (int j = 5; j >= 0; --j) v = v * s + a[j];
    return v;
}

cd hermite_slope(const HermiteCoeffs& a, double s) {
    cd v{0.0, 0.0};
    for (int j = 5; j >= 1; --j) v = v * s + static_cast<double>(j) * a[j];
    return v;
}

// Consecutive segments of equal length h starting at t0.
struct FilonRun {
    double t0;
    double h;
    std::vector<HermiteCoeffs> coeffs;
};

struct FilonData {
    std::vector<FilonRun> runs;

    void push(double t0, double h, const HermiteCoeffs& a) {
        if (runs.empty() || runs.back().h != h) runs.push_back({t0, h, {}});
        runs.back().coeffs.push_back(a);
    }

    std::size_t segments() const {
        std::size_t n = 0;
        for (const auto& r : runs) n += r.coeffs.size();
        return n;
    }

    RealVector operator()(const RealVector& omega) const {
        RealVector out(omega.size());
        for (Eigen::Index k = 0; k < omega.size(); ++k) {
            cd total{0.0, 0.0};
            for (const FilonRun& run : runs) {
                const double theta = omega(k) * run.h;
                cd m[6];
                add_moments(theta, m);
                const cd step = std::exp(kI * theta);
                cd phase = std::exp(kI * (omega(k) * run.t0));
                cd sum{0.0, 0.0};
                for (const auto& a : run.coeffs) {
                    sum += phase * (a[0] * m[0] + a[1] * m[1] + a[2] * m[2] + a[3] * m[3] + a[4] * m[4] + a[5] * m[5]);
                    phase *= step;
                }
                total += run.h * sum;
            }
            out(k) = 2.0 * total.real();
        }
        return out;
    }
};

SpectrumResult finish(RealVector omega, RealVector values, const SpectralEvaluator& eval, bool refine) {
    SpectrumResult out;
    out.omega = std::move(omega);
    out.values = std::move(values);
    const LinewidthInfo coarse = extract_linewidth(out.omega, out.values);
    const double step = out.omega.size() > 1 ? out.omega(1) - out.omega(0) : 0.0;
    LinewidthInfo info = coarse;
    if (refine) info = refine_linewidth(eval, out.omega, out.values);
    if (coarse.linewidth < 10.0 * step)
        out.warnings.push_back("grid too coarse: FWHM spans fewer than 10 points; width measured on a zoomed grid");
    out.linewidth = info.linewidth;
    out.peak_shift = info.peak_shift;
    out.structure = info.structure;
    return out;
}

void check_normalization(SpectrumResult& out, double intensity) {
    if (intensity <= 0.0) return;
    const double integral = trapezoid(out.omega, out.values);
    const double expected = 2.0 * kPi * intensity;
    if (std::abs(integral - expected) > 0.02 * expected)
        out.warnings.push_back("spectral weight on the grid is " + std::to_string(integral / expected) +
                               " of 2π⟨S⁺S⁻⟩; grid may be too narrow");
}

}  // namespace

Vector LiouvillianSpectrum::gather(const Vector& full) const { return ppe::gather(indices, full); }

LiouvillianSpectrum eigendecompose(const Superoperator& L, SpectrumBlock block, double condition_limit) {
    Block b = block_of(L, block);
    Eigen::ComplexEigenSolver<Matrix> solver(b.A, true);
    if (solver.info() != Eigen::Success) throw NoConvergence("eigensolver failed");
    const std::vector<int> order = mode_order(solver.eigenvalues());
    const Eigen::Index n = b.A.rows();

    LiouvillianSpectrum out;
    out.space = L.space;
    out.indices = std::move(b.indices);
    out.eigenvalues.resize(n);
    out.right_vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = solver.eigenvalues()(order[k]);
        out.right_vectors.col(k) = solver.eigenvectors().col(order[k]).normalized();
    }
    Eigen::BDCSVD<Matrix> svd(out.right_vectors);
    const auto& s = svd.singularValues();
    out.condition_estimate = s(n - 1) > 0.0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
    if (out.condition_estimate > condition_limit)
        throw DefectiveNearEP("eigenvector condition " + std::to_string(out.condition_estimate) +
                                  " exceeds " + std::to_string(condition_limit),
                              out.condition_estimate);
    out.left_vectors = out.right_vectors.fullPivLu().inverse().adjoint();
    out.biorthogonality_error =
        (out.left_vectors.adjoint() * out.right_vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    return out;
}

Vector liouvillian_eigenvalues(const Superoperator& L, SpectrumBlock block) {
    Block b = block_of(L, block);
    Eigen::ComplexEigenSolver<Matrix> solver(b.A, false);
    if (solver.info() != Eigen::Success) throw NoConvergence("eigensolver failed");
    const std::vector<int> order = mode_order(solver.eigenvalues());
    Vector out(static_cast<Eigen::Index>(order.size()));
    for (std::size_t k = 0; k < order.size(); ++k) out(static_cast<Eigen::Index>(k)) = solver.eigenvalues()(order[k]);
    return out;
}

Residues residues(const LiouvillianSpectrum& spec, const EmissionOperators& field, const Matrix& rho_ss) {
    if (spec.biorthogonality_error > 1e-6)
        throw DefectiveNearEP("left/right eigenvectors are not biorthonormal", spec.condition_estimate);
    const Vector x_full = lowered_state(field.s_minus, rho_ss);
    if (leak(spec.indices, x_full) > 1e-10 * std::max(1.0, x_full.norm()))
        throw InvalidArgument("S⁻ρ has weight outside the diagonalized block");
    const Vector weights = spec.gather(trace_weights(field.s_plus));
    const Vector x = spec.gather(x_full);

    const Vector right_overlap = spec.right_vectors.transpose() * weights;  // tr(r_k S⁺)
    const Vector left_overlap = spec.left_vectors.adjoint() * x;          // tr(l_k† S⁻ρ)
    Residues out;
    out.values.resize(static_cast<std::size_t>(spec.size()));
    double largest = 0.0;
    for (int k = 0; k < spec.size(); ++k) {
        out.values[k] = right_overlap(k) * left_overlap(k);
        largest = std::max(largest, std::abs(out.values[k]));
    }
    out.contributing.resize(out.values.size());
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.contributing[k] = std::abs(out.values[k]) >= 1e-12 * largest && largest > 0.0;
    return out;
}

std::string to_string(PeakStructure s) {
    switch (s) {
        case PeakStructure::Single: return "single";
        case PeakStructure::SymmetricDouble: return "double";
        case PeakStructure::Multi: return "multi";
    }
    return "single";
}

PeakStructure parse_peak_structure(const std::string& s) {
    if (s == "single") return PeakStructure::Single;
    if (s == "double") return PeakStructure::SymmetricDouble;
    if (s == "multi") return PeakStructure::Multi;
    throw InvalidArgument("unknown peak structure '" + s + "'");
}

RealVector symmetric_grid(double half_width, int points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("grid half-width must be positive");
    if (points < 5) throw InvalidArgument("grid needs at least 5 points");
    return RealVector::LinSpaced(points, -half_width, half_width);
}

double default_half_width(const ModelSpec& spec) {
    double h = 5.0 * (spec.w + spec.n_unpumped + 1.0);
    if (spec.model == ModelKind::Interacting) h += 4.0 * spec.V * std::sqrt(spec.n_unpumped + 1.0);
    return h;
}

SpectrumResult spectral_function(const Residues& c, const Vector& eigenvalues, const RealVector& omega,
                                 bool per_mode, bool refine) {
    if (static_cast<Eigen::Index>(c.values.size()) != eigenvalues.size())
        throw DimensionMismatch("residue and eigenvalue counts differ");
    auto eval = [c, eigenvalues](const RealVector& grid) {
        RealVector out = RealVector::Zero(grid.size());
        for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
            const cd ck = c.values[static_cast<std::size_t>(k)];
            if (ck == cd{0.0}) continue;
            for (Eigen::Index j = 0; j < grid.size(); ++j)
                out(j) += 2.0 * (ck / (-kI * grid(j) - eigenvalues(k))).real();
        }
        return out;
    };
    SpectrumResult out = finish(omega, eval(omega), eval, refine);
    out.method = "residue-sum";
    cd total{0.0};
    for (const cd& ck : c.values) total += ck;
    check_normalization(out, total.real());
    if (per_mode) {
        for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
            if (!c.contributing[static_cast<std::size_t>(k)]) continue;
            ModeContribution m{eigenvalues(k), c.values[static_cast<std::size_t>(k)], RealVector(omega.size())};
            for (Eigen::Index j = 0; j < omega.size(); ++j)
                m.partial(j) = 2.0 * (m.residue / (-kI * omega(j) - m.eigenvalue)).real();
            out.per_mode.push_back(std::move(m));
        }
    }
    const double negativity = -std::min(0.0, out.values.minCoeff());
    if (negativity > 1e-9 * max_abs(out.values))
        out.warnings.push_back("spectrum is negative down to " + std::to_string(-negativity));
    return out;
}

namespace {

struct Propagation {
    std::vector<int> indices;
    Matrix A;
    Vector x;                 // S⁻ρ in the block
    Eigen::RowVectorXcd r0;   // tr(S⁺ ·)
    bool subtracted_coherent = false;
};

Propagation prepare(const Superoperator& L, const EmissionOperators& field, const Matrix& rho_ss) {
    Propagation p;
    Block b = block_of(L, SpectrumBlock::Emission);
    p.indices = std::move(b.indices);
    p.A = std::move(b.A);
    Vector x_full = lowered_state(field.s_minus, rho_ss);
    if (p.indices.empty()) {
        // Remove the non-decaying part ρ_ss·tr(S⁻ρ) so the correlation decays.
        const cd coherent = (field.s_minus.entries * rho_ss).trace();
        if (std::abs(coherent) > 0.0) {
            x_full -= coherent * vectorize(rho_ss);
            p.subtracted_coherent = true;
        }
    } else if (leak(p.indices, x_full) > 1e-10 * std::max(1.0, x_full.norm())) {
        throw InvalidArgument("S⁻ρ has weight outside the propagated block");
    }
    p.x = gather(p.indices, x_full);
    p.r0 = gather(p.indices, trace_weights(field.s_plus)).transpose();
    return p;
}

}  // namespace

std::vector<cd> correlation_samples(const Superoperator& L, const EmissionOperators& field, const Matrix& rho_ss,
                                    double dt, int count) {
    Propagation p = prepare(L, field, rho_ss);
    const Matrix P = (p.A * dt).exp();
    std::vector<cd> out;
    Vector x = p.x;
    for (int k = 0; k < count; ++k) {
        out.push_back((p.r0 * x)(0));
        x = P * x;
    }
    return out;
}

SpectrumResult time_domain_spectrum(const Superoperator& L, const EmissionOperators& field, const Matrix& rho_ss,
                                    const RealVector& omega, const TimeDomainOptions& options) {
    Propagation p = prepare(L, field, rho_ss);
    const double norm = p.A.cwiseAbs().rowwise().sum().maxCoeff();
    const double h0 = options.dt.value_or(norm > 0.0 ? 0.25 / norm : 0.1);
    if (!(h0 > 0.0)) throw InvalidArgument("time step must be positive");
    const Eigen::RowVectorXcd r1 = p.r0 * p.A;
    const Eigen::RowVectorXcd r2 = r1 * p.A;
    const double r0_norm = p.r0.norm();

    struct Sample {
        cd f, d, e;  // C, C′, C″
    };
    auto sample = [&](const Vector& v) { return Sample{(p.r0 * v)(0), (r1 * v)(0), (r2 * v)(0)}; };
    auto fit = [](const Sample& a, const Sample& b, double h) {
        return hermite(a.f, h * a.d, h * h * a.e, b.f, h * b.d, h * h * b.e);
    };

    // propagators[k] = exp(A·h_k) with h_k = 2^k·h_base
    const double h_base = options.adaptive ? 0.5 * h0 : h0;
    std::vector<Matrix> propagators{(p.A * h_base).exp()};
    auto propagator = [&](int k) -> const Matrix& {
        while (static_cast<int>(propagators.size()) <= k) propagators.push_back(propagators.back() * propagators.back());
        return propagators[k];
    };
    constexpr int kMaxLevel = 60;

    auto data = std::make_shared<FilonData>();
    Vector x = p.x;
    Sample s0 = sample(x);
    const cd c0 = s0.f;
    const double scale = std::max(std::abs(c0), 1e-300);
    const double stop = options.tail_tolerance * scale;
    const double accept = options.interpolation_tolerance * scale;
    double t = 0.0;
    int level = 1;
    while (true) {
        if (!options.adaptive) {
            x = propagator(0) * x;
            const Sample s1 = sample(x);
            data->push(t, h0, fit(s0, s1, h0));
            s0 = s1;
            t += h0;
        } else {
            // One step of 2^level·h_base, checked at its midpoint against two half steps.
            const double H = std::ldexp(h_base, level);
            const Vector xm = propagator(level - 1) * x;
            x = propagator(level - 1) * xm;
            const Sample sm = sample(xm);
            const Sample s1 = sample(x);
            const HermiteCoeffs whole = fit(s0, s1, H);
            const double err = std::max(std::abs(hermite_value(whole, 0.5) - sm.f),
                                        0.5 * std::abs(hermite_slope(whole, 0.5) - H * sm.d));
            if (err <= accept) {
                data->push(t, H, whole);
                level = std::min(level + 1, kMaxLevel);
            } else {
                data->push(t, 0.5 * H, fit(s0, sm, 0.5 * H));
                data->push(t + 0.5 * H, 0.5 * H, fit(sm, s1, 0.5 * H));
                level = std::max(level - 1, 1);
            }
            s0 = s1;
            t += H;
        }
        if (options.t_max && t >= *options.t_max) break;
        if (x.norm() * r0_norm <= stop) break;
        if (static_cast<long>(data->segments()) >= options.max_steps)
            throw NoConvergence("correlation did not decay within " + std::to_string(options.max_steps) + " steps");
    }
    SpectralEvaluator eval = [data](const RealVector& grid) { return (*data)(grid); };
    SpectrumResult out = finish(omega, eval(omega), eval, options.refine);
    out.method = "time-domain";
    check_normalization(out, c0.real());
    if (p.subtracted_coherent) out.warnings.push_back("coherent (delta) component removed from the spectrum");
    if (options.t_max && x.norm() * r0_norm > stop) out.warnings.push_back("correlation truncated at t_max");
    return out;
}

LinewidthInfo extract_linewidth(const SpectrumResult& spectrum) {
    return extract_linewidth(spectrum.omega, spectrum.values);
}

LinewidthInfo extract_linewidth(const RealVector& omega, const RealVector& v) {
    const Eigen::Index n = v.size();
    if (n < 3 || omega.size() != n) throw InvalidArgument("spectrum needs at least 3 samples");
    Eigen::Index top = 0;
    const double gmax = v.maxCoeff(&top);
    if (!(gmax > 0.0)) throw GridTooNarrow("spectrum has no positive maximum");
    if (top == 0 || top == n - 1) throw GridTooNarrow("spectral maximum lies on the grid boundary");

    std::vector<Eigen::Index> peaks;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        if (v(i) > v(i - 1) && v(i) >= v(i + 1) && v(i) >= 0.05 * gmax) peaks.push_back(i);

    const double step = (omega(n - 1) - omega(0)) / static_cast<double>(n - 1);
    LinewidthInfo out;
    if (peaks.size() == 2) {
        const Eigen::Index a = peaks[0], b = peaks[1];
        const double ha = v(a), hb = v(b);
        const bool symmetric = omega(a) < 0.0 && omega(b) > 0.0 && std::abs(omega(a) + omega(b)) <= 2.0 * step + 1e-12 &&
                               std::abs(ha - hb) <= 0.05 * std::max(ha, hb);
        if (symmetric) {
            const bool pick_b = hb >= ha || std::abs(ha - hb) <= 1e-9 * std::max(ha, hb);
            const Eigen::Index p = pick_b ? b : a;
            const int outward = pick_b ? 1 : -1;
            Eigen::Index dip = a;
            for (Eigen::Index i = a; i <= b; ++i)
                if (v(i) < v(dip)) dip = i;
            const double level = 0.5 * v(p);
            const double outer = walk_edge(omega, v, p, outward, level);
            const double inner = walk_edge(omega, v, p, -outward, level, dip);
            out.linewidth = std::abs(outer - inner);
            out.peak_shift = omega(p);
            out.structure = PeakStructure::SymmetricDouble;
            return out;
        }
    }
    const double level = 0.5 * gmax;
    const double left = walk_edge(omega, v, top, -1, level);
    const double right = walk_edge(omega, v, top, 1, level);
    out.linewidth = right - left;
    out.peak_shift = omega(top);
    out.structure = peaks.size() <= 1 ? PeakStructure::Single : PeakStructure::Multi;
    return out;
}

LinewidthInfo refine_linewidth(const SpectralEvaluator& evaluate, const RealVector& omega, const RealVector& values,
                               int iterations, int points) {
    LinewidthInfo info = extract_linewidth(omega, values);
    double half = std::max(std::abs(omega(0)), std::abs(omega(omega.size() - 1)));
    for (int it = 0; it < iterations; ++it) {
        const double target = std::min(half, std::abs(info.peak_shift) + 3.0 * info.linewidth);
        if (!(target > 0.0)) break;
        LinewidthInfo next;
        bool ok = false;
        for (double widen = 1.0; widen <= 8.0 && !ok; widen *= 2.0) {
            const double h = std::min(half, target * widen);
            const RealVector grid = symmetric_grid(h, points);
            try {
                next = extract_linewidth(grid, evaluate(grid));
                ok = true;
                half = h;
            } catch (const GridTooNarrow&) {
                if (h >= half) break;
            }
        }
        if (!ok) break;
        const bool settled = std::abs(next.linewidth - info.linewidth) <= 1e-6 * info.linewidth;
        info = next;
        if (settled) break;
    }
    return info;
}

SpectrumResult emission_spectrum(const ModelSpec& spec, const SteadyState& state, const SpectrumOptions& options) {
    const Superoperator L = assemble(spec);
    const EmissionOperators field = emission_operators(spec);
    const RealVector omega =
        symmetric_grid(options.grid.half_width.value_or(default_half_width(spec)), options.grid.points);
    try {
        const LiouvillianSpectrum es = eigendecompose(L, options.block, options.condition_limit);
        SpectrumResult out = spectral_function(residues(es, field, state.rho), es.eigenvalues, omega,
                                               options.grid.per_mode, options.grid.refine);
        out.condition = es.condition_estimate;
        return out;
    } catch (const DefectiveNearEP& e) {
        TimeDomainOptions td = options.time_domain;
        td.refine = options.grid.refine;
        SpectrumResult out = time_domain_spectrum(L, field, state.rho, omega, td);
        out.condition = e.condition();
        out.warnings.push_back(std::string("ill-conditioned eigenbasis (") + e.what() +
                               "): near an exceptional point or strongly non-normal; used the time-domain route");
        return out;
    }
}

std::vector<ExceptionalPoint> find_exceptional_points(const ModelSpec& family, double w_min, double w_max,
                                                      int samples, double tolerance) {
    if (!(w_min >= 0.0) || !(w_max > w_min)) throw InvalidArgument("invalid pump range");
    if (samples < 200) throw InvalidArgument("exceptional-point scan needs at least 200 samples");
    auto slowest_pair = [&](double w) {
        ModelSpec s = family;
        s.w = w;
        const Superoperator L = assemble(s);
        const Vector ev = liouvillian_eigenvalues(L, SpectrumBlock::Emission);
        // The full generator also holds the stationary eigenvalue; skip it.
        Eigen::Index first = 0;
        if (!conserves_coherence_charge(L) && std::abs(ev(0)) < 1e-9) first = 1;
        if (ev.size() < first + 2) throw InvalidArgument("fewer than two modes to coalesce");
        return std::pair<cd, cd>{ev(first), ev(first + 1)};
    };
    auto indicator = [&](double w) {
        const auto [l1, l2] = slowest_pair(w);
        const double di = l1.imag() - l2.imag();
        const double dr = l1.real() - l2.real();
        return di * di - dr * dr;
    };
    auto condition_at = [&](double w) {
        ModelSpec s = family;
        s.w = w;
        return eigendecompose(assemble(s), SpectrumBlock::Emission, std::numeric_limits<double>::infinity())
            .condition_estimate;
    };

    std::vector<double> grid(static_cast<std::size_t>(samples));
    std::vector<double> d(grid.size());
    for (int k = 0; k < samples; ++k) {
        grid[k] = w_min + (w_max - w_min) * k / (samples - 1.0);
        d[k] = indicator(grid[k]);
    }
    std::vector<ExceptionalPoint> out;
    for (int k = 0; k + 1 < samples; ++k) {
        if ((d[k] > 0.0) == (d[k + 1] > 0.0)) continue;
        double lo = grid[k], hi = grid[k + 1];
        const bool lo_positive = d[k] > 0.0;
        while (hi - lo > tolerance) {
            const double mid = 0.5 * (lo + hi);
            ((indicator(mid) > 0.0) == lo_positive ? lo : hi) = mid;
        }
        const double w_star = 0.5 * (lo + hi);
        const double cond = condition_at(w_star);
        const double far = std::max(condition_at(grid[std::max(0, k - 2)]),
                                    condition_at(grid[std::min(samples - 1, k + 3)]));
        if (cond < 3.0 * far) continue;  // the slowest pair swapped identity, no coalescence
        const auto [l1, l2] = slowest_pair(w_star);
        out.push_back({w_star, cond, 0.5 * (l1 + l2)});
    }
    return out;
}

std::pair<cd, cd> cumulant_reference_eigenvalues(int n, double w) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(w >= 0.0)) throw InvalidArgument("pump rate must be non-negative");
    const double a = w + (n + 1.0);
    const cd root = std::sqrt(cd{-4.0 * n * (w + 2.0) + a * a, 0.0});
    return {-0.25 * (a - root), -0.25 * (a + root)};
}

}  // namespace ppe
