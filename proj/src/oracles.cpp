#include "ppe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

#include "ppe/observables.hpp"
#include "ppe/regimes.hpp"
#include "ppe/spectrum.hpp"

// Brute-force and closed-form references. Everything below up to run_all()
// uses Eigen directly and none of the solver's assembly or null-space code.

namespace ppe::oracle {

OracleReport compare(std::string case_id, std::string quantity, cd reference, cd computed, double tolerance) {
    OracleReport r;
    r.case_id = std::move(case_id);
    r.quantity = std::move(quantity);
    r.reference = reference;
    r.computed = computed;
    r.abs_error = std::abs(computed - reference);
    r.rel_error = std::abs(reference) > 0.0 ? r.abs_error / std::abs(reference) : r.abs_error;
    r.tolerance = tolerance;
    r.passed = r.abs_error <= tolerance || r.rel_error <= tolerance;
    return r;
}

Matrix two_spin_closed_form(double w, double phi) {
    if (!(w >= 0.0)) throw InvalidArgument("pump rate must be non-negative");
    const double G = 1.0;
    const cd e = std::polar(1.0, phi);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = w / (2 * G);
    m(1, 1) = 1.0;
    m(1, 2) = -(w + 2 * G) / (2 * G) * e;
    m(2, 1) = -(w + 2 * G) / (2 * G) * std::conj(e);
    m(2, 2) = (6 * w * G + w * w + 2 * G * G) / (2 * G * G);
    m(3, 3) = (w + 4 * G) / (2 * G);
    return m / m.trace();
}

Matrix two_spin_to_solver_basis(const Matrix& closed_form) {
    if (closed_form.rows() != 4 || closed_form.cols() != 4) throw DimensionMismatch("expected a 4x4 matrix");
    Matrix out(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out(kTwoSpinPermutation[a], kTwoSpinPermutation[b]) = closed_form(a, b);
    return out;
}

ThermalDicke thermal_dicke_distribution(int n, double w) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(w > 0.0)) throw InvalidArgument("pump rate must be positive");
    const double J = 0.5 * n;
    // log α_m = (m + J) log r, shifted before exponentiating.
    RealVector log_alpha(n + 1);
    for (int k = 0; k <= n; ++k) log_alpha(k) = k * std::log(w);
    const double top = log_alpha.maxCoeff();
    RealVector alpha = (log_alpha.array() - top).exp();
    alpha /= alpha.sum();

    double first = 0.0, second = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double m = -J + k;
        const double a1 = (J + m) * (J - m + 1);            // J⁺J⁻
        const double a2 = a1 * (J + m - 1) * (J - m + 2);   // J⁺²J⁻²
        first += alpha(k) * a1;
        second += alpha(k) * a2;
    }
    return {alpha, first, first > 0.0 ? second / (first * first) : std::nan("")};
}

namespace {

using Eigen::kroneckerProduct;

Matrix site_operator(const Matrix& op, int site, int n_atoms) {
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 0; s < n_atoms; ++s) {
        const Matrix factor = s == site ? op : Matrix::Identity(2, 2);
        out = kroneckerProduct(out, factor).eval();
    }
    return out;
}

Matrix dissipator(const Matrix& a, double rate) {
    const Eigen::Index d = a.rows();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix ada = a.adjoint() * a;
    return 0.5 * rate *
           (2.0 * kroneckerProduct(a.conjugate(), a) - kroneckerProduct(id, ada) - kroneckerProduct(ada.transpose(), id))
               .eval();
}

Matrix hamiltonian(const Matrix& h) {
    const Eigen::Index d = h.rows();
    const Matrix id = Matrix::Identity(d, d);
    return (cd{0.0, -1.0} * (kroneckerProduct(id, h) - kroneckerProduct(h.transpose(), id))).eval();
}

// Projector onto states symmetric under permutations of the unpumped sites.
Matrix symmetrizer(int n_atoms) {
    const int d = 1 << n_atoms;
    const int unpumped = n_atoms - 1;
    std::vector<int> perm(static_cast<std::size_t>(unpumped));
    std::iota(perm.begin(), perm.end(), 0);
    Matrix sum = Matrix::Zero(d, d);
    int count = 0;
    do {
        for (int idx = 0; idx < d; ++idx) {
            int target = idx & 1;  // last (pumped) site is the lowest bit
            for (int s = 0; s < unpumped; ++s) {
                const int bit = (idx >> (n_atoms - 1 - s)) & 1;
                target |= bit << (n_atoms - 1 - perm[static_cast<std::size_t>(s)]);
            }
            sum(target, idx) += 1.0;
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum / static_cast<double>(count);
}

}  // namespace

BruteForceResult brute_force_lindblad(int n_atoms, const BruteForceModel& model) {
    if (n_atoms < 2) throw InvalidArgument("brute-force oracle needs at least 2 atoms");
    if (n_atoms > 4) throw DimensionOverflow("brute-force oracle supports at most 4 atoms");
    const int d = 1 << n_atoms;
    const int pumped = n_atoms - 1;
    Matrix lower(2, 2), z(2, 2);
    lower << 0, 0, 1, 0;
    z << 0.5, 0, 0, -0.5;

    const Matrix sm = site_operator(lower, pumped, n_atoms);
    const Matrix sp = sm.adjoint();
    Matrix jm = Matrix::Zero(d, d), total_z = site_operator(z, pumped, n_atoms);
    for (int s = 0; s < pumped; ++s) {
        jm += site_operator(lower, s, n_atoms);
        total_z += site_operator(z, s, n_atoms);
    }
    const Matrix jp = jm.adjoint();
    const cd e = std::polar(1.0, model.phi);

    Matrix L;
    double observable_phase = 0.0;
    switch (model.model) {
        case ModelKind::ToyPhase:
        case ModelKind::HPToy:
            L = dissipator(e * sm + jm, 1.0) + dissipator(sp, model.w);
            break;
        case ModelKind::Interacting:
            L = hamiltonian(model.V * (jp * sm + sp * jm)) + dissipator(sm + jm, 1.0) + dissipator(sp, model.w);
            break;
        case ModelKind::CollectivePump:
            L = dissipator(e * jm + sm, 1.0) + dissipator(jp, model.w);
            break;
        case ModelKind::AuxiliaryChannels:
            L = dissipator(sm + jm, 1.0) + dissipator(sm, model.kappa) + dissipator(jm, model.kappa) +
                dissipator(sp, model.w);
            observable_phase = model.phi;
            break;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> sym(symmetrizer(n_atoms));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < d; ++k)
        if (sym.eigenvalues()(k) > 0.5) keep.push_back(k);
    Matrix W(d, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) W.col(static_cast<Eigen::Index>(k)) = sym.eigenvectors().col(keep[k]);

    // vec(W X W†) = (W̄ ⊗ W) vec X
    const Matrix lift = kroneckerProduct(W.conjugate(), W);
    const Matrix reduced = lift.adjoint() * L * lift;
    Eigen::JacobiSVD<Matrix> svd(reduced, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index m = s.size();
    const Eigen::Index r = W.cols();
    Matrix X = Eigen::Map<const Matrix>(svd.matrixV().col(m - 1).data(), r, r);
    X *= std::conj(X.trace()) / std::abs(X.trace());
    Matrix rho = W * X * W.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();

    const Matrix s_minus = std::polar(1.0, -observable_phase) * sm + jm;
    const Matrix s_plus = s_minus.adjoint();
    BruteForceResult out;
    out.rho = rho;
    out.sz = (rho * total_z).trace().real();
    out.intensity = (rho * s_plus * s_minus).trace().real();
    out.g2 = (rho * s_plus * s_plus * s_minus * s_minus).trace().real() / std::pow(out.intensity, 2);
    out.g3 = (rho * s_plus * s_plus * s_plus * s_minus * s_minus * s_minus).trace().real() / std::pow(out.intensity, 3);
    out.uniqueness_margin = s(m - 2) / s(0);
    return out;
}

HpConvergenceStudy hp_convergence_study(const ModelSpec& exact_template, const std::vector<int>& n_cuts) {
    if (exact_template.model != ModelKind::ToyPhase && exact_template.model != ModelKind::Interacting)
        throw InvalidArgument("convergence study needs a toy or interacting template");
    if (exact_template.n_unpumped > 60) throw InvalidArgument("exact reference limited to N <= 60");
    ModelSpec exact = exact_template;
    exact.basis = CollectiveBasis::Dicke;
    exact.n_cut = 0;

    auto measure = [](const ModelSpec& spec, double& sz, double& intensity, double& g2, double& width) {
        const SteadyState ss = solve_steady_state(spec);
        const ModelOperators ops = model_operators(spec);
        const ObservableSet obs = evaluate(ss, ops, 2, emission_operators(spec));
        sz = obs.sz;
        intensity = obs.intensity;
        g2 = obs.g_at(2);
        width = emission_spectrum(spec, ss).linewidth;
    };

    HpConvergenceStudy study{};
    measure(exact, study.sz, study.intensity, study.g2, study.linewidth);
    for (int n_cut : n_cuts) {
        ModelSpec hp = exact;
        if (hp.model == ModelKind::ToyPhase) hp = ModelSpec::hp_toy(exact.n_unpumped, exact.w, exact.phi, n_cut);
        hp.basis = CollectiveBasis::HolsteinPrimakoff;
        hp.n_cut = n_cut;
        double sz, intensity, g2, width;
        measure(hp, sz, intensity, g2, width);
        study.rows.push_back({n_cut, std::abs(sz - study.sz), std::abs(intensity - study.intensity) / study.intensity,
                              std::abs(g2 - study.g2) / study.g2, std::abs(width - study.linewidth) / study.linewidth});
    }
    return study;
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

std::vector<OracleReport> run_all() {
    std::vector<OracleReport> out;
    const double phis[] = {0.0, kPi / 2, kPi};

    for (double w : {1e-6, 0.5, 1.0, 5.0, 50.0})
        for (double phi : phis) {
            const Matrix ref = two_spin_to_solver_basis(two_spin_closed_form(w, phi));
            const Matrix rho = solve_steady_state(ModelSpec::toy(1, w, phi)).rho;
            const double err = (rho - ref).cwiseAbs().maxCoeff();
            OracleReport r = compare("two-spin w=" + fmt(w) + " phi=" + fmt(phi), "max |rho - closed form|", 0.0,
                                     err, 1e-10);
            out.push_back(r);
        }

    {
        const Matrix closed = two_spin_closed_form(1.0, kPi / 3);
        const Matrix brute = brute_force_lindblad(2, {ModelKind::ToyPhase, 1.0, kPi / 3}).rho;
        out.push_back(compare("brute-force n=2 vs closed form", "max |rho diff|", 0.0,
                              (brute - closed).cwiseAbs().maxCoeff(), 1e-10));
    }

    for (int n_atoms : {2, 3, 4})
        for (double w : {0.1, 0.5, 1.0, 5.0, 20.0})
            for (double phi : phis) {
                const BruteForceResult bf = brute_force_lindblad(n_atoms, {ModelKind::ToyPhase, w, phi});
                const SteadyState ss = solve_steady_state(ModelSpec::toy(n_atoms - 1, w, phi));
                const ObservableSet obs = evaluate(ss, 3);
                const std::string id = "dicke vs brute force n=" + std::to_string(n_atoms) + " w=" + fmt(w) +
                                       " phi=" + fmt(phi);
                out.push_back(compare(id, "Sz", bf.sz, obs.sz, 1e-8));
                out.push_back(compare(id, "intensity", bf.intensity, obs.intensity, 1e-8));
                out.push_back(compare(id, "g2", bf.g2, obs.g_at(2), 1e-8));
                out.push_back(compare(id, "g3", bf.g3, obs.g_at(3), 1e-8));
            }

    for (const auto& [kind, spec] :
         {std::pair{ModelKind::Interacting, ModelSpec::interacting(2, 3.0, 1.5)},
          std::pair{ModelKind::CollectivePump, ModelSpec::collective_pump(2, 2.0, kPi / 2)},
          std::pair{ModelKind::AuxiliaryChannels, ModelSpec::auxiliary(3, 1.0, 0.05, kPi / 4)}}) {
        const BruteForceResult bf =
            brute_force_lindblad(spec.n_unpumped + 1, {kind, spec.w, spec.phi, spec.V, spec.kappa});
        const ObservableSet obs = evaluate(solve_steady_state(spec), 3);
        const std::string id = "dicke vs brute force " + to_string(kind);
        out.push_back(compare(id, "Sz", bf.sz, obs.sz, 1e-8));
        out.push_back(compare(id, "intensity", bf.intensity, obs.intensity, 1e-8));
        out.push_back(compare(id, "g2", bf.g2, obs.g_at(2), 1e-8));
    }

    for (int n : {4, 20, 100})
        for (double w : {0.5, 1.0, 3.0}) {
            const ThermalDicke th = thermal_dicke_distribution(n, w);
            const LadderOperators j = build_dicke_ladder(n);
            const Channel channels[] = {{j.minus, 1.0}, {j.plus, w}};
            const SteadyState ss = solve_steady_state(lindblad(j.minus.space, std::nullopt, channels));
            const double err = (ss.rho.diagonal().real() - th.alpha).cwiseAbs().maxCoeff();
            out.push_back(compare("thermal dicke N=" + std::to_string(n) + " w=" + fmt(w), "max |alpha diff|", 0.0,
                                  err, 1e-10));
        }
    out.push_back(compare("thermal dicke N=100 w=1", "g2", 1.2, thermal_dicke_distribution(100, 1.0).g2, 0.02));

    for (double w : {0.2, 1.0, 7.0}) {
        const SingleAtomReference ref = single_atom_reference(w);
        const LadderOperators s = build_pumped_spin();
        const Channel channels[] = {{s.minus, 1.0}, {s.plus, w}};
        const Superoperator L = lindblad(s.minus.space, std::nullopt, channels);
        const SteadyState ss = solve_steady_state(L);
        const double sz = (ss.rho * s.z.entries).trace().real();
        out.push_back(compare("single atom w=" + fmt(w), "sigma_z", ref.sigma_z, sz, 1e-10));
        const LiouvillianSpectrum es = eigendecompose(L, SpectrumBlock::Emission);
        const SpectrumResult spec = spectral_function(residues(es, {s.plus, s.minus}, ss.rho), es.eigenvalues,
                                                      symmetric_grid(20.0 * (w + 1.0), 4001));
        out.push_back(compare("single atom w=" + fmt(w), "linewidth", ref.linewidth, spec.linewidth, 1e-4));
    }

    {
        const HpConvergenceStudy study = hp_convergence_study(ModelSpec::toy(20, 1.0, 0.0), {2, 4, 6});
        for (const auto& row : study.rows)
            out.push_back(compare("hp convergence N=20 w=1 n_cut=" + std::to_string(row.n_cut), "intensity rel error",
                                  0.0, row.intensity_error, 1e-2));
    }

    for (const auto& row : phase_convention_equivalence_check(ModelSpec::toy(3, 1.0), {0.0, kPi / 4, kPi / 2, kPi}))
        out.push_back(compare("phase conventions phi=" + fmt(row.phi), "max field difference", 0.0,
                              row.max_abs_difference, 1e-9));
    return out;
}

}  // namespace ppe::oracle
