#include <doctest.h>

#include <cmath>

#include "ppe/spectrum.hpp"

using namespace ppe;

namespace {

double trapezoid(const RealVector& x, const RealVector& y) {
    double s = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) s += 0.5 * (x(i) - x(i - 1)) * (y(i) + y(i - 1));
    return s;
}

SpectrumResult spectrum_of(const ModelSpec& spec, SpectrumOptions opts = {}) {
    return emission_spectrum(spec, solve_steady_state(spec), opts);
}

RealVector lorentzian_pair(const RealVector& omega, double center, double gamma) {
    RealVector s(omega.size());
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        const double a = omega(i) - center;
        const double b = omega(i) + center;
        s(i) = gamma / (a * a + gamma * gamma) + gamma / (b * b + gamma * gamma);
    }
    return s;
}

}  // namespace

TEST_CASE("emission_block_eigenvalues_two_spins") {
    const Superoperator L = assemble(ModelSpec::toy(1, 5.0, 0.0));
    const Vector ev = liouvillian_eigenvalues(L, SpectrumBlock::Emission);
    REQUIRE(ev.size() == 4);
    CHECK(ev(0).real() == doctest::Approx(-0.7156).epsilon(1e-3));
    CHECK(ev(3).real() == doctest::Approx(-6.833).epsilon(1e-3));
}

TEST_CASE("emission_block_is_subset_of_full_spectrum") {
    const Superoperator L = assemble(ModelSpec::toy(2, 1.3, 0.4));
    const Vector block = liouvillian_eigenvalues(L, SpectrumBlock::Emission);
    const Vector full = liouvillian_eigenvalues(L, SpectrumBlock::Full);
    for (Eigen::Index k = 0; k < block.size(); ++k) {
        double best = 1e300;
        for (Eigen::Index j = 0; j < full.size(); ++j) best = std::min(best, std::abs(block(k) - full(j)));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("eigendecomposition_is_biorthogonal") {
    const LiouvillianSpectrum s = eigendecompose(assemble(ModelSpec::toy(3, 2.0, 1.0)), SpectrumBlock::Emission);
    CHECK(s.biorthogonality_error < 1e-9);
    const Matrix check = s.left_vectors.adjoint() * s.right_vectors;
    CHECK((check - Matrix::Identity(s.size(), s.size())).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("spectrum_sum_rule") {
    // ∫ S dω / 2π = ⟨S⁺S⁻⟩
    for (const ModelSpec& spec : {ModelSpec::toy(1, 5.0, 0.0), ModelSpec::toy(3, 1.0, kPi),
                                  ModelSpec::interacting(2, 10.0, 2.0)}) {
        CAPTURE(spec.describe());
        const SteadyState st = solve_steady_state(spec);
        const Residues c = residues(eigendecompose(assemble(spec), SpectrumBlock::Emission), emission_operators(spec),
                                    st.rho);
        cd total = 0.0;
        for (const cd& v : c.values) total += v;
        CHECK(std::abs(total - evaluate(st).intensity) < 1e-10);
    }
}

TEST_CASE("spectrum_normalization_on_wide_grid") {
    const ModelSpec spec = ModelSpec::toy(2, 2.0, 0.0);
    SpectrumOptions opts;
    opts.grid.half_width = 4000.0;
    opts.grid.points = 400001;
    opts.grid.refine = false;
    const SpectrumResult r = spectrum_of(spec, opts);
    const double intensity = evaluate(solve_steady_state(spec)).intensity;
    CHECK(trapezoid(r.omega, r.values) / (2 * kPi) == doctest::Approx(intensity).epsilon(2e-3));
}

TEST_CASE("two_spin_line_shapes") {
    const SpectrumResult dip = spectrum_of(ModelSpec::toy(1, 5.0, 0.0));
    CHECK(dip.structure == PeakStructure::SymmetricDouble);
    CHECK(dip.linewidth == doctest::Approx(3.516).epsilon(2e-3));
    CHECK(dip.method == "residue-sum");

    const SpectrumResult peak = spectrum_of(ModelSpec::toy(1, 5.0, kPi));
    CHECK(peak.structure == PeakStructure::Single);
    CHECK(peak.linewidth == doctest::Approx(2.186).epsilon(2e-3));
    CHECK(peak.peak_shift == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("slowest_mode_residue_sign_follows_phase") {
    for (double phi : {0.0, kPi}) {
        const ModelSpec spec = ModelSpec::toy(1, 5.0, phi);
        const Residues c = residues(eigendecompose(assemble(spec), SpectrumBlock::Emission), emission_operators(spec),
                                    solve_steady_state(spec).rho);
        if (phi == 0.0)
            CHECK(c.values[0].real() < 0.0);
        else
            CHECK(c.values[0].real() > 0.0);
    }
}

TEST_CASE("eigenvalues_independent_of_phase") {
    const Vector a = liouvillian_eigenvalues(assemble(ModelSpec::toy(3, 1.7, 0.0)), SpectrumBlock::Emission);
    const Vector b = liouvillian_eigenvalues(assemble(ModelSpec::toy(3, 1.7, 2.1)), SpectrumBlock::Emission);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("quadrature_phase_gives_shifted_line") {
    const SpectrumResult r = spectrum_of(ModelSpec::toy(1, 5.0, kPi / 2));
    CHECK(std::abs(r.peak_shift) > 0.05);
}

TEST_CASE("time_domain_matches_residue_sum") {
    const ModelSpec spec = ModelSpec::toy(1, 5.0, 0.0);
    const SteadyState st = solve_steady_state(spec);
    const Superoperator L = assemble(spec);
    const RealVector omega = symmetric_grid(40.0, 801);
    const Residues c = residues(eigendecompose(L, SpectrumBlock::Emission), emission_operators(spec), st.rho);
    const SpectrumResult exact = spectral_function(c, liouvillian_eigenvalues(L, SpectrumBlock::Emission), omega);
    const SpectrumResult td = time_domain_spectrum(L, emission_operators(spec), st.rho, omega);
    CHECK(td.method == "time-domain");
    const double scale = exact.values.cwiseAbs().maxCoeff();
    CHECK((exact.values - td.values).cwiseAbs().maxCoeff() < 1e-8 * scale);
    CHECK(td.linewidth == doctest::Approx(exact.linewidth).epsilon(1e-6));
}

TEST_CASE("correlation_starts_at_intensity") {
    const ModelSpec spec = ModelSpec::toy(2, 1.0, 0.3);
    const SteadyState st = solve_steady_state(spec);
    const std::vector<cd> c = correlation_samples(assemble(spec), emission_operators(spec), st.rho, 0.1, 5);
    REQUIRE(c.size() == 5);
    CHECK(std::abs(c[0] - evaluate(st).intensity) < 1e-12);
    CHECK(std::abs(c[4]) < std::abs(c[0]));
}

TEST_CASE("fallback_to_time_domain_when_ill_conditioned") {
    SpectrumOptions opts;
    opts.condition_limit = 1.0;
    const SpectrumResult r = spectrum_of(ModelSpec::toy(1, 5.0, 0.0), opts);
    CHECK(r.method == "time-domain");
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.linewidth == doctest::Approx(3.516).epsilon(2e-3));
}

TEST_CASE("defective_basis_raises") {
    const Superoperator L = assemble(ModelSpec::toy(1, 5.0, 0.0));
    CHECK_THROWS_AS(eigendecompose(L, SpectrumBlock::Emission, 1.0), DefectiveNearEP);
}

TEST_CASE("lorentzian_linewidth") {
    Residues c;
    c.values = {cd{1.0, 0.0}};
    c.contributing = {true};
    Vector ev(1);
    ev(0) = cd{-1.5, 0.0};
    const SpectrumResult r = spectral_function(c, ev, symmetric_grid(60.0, 4001));
    CHECK(r.structure == PeakStructure::Single);
    CHECK(r.linewidth == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("extract_linewidth_synthetic_shapes") {
    const RealVector omega = symmetric_grid(50.0, 20001);

    const LinewidthInfo split = extract_linewidth(omega, lorentzian_pair(omega, 5.0, 1.0));
    CHECK(split.structure == PeakStructure::SymmetricDouble);
    CHECK(split.linewidth == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(split.peak_shift > 0.0);
    CHECK(std::abs(split.peak_shift) == doctest::Approx(5.0).epsilon(1e-2));

    // overlapping pair: dip above half maximum, inner edge at ω = 0
    const LinewidthInfo shallow = extract_linewidth(omega, lorentzian_pair(omega, 0.8, 1.0));
    CHECK(shallow.structure == PeakStructure::SymmetricDouble);

    RealVector lopsided = lorentzian_pair(omega, 5.0, 1.0);
    for (Eigen::Index i = 0; i < omega.size(); ++i)
        if (omega(i) < 0) lopsided(i) *= 0.5;
    CHECK(extract_linewidth(omega, lopsided).structure == PeakStructure::Multi);

    RealVector flat = RealVector::Constant(omega.size(), 1.0);
    CHECK_THROWS_AS(extract_linewidth(omega, flat), GridTooNarrow);
}

TEST_CASE("peak_structure_names") {
    for (PeakStructure s : {PeakStructure::Single, PeakStructure::SymmetricDouble, PeakStructure::Multi})
        CHECK(parse_peak_structure(to_string(s)) == s);
    CHECK(to_string(PeakStructure::SymmetricDouble) == "double");
}

TEST_CASE("exceptional_points_two_spins") {
    const std::vector<ExceptionalPoint> eps = find_exceptional_points(ModelSpec::toy(1, 1.0, 0.0), 0.1, 5.0);
    REQUIRE(eps.size() == 2);
    CHECK(eps[0].w == doctest::Approx(0.5964).epsilon(1e-3));
    CHECK(eps[1].w == doctest::Approx(2.4670).epsilon(1e-3));
    CHECK(eps[0].condition > 50.0);

    // between the two points the slow pair is complex conjugate
    const Vector ev = liouvillian_eigenvalues(assemble(ModelSpec::toy(1, 1.5, 0.0)), SpectrumBlock::Emission);
    CHECK(std::abs(ev(0).real() - ev(1).real()) < 1e-9);
    CHECK(std::abs(ev(0).imag() + ev(1).imag()) < 1e-9);
    CHECK(std::abs(ev(0).imag()) > 1e-3);
}

TEST_CASE("cumulant_reference_at_large_n") {
    const auto [l1, l2] = cumulant_reference_eigenvalues(100, 100.0);
    const Vector ev = liouvillian_eigenvalues(assemble(ModelSpec::hp_toy(100, 100.0, 0.0, 6)), SpectrumBlock::Emission);
    CHECK(ev(0).real() == doctest::Approx(l1.real()).epsilon(1e-2));
    CHECK(std::abs(ev(0).imag()) == doctest::Approx(std::abs(l1.imag())).epsilon(1e-2));
    CHECK(l1 == std::conj(l2));
}

TEST_CASE("default_half_width_grows_with_coupling") {
    CHECK(default_half_width(ModelSpec::toy(3, 2.0)) == doctest::Approx(30.0));
    CHECK(default_half_width(ModelSpec::interacting(3, 2.0, 1.0)) == doctest::Approx(38.0));
}
