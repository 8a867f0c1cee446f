#include <doctest.h>

#include <cmath>

#include "ppe/observables.hpp"

using namespace ppe;

TEST_CASE("phase_conventions_agree") {
    const std::vector<double> phis = {0.0, 0.7, kPi / 2, kPi, 5.0};
    for (const PhaseEquivalenceRow& row : phase_convention_equivalence_check(ModelSpec::toy(3, 1.5, 0.0), phis)) {
        CAPTURE(row.phi);
        CHECK(row.passed);
        CHECK(row.max_abs_difference < 1e-9);
    }
    // g3 on the HP basis amplifies rounding of ρ by ‖S⁺³S⁻³‖/I³
    for (const PhaseEquivalenceRow& row :
         phase_convention_equivalence_check(ModelSpec::hp_toy(40, 2.0, 0.0, 6), phis, 3, 1e-7)) {
        CAPTURE(row.phi);
        CHECK(row.passed);
    }
}

TEST_CASE("observable_route_requires_zero_jump_phase") {
    const SteadyState s = solve_steady_state(ModelSpec::toy(2, 1.0, 0.5));
    CHECK_THROWS_AS(evaluate(s, 3, PhaseIn::Observable, 0.5), InvalidArgument);
}

TEST_CASE("two_spin_observables_at_unit_pump") {
    // ⟨S⁺S⁻⟩ = tr over the closed form; σz + Jz averaged over [↑↑, ↓↑, ↑↓, ↓↓]
    const ObservableSet o = evaluate(solve_steady_state(ModelSpec::toy(1, 1.0, 0.0)));
    const double sz = (0.5 * 1.0 + 1.0 * 0.0 + 4.5 * 0.0 + 2.5 * -1.0) / 8.5;
    CHECK(o.sz == doctest::Approx(sz).epsilon(1e-12));
    // S⁻ maps ↑↑ → ↓↑ + ↑↓; ↓↑, ↑↓ → ↓↓
    const double intensity = (0.5 * 2.0 + 1.0 + 4.5 + 2.0 * -1.5) / 8.5;
    CHECK(o.intensity == doctest::Approx(intensity).epsilon(1e-12));
    // ⟨S⁺²S⁻²⟩ = 2·2·ρ↑↑
    CHECK(o.g_at(2) == doctest::Approx(4.0 * 0.5 / 8.5 / (intensity * intensity)).epsilon(1e-10));
    CHECK(o.g_at(3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("intensity_underflow_gives_nan") {
    const ModelSpec spec = ModelSpec::toy(2, 1.0, 0.0);
    SteadyState ground;
    ground.rho = Matrix::Zero(6, 6);
    ground.rho(3, 3) = 1.0;  // |↓⟩ ⊗ |m = −1⟩
    const ModelOperators ops = model_operators(spec);
    const ObservableSet o = evaluate(ground, ops, 3, emission_operators(ops));
    CHECK(o.intensity_underflow);
    CHECK(o.sz == doctest::Approx(-1.5));
    CHECK(std::isnan(o.g_at(2)));
    CHECK(std::isnan(o.g_at(3)));
}

TEST_CASE("hp_moment_order_limited_by_cutoff") {
    const SteadyState s = solve_steady_state(ModelSpec::hp_toy(20, 1.0, 0.0, 4));
    CHECK_NOTHROW(evaluate(s, 2));
    CHECK_THROWS_AS(evaluate(s, 3), InvalidArgument);
}

TEST_CASE("auxiliary_phase_only_in_measured_field") {
    const ModelSpec a = ModelSpec::auxiliary(2, 1.0, 0.5, 0.0);
    const ModelSpec b = ModelSpec::auxiliary(2, 1.0, 0.5, kPi);
    const SteadyState sa = solve_steady_state(a);
    const SteadyState sb = solve_steady_state(b);
    CHECK((sa.rho - sb.rho).cwiseAbs().maxCoeff() < 1e-12);
    const ObservableSet oa = evaluate(sa);
    const ObservableSet ob = evaluate(sb);
    CHECK(oa.sz == doctest::Approx(ob.sz));
    CHECK(std::abs(oa.intensity - ob.intensity) > 1e-3);
}

TEST_CASE("emission_operator_phase") {
    const ModelOperators ops = composite_operators(HilbertSpace::pumped_dicke(1));
    const EmissionOperators f = emission_operators(ops, kPi / 2);
    const Matrix expected = cd{0.0, -1.0} * ops.sigma_minus.entries + ops.j_minus.entries;
    CHECK((f.s_minus.entries - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((f.s_plus.entries - expected.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}
