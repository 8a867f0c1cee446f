#include <doctest.h>

#include <cmath>
#include <limits>

#include "ppe/oracles.hpp"
#include "ppe/regimes.hpp"

using namespace ppe;

TEST_CASE("statistics_boundaries") {
    CHECK(classify(0.5, 1.0, 10).statistics == Statistics::Quantum);
    CHECK(classify(0.9, 1.0, 10).statistics == Statistics::Coherent);
    CHECK(classify(1.1, 1.0, 10).statistics == Statistics::Coherent);
    CHECK(classify(1.1000001, 1.0, 10).statistics == Statistics::Bunched);
    CHECK(classify(0.8999999, 1.0, 10).statistics == Statistics::Quantum);
    CHECK(classify(std::numeric_limits<double>::quiet_NaN(), 1.0, 10).statistics == Statistics::Unclassifiable);
}

TEST_CASE("width_boundaries") {
    CHECK(classify(1.0, 2.5, 10).width == Width::UltraNarrow);
    CHECK(classify(1.0, 2.6, 10).width == Width::Narrow);
    CHECK(classify(1.0, 9.99, 10).width == Width::Narrow);
    CHECK(classify(1.0, 10.0, 10).width == Width::Broad);
}

TEST_CASE("custom_thresholds") {
    const RegimeThresholds t{0.3, 5.0};
    CHECK(classify(0.75, 4.0, 10, t).statistics == Statistics::Coherent);
    CHECK(classify(0.75, 4.0, 10, t).width == Width::UltraNarrow);
}

TEST_CASE("short_labels") {
    CHECK(classify(2.0, 1.0, 10).short_label() == "B UN");
    CHECK(classify(0.2, 5.0, 10).short_label() == "Q N");
    CHECK(classify(1.0, 50.0, 10).short_label() == "C B");
    CHECK(classify(std::nan(""), 5.0, 10).short_label() == "? N");
}

TEST_CASE("label_names_roundtrip") {
    for (Statistics s : {Statistics::Quantum, Statistics::Coherent, Statistics::Bunched, Statistics::Unclassifiable})
        CHECK(parse_statistics(to_string(s)) == s);
    for (Width w : {Width::UltraNarrow, Width::Narrow, Width::Broad}) CHECK(parse_width(to_string(w)) == w);
    CHECK_THROWS_AS(parse_width("wide"), InvalidArgument);
}

TEST_CASE("inversion_window_bounds") {
    const InversionWindow win = inversion_window(20, 15.0);
    CHECK(win.w_min == doctest::Approx(200.0));
    CHECK(win.w_max == doctest::Approx(900.0));
    CHECK(win.contains(500.0));
    CHECK_FALSE(win.contains(100.0));
    CHECK(inversion_window(20, 5.0).empty());
}

TEST_CASE("effective_pump_coefficient_values") {
    CHECK(effective_pump_coefficient(2.0 * 7.0, 7.0) == doctest::Approx(7.0));
    CHECK(effective_pump_coefficient(100.0, 10.0) == doctest::Approx(2.0));
}

TEST_CASE("effective_model_is_thermal") {
    // (1/2)𝓓[J⁻] + c𝓓[J⁺] has populations ∝ (2c)^k
    const int n = 6;
    const double w = 50.0, V = 4.0;
    const RealVector p = effective_model_populations(n, w, V);
    const oracle::ThermalDicke t = oracle::thermal_dicke_distribution(n, 2.0 * effective_pump_coefficient(w, V));
    CHECK((p - t.alpha).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("collective_populations_trace_out_pumped_spin") {
    const SteadyState s = solve_steady_state(ModelSpec::toy(3, 1.0));
    const RealVector p = collective_populations(s.rho, HilbertSpace::pumped_dicke(3));
    CHECK(p.size() == 4);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(p.minCoeff() > -1e-12);
}

TEST_CASE("classify_from_results") {
    ObservableSet obs;
    obs.sz = -1.0;
    obs.intensity = 0.3;
    obs.g[2] = 0.5;
    SpectrumResult spec;
    spec.linewidth = 3.0;
    spec.peak_shift = 0.2;
    const RegimeLabel l = classify(obs, spec, 10);
    CHECK(l.statistics == Statistics::Quantum);
    CHECK(l.width == Width::Narrow);
    CHECK(l.intensity == doctest::Approx(0.3));
    CHECK(l.peak_shift == doctest::Approx(0.2));
}
