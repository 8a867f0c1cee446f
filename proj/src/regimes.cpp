#include "ppe/regimes.hpp"

#include <cmath>

namespace ppe {

std::string to_string(Statistics s) {
    switch (s) {
        case Statistics::Quantum: return "quantum";
        case Statistics::Coherent: return "coherent";
        case Statistics::Bunched: return "bunched";
        case Statistics::Unclassifiable: return "unclassifiable";
    }
    return "unclassifiable";
}

std::string to_string(Width w) {
    switch (w) {
        case Width::UltraNarrow: return "ultranarrow";
        case Width::Narrow: return "narrow";
        case Width::Broad: return "broad";
    }
    return "narrow";
}

Statistics parse_statistics(const std::string& s) {
    if (s == "quantum") return Statistics::Quantum;
    if (s == "coherent") return Statistics::Coherent;
    if (s == "bunched") return Statistics::Bunched;
    if (s == "unclassifiable") return Statistics::Unclassifiable;
    throw InvalidArgument("unknown statistics label '" + s + "'");
}

Width parse_width(const std::string& s) {
    if (s == "ultranarrow") return Width::UltraNarrow;
    if (s == "narrow") return Width::Narrow;
    if (s == "broad") return Width::Broad;
    throw InvalidArgument("unknown width label '" + s + "'");
}

std::string RegimeLabel::short_label() const {
    static const char* stats[] = {"Q", "C", "B", "?"};
    static const char* widths[] = {"UN", "N", "B"};
    return std::string(stats[static_cast<int>(statistics)]) + " " + widths[static_cast<int>(width)];
}

RegimeLabel classify(double g2, double linewidth, int n, const RegimeThresholds& t) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(t.epsilon_c >= 0.0)) throw InvalidArgument("epsilon_c must be non-negative");
    RegimeLabel out;
    out.g2 = g2;
    out.linewidth = linewidth;
    if (std::isnan(g2)) out.statistics = Statistics::Unclassifiable;
    else if (g2 < 1.0 - t.epsilon_c) out.statistics = Statistics::Quantum;
    else if (g2 > 1.0 + t.epsilon_c) out.statistics = Statistics::Bunched;
    else out.statistics = Statistics::Coherent;

    if (linewidth <= t.ultranarrow) out.width = Width::UltraNarrow;
    else if (linewidth < static_cast<double>(n)) out.width = Width::Narrow;
    else out.width = Width::Broad;
    return out;
}

RegimeLabel classify(const ObservableSet& obs, const SpectrumResult& spectrum, int n, const RegimeThresholds& t) {
    RegimeLabel out = classify(obs.intensity_underflow ? std::nan("") : obs.g_at(2), spectrum.linewidth, n, t);
    out.peak_shift = spectrum.peak_shift;
    out.sz = obs.sz;
    out.intensity = obs.intensity;
    return out;
}

InversionWindow inversion_window(int n, double V) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (!(V > 0.0)) throw InvalidArgument("V must be positive");
    return {0.5 * n * n, 4.0 * V * V};
}

double effective_pump_coefficient(double w, double V) {
    if (!(w > 0.0)) throw InvalidArgument("pump rate must be positive");
    return 2.0 * V * V / w;
}

RealVector effective_model_populations(int n, double w, double V) {
    const LadderOperators j = build_dicke_ladder(n);
    const HilbertSpace space = j.minus.space;
    // (rate/2)𝓓[A]: Γ = 1 on J⁻ and rate 2·(2V²/w) on J⁺.
    const Channel channels[] = {{j.minus, 1.0}, {j.plus, 2.0 * effective_pump_coefficient(w, V)}};
    const SteadyState ss = solve_steady_state(lindblad(space, std::nullopt, channels));
    return ss.rho.diagonal().real();
}

RealVector collective_populations(const Matrix& rho, const HilbertSpace& space) {
    if (space.kind != SpaceKind::PumpedSpinTensorDicke && space.kind != SpaceKind::PumpedSpinTensorBoson)
        throw InvalidArgument("collective populations need a pumped ⊗ collective space");
    if (rho.rows() != space.dim) throw DimensionMismatch("state does not live on the given space");
    const int dc = space.collective_dim();
    RealVector out = RealVector::Zero(dc);
    for (int s = 0; s < 2; ++s)
        for (int k = 0; k < dc; ++k) out(k) += rho(s * dc + k, s * dc + k).real();
    return out;
}

}  // namespace ppe
