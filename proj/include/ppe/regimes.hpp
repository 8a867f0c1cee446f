#pragma once

#include <string>

#include "ppe/spectrum.hpp"

namespace ppe {

enum class Statistics { Quantum, Coherent, Bunched, Unclassifiable };
enum class Width { UltraNarrow, Narrow, Broad };

std::string to_string(Statistics s);
std::string to_string(Width w);
Statistics parse_statistics(const std::string& s);
Width parse_width(const std::string& s);

struct RegimeThresholds {
    double epsilon_c = 0.1;    ///< half-width of the coherent band around g2 = 1
    double ultranarrow = 2.5;  ///< Δν ≤ this (units Γ) is ultranarrow
};

struct RegimeLabel {
    Statistics statistics = Statistics::Unclassifiable;
    Width width = Width::Narrow;
    double g2 = 0.0;
    double linewidth = 0.0;
    double peak_shift = 0.0;
    double sz = 0.0;
    double intensity = 0.0;

    /// "B UN", "Q N", "C B", ... ("? N" when unclassifiable).
    std::string short_label() const;
};

/// Pure classification on (g2, Δν, N). NaN g2 gives Unclassifiable statistics.
///
///   Quantum   g2 < 1 − ε      UltraNarrow  Δν ≤ 2.5
///   Coherent  |g2 − 1| ≤ ε    Narrow       2.5 < Δν < N
///   Bunched   g2 > 1 + ε      Broad        Δν ≥ N
RegimeLabel classify(double g2, double linewidth, int n, const RegimeThresholds& thresholds = {});

RegimeLabel classify(const ObservableSet& obs, const SpectrumResult& spectrum, int n,
                     const RegimeThresholds& thresholds = {});

struct InversionWindow {
    double w_min;
    double w_max;
    bool empty() const noexcept { return w_min > w_max; }
    bool contains(double w) const noexcept { return w >= w_min && w <= w_max; }
};

/// Pump range ΓN²/2 ≲ w ≲ 4V²/Γ with positive magnetization.
InversionWindow inversion_window(int n, double V);

/// Coefficient of 𝓓[J⁺] after eliminating the pumped spin: (w/2)(2V/w)² = 2V²/w.
double effective_pump_coefficient(double w, double V);

/// Steady-state Dicke populations (ascending m) of the eliminated model
/// (Γ/2)𝓓[J⁻] + (2V²/w)𝓓[J⁺], solved numerically on the collective spin.
RealVector effective_model_populations(int n, double w, double V);

/// Diagonal of the collective spin's reduced density matrix (ascending m, or
/// ascending boson number on the HP basis).
RealVector collective_populations(const Matrix& rho, const HilbertSpace& space);

}  // namespace ppe
