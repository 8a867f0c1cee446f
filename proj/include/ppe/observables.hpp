#pragma once

#include <map>
#include <vector>

#include "ppe/steady.hpp"

namespace ppe {

/// Where the relative phase φ lives.
///
/// Jump: the model carries e^{iφ} in its jump operator and the measured field is
/// the bare S⁻ = σ⁻ + J⁻. Observable: the model is assembled at φ = 0 and the
/// measured field is S⁻ = e^{−iφ}σ⁻ + J⁻. The two are related by the unitary
/// rotation of the pumped spin and give identical expectation values. Passing
/// −φ (i.e. 2π − φ) yields the S⁻ = J⁻ + e^{iφ}σ⁻ convention.
enum class PhaseIn { Jump, Observable };

struct EmissionOperators {
    OperatorMatrix s_plus;
    OperatorMatrix s_minus;
};

/// S⁻ = e^{−iφ}σ⁻ + J⁻ and its adjoint.
EmissionOperators emission_operators(const ModelOperators& ops, double observable_phase = 0.0);

/// Measured field for a model: bare for every model except AuxiliaryChannels,
/// whose φ only enters the detected operator.
EmissionOperators emission_operators(const ModelSpec& spec);

struct ObservableSet {
    double sz = 0.0;
    double intensity = 0.0;    ///< ⟨S⁺S⁻⟩
    std::map<int, double> g;   ///< g⁽ᵏ⁾(0), NaN when intensity underflows
    bool intensity_underflow = false;
    double phi_obs = 0.0;
    PhaseIn phase_in = PhaseIn::Jump;

    double g_at(int k) const;
};

inline constexpr double kIntensityUnderflow = 1e-12;

/// Steady-state magnetization, intensity and g⁽ᵏ⁾(0) for k = 2..k_max.
ObservableSet evaluate(const SteadyState& state, const ModelOperators& ops, int k_max,
                       const EmissionOperators& field);

/// Convenience form that builds operators from state.spec.
///
/// With PhaseIn::Observable the model must have been assembled with a zero jump
/// phase; the measured field then carries phi.
ObservableSet evaluate(const SteadyState& state, int k_max = 3, PhaseIn phase_in = PhaseIn::Jump,
                       double phi = 0.0);

struct PhaseEquivalenceRow {
    double phi;
    ObservableSet jump;
    ObservableSet observable;
    double max_abs_difference;
    bool passed;
};

/// Compares the two phase conventions of a ToyPhase/HPToy model over phi_grid.
std::vector<PhaseEquivalenceRow> phase_convention_equivalence_check(const ModelSpec& spec,
                                                                    const std::vector<double>& phi_grid,
                                                                    int k_max = 3,
                                                                    double tolerance = 1e-9);

}  // namespace ppe
