#include "ppe/observables.hpp"

#include <cmath>
#include <limits>

namespace ppe {

EmissionOperators emission_operators(const ModelOperators& ops, double observable_phase) {
    OperatorMatrix s_minus = std::polar(1.0, -observable_phase) * ops.sigma_minus + ops.j_minus;
    s_minus.label = "S-";
    OperatorMatrix s_plus = s_minus.adjoint();
    s_plus.label = "S+";
    return {std::move(s_plus), std::move(s_minus)};
}

EmissionOperators emission_operators(const ModelSpec& spec) {
    const double phase = spec.model == ModelKind::AuxiliaryChannels ? spec.phi : 0.0;
    return emission_operators(model_operators(spec), phase);
}

double ObservableSet::g_at(int k) const {
    auto it = g.find(k);
    if (it == g.end()) throw InvalidArgument("g(" + std::to_string(k) + ") was not evaluated");
    return it->second;
}

ObservableSet evaluate(const SteadyState& state, const ModelOperators& ops, int k_max,
                       const EmissionOperators& field) {
    if (k_max < 2) throw InvalidArgument("k_max must be >= 2");
    const Matrix& rho = state.rho;
    if (rho.rows() != ops.space.dim) throw DimensionMismatch("state and operators on different spaces");

    ObservableSet out;
    out.sz = (rho * (ops.sigma_z.entries + ops.j_z.entries)).trace().real();
    out.intensity = (rho * field.s_plus.entries * field.s_minus.entries).trace().real();
    out.intensity_underflow = out.intensity < kIntensityUnderflow;

    Matrix raise_k = field.s_plus.entries;
    Matrix lower_k = field.s_minus.entries;
    for (int k = 2; k <= k_max; ++k) {
        raise_k = (raise_k * field.s_plus.entries).eval();
        lower_k = (lower_k * field.s_minus.entries).eval();
        if (out.intensity_underflow) {
            out.g[k] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double numerator = (rho * raise_k * lower_k).trace().real();
        out.g[k] = numerator / std::pow(out.intensity, k);
    }
    return out;
}

ObservableSet evaluate(const SteadyState& state, int k_max, PhaseIn phase_in, double phi) {
    if (!state.spec) throw InvalidArgument("steady state carries no model spec");
    const ModelSpec& spec = *state.spec;
    const ModelOperators ops = model_operators(spec);
    if (ops.space.kind == SpaceKind::PumpedSpinTensorBoson && k_max > ops.space.n_cut - 2)
        throw InvalidArgument("g(" + std::to_string(k_max) + ") on the HP basis needs n_cut >= " +
                              std::to_string(k_max + 2));
    double observable_phase = 0.0;
    if (phase_in == PhaseIn::Observable) {
        if (spec.jump_phase() != 0.0)
            throw InvalidArgument("observable-phase convention requires a model assembled with phi = 0");
        observable_phase = phi;
    } else if (spec.model == ModelKind::AuxiliaryChannels) {
        observable_phase = spec.phi;
    }
    ObservableSet out = evaluate(state, ops, k_max, emission_operators(ops, observable_phase));
    out.phase_in = phase_in;
    out.phi_obs = observable_phase;
    return out;
}

std::vector<PhaseEquivalenceRow> phase_convention_equivalence_check(const ModelSpec& spec,
                                                                    const std::vector<double>& phi_grid,
                                                                    int k_max, double tolerance) {
    if (spec.model != ModelKind::ToyPhase && spec.model != ModelKind::HPToy)
        throw InvalidArgument("phase-convention check applies to the toy model only");
    ModelSpec reference = spec;
    reference.phi = 0.0;
    const SteadyState base = solve_steady_state(reference);

    std::vector<PhaseEquivalenceRow> rows;
    for (double phi : phi_grid) {
        ModelSpec rotated = spec;
        rotated.phi = phi;
        const ObservableSet jump = evaluate(solve_steady_state(rotated), k_max, PhaseIn::Jump);
        const ObservableSet obs = evaluate(base, k_max, PhaseIn::Observable, phi);
        double diff = std::max(std::abs(jump.sz - obs.sz), std::abs(jump.intensity - obs.intensity));
        for (const auto& [k, value] : jump.g) {
            const double other = obs.g.at(k);
            if (std::isnan(value) != std::isnan(other)) diff = std::numeric_limits<double>::infinity();
            else if (!std::isnan(value)) diff = std::max(diff, std::abs(value - other) / std::max(1.0, std::abs(value)));
        }
        rows.push_back({phi, jump, obs, diff, diff <= tolerance});
    }
    return rows;
}

}  // namespace ppe
