#include "ppe/pipeline.hpp"

#include <cmath>

namespace ppe {

PointRecord evaluate_point(const ModelSpec& spec, const PointOptions& options) {
    PointRecord rec;
    rec.spec = spec;
    try {
        spec.validate();
        const SteadyState ss = solve_steady_state(spec);
        rec.residual = ss.residual_norm;
        rec.observables = evaluate(ss, options.k_max);
        const SpectrumResult sp = emission_spectrum(spec, ss, options.spectrum);
        rec.width = sp.linewidth_info();
        rec.method = sp.method;
        rec.condition = sp.condition;
        rec.warnings = sp.warnings;
        rec.label = classify(rec.observables, sp, spec.n_unpumped, options.thresholds);
    } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
        rec.method = "failed";
        rec.width = {std::nan(""), std::nan(""), PeakStructure::Single};
        rec.label.statistics = Statistics::Unclassifiable;
    }
    return rec;
}

}  // namespace ppe
