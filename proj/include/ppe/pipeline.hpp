#pragma once

#include <string>
#include <vector>

#include "ppe/regimes.hpp"

namespace ppe {

struct PointOptions {
    int k_max = 3;
    SpectrumOptions spectrum;
    RegimeThresholds thresholds;
};

/// Everything computed for one parameter point.
struct PointRecord {
    ModelSpec spec;
    ObservableSet observables;
    LinewidthInfo width;
    RegimeLabel label;
    std::string method;  ///< spectrum route, or "failed"
    double condition = 0.0;
    double residual = 0.0;
    std::vector<std::string> warnings;
    bool failed = false;
    std::string error;
};

/// steady state → observables → spectrum → regime label. Library errors are
/// caught and recorded on the record instead of propagating.
PointRecord evaluate_point(const ModelSpec& spec, const PointOptions& options = {});

}  // namespace ppe
