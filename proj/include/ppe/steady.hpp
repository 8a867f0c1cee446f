#pragma once

#include <optional>
#include <string>

#include "ppe/liouvillian.hpp"

namespace ppe {

struct SteadyState {
    std::optional<ModelSpec> spec;
    Matrix rho;
    double residual_norm = 0.0;   ///< ‖𝓛ρ‖ / ‖ρ‖
    double min_eigenvalue = 0.0;  ///< most negative eigenvalue of ρ
    double smallest_singular = 0.0;
    double second_singular = 0.0;  ///< uniqueness margin: second ≫ smallest
    std::string method;            ///< "dense-svd" or "shift-invert"
};

struct SteadyOptions {
    /// Dense SVD is used while the solved block has at most this many entries.
    double dense_entry_limit = 1e6;
    double degeneracy_ratio = 1e-10;
    double positivity_tolerance = 1e-8;
    double max_residual = 1e-9;
    int max_iterations = 200;
};

/// Null vector of 𝓛 as a normalized density matrix.
///
/// Charge-conserving generators are solved inside the zero-coherence block. The
/// raw null vector is phase-aligned so its trace is real, Hermitized as
/// (ρ + ρ†)/2 and then trace-normalized.
SteadyState solve_steady_state(const Superoperator& L, const SteadyOptions& options = {});

/// assemble + solve, with the model attached to the result.
SteadyState solve_steady_state(const ModelSpec& spec, const SteadyOptions& options = {});

struct SingleAtomReference {
    double sigma_z;
    double intensity;
    double linewidth;
};

/// Closed forms for the lone pumped atom (no collective coupling).
SingleAtomReference single_atom_reference(double w);

}  // namespace ppe
