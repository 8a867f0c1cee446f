#pragma once

#include <string>
#include <vector>

#include "ppe/liouvillian.hpp"

namespace ppe::oracle {

struct OracleReport {
    std::string case_id;
    std::string quantity;
    cd reference;
    cd computed;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// passed ⟺ abs_error ≤ tolerance or rel_error ≤ tolerance.
OracleReport compare(std::string case_id, std::string quantity, cd reference, cd computed, double tolerance);

/// Closed-form two-spin steady state, normalized, in the basis
/// [|↑↑⟩, |↓↑⟩, |↑↓⟩, |↓↓⟩] where the first label is the pumped atom.
/// Valid for w > 0.
Matrix two_spin_closed_form(double w, double phi);

/// Solver index of each closed-form basis state (pumped ⊗ Dicke, ascending m).
inline constexpr int kTwoSpinPermutation[4] = {1, 3, 0, 2};

/// Reorders a closed-form matrix into the solver's pumped ⊗ Dicke basis.
Matrix two_spin_to_solver_basis(const Matrix& closed_form);

struct ThermalDicke {
    RealVector alpha;  ///< populations, ascending m = −J..J
    double jpjm;       ///< ⟨J⁺J⁻⟩
    double g2;
};

/// Geometric populations α_m ∝ (w/Γ)^{m+J} of collective pump and loss.
ThermalDicke thermal_dicke_distribution(int n, double w);

struct BruteForceModel {
    ModelKind model = ModelKind::ToyPhase;
    double w = 1.0;
    double phi = 0.0;
    double V = 0.0;
    double kappa = 0.0;
};

struct BruteForceResult {
    Matrix rho;  ///< full 2^n state; site 0 leftmost, last site pumped, bit 0 = ↑
    double sz;
    double intensity;
    double g2;
    double g3;
    double uniqueness_margin;  ///< second-smallest over largest singular value
};

/// Steady state of n_atoms ∈ 2..4 individual spins with the unpumped atoms
/// started in their fully symmetric sector.
BruteForceResult brute_force_lindblad(int n_atoms, const BruteForceModel& model);

struct HpConvergenceRow {
    int n_cut;
    double sz_error;
    double intensity_error;  ///< relative
    double g2_error;         ///< relative
    double linewidth_error;  ///< relative
};

struct HpConvergenceStudy {
    double sz;  ///< exact Dicke reference values
    double intensity;
    double g2;
    double linewidth;
    std::vector<HpConvergenceRow> rows;
};

/// Compares the Holstein-Primakoff truncation against the exact Dicke solve.
/// The template's model must be ToyPhase or Interacting with N ≤ 60.
HpConvergenceStudy hp_convergence_study(const ModelSpec& exact_template, const std::vector<int>& n_cuts);

/// Every oracle comparison used by `oracle-check --all`.
std::vector<OracleReport> run_all();

}  // namespace ppe::oracle
