#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ppe/observables.hpp"

namespace ppe {

/// Which part of 𝓛 to diagonalize.
///
/// Emission restricts to the coherence block that contains S⁻ρ_ss (one more
/// excitation on the bra than on the ket). It requires a charge-conserving
/// generator and is exact for the emission spectrum, since the lowering operator
/// maps the steady-state block into it and tr(S⁺ ·) only reads it.
enum class SpectrumBlock { Full, Emission };

struct LiouvillianSpectrum {
    HilbertSpace space;
    std::vector<int> indices;  ///< vectorized indices of the block; empty means all
    Vector eigenvalues;        ///< ascending |Re λ|, ties by ascending Im λ
    Matrix right_vectors;      ///< columns r_k
    Matrix left_vectors;       ///< columns l_k with l_j† r_k = δ_jk
    double condition_estimate = 0.0;
    double biorthogonality_error = 0.0;

    int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
    /// Block vector gathered from a full vectorized operator.
    Vector gather(const Vector& full) const;
};

inline constexpr double kDefectiveCondition = 1e8;

/// Dense non-Hermitian eigendecomposition; left vectors come from R⁻¹.
///
/// Throws DefectiveNearEP when the eigenvector matrix condition number exceeds
/// condition_limit (pass infinity to inspect an ill-conditioned basis anyway).
LiouvillianSpectrum eigendecompose(const Superoperator& L, SpectrumBlock block = SpectrumBlock::Full,
                                   double condition_limit = kDefectiveCondition);

/// Eigenvalues only, sorted like LiouvillianSpectrum. Safe at exceptional points.
Vector liouvillian_eigenvalues(const Superoperator& L, SpectrumBlock block = SpectrumBlock::Full);

struct Residues {
    std::vector<cd> values;        ///< c_k = tr(r_k S⁺)·tr(l_k† S⁻ρ)
    std::vector<bool> contributing;  ///< false when |c_k| < 1e−12·max|c|
};

Residues residues(const LiouvillianSpectrum& spec, const EmissionOperators& field, const Matrix& rho_ss);

enum class PeakStructure { Single, SymmetricDouble, Multi };
std::string to_string(PeakStructure s);
PeakStructure parse_peak_structure(const std::string& s);

struct ModeContribution {
    cd eigenvalue;
    cd residue;
    RealVector partial;
};

struct LinewidthInfo {
    double linewidth = 0.0;
    double peak_shift = 0.0;
    PeakStructure structure = PeakStructure::Single;
};

struct SpectrumResult {
    RealVector omega;
    RealVector values;
    double linewidth = 0.0;
    double peak_shift = 0.0;
    PeakStructure structure = PeakStructure::Single;
    std::vector<ModeContribution> per_mode;
    std::string method;  ///< "residue-sum" or "time-domain"
    double condition = 0.0;
    std::vector<std::string> warnings;

    LinewidthInfo linewidth_info() const { return {linewidth, peak_shift, structure}; }
};

/// S(ω) evaluated at arbitrary frequencies.
using SpectralEvaluator = std::function<RealVector(const RealVector&)>;

RealVector symmetric_grid(double half_width, int points);

/// Half-width used when no override is given: 5(w + Γ(N+1)), widened by
/// 4V√(N+1) for the interacting model.
double default_half_width(const ModelSpec& spec);

struct GridOptions {
    std::optional<double> half_width;
    int points = 4001;
    bool per_mode = false;
    bool refine = true;  ///< zoom in on the reported peak before measuring it
};

/// S(ω) = 2 Re Σ_k c_k / (−iω − λ_k) on the grid, with linewidth extraction.
SpectrumResult spectral_function(const Residues& c, const Vector& eigenvalues, const RealVector& omega,
                                 bool per_mode = false, bool refine = true);

struct TimeDomainOptions {
    std::optional<double> t_max;  ///< default: run until the correlation has decayed
    std::optional<double> dt;     ///< initial step; default: 0.25 / ‖𝓛‖∞
    double tail_tolerance = 1e-12;
    /// Step doubling: a step is kept when its interpolant matches the propagated
    /// midpoint to this fraction of C(0); otherwise it is split in two.
    bool adaptive = true;
    double interpolation_tolerance = 1e-11;
    long max_steps = 20'000'000;
    bool refine = true;
};

/// Propagates S⁻ρ_ss with exp(𝓛 dt) and integrates 2 Re ∫₀^∞ e^{iωτ} C(τ) dτ by
/// quintic Hermite interpolation of C, C′, C″ with exact oscillatory moments.
SpectrumResult time_domain_spectrum(const Superoperator& L, const EmissionOperators& field, const Matrix& rho_ss,
                                    const RealVector& omega, const TimeDomainOptions& options = {});

/// C(τ) = tr(S⁺ e^{𝓛τ}(S⁻ρ_ss)) at τ = 0, dt, 2dt, ... (diagnostic helper).
std::vector<cd> correlation_samples(const Superoperator& L, const EmissionOperators& field, const Matrix& rho_ss,
                                    double dt, int count);

/// FWHM, peak shift and structure of a sampled spectrum.
///
/// Local maxima above 5% of the global maximum are peaks. Two peaks with
/// |ω₊ + ω₋| ≤ 2 grid steps and heights within 5% form a symmetric double: the
/// width of one peak is measured, its inner edge being the half-maximum
/// crossing or the dip minimum if the dip never falls to half maximum. Δω is
/// the position of the larger peak (the positive one on a tie). Throws
/// GridTooNarrow when the half maximum is not bracketed.
LinewidthInfo extract_linewidth(const SpectrumResult& spectrum);
LinewidthInfo extract_linewidth(const RealVector& omega, const RealVector& values);

/// Re-measures on progressively zoomed symmetric grids until the width settles.
LinewidthInfo refine_linewidth(const SpectralEvaluator& evaluate, const RealVector& omega, const RealVector& values,
                               int iterations = 3, int points = 4001);

struct SpectrumOptions {
    GridOptions grid;
    SpectrumBlock block = SpectrumBlock::Emission;
    double condition_limit = kDefectiveCondition;
    TimeDomainOptions time_domain;
};

/// Emission spectrum of a model: residue sum, falling back to the time-domain
/// route when the eigenbasis is too ill-conditioned (recorded in warnings).
SpectrumResult emission_spectrum(const ModelSpec& spec, const SteadyState& state, const SpectrumOptions& options = {});

struct ExceptionalPoint {
    double w;
    double condition;  ///< eigenvector condition number at w
    cd eigenvalue;     ///< the coalesced eigenvalue
};

/// Pump rates in [w_min, w_max] where the two slowest emission modes coalesce.
///
/// d(w) = (Im λ₁ − Im λ₂)² − (Re λ₁ − Re λ₂)² changes sign when the pair turns
/// from real-split to complex-conjugate; each sign change is bisected to
/// tolerance.
std::vector<ExceptionalPoint> find_exceptional_points(const ModelSpec& family, double w_min, double w_max,
                                                      int samples = 400, double tolerance = 1e-4);

/// Second-order cumulant closed forms for the two leading modes.
std::pair<cd, cd> cumulant_reference_eigenvalues(int n, double w);

}  // namespace ppe
