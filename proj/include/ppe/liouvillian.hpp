#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppe/operators.hpp"

namespace ppe {

enum class ModelKind {
    ToyPhase,           ///< (Γ/2)𝓓[e^{iφ}σ⁻ + J⁻] + (w/2)𝓓[σ⁺]
    Interacting,        ///< −i[V(J⁺σ⁻ + σ⁺J⁻), ·] + (Γ/2)𝓓[σ⁻ + J⁻] + (w/2)𝓓[σ⁺]
    CollectivePump,     ///< (Γ/2)𝓓[e^{iφ}J⁻ + σ⁻] + (w/2)𝓓[J⁺]
    AuxiliaryChannels,  ///< (Γ/2)𝓓[σ⁻ + J⁻] + (κ/2)(𝓓[σ⁻] + 𝓓[J⁻]) + (w/2)𝓓[σ⁺]
    HPToy,              ///< ToyPhase with J⁻ → √N a on a truncated Fock space
};

enum class CollectiveBasis { Dicke, HolsteinPrimakoff };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Parameters of one model. All rates are in units of Γ (Γ = 1).
struct ModelSpec {
    ModelKind model = ModelKind::ToyPhase;
    int n_unpumped = 1;  ///< N
    double w = 1.0;
    double phi = 0.0;  ///< jump phase, or measurement phase for AuxiliaryChannels
    double V = 0.0;
    double kappa = 0.0;
    CollectiveBasis basis = CollectiveBasis::Dicke;
    int n_cut = 0;

    static ModelSpec toy(int n, double w, double phi = 0.0);
    static ModelSpec hp_toy(int n, double w, double phi, int n_cut);
    static ModelSpec interacting(int n, double w, double V);
    static ModelSpec collective_pump(int n, double w, double phi = 0.0);
    static ModelSpec auxiliary(int n, double w, double kappa, double phi = 0.0);

    /// Throws InvalidArgument when the parameter combination is not allowed.
    void validate() const;
    HilbertSpace space() const;
    /// Phase that enters the jump operator (zero for models that fix it).
    double jump_phase() const;
    std::string describe() const;
};

/// Column-stacking vectorization: vec(XρY) = (Yᵀ ⊗ X) vec(ρ).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, int dim);

struct Superoperator {
    HilbertSpace space;
    SparseMatrix matrix;  ///< dim² × dim², column-stacking convention

    int dim() const noexcept { return space.dim; }
    Matrix apply(const Matrix& rho) const;
    /// Dense copy; refuses when the number of entries exceeds max_entries.
    Matrix dense(double max_entries = 4e8) const;

    Superoperator& operator+=(const Superoperator& other);
};

Superoperator operator+(Superoperator a, const Superoperator& b);

/// ρ → X ρ Y as a superoperator.
Superoperator sandwich_superop(const OperatorMatrix& left, const OperatorMatrix& right);

/// (rate/2)·𝓓[A] with 𝓓[A]ρ = 2AρA† − {A†A, ρ}.
Superoperator dissipator_superop(const OperatorMatrix& jump, double rate);

/// ρ → −i[H, ρ]. H must be Hermitian to within tolerance.
Superoperator hamiltonian_superop(const OperatorMatrix& hamiltonian, double tolerance = 1e-12);

/// ρ → UρU†.
Superoperator unitary_superop(const OperatorMatrix& unitary);

struct Channel {
    OperatorMatrix jump;
    double rate;
};

/// Generic Lindblad generator −i[H,·] + Σ (rate/2)𝓓[jump].
Superoperator lindblad(const HilbertSpace& space, const std::optional<OperatorMatrix>& hamiltonian,
                       std::span<const Channel> channels);

struct AssemblyLimits {
    int max_dim = 2000;
};

Superoperator assemble(const ModelSpec& spec, const AssemblyLimits& limits = {});

/// U = diag(e^{−iφ}, 1) ⊗ 1: maps the φ = 0 jump σ⁻ + J⁻ to e^{iφ}σ⁻ + J⁻.
OperatorMatrix pumped_phase_unitary(const HilbertSpace& space, double phi);

/// Operators of the model's composite space (σ and the collective spin).
ModelOperators model_operators(const ModelSpec& spec);

/// Vectorized indices |i⟩⟨j| whose excitation difference n_i − n_j equals charge.
std::vector<int> sector_indices(const HilbertSpace& space, int charge);

/// True when the superoperator never couples different coherence charges.
bool conserves_coherence_charge(const Superoperator& op);

/// Dense restriction of op to the given vectorized indices.
Matrix restrict_to(const Superoperator& op, const std::vector<int>& indices);

}  // namespace ppe
