#pragma once

#include <string>
#include <vector>

#include "ppe/types.hpp"

namespace ppe {

enum class SpaceKind {
    PumpedSpin,             ///< the single pumped two-level atom
    CollectiveDicke,        ///< maximal-J Dicke manifold of the N unpumped atoms
    Boson,                  ///< truncated Fock space replacing the collective spin
    PumpedSpinTensorDicke,  ///< pumped ⊗ Dicke, dim 2(N+1)
    PumpedSpinTensorBoson,  ///< pumped ⊗ Fock, dim 2(n_cut+1)
    FullSpinChain,          ///< all atoms resolved, dim 2^n_atoms
};

/// A finite Hilbert space together with the data needed to interpret its basis.
///
/// Composite spaces always put the pumped spin in the LEFT tensor factor:
/// |s⟩ ⊗ |c⟩ has index s·dim_c + c. The pumped spin basis is (|↑⟩, |↓⟩), the
/// Dicke basis is ordered by ascending m = −J..J and the Fock basis by n.
struct HilbertSpace {
    SpaceKind kind = SpaceKind::PumpedSpin;
    int dim = 2;
    int n_unpumped = 0;  ///< N = 2J
    int n_cut = 0;       ///< largest boson number: Fock levels 0..n_cut (boson spaces only)
    int n_atoms = 0;     ///< FullSpinChain only

    static HilbertSpace pumped_spin();
    static HilbertSpace dicke(int n_unpumped);
    static HilbertSpace boson(int n_unpumped, int n_cut);
    static HilbertSpace pumped_dicke(int n_unpumped);
    static HilbertSpace pumped_boson(int n_unpumped, int n_cut);
    static HilbertSpace full_chain(int n_atoms);

    bool is_composite() const noexcept {
        return kind == SpaceKind::PumpedSpinTensorDicke || kind == SpaceKind::PumpedSpinTensorBoson;
    }
    /// Dimension of the collective factor of a composite space.
    int collective_dim() const;
    /// Number of excitations carried by each basis state.
    std::vector<int> excitation_numbers() const;
    std::string describe() const;

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;
};

struct OperatorMatrix {
    HilbertSpace space;
    Matrix entries;
    std::string label;

    OperatorMatrix(HilbertSpace space, Matrix entries, std::string label = {});

    int dim() const noexcept { return space.dim; }
    OperatorMatrix adjoint() const;
};

OperatorMatrix identity(const HilbertSpace& space);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cd scale, const OperatorMatrix& a);
OperatorMatrix power(const OperatorMatrix& a, int exponent);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

struct LadderOperators {
    OperatorMatrix plus;
    OperatorMatrix minus;
    OperatorMatrix z;
};

/// J^± |m⟩ = √(J(J+1) − m(m±1)) |m±1⟩ on the (N+1)-dim Dicke manifold.
LadderOperators build_dicke_ladder(int n_unpumped);

/// σ^± and σ^z (eigenvalues ±½) of the pumped atom.
LadderOperators build_pumped_spin();

enum class Slot { PumpedFactor, CollectiveFactor };

/// op ⊗ 1 (PumpedFactor) or 1 ⊗ op (CollectiveFactor) on a composite target.
OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const HilbertSpace& target);

struct HpOperators {
    OperatorMatrix a;
    OperatorMatrix a_dag;
    OperatorMatrix plus;   ///< √N a†
    OperatorMatrix minus;  ///< √N a
    OperatorMatrix z;      ///< −N/2 + a†a
};

/// Lowest-order Holstein–Primakoff bosonization around the collective ground
/// state. The top Fock level is a hard truncation: a†|n_cut⟩ = 0.
HpOperators build_hp_operators(int n_unpumped, int n_cut);

/// Site-resolved operators on 2^n_atoms; the last site is the pumped atom.
struct FullSpaceOperators {
    HilbertSpace space;
    std::vector<OperatorMatrix> site_plus;
    std::vector<OperatorMatrix> site_minus;
    std::vector<OperatorMatrix> site_z;
    OperatorMatrix sigma_plus, sigma_minus, sigma_z;  ///< pumped (last) site
    OperatorMatrix j_plus, j_minus, j_z;              ///< sum over the other sites
};

FullSpaceOperators build_full_space_operators(int n_atoms);

/// σ and collective operators embedded in a composite space.
struct ModelOperators {
    HilbertSpace space;
    OperatorMatrix sigma_plus, sigma_minus, sigma_z;
    OperatorMatrix j_plus, j_minus, j_z;
};

/// Works for PumpedSpinTensorDicke (exact ladder) and PumpedSpinTensorBoson (HP).
ModelOperators composite_operators(const HilbertSpace& space);

}  // namespace ppe
