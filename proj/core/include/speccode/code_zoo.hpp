#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "speccode/crossed_product.hpp"
#include "speccode/geometry.hpp"
#include "speccode/pauli.hpp"

namespace speccode {

/// Linear binary code in the regular representation of F2^n with trivial
/// cocycle. Bit i of a group element is character i of a row string.
struct ClassicalCode {
    int n = 0;
    std::vector<std::uint64_t> generators;
    std::vector<AbelianGroup::Element> codewords;  // ascending
    HermitianOperator d_c;                         // 0 on C, 1 off C
    CodeProjection p;
    std::vector<AbelianGroup::Element> w_set;
    WDistance distance;
};

ClassicalCode classical_code(int n, const std::vector<std::string>& rows);
ClassicalCode classical_code(int n, const std::vector<std::uint64_t>& rows);

struct StabilizerCode {
    int n = 0;
    std::vector<PauliString> generators;
    /// Generators whose Weyl operator squared to -I and were multiplied by i.
    std::vector<bool> phase_fixed;
    /// Σ (I - S_i); present when 2^n ≤ 1024.
    std::optional<HermitianOperator> d_c;
    std::optional<SpectrumReport> spectrum;
    CodeProjection p;
    /// Filled when the W-set is enumerable (n ≤ 8).
    std::vector<AbelianGroup::Element> w_set;
    bool w_set_enumerated = false;
    WDistance distance;

    [[nodiscard]] AbelianGroup group() const { return AbelianGroup::symplectic(n); }
    [[nodiscard]] WeylRepresentation representation() const {
        return WeylRepresentation::pauli(Cocycle::one_sided_symplectic(group()));
    }
};

/// Generators as Pauli strings ("XZZXI", ...), used with their exact phase.
StabilizerCode stabilizer_code(const std::vector<std::string>& generators);
/// Generators as symplectic vectors, Hermitized by i where needed.
StabilizerCode stabilizer_code(int n, const std::vector<AbelianGroup::Element>& generators);

struct GkpCode {
    int modulus = 0;
    HermitianOperator d_c;
    SpectrumReport spectrum;
    CodeProjection p;
    std::vector<AbelianGroup::Element> w_set;
    WDistance distance;
};

/// Stabilizers U_(0,2), U_(2,0) on l2(Z_M x Z_M); D_c = Σ (I - (U + U†)/2).
GkpCode gkp_discrete(int modulus);

/// Periodic Lx x Ly square lattice. Edge h(i,j) joins vertex (i,j) to
/// (i+1,j), edge v(i,j) joins (i,j) to (i,j+1).
struct ToricLattice {
    int lx = 0;
    int ly = 0;
    std::vector<std::array<int, 4>> stars;       // X-type, indexed by vertex i + lx j
    std::vector<std::array<int, 4>> plaquettes;  // Z-type, indexed by face i + lx j

    [[nodiscard]] int edges() const { return 2 * lx * ly; }
    [[nodiscard]] int h(int i, int j) const;
    [[nodiscard]] int v(int i, int j) const;
};

ToricLattice toric_lattice(int lx, int ly);

struct ToricCode {
    ToricLattice lattice;
    std::vector<PauliString> stabilizers;
    /// Σ (I - A_v) + Σ (I - B_f); present when 2^edges ≤ 1024.
    std::optional<HermitianOperator> d_code;
    CodeProjection p;
    DistanceResult distance;
};

ToricCode toric_code_z2(int lx, int ly);

/// Joint +1 eigenspace of commuting Hermitian Pauli operators, from the
/// product of (I + S)/2 applied to seeded random columns.
CodeProjection stabilizer_projection(const std::vector<MonomialMatrix>& stabilizers, int expected_rank,
                                     std::uint64_t seed = 17);

/// Weight-ordered search over n-qubit Pauli operators for the first one
/// that acts non-scalar on the code.
DistanceResult pauli_distance_search(const CodeProjection& p, int n, int max_weight);

struct ReconstructionTriple {
    CodeProjection p;                        // inside the reconstructed space
    std::vector<std::pair<int, int>> tower;  // (level n, dimension d_n)
    HermitianOperator dirac;                 // 0 on the code, n on level n
    /// Isometry from the original space when the levels are large enough to
    /// hold its complement of the code.
    std::optional<Matrix> embedding;
};

ReconstructionTriple formal_reconstruction(const CodeProjection& p, const std::vector<int>& level_dims, int n_max);

} // namespace speccode
