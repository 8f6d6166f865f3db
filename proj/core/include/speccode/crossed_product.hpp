#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "speccode/geometry.hpp"
#include "speccode/group.hpp"
#include "speccode/operator_core.hpp"

namespace speccode {

/// Generalized permutation matrix: column x has its single entry phase[x]
/// in row target[x].
class MonomialMatrix {
public:
    MonomialMatrix() = default;
    MonomialMatrix(std::vector<std::size_t> target, std::vector<Complex> phase);

    static MonomialMatrix identity(std::size_t dim);

    [[nodiscard]] std::size_t dim() const { return target_.size(); }
    [[nodiscard]] std::size_t target(std::size_t x) const { return target_[x]; }
    [[nodiscard]] Complex phase(std::size_t x) const { return phase_[x]; }

    [[nodiscard]] Matrix dense() const;
    /// M · B without materializing M.
    [[nodiscard]] Matrix apply(const Matrix& b) const;
    [[nodiscard]] MonomialMatrix adjoint() const;
    [[nodiscard]] MonomialMatrix scaled(Complex s) const;

    friend MonomialMatrix operator*(const MonomialMatrix& a, const MonomialMatrix& b);

private:
    std::vector<std::size_t> target_;
    std::vector<Complex> phase_;
};

/// Representation of the twisted group algebra by monomial matrices.
///   regular: U_u|x⟩ = σ(u, x)|x + u⟩ on ℓ²(V)
///   pauli:   U_(p|q) = Z^q X^p on (C²)^⊗n, i.e. the one-sided cocycle
class WeylRepresentation {
public:
    enum class Kind { Regular, Pauli };

    static WeylRepresentation regular(const Cocycle& sigma);
    /// Requires the one-sided cocycle on symplectic bit vectors.
    static WeylRepresentation pauli(const Cocycle& sigma);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const Cocycle& cocycle() const { return sigma_; }
    [[nodiscard]] const AbelianGroup& group() const { return sigma_.group(); }

    [[nodiscard]] MonomialMatrix weyl(AbelianGroup::Element u) const;
    [[nodiscard]] Matrix weyl_dense(AbelianGroup::Element u) const { return weyl(u).dense(); }

    /// Hermitian unitary multiple of U_u: U_u if σ(u,u) = 1, i·U_u if σ(u,u) = -1.
    /// `fixed` reports whether the phase was changed.
    [[nodiscard]] MonomialMatrix hermitian_weyl(AbelianGroup::Element u, bool* fixed = nullptr) const;

    /// Matrix of Σ f_u U_u. Regular representation only.
    [[nodiscard]] Matrix represent(const CrossedProductElement& a) const;

private:
    WeylRepresentation(Kind kind, Cocycle sigma, std::size_t dim) : kind_(kind), sigma_(std::move(sigma)), dim_(dim) {}
    Kind kind_;
    Cocycle sigma_;
    std::size_t dim_;
};

/// H = H_m ⊕ H_phys, D = D_m ⊕ D_c. Functions on V act diagonally on both
/// summands; the states are the position states on the metric part.
FiniteSpectralTriple assemble_triple(const WeightFunction& weight, const HermitianOperator& d_c);

/// All u with P U_u P not a multiple of P.
std::vector<AbelianGroup::Element> compute_W_set(const CodeProjection& p, const WeylRepresentation& rep,
                                                 double tol = kScalarTolerance);

struct WDistance {
    double distance = std::numeric_limits<double>::infinity();
    bool infinite = true;
    AbelianGroup::Element witness = 0;
    std::size_t w_size = 0;
};

/// min_{u ∈ W} wt(u).
WDistance code_distance_via_W(const CodeProjection& p, const WeylRepresentation& rep, const WeightFunction& weight,
                              double tol = kScalarTolerance);
/// Same minimum from an already computed W.
WDistance min_weight(const std::vector<AbelianGroup::Element>& w, const WeightFunction& weight);

/// Every U_u with region {0, -u}, the support of δ_0 U_u. Dense; meant for
/// small representations.
std::vector<LocalizedOperator> weyl_monomial_family(const WeylRepresentation& rep);

} // namespace speccode
