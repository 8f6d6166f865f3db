#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "speccode/operator_core.hpp"

namespace speccode {

/// Finite abelian groups used as phase spaces. Elements are encoded as
/// indices in [0, size()):
///   BitVectors(n)            bit i of the index is coordinate i (addition = xor)
///   SymplecticBitVectors(n)  bits 0..n-1 hold p, bits n..2n-1 hold q of (p|q)
///   TorusLattice(M)          (a, b) in Z_M x Z_M stored as a + M b
class AbelianGroup {
public:
    using Element = std::size_t;
    enum class Kind { BitVectors, SymplecticBitVectors, TorusLattice };

    static AbelianGroup bit_vectors(int n);
    static AbelianGroup symplectic(int n);
    static AbelianGroup torus(int modulus);

    [[nodiscard]] Kind kind() const { return kind_; }
    /// Bits for BitVectors, qubits for SymplecticBitVectors, 2 for the torus.
    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] int modulus() const { return modulus_; }
    [[nodiscard]] std::size_t size() const { return size_; }

    [[nodiscard]] Element zero() const { return 0; }
    [[nodiscard]] Element add(Element a, Element b) const;
    [[nodiscard]] Element negate(Element a) const;
    [[nodiscard]] Element subtract(Element a, Element b) const { return add(a, negate(b)); }

    [[nodiscard]] std::vector<int> coords(Element a) const;
    [[nodiscard]] Element from_coords(const std::vector<int>& c) const;
    [[nodiscard]] std::string label(Element a) const;

    bool operator==(const AbelianGroup& other) const = default;

private:
    AbelianGroup(Kind kind, int rank, int modulus, std::size_t size)
        : kind_(kind), rank_(rank), modulus_(modulus), size_(size) {}

    Kind kind_;
    int rank_;
    int modulus_;
    std::size_t size_;
};

/// Normalized U(1)-valued 2-cocycle σ on a group.
class Cocycle {
public:
    using Element = AbelianGroup::Element;
    using Phase = std::function<Complex(Element, Element)>;

    Cocycle(AbelianGroup group, Phase phase, std::string name);

    /// σ ≡ 1.
    static Cocycle trivial(const AbelianGroup& group);
    /// σ((p|q),(p'|q')) = (-1)^{p·q'} on symplectic bit vectors and
    /// σ((m,n),(m',n')) = (-1)^{m n'} on the torus. Its antisymmetrization is
    /// the mod-2 symplectic form.
    static Cocycle one_sided_symplectic(const AbelianGroup& group);
    /// σ'(u,v) = σ(u,v) b(u) b(v) / b(u+v); cohomologous to σ.
    static Cocycle with_coboundary(const Cocycle& base, std::function<Complex(Element)> b);

    [[nodiscard]] Complex operator()(Element u, Element v) const { return phase_(u, v); }
    [[nodiscard]] const AbelianGroup& group() const { return group_; }
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    AbelianGroup group_;
    Phase phase_;
    std::string name_;
};

struct CocycleCheck {
    bool ok = true;
    bool exhaustive = false;
    std::size_t triples_checked = 0;
    double worst_defect = 0.0;
};

/// Cocycle identity σ(u,v)σ(u+v,w) = σ(v,w)σ(u,v+w) and normalization.
/// Exhaustive for |V| <= 256, otherwise `samples` random triples.
CocycleCheck check_cocycle(const Cocycle& sigma, std::uint64_t seed = 7, std::size_t samples = 10000);

/// Mod-2 symplectic form on symplectic bit vectors and on the torus.
int symplectic_form(const AbelianGroup& group, AbelianGroup::Element u, AbelianGroup::Element v);

class WeightFunction {
public:
    using Element = AbelianGroup::Element;
    enum class Kind { Hamming, PauliWeight, Manhattan };

    static WeightFunction hamming(const AbelianGroup& group);
    static WeightFunction pauli_weight(const AbelianGroup& group);
    /// |m| + |n| with representatives in [-M/2, M/2).
    static WeightFunction manhattan(const AbelianGroup& group);

    [[nodiscard]] double operator()(Element u) const;
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const AbelianGroup& group() const { return group_; }

private:
    WeightFunction(AbelianGroup group, Kind kind) : group_(group), kind_(kind) {}
    AbelianGroup group_;
    Kind kind_;
};

/// Finitely supported sum a = Σ_u f_u U_u with f_u : V → C stored densely.
class CrossedProductElement {
public:
    using Element = AbelianGroup::Element;

    explicit CrossedProductElement(std::size_t group_size) : group_size_(group_size) {}

    /// δ_z U_u scaled by `coeff`.
    static CrossedProductElement monomial(const AbelianGroup& g, Element z, Element u, Complex coeff = 1.0);
    /// Pure function f (the u = 0 term).
    static CrossedProductElement function(const AbelianGroup& g, const Vector& f);
    /// U_u with f_u ≡ 1.
    static CrossedProductElement translation(const AbelianGroup& g, Element u);

    [[nodiscard]] std::size_t group_size() const { return group_size_; }
    [[nodiscard]] const std::map<Element, Vector>& terms() const { return terms_; }

    /// Accumulates f into the coefficient of U_u.
    void add_term(Element u, const Vector& f);

    /// Removes coefficient functions whose entries are all below `tol`.
    void prune(double tol = 0.0);
    [[nodiscard]] bool is_zero(double tol = 0.0) const;

    CrossedProductElement& operator+=(const CrossedProductElement& other);
    friend CrossedProductElement operator+(CrossedProductElement a, const CrossedProductElement& b) {
        a += b;
        return a;
    }
    friend CrossedProductElement operator*(Complex s, CrossedProductElement a);

private:
    std::size_t group_size_;
    std::map<Element, Vector> terms_;
};

/// (f U_u)(g U_v) = f α_u(g) σ(u,v) U_{u+v} with (α_u g)(x) = g(x - u).
CrossedProductElement multiply(const CrossedProductElement& a, const CrossedProductElement& b, const Cocycle& sigma);
/// (f U_u)* = conj(σ(u,-u)) α_{-u}(conj f) U_{-u}.
CrossedProductElement adjoint(const CrossedProductElement& a, const Cocycle& sigma);

} // namespace speccode
