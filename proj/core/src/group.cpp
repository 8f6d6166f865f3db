#include "speccode/group.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "speccode/errors.hpp"

namespace speccode {

namespace {

constexpr int kMaxBits = 40;

int parity(std::size_t x) { return std::popcount(x) & 1; }

} // namespace

AbelianGroup AbelianGroup::bit_vectors(int n) {
    if (n < 0 || n > kMaxBits) throw DomainError("bit_vectors: n out of range");
    return AbelianGroup(Kind::BitVectors, n, 2, std::size_t{1} << n);
}

AbelianGroup AbelianGroup::symplectic(int n) {
    if (n < 0 || 2 * n > kMaxBits) throw DomainError("symplectic: n out of range");
    return AbelianGroup(Kind::SymplecticBitVectors, n, 2, std::size_t{1} << (2 * n));
}

AbelianGroup AbelianGroup::torus(int modulus) {
    if (modulus < 1) throw DomainError("torus: modulus must be positive");
    const auto m = static_cast<std::size_t>(modulus);
    return AbelianGroup(Kind::TorusLattice, 2, modulus, m * m);
}

AbelianGroup::Element AbelianGroup::add(Element a, Element b) const {
    if (kind_ == Kind::TorusLattice) {
        const auto m = static_cast<std::size_t>(modulus_);
        return (a % m + b % m) % m + m * (((a / m) + (b / m)) % m);
    }
    return a ^ b;
}

AbelianGroup::Element AbelianGroup::negate(Element a) const {
    if (kind_ == Kind::TorusLattice) {
        const auto m = static_cast<std::size_t>(modulus_);
        return (m - a % m) % m + m * ((m - a / m) % m);
    }
    return a;
}

std::vector<int> AbelianGroup::coords(Element a) const {
    std::vector<int> out;
    switch (kind_) {
    case Kind::BitVectors:
        for (int i = 0; i < rank_; ++i) out.push_back(static_cast<int>((a >> i) & 1u));
        break;
    case Kind::SymplecticBitVectors:
        for (int i = 0; i < 2 * rank_; ++i) out.push_back(static_cast<int>((a >> i) & 1u));
        break;
    case Kind::TorusLattice: {
        const auto m = static_cast<std::size_t>(modulus_);
        out = {static_cast<int>(a % m), static_cast<int>(a / m)};
        break;
    }
    }
    return out;
}

AbelianGroup::Element AbelianGroup::from_coords(const std::vector<int>& c) const {
    if (kind_ == Kind::TorusLattice) {
        if (c.size() != 2) throw DomainError("from_coords: torus elements have two coordinates");
        const int m = modulus_;
        const auto a = static_cast<std::size_t>(((c[0] % m) + m) % m);
        const auto b = static_cast<std::size_t>(((c[1] % m) + m) % m);
        return a + static_cast<std::size_t>(m) * b;
    }
    const std::size_t len = kind_ == Kind::BitVectors ? static_cast<std::size_t>(rank_)
                                                      : 2 * static_cast<std::size_t>(rank_);
    if (c.size() != len) throw DomainError("from_coords: wrong number of coordinates");
    Element out = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (c[i] & 1) out |= Element{1} << i;
    }
    return out;
}

std::string AbelianGroup::label(Element a) const {
    const auto c = coords(a);
    std::ostringstream s;
    switch (kind_) {
    case Kind::BitVectors:
        for (int v : c) s << v;
        break;
    case Kind::SymplecticBitVectors:
        s << '(';
        for (int i = 0; i < rank_; ++i) s << c[static_cast<std::size_t>(i)];
        s << '|';
        for (int i = 0; i < rank_; ++i) s << c[static_cast<std::size_t>(rank_ + i)];
        s << ')';
        break;
    case Kind::TorusLattice:
        s << '(' << c[0] << ',' << c[1] << ')';
        break;
    }
    return s.str();
}

int symplectic_form(const AbelianGroup& g, AbelianGroup::Element u, AbelianGroup::Element v) {
    switch (g.kind()) {
    case AbelianGroup::Kind::SymplecticBitVectors: {
        const std::size_t mask = (std::size_t{1} << g.rank()) - 1;
        const std::size_t pu = u & mask, qu = u >> g.rank();
        const std::size_t pv = v & mask, qv = v >> g.rank();
        return parity((pu & qv) ^ (qu & pv));
    }
    case AbelianGroup::Kind::TorusLattice: {
        const auto cu = g.coords(u);
        const auto cv = g.coords(v);
        return (cu[0] * cv[1] + cu[1] * cv[0]) & 1;
    }
    case AbelianGroup::Kind::BitVectors:
        break;
    }
    throw DomainError("symplectic_form: group carries no symplectic structure");
}

Cocycle::Cocycle(AbelianGroup group, Phase phase, std::string name)
    : group_(group), phase_(std::move(phase)), name_(std::move(name)) {}

Cocycle Cocycle::trivial(const AbelianGroup& group) {
    return Cocycle(group, [](Element, Element) { return Complex(1.0, 0.0); }, "trivial");
}

Cocycle Cocycle::one_sided_symplectic(const AbelianGroup& group) {
    switch (group.kind()) {
    case AbelianGroup::Kind::SymplecticBitVectors: {
        const int n = group.rank();
        const std::size_t mask = (std::size_t{1} << n) - 1;
        return Cocycle(group,
                       [n, mask](Element u, Element v) {
                           return Complex(parity((u & mask) & (v >> n)) ? -1.0 : 1.0, 0.0);
                       },
                       "one-sided symplectic");
    }
    case AbelianGroup::Kind::TorusLattice: {
        const auto m = static_cast<std::size_t>(group.modulus());
        return Cocycle(group,
                       [m](Element u, Element v) {
                           const std::size_t a = u % m;
                           const std::size_t b = v / m;
                           return Complex(((a * b) & 1u) ? -1.0 : 1.0, 0.0);
                       },
                       "one-sided symplectic");
    }
    case AbelianGroup::Kind::BitVectors:
        break;
    }
    throw DomainError("one_sided_symplectic: group carries no symplectic structure");
}

Cocycle Cocycle::with_coboundary(const Cocycle& base, std::function<Complex(Element)> b) {
    const AbelianGroup g = base.group();
    return Cocycle(g,
                   [base, b = std::move(b), g](Element u, Element v) {
                       return base(u, v) * b(u) * b(v) / b(g.add(u, v));
                   },
                   base.name() + " x coboundary");
}

CocycleCheck check_cocycle(const Cocycle& sigma, std::uint64_t seed, std::size_t samples) {
    const AbelianGroup& g = sigma.group();
    CocycleCheck out;
    auto check = [&](std::size_t u, std::size_t v, std::size_t w) {
        const Complex lhs = sigma(u, v) * sigma(g.add(u, v), w);
        const Complex rhs = sigma(v, w) * sigma(u, g.add(v, w));
        out.worst_defect = std::max(out.worst_defect, std::abs(lhs - rhs));
        ++out.triples_checked;
    };
    for (std::size_t v = 0; v < g.size(); ++v) {
        out.worst_defect = std::max(out.worst_defect, std::abs(sigma(0, v) - 1.0));
        out.worst_defect = std::max(out.worst_defect, std::abs(sigma(v, 0) - 1.0));
        out.worst_defect = std::max(out.worst_defect, std::abs(std::abs(sigma(v, v)) - 1.0));
    }
    if (g.size() <= 256) {
        out.exhaustive = true;
        for (std::size_t u = 0; u < g.size(); ++u)
            for (std::size_t v = 0; v < g.size(); ++v)
                for (std::size_t w = 0; w < g.size(); ++w) check(u, v, w);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
        for (std::size_t i = 0; i < samples; ++i) check(pick(rng), pick(rng), pick(rng));
    }
    out.ok = out.worst_defect <= 1e-12;
    return out;
}

WeightFunction WeightFunction::hamming(const AbelianGroup& group) {
    if (group.kind() != AbelianGroup::Kind::BitVectors) {
        throw DomainError("hamming weight requires a bit-vector group");
    }
    return WeightFunction(group, Kind::Hamming);
}

WeightFunction WeightFunction::pauli_weight(const AbelianGroup& group) {
    if (group.kind() != AbelianGroup::Kind::SymplecticBitVectors) {
        throw DomainError("Pauli weight requires a symplectic bit-vector group");
    }
    return WeightFunction(group, Kind::PauliWeight);
}

WeightFunction WeightFunction::manhattan(const AbelianGroup& group) {
    if (group.kind() != AbelianGroup::Kind::TorusLattice) {
        throw DomainError("Manhattan weight requires a torus lattice");
    }
    return WeightFunction(group, Kind::Manhattan);
}

double WeightFunction::operator()(Element u) const {
    switch (kind_) {
    case Kind::Hamming:
        return static_cast<double>(std::popcount(u));
    case Kind::PauliWeight: {
        const int n = group_.rank();
        const std::size_t mask = (std::size_t{1} << n) - 1;
        return static_cast<double>(std::popcount((u & mask) | (u >> n)));
    }
    case Kind::Manhattan: {
        const int m = group_.modulus();
        double total = 0.0;
        for (int c : group_.coords(u)) {
            // Representative in [-M/2, M/2).
            const int r = c >= m / 2 + (m % 2) ? c - m : c;
            total += std::abs(r);
        }
        return total;
    }
    }
    return 0.0;
}

CrossedProductElement CrossedProductElement::monomial(const AbelianGroup& g, Element z, Element u, Complex coeff) {
    CrossedProductElement a(g.size());
    Vector f = Vector::Zero(static_cast<Eigen::Index>(g.size()));
    f(static_cast<Eigen::Index>(z)) = coeff;
    a.terms_.emplace(u, std::move(f));
    return a;
}

CrossedProductElement CrossedProductElement::function(const AbelianGroup& g, const Vector& f) {
    if (static_cast<std::size_t>(f.size()) != g.size()) {
        throw DomainError("CrossedProductElement::function: length differs from group order");
    }
    CrossedProductElement a(g.size());
    a.terms_.emplace(g.zero(), f);
    return a;
}

CrossedProductElement CrossedProductElement::translation(const AbelianGroup& g, Element u) {
    CrossedProductElement a(g.size());
    a.terms_.emplace(u, Vector::Ones(static_cast<Eigen::Index>(g.size())));
    return a;
}

void CrossedProductElement::add_term(Element u, const Vector& f) {
    auto [it, inserted] = terms_.try_emplace(u, f);
    if (!inserted) it->second += f;
}

void CrossedProductElement::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.cwiseAbs().maxCoeff() <= tol) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

bool CrossedProductElement::is_zero(double tol) const {
    for (const auto& [u, f] : terms_) {
        if (f.cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

CrossedProductElement& CrossedProductElement::operator+=(const CrossedProductElement& other) {
    if (other.group_size_ != group_size_) throw DomainError("CrossedProductElement: group mismatch");
    for (const auto& [u, f] : other.terms_) add_term(u, f);
    return *this;
}

CrossedProductElement operator*(Complex s, CrossedProductElement a) {
    for (auto& [u, f] : a.terms_) f *= s;
    return a;
}

namespace {

// (α_u g)(x) = g(x - u)
Vector translate(const AbelianGroup& g, const Vector& f, AbelianGroup::Element u) {
    Vector out(f.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
        out(static_cast<Eigen::Index>(x)) = f(static_cast<Eigen::Index>(g.subtract(x, u)));
    }
    return out;
}

} // namespace

CrossedProductElement multiply(const CrossedProductElement& a, const CrossedProductElement& b, const Cocycle& sigma) {
    const AbelianGroup& g = sigma.group();
    if (a.group_size() != g.size() || b.group_size() != g.size()) {
        throw DomainError("multiply: elements do not belong to the cocycle's group");
    }
    CrossedProductElement out(g.size());
    for (const auto& [u, f] : a.terms()) {
        for (const auto& [v, h] : b.terms()) {
            Vector prod = f.cwiseProduct(translate(g, h, u)) * sigma(u, v);
            out.add_term(g.add(u, v), prod);
        }
    }
    return out;
}

CrossedProductElement adjoint(const CrossedProductElement& a, const Cocycle& sigma) {
    const AbelianGroup& g = sigma.group();
    CrossedProductElement out(g.size());
    for (const auto& [u, f] : a.terms()) {
        const auto minus_u = g.negate(u);
        Vector coeff = translate(g, f.conjugate(), minus_u) * std::conj(sigma(u, minus_u));
        out.add_term(minus_u, coeff);
    }
    return out;
}

} // namespace speccode
