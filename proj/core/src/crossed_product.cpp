#include "speccode/crossed_product.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "speccode/errors.hpp"

namespace speccode {

MonomialMatrix::MonomialMatrix(std::vector<std::size_t> target, std::vector<Complex> phase)
    : target_(std::move(target)), phase_(std::move(phase)) {
    if (target_.size() != phase_.size()) throw DomainError("MonomialMatrix: size mismatch");
    std::vector<char> hit(target_.size(), 0);
    for (std::size_t t : target_) {
        if (t >= target_.size() || hit[t]) throw DomainError("MonomialMatrix: targets must form a permutation");
        hit[t] = 1;
    }
}

MonomialMatrix MonomialMatrix::identity(std::size_t dim) {
    std::vector<std::size_t> t(dim);
    for (std::size_t i = 0; i < dim; ++i) t[i] = i;
    return MonomialMatrix(std::move(t), std::vector<Complex>(dim, Complex(1.0, 0.0)));
}

Matrix MonomialMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t x = 0; x < dim(); ++x) m(static_cast<Eigen::Index>(target_[x]), static_cast<Eigen::Index>(x)) = phase_[x];
    return m;
}

Matrix MonomialMatrix::apply(const Matrix& b) const {
    if (static_cast<std::size_t>(b.rows()) != dim()) throw DomainError("MonomialMatrix::apply: dimension mismatch");
    Matrix out(b.rows(), b.cols());
    for (std::size_t x = 0; x < dim(); ++x) {
        out.row(static_cast<Eigen::Index>(target_[x])) = phase_[x] * b.row(static_cast<Eigen::Index>(x));
    }
    return out;
}

MonomialMatrix MonomialMatrix::adjoint() const {
    std::vector<std::size_t> t(dim());
    std::vector<Complex> ph(dim());
    for (std::size_t x = 0; x < dim(); ++x) {
        t[target_[x]] = x;
        ph[target_[x]] = std::conj(phase_[x]);
    }
    return MonomialMatrix(std::move(t), std::move(ph));
}

MonomialMatrix MonomialMatrix::scaled(Complex s) const {
    MonomialMatrix out = *this;
    for (auto& p : out.phase_) p *= s;
    return out;
}

MonomialMatrix operator*(const MonomialMatrix& a, const MonomialMatrix& b) {
    if (a.dim() != b.dim()) throw DomainError("MonomialMatrix product: dimension mismatch");
    std::vector<std::size_t> t(a.dim());
    std::vector<Complex> ph(a.dim());
    for (std::size_t x = 0; x < a.dim(); ++x) {
        const std::size_t y = b.target_[x];
        t[x] = a.target_[y];
        ph[x] = a.phase_[y] * b.phase_[x];
    }
    return MonomialMatrix(std::move(t), std::move(ph));
}

WeylRepresentation WeylRepresentation::regular(const Cocycle& sigma) {
    return WeylRepresentation(Kind::Regular, sigma, sigma.group().size());
}

WeylRepresentation WeylRepresentation::pauli(const Cocycle& sigma) {
    const AbelianGroup& g = sigma.group();
    if (g.kind() != AbelianGroup::Kind::SymplecticBitVectors) {
        throw DomainError("Pauli representation needs symplectic bit vectors");
    }
    // The Pauli matrices realize exactly the one-sided cocycle; reject others.
    const Cocycle reference = Cocycle::one_sided_symplectic(g);
    if (g.size() <= 4096) {
        for (std::size_t u = 0; u < g.size(); u += 1 + g.size() / 64)
            for (std::size_t v = 0; v < g.size(); v += 1 + g.size() / 64) {
                if (std::abs(sigma(u, v) - reference(u, v)) > 1e-12) {
                    throw DomainError("Pauli representation requires the one-sided symplectic cocycle");
                }
            }
    }
    return WeylRepresentation(Kind::Pauli, sigma, std::size_t{1} << g.rank());
}

namespace {

// Qubit 0 is the most significant bit of the computational basis index, so
// that dense operators agree with left-to-right Kronecker products.
std::size_t qubit_mask(std::size_t bits, int n) {
    std::size_t out = 0;
    for (int i = 0; i < n; ++i) {
        if ((bits >> i) & 1u) out |= std::size_t{1} << (n - 1 - i);
    }
    return out;
}

} // namespace

MonomialMatrix WeylRepresentation::weyl(AbelianGroup::Element u) const {
    const AbelianGroup& g = group();
    if (u >= g.size()) throw DomainError("weyl: element out of range");
    std::vector<std::size_t> target(dim_);
    std::vector<Complex> phase(dim_);
    if (kind_ == Kind::Regular) {
        for (std::size_t x = 0; x < dim_; ++x) {
            target[x] = g.add(x, u);
            phase[x] = sigma_(u, x);
        }
    } else {
        const int n = g.rank();
        const std::size_t low = (std::size_t{1} << n) - 1;
        const std::size_t p = qubit_mask(u & low, n);
        const std::size_t q = qubit_mask(u >> n, n);
        for (std::size_t x = 0; x < dim_; ++x) {
            const std::size_t y = x ^ p;
            target[x] = y;
            phase[x] = (std::popcount(q & y) & 1) ? Complex(-1.0, 0.0) : Complex(1.0, 0.0);
        }
    }
    return MonomialMatrix(std::move(target), std::move(phase));
}

MonomialMatrix WeylRepresentation::hermitian_weyl(AbelianGroup::Element u, bool* fixed) const {
    // U_u U_u = σ(u,u) U_{2u}; for involutive u this is ±I.
    const AbelianGroup& g = group();
    if (g.add(u, u) != g.zero()) throw DomainError("hermitian_weyl: element is not an involution");
    const Complex s = sigma_(u, u);
    const bool flip = std::abs(s + 1.0) < 1e-12;
    if (fixed) *fixed = flip;
    MonomialMatrix w = weyl(u);
    return flip ? w.scaled(Complex(0.0, 1.0)) : w;
}

Matrix WeylRepresentation::represent(const CrossedProductElement& a) const {
    if (kind_ != Kind::Regular) throw DomainError("represent: functions act only in the regular representation");
    const AbelianGroup& g = group();
    if (a.group_size() != g.size()) throw DomainError("represent: element belongs to a different group");
    const auto n = static_cast<Eigen::Index>(dim_);
    Matrix m = Matrix::Zero(n, n);
    for (const auto& [u, f] : a.terms()) {
        // (f U_u)|x⟩ = σ(u, x) f(x + u)|x + u⟩
        for (std::size_t x = 0; x < dim_; ++x) {
            const std::size_t y = g.add(x, u);
            m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += sigma_(u, x) * f(static_cast<Eigen::Index>(y));
        }
    }
    return m;
}

FiniteSpectralTriple assemble_triple(const WeightFunction& weight, const HermitianOperator& d_c) {
    const AbelianGroup& g = weight.group();
    const auto nv = static_cast<Eigen::Index>(g.size());
    if (d_c.dim() != nv) throw DomainError("assemble_triple: D_c must act on l2(V)");
    if (nv == 1) {
        // No pairs, hence no metric blocks and no position states to compare.
        return FiniteSpectralTriple(d_c, {{"delta_" + g.label(0), Matrix::Identity(1, 1)}});
    }
    const DiscreteMetricTriple metric = DiscreteMetricTriple::from_group(weight);
    const Eigen::Index dm = metric.hilbert_dim();
    const Eigen::Index dim = dm + nv;

    Matrix d = Matrix::Zero(dim, dim);
    d.topLeftCorner(dm, dm) = metric.dirac().matrix();
    d.bottomRightCorner(nv, nv) = d_c.matrix();

    std::vector<NamedMatrix> gens;
    std::vector<State> states;
    for (Eigen::Index x = 0; x < nv; ++x) {
        Vector f = Vector::Zero(nv);
        f(x) = 1.0;
        Matrix a = Matrix::Zero(dim, dim);
        a.topLeftCorner(dm, dm) = metric.represent_function(f);
        a(dm + x, dm + x) = 1.0;
        gens.push_back({"delta_" + g.label(static_cast<std::size_t>(x)), a});

        const State local = metric.point_state(static_cast<std::size_t>(x));
        Matrix rho = Matrix::Zero(dim, dim);
        rho.topLeftCorner(dm, dm) = local.rho;
        states.push_back({local.label, rho});
    }
    return FiniteSpectralTriple(HermitianOperator(d), std::move(gens), std::move(states));
}

std::vector<AbelianGroup::Element> compute_W_set(const CodeProjection& p, const WeylRepresentation& rep, double tol) {
    if (static_cast<std::size_t>(p.dim()) != rep.dim()) throw DomainError("compute_W_set: dimension mismatch");
    std::vector<AbelianGroup::Element> w;
    const Matrix& b = p.basis();
    for (std::size_t u = 0; u < rep.group().size(); ++u) {
        const Matrix compressed = b.adjoint() * rep.weyl(u).apply(b);
        // Weyl operators are unitary.
        if (!is_scalar_compressed(compressed, 1.0, tol).scalar) w.push_back(u);
    }
    return w;
}

WDistance min_weight(const std::vector<AbelianGroup::Element>& w, const WeightFunction& weight) {
    WDistance out;
    out.w_size = w.size();
    for (auto u : w) {
        const double wt = weight(u);
        if (wt < out.distance) {
            out.distance = wt;
            out.witness = u;
            out.infinite = false;
        }
    }
    return out;
}

WDistance code_distance_via_W(const CodeProjection& p, const WeylRepresentation& rep, const WeightFunction& weight,
                              double tol) {
    if (!(weight.group() == rep.group())) throw DomainError("code_distance_via_W: weight on a different group");
    return min_weight(compute_W_set(p, rep, tol), weight);
}

std::vector<LocalizedOperator> weyl_monomial_family(const WeylRepresentation& rep) {
    const AbelianGroup& g = rep.group();
    if (static_cast<double>(g.size()) * static_cast<double>(rep.dim()) * static_cast<double>(rep.dim()) > 1 << 26) {
        throw DomainError("weyl_monomial_family: dense family too large; use code_distance_via_W");
    }
    std::vector<LocalizedOperator> out;
    out.reserve(g.size());
    for (std::size_t u = 0; u < g.size(); ++u) {
        Region r{g.zero(), g.negate(u)};
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        out.push_back({g.label(u), rep.weyl_dense(u), std::move(r)});
    }
    return out;
}

} // namespace speccode
