#include "speccode/code_zoo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "speccode/errors.hpp"

namespace speccode {

namespace {

constexpr int kDenseQubits = 10;

Matrix monomial_sum_dense(const std::vector<MonomialMatrix>& ms, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix d = Matrix::Zero(n, n);
    for (const auto& m : ms) d += Matrix::Identity(n, n) - m.dense();
    return d;
}

} // namespace

ClassicalCode classical_code(int n, const std::vector<std::string>& rows) {
    std::vector<std::uint64_t> masks;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) throw DomainError("classical_code: row '" + r + "' has the wrong length");
        std::uint64_t m = 0;
        for (int i = 0; i < n; ++i) {
            const char c = r[static_cast<std::size_t>(i)];
            if (c != '0' && c != '1') throw DomainError("classical_code: rows must be binary strings");
            if (c == '1') m |= std::uint64_t{1} << i;
        }
        masks.push_back(m);
    }
    return classical_code(n, masks);
}

ClassicalCode classical_code(int n, const std::vector<std::uint64_t>& rows) {
    if (n < 1 || n > 14) throw DomainError("classical_code: n must be between 1 and 14");
    const int rank = f2_rank(rows);
    if (rank != static_cast<int>(rows.size())) {
        std::ostringstream msg;
        msg << "classical_code: generator rows are dependent (rank " << rank << " of " << rows.size() << ")";
        throw DomainError(msg.str());
    }
    for (auto r : rows) {
        if (r >> n) throw DomainError("classical_code: row has bits beyond n");
    }

    ClassicalCode code;
    code.n = n;
    code.generators = rows;
    std::set<AbelianGroup::Element> words{0};
    for (std::size_t mask = 0; mask < (std::size_t{1} << rows.size()); ++mask) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if ((mask >> i) & 1u) w ^= rows[i];
        }
        words.insert(static_cast<AbelianGroup::Element>(w));
    }
    code.codewords.assign(words.begin(), words.end());

    const AbelianGroup g = AbelianGroup::bit_vectors(n);
    RealVector indicator = RealVector::Ones(static_cast<Eigen::Index>(g.size()));
    for (auto c : code.codewords) indicator(static_cast<Eigen::Index>(c)) = 0.0;
    code.d_c = HermitianOperator::diagonal(indicator);

    Matrix basis = Matrix::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(code.codewords.size()));
    for (std::size_t k = 0; k < code.codewords.size(); ++k) {
        basis(static_cast<Eigen::Index>(code.codewords[k]), static_cast<Eigen::Index>(k)) = 1.0;
    }
    code.p = CodeProjection::from_isometry(basis);

    const WeylRepresentation rep = WeylRepresentation::regular(Cocycle::trivial(g));
    code.w_set = compute_W_set(code.p, rep);
    code.distance = min_weight(code.w_set, WeightFunction::hamming(g));
    return code;
}

namespace {

// Isotropy and independence; returns the rank.
int validate_stabilizers(int n, const std::vector<AbelianGroup::Element>& generators) {
    if (n < 1 || n > 16) throw DomainError("stabilizer_code: n must be between 1 and 16");
    if (generators.empty()) throw DomainError("stabilizer_code: no generators");
    const AbelianGroup g = AbelianGroup::symplectic(n);
    for (auto u : generators) {
        if (u >= g.size()) throw DomainError("stabilizer_code: generator out of range");
        if (u == 0) throw DomainError("stabilizer_code: identity is not a valid generator");
    }
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            if (symplectic_form(g, generators[i], generators[j]) != 0) {
                throw DomainError("stabilizer_code: generators " + pauli_label(generators[i], n) + " and " +
                                  pauli_label(generators[j], n) + " anticommute");
            }
        }
    std::vector<std::uint64_t> rows(generators.begin(), generators.end());
    const int rank = f2_rank(rows);
    if (rank != static_cast<int>(generators.size())) {
        std::ostringstream msg;
        msg << "stabilizer_code: generators are dependent (rank " << rank << " of " << generators.size() << ")";
        throw DomainError(msg.str());
    }
    return rank;
}

void finish_stabilizer(StabilizerCode& code, const std::vector<MonomialMatrix>& ops, int rank) {
    const int n = code.n;
    const std::size_t dim = std::size_t{1} << n;
    const int expected = 1 << (n - rank);
    if (n <= kDenseQubits) {
        code.d_c = HermitianOperator(monomial_sum_dense(ops, dim));
        const Eigensystem eig = eigh(*code.d_c);
        code.spectrum = eig.report;
        code.p = spectral_projection(eig, {0.0, 0.0});
    } else {
        code.p = stabilizer_projection(ops, expected);
    }
    if (code.p.rank() != expected) throw NumericalError("stabilizer_code: kernel dimension differs from 2^(n-m)");

    code.w_set_enumerated = n <= 8;
    if (code.w_set_enumerated) {
        code.w_set = compute_W_set(code.p, code.representation());
        code.distance = min_weight(code.w_set, WeightFunction::pauli_weight(code.group()));
    } else {
        const DistanceResult d = pauli_distance_search(code.p, n, n);
        if (!d.infinite) {
            code.distance.distance = d.distance;
            code.distance.infinite = false;
            code.distance.witness = parse_pauli(d.witness).u;
        }
    }
}

} // namespace

StabilizerCode stabilizer_code(const std::vector<std::string>& generators) {
    if (generators.empty()) throw DomainError("stabilizer_code: no generators");
    StabilizerCode code;
    code.n = static_cast<int>(generators.front().size());
    std::vector<AbelianGroup::Element> us;
    std::vector<MonomialMatrix> ops;
    for (const auto& text : generators) {
        const PauliString s = parse_pauli(text);
        if (s.n != code.n) throw DomainError("stabilizer_code: generators have different lengths");
        us.push_back(s.u);
        code.generators.push_back(s);
        // Pauli strings are Hermitian as written; an odd number of Y factors
        // is where the bare Weyl operator would need the extra i.
        code.phase_fixed.push_back(std::abs(s.phase.imag()) > 0.5);
        ops.push_back(pauli_operator(s));
    }
    const int rank = validate_stabilizers(code.n, us);
    finish_stabilizer(code, ops, rank);
    return code;
}

StabilizerCode stabilizer_code(int n, const std::vector<AbelianGroup::Element>& generators) {
    const int rank = validate_stabilizers(n, generators);
    StabilizerCode code;
    code.n = n;
    const WeylRepresentation rep = code.representation();
    std::vector<MonomialMatrix> ops;
    for (auto u : generators) {
        bool fixed = false;
        ops.push_back(rep.hermitian_weyl(u, &fixed));
        code.phase_fixed.push_back(fixed);
        PauliString s;
        s.n = n;
        s.u = u;
        s.phase = fixed ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
        code.generators.push_back(s);
    }
    finish_stabilizer(code, ops, rank);
    return code;
}

GkpCode gkp_discrete(int modulus) {
    if (modulus < 4 || modulus % 2 != 0) throw DomainError("gkp_discrete: M must be even and at least 4");
    const AbelianGroup g = AbelianGroup::torus(modulus);
    const WeylRepresentation rep = WeylRepresentation::regular(Cocycle::one_sided_symplectic(g));
    const auto dim = static_cast<Eigen::Index>(g.size());
    Matrix d = Matrix::Zero(dim, dim);
    for (const auto& c : {std::vector<int>{0, 2}, std::vector<int>{2, 0}}) {
        const Matrix u = rep.weyl_dense(g.from_coords(c));
        d += Matrix::Identity(dim, dim) - 0.5 * (u + u.adjoint());
    }
    GkpCode code;
    code.modulus = modulus;
    code.d_c = HermitianOperator(d);
    const Eigensystem eig = eigh(code.d_c);
    code.spectrum = eig.report;
    code.p = spectral_projection(eig, {0.0, 0.0});
    if (code.p.rank() == 0) throw NumericalError("gkp_discrete: empty kernel");
    code.w_set = compute_W_set(code.p, rep);
    code.distance = min_weight(code.w_set, WeightFunction::manhattan(g));
    return code;
}

int ToricLattice::h(int i, int j) const {
    i = ((i % lx) + lx) % lx;
    j = ((j % ly) + ly) % ly;
    return 2 * (i + lx * j);
}

int ToricLattice::v(int i, int j) const { return h(i, j) + 1; }

ToricLattice toric_lattice(int lx, int ly) {
    if (lx < 2 || ly < 2) throw DomainError("toric_lattice: both sides must be at least 2");
    ToricLattice t;
    t.lx = lx;
    t.ly = ly;
    for (int j = 0; j < ly; ++j)
        for (int i = 0; i < lx; ++i) {
            t.stars.push_back({t.h(i, j), t.h(i - 1, j), t.v(i, j), t.v(i, j - 1)});
            t.plaquettes.push_back({t.h(i, j), t.h(i, j + 1), t.v(i, j), t.v(i + 1, j)});
        }
    return t;
}

ToricCode toric_code_z2(int lx, int ly) {
    ToricCode code;
    code.lattice = toric_lattice(lx, ly);
    const int n = code.lattice.edges();
    if (n > 16) throw DomainError("toric_code_z2: at most 16 edges are supported");

    std::vector<std::uint64_t> rows;
    std::vector<MonomialMatrix> ops;
    auto add = [&](const std::array<int, 4>& edges, char kind) {
        std::string text(static_cast<std::size_t>(n), 'I');
        for (int e : edges) text[static_cast<std::size_t>(e)] = kind;
        const PauliString s = parse_pauli(text);
        code.stabilizers.push_back(s);
        ops.push_back(pauli_operator(s));
        rows.push_back(s.u);
    };
    for (const auto& s : code.lattice.stars) add(s, 'X');
    for (const auto& p : code.lattice.plaquettes) add(p, 'Z');

    const int expected = 1 << (n - f2_rank(rows));
    const std::size_t dim = std::size_t{1} << n;
    if (n <= kDenseQubits) {
        code.d_code = HermitianOperator(monomial_sum_dense(ops, dim));
        code.p = kernel_projection(*code.d_code);
    } else {
        code.p = stabilizer_projection(ops, expected);
    }
    if (code.p.rank() != expected) throw NumericalError("toric_code_z2: kernel dimension differs from 2^(n-rank)");
    code.distance = pauli_distance_search(code.p, n, std::min(lx, ly));
    return code;
}

CodeProjection stabilizer_projection(const std::vector<MonomialMatrix>& stabilizers, int expected_rank,
                                     std::uint64_t seed) {
    if (stabilizers.empty()) throw DomainError("stabilizer_projection: no stabilizers");
    const std::size_t dim = stabilizers.front().dim();
    const Eigen::Index cols = expected_rank + 6;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(static_cast<Eigen::Index>(dim), cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = Complex(normal(rng), normal(rng));
    for (const auto& s : stabilizers) a = 0.5 * (a + s.apply(a));

    // Orthonormal basis of the column span from the small Gram matrix.
    const Matrix gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const RealVector& ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > 1e-20 * std::max(1.0, top) && ev(i) > 1e-10 * top) keep.push_back(i);
    }
    Matrix basis(a.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        basis.col(static_cast<Eigen::Index>(k)) = a * es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
    }
    // One Gram-Schmidt pass removes the residual loss of orthogonality.
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
    return CodeProjection::from_isometry(q);
}

DistanceResult pauli_distance_search(const CodeProjection& p, int n, int max_weight) {
    if (p.dim() != (Eigen::Index{1} << n)) throw DomainError("pauli_distance_search: dimension mismatch");
    const Matrix& b = p.basis();
    DistanceResult out;
    const AbelianGroup g = AbelianGroup::symplectic(n);
    const WeylRepresentation rep = WeylRepresentation::pauli(Cocycle::one_sided_symplectic(g));
    for (int w = 1; w <= std::min(max_weight, n); ++w) {
        // Positions as the set bits of a mask with popcount w, each carrying X, Y or Z.
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            if (std::popcount(mask) != w) continue;
            std::vector<int> pos;
            for (int i = 0; i < n; ++i) {
                if ((mask >> i) & 1u) pos.push_back(i);
            }
            std::size_t combos = 1;
            for (int i = 0; i < w; ++i) combos *= 3;
            for (std::size_t c = 0; c < combos; ++c) {
                std::size_t rest = c;
                AbelianGroup::Element u = 0;
                for (int i : pos) {
                    const std::size_t kind = rest % 3;  // 0 X, 1 Z, 2 Y
                    rest /= 3;
                    if (kind != 1) u |= std::size_t{1} << i;
                    if (kind != 0) u |= std::size_t{1} << (n + i);
                }
                ++out.scanned;
                const Matrix compressed = b.adjoint() * rep.weyl(u).apply(b);
                if (!is_scalar_compressed(compressed, 1.0).scalar) {
                    out.distance = w;
                    out.infinite = false;
                    out.witness = pauli_label(u, n);
                    return out;
                }
            }
        }
    }
    return out;
}

ReconstructionTriple formal_reconstruction(const CodeProjection& p, const std::vector<int>& level_dims, int n_max) {
    if (n_max < 1) throw DomainError("formal_reconstruction: n_max must be at least 1");
    if (static_cast<int>(level_dims.size()) != n_max) {
        throw DomainError("formal_reconstruction: need one level dimension per level");
    }
    ReconstructionTriple out;
    const Eigen::Index rank = p.rank();
    Eigen::Index total = rank;
    for (int n = 1; n <= n_max; ++n) {
        const int d = level_dims[static_cast<std::size_t>(n - 1)];
        if (d < 1) throw DomainError("formal_reconstruction: level dimensions must be positive");
        out.tower.emplace_back(n, d);
        total += d;
    }
    RealVector diag = RealVector::Zero(total);
    Eigen::Index offset = rank;
    for (const auto& [n, d] : out.tower) {
        diag.segment(offset, d).setConstant(static_cast<double>(n));
        offset += d;
    }
    out.dirac = HermitianOperator::diagonal(diag);
    out.p = CodeProjection::from_isometry(Matrix::Identity(total, rank));

    const Eigen::Index complement = p.dim() - rank;
    if (total - rank >= complement) {
        // Code basis onto the first block, an orthonormal complement onto the levels.
        const Matrix comp = kernel_projection(HermitianOperator(p.matrix())).basis();
        Matrix v = Matrix::Zero(total, p.dim());
        v.topRows(rank) = p.basis().adjoint();
        v.middleRows(rank, complement) = comp.adjoint();
        out.embedding = v;
    }
    return out;
}

} // namespace speccode
