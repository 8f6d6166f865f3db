#include "speccode/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "speccode/errors.hpp"

namespace speccode {

PointMetric weight_metric(const WeightFunction& weight) {
    return [weight](std::size_t x, std::size_t y) { return weight(weight.group().subtract(x, y)); };
}

State State::vector_state(std::string label, const Vector& v) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-10) throw DomainError("vector_state: vector is not normalized");
    return State{std::move(label), v * v.adjoint()};
}

Complex State::expect(const Matrix& a) const {
    if (a.rows() != rho.rows()) throw DomainError("State::expect: dimension mismatch");
    return (rho * a).trace();
}

FiniteSpectralTriple::FiniteSpectralTriple(HermitianOperator dirac, std::vector<NamedMatrix> generators,
                                           std::vector<State> states)
    : dirac_(std::move(dirac)), generators_(std::move(generators)), states_(std::move(states)) {
    for (const auto& g : generators_) {
        if (g.matrix.rows() != dirac_.dim() || g.matrix.cols() != dirac_.dim()) {
            throw DomainError("FiniteSpectralTriple: generator '" + g.name + "' has the wrong dimension");
        }
    }
    for (const auto& s : states_) {
        if (s.rho.rows() != dirac_.dim()) {
            throw DomainError("FiniteSpectralTriple: state '" + s.label + "' has the wrong dimension");
        }
    }
}

const State& FiniteSpectralTriple::state(const std::string& label) const {
    for (const auto& s : states_) {
        if (s.label == label) return s;
    }
    throw DomainError("FiniteSpectralTriple: unknown state '" + label + "'");
}

std::vector<double> FiniteSpectralTriple::commutator_norms() const {
    std::vector<double> out;
    out.reserve(generators_.size());
    for (const auto& g : generators_) out.push_back(operator_norm(commutator(dirac_.matrix(), g.matrix)));
    return out;
}

DiscreteMetricTriple::DiscreteMetricTriple(std::vector<std::string> labels, Eigen::MatrixXd weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (n == 0) throw DomainError("DiscreteMetricTriple: no points");
    if (weights_.rows() != n || weights_.cols() != n) {
        throw DomainError("DiscreteMetricTriple: weight matrix does not match the point count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights_(i, i) != 0.0) throw DomainError("DiscreteMetricTriple: weight(x, x) must be 0");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (!(weights_(i, j) > 0.0) || !std::isfinite(weights_(i, j))) {
                throw DomainError("DiscreteMetricTriple: weights between distinct points must be positive");
            }
            if (weights_(i, j) != weights_(j, i)) throw DomainError("DiscreteMetricTriple: weights not symmetric");
        }
    }
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
        throw DomainError("DiscreteMetricTriple: duplicate labels");
    }
}

DiscreteMetricTriple DiscreteMetricTriple::from_group(const WeightFunction& weight) {
    const AbelianGroup& g = weight.group();
    std::vector<std::string> labels;
    Eigen::MatrixXd w(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    for (std::size_t x = 0; x < g.size(); ++x) {
        labels.push_back(g.label(x));
        for (std::size_t y = 0; y < g.size(); ++y) {
            w(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = weight(g.subtract(x, y));
        }
    }
    return DiscreteMetricTriple(std::move(labels), std::move(w));
}

std::size_t DiscreteMetricTriple::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DomainError("DiscreteMetricTriple: unknown point '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::pair<std::size_t, std::size_t>> DiscreteMetricTriple::pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < size(); ++x)
        for (std::size_t y = x + 1; y < size(); ++y) out.emplace_back(x, y);
    return out;
}

HermitianOperator DiscreteMetricTriple::dirac() const {
    const auto pr = pairs();
    const auto dim = static_cast<Eigen::Index>(2 * pr.size());
    if (dim == 0) throw DomainError("DiscreteMetricTriple: a single point has no Dirac operator");
    Matrix d = Matrix::Zero(dim, dim);
    for (std::size_t b = 0; b < pr.size(); ++b) {
        const auto i = static_cast<Eigen::Index>(2 * b);
        const double inv = 1.0 / weights_(static_cast<Eigen::Index>(pr[b].first), static_cast<Eigen::Index>(pr[b].second));
        d(i, i + 1) = inv;
        d(i + 1, i) = inv;
    }
    return HermitianOperator(d);
}

Matrix DiscreteMetricTriple::represent_function(const Vector& f) const {
    if (static_cast<std::size_t>(f.size()) != size()) throw DomainError("represent_function: wrong length");
    const auto pr = pairs();
    Vector diag(static_cast<Eigen::Index>(2 * pr.size()));
    for (std::size_t b = 0; b < pr.size(); ++b) {
        diag(static_cast<Eigen::Index>(2 * b)) = f(static_cast<Eigen::Index>(pr[b].first));
        diag(static_cast<Eigen::Index>(2 * b + 1)) = f(static_cast<Eigen::Index>(pr[b].second));
    }
    return diag.asDiagonal();
}

State DiscreteMetricTriple::point_state(std::size_t x) const {
    if (x >= size()) throw DomainError("point_state: index out of range");
    const auto pr = pairs();
    for (std::size_t b = 0; b < pr.size(); ++b) {
        if (pr[b].first == x || pr[b].second == x) {
            Vector v = Vector::Zero(static_cast<Eigen::Index>(2 * pr.size()));
            v(static_cast<Eigen::Index>(2 * b + (pr[b].first == x ? 0 : 1))) = 1.0;
            return State::vector_state(labels_[x], v);
        }
    }
    throw DomainError("point_state: a single point has no Hilbert space");
}

FiniteSpectralTriple DiscreteMetricTriple::triple() const {
    std::vector<NamedMatrix> gens;
    std::vector<State> states;
    for (std::size_t x = 0; x < size(); ++x) {
        Vector f = Vector::Zero(static_cast<Eigen::Index>(size()));
        f(static_cast<Eigen::Index>(x)) = 1.0;
        gens.push_back({"delta_" + labels_[x], represent_function(f)});
        states.push_back(point_state(x));
    }
    return FiniteSpectralTriple(dirac(), std::move(gens), std::move(states));
}

Eigen::MatrixXd connes_distance_matrix(const DiscreteMetricTriple& t) {
    Eigen::MatrixXd d = t.weights();
    const Eigen::Index n = d.rows();
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
}

double connes_distance_closed(const DiscreteMetricTriple& t, std::size_t x, std::size_t y) {
    if (x >= t.size() || y >= t.size()) throw DomainError("connes_distance_closed: unknown point");
    return connes_distance_matrix(t)(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
}

double connes_distance_closed(const DiscreteMetricTriple& t, const std::string& x, const std::string& y) {
    return connes_distance_closed(t, t.index_of(x), t.index_of(y));
}

namespace {

// Union-find over matrix indices, joined wherever any of the matrices has a
// nonzero entry. i[D, a] is block diagonal over the resulting components.
std::vector<std::vector<Eigen::Index>> coupled_components(const std::vector<const Matrix*>& ms, Eigen::Index dim) {
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (const Matrix* m : ms) {
        for (Eigen::Index j = 0; j < dim; ++j)
            for (Eigen::Index i = 0; i < dim; ++i) {
                if (i != j && (*m)(i, j) != Complex(0.0, 0.0)) {
                    parent[static_cast<std::size_t>(find(i))] = find(j);
                }
            }
    }
    std::map<Eigen::Index, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < dim; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<Eigen::Index>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

Matrix submatrix(const Matrix& m, const std::vector<Eigen::Index>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix out(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) out(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return out;
}

// Components of i[D, a(c)] for a linear parametrization a(c) = Σ c_i B_i.
struct CommutatorPencil {
    // blocks[k][i]: component k of i[D, B_i]
    std::vector<std::vector<Matrix>> blocks;

    [[nodiscard]] std::size_t params() const { return blocks.empty() ? 0 : blocks.front().size(); }

    [[nodiscard]] Matrix block(std::size_t k, const Eigen::VectorXd& c) const {
        Matrix out = Matrix::Zero(blocks[k].front().rows(), blocks[k].front().cols());
        for (std::size_t i = 0; i < blocks[k].size(); ++i) out += c(static_cast<Eigen::Index>(i)) * blocks[k][i];
        return out;
    }

    [[nodiscard]] double norm(const Eigen::VectorXd& c) const {
        double n = 0.0;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(block(k, c), Eigen::EigenvaluesOnly);
            n = std::max(n, es.eigenvalues().cwiseAbs().maxCoeff());
        }
        return n;
    }
};

double ratio_ascent(const CommutatorPencil& pencil, const Eigen::VectorXd& g, Eigen::VectorXd c, int iterations,
                    Eigen::VectorXd& best_c) {
    const auto n = static_cast<Eigen::Index>(pencil.params());
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    double best = 0.0;
    best_c = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> solvers(pencil.blocks.size());
    for (int t = 0; t < iterations; ++t) {
        double norm = 0.0;
        for (std::size_t k = 0; k < pencil.blocks.size(); ++k) {
            solvers[k].compute(pencil.block(k, c));
            norm = std::max(norm, solvers[k].eigenvalues().cwiseAbs().maxCoeff());
        }
        if (norm <= 0.0 || !std::isfinite(norm)) break;
        c /= norm;
        // ‖Σ c_i B_i‖ is even in c, so the sign of the ratio is free.
        if (g.dot(c) < 0.0) {
            c = -c;
            m = -m;
        }
        const double ratio = g.dot(c);
        if (ratio > best) {
            best = ratio;
            best_c = c;
        }

        // Smoothed max |λ| by log-sum-exp over ±λ with a sharpening schedule.
        const double beta = 10.0 * (1.0 + 1e4 * t / iterations);
        double zmax = -std::numeric_limits<double>::infinity();
        for (const auto& s : solvers) zmax = std::max(zmax, beta * s.eigenvalues().cwiseAbs().maxCoeff() / norm);
        double total = 0.0;
        Eigen::VectorXd grad_norm = Eigen::VectorXd::Zero(n);
        for (std::size_t k = 0; k < pencil.blocks.size(); ++k) {
            const auto& s = solvers[k];
            const Eigen::VectorXd lam = s.eigenvalues() / norm;
            Eigen::VectorXd w(lam.size());
            for (Eigen::Index l = 0; l < lam.size(); ++l) {
                const double wp = std::exp(beta * lam(l) - zmax);
                const double wm = std::exp(-beta * lam(l) - zmax);
                total += wp + wm;
                w(l) = wp - wm;
            }
            const Matrix& u = s.eigenvectors();
            for (Eigen::Index i = 0; i < n; ++i) {
                const Matrix& b = pencil.blocks[k][static_cast<std::size_t>(i)];
                double acc = 0.0;
                for (Eigen::Index l = 0; l < lam.size(); ++l) {
                    acc += w(l) * (u.col(l).adjoint() * b * u.col(l))(0, 0).real();
                }
                grad_norm(i) += acc;
            }
        }
        grad_norm /= total;
        const Eigen::VectorXd grad = g - ratio * grad_norm;

        m = 0.9 * m + 0.1 * grad;
        v = 0.999 * v + 0.001 * grad.cwiseProduct(grad);
        const double b1 = 1.0 - std::pow(0.9, t + 1);
        const double b2 = 1.0 - std::pow(0.999, t + 1);
        const double lr = 0.05 * (1.0 - static_cast<double>(t) / iterations);
        c += lr * (m / b1).cwiseQuotient(((v / b2).cwiseSqrt().array() + 1e-12).matrix());
    }
    return best;
}

} // namespace

ConnesResult connes_distance_general(const FiniteSpectralTriple& t, const State& w1, const State& w2,
                                     const ConnesOptions& options) {
    const Eigen::Index dim = t.hilbert_dim();
    for (const State* s : {&w1, &w2}) {
        if (s->rho.rows() != dim) throw DomainError("connes_distance_general: state dimension mismatch");
        if (std::abs(s->rho.trace() - 1.0) > 1e-10) throw DomainError("connes_distance_general: state not normalized");
    }

    // Self-adjoint basis, orthonormal for the real inner product Re tr(A†B).
    std::vector<Matrix> basis;
    for (const auto& gen : t.generators()) {
        const Matrix& g = gen.matrix;
        for (Matrix h : {Matrix(0.5 * (g + g.adjoint())), Matrix(Complex(0.0, -0.5) * (g - g.adjoint()))}) {
            const double original = h.norm();
            if (original == 0.0) continue;
            for (const Matrix& b : basis) h -= (b.adjoint() * h).trace().real() * b;
            if (h.norm() > 1e-10 * original) basis.push_back(h / h.norm());
        }
    }

    ConnesResult result;
    result.basis_size = static_cast<int>(basis.size());
    result.optimizer = Matrix::Zero(dim, dim);
    if (basis.empty()) return result;

    const auto nb = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXd g(nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
        g(i) = (w1.expect(basis[static_cast<std::size_t>(i)]) - w2.expect(basis[static_cast<std::size_t>(i)])).real();
    }

    std::vector<Matrix> comms;
    comms.reserve(basis.size());
    for (const Matrix& b : basis) comms.push_back(Complex(0.0, 1.0) * commutator(t.dirac().matrix(), b));

    // Directions with [D, a] = 0 are unconstrained: either the objective is
    // blind to them or the distance is infinite.
    Eigen::MatrixXd lin(2 * dim * dim, nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
        const Matrix& c = comms[static_cast<std::size_t>(i)];
        lin.col(i) << Eigen::Map<const Eigen::VectorXcd>(c.data(), c.size()).real(),
            Eigen::Map<const Eigen::VectorXcd>(c.data(), c.size()).imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
    Eigen::Index range_dim = 0;
    while (range_dim < sv.size() && sv(range_dim) > 1e-10 * std::max(1.0, smax)) ++range_dim;
    const Eigen::MatrixXd range = svd.matrixV().leftCols(range_dim);
    const Eigen::MatrixXd null = svd.matrixV().rightCols(nb - range_dim);
    const double gscale = std::max(1.0, g.norm());
    if (null.cols() > 0 && (null.transpose() * g).cwiseAbs().maxCoeff() > 1e-10 * gscale) {
        result.unbounded = true;
        result.distance = std::numeric_limits<double>::infinity();
        return result;
    }
    const Eigen::VectorXd gr = range.transpose() * g;
    if (range_dim == 0 || gr.norm() <= 1e-14 * gscale) return result;

    std::vector<const Matrix*> pattern{&t.dirac().matrix()};
    for (const Matrix& b : basis) pattern.push_back(&b);
    CommutatorPencil pencil;
    for (const auto& idx : coupled_components(pattern, dim)) {
        std::vector<Matrix> blocks;
        bool nonzero = false;
        for (Eigen::Index r = 0; r < range_dim; ++r) {
            Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
            for (Eigen::Index i = 0; i < nb; ++i) acc += range(i, r) * submatrix(comms[static_cast<std::size_t>(i)], idx);
            nonzero = nonzero || acc.cwiseAbs().maxCoeff() > 0.0;
            blocks.push_back(0.5 * (acc + acc.adjoint()));
        }
        if (nonzero) pencil.blocks.push_back(std::move(blocks));
    }

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double best = 0.0;
    Eigen::VectorXd best_c = Eigen::VectorXd::Zero(range_dim);
    for (int r = 0; r < options.restarts; ++r) {
        Eigen::VectorXd c0 = gr;
        if (r > 0) {
            for (Eigen::Index i = 0; i < range_dim; ++i) c0(i) = normal(rng);
        }
        Eigen::VectorXd c_best;
        const double value = ratio_ascent(pencil, gr, c0, options.iterations, c_best);
        result.restart_values.push_back(value);
        if (value > best) {
            best = value;
            best_c = c_best;
        }
    }
    result.distance = best;
    const auto [lo, hi] = std::minmax_element(result.restart_values.begin(), result.restart_values.end());
    result.lower_bound = *hi > 0.0 && (*hi - *lo) > options.agreement_tol * *hi;

    const Eigen::VectorXd c = range * best_c;
    for (Eigen::Index i = 0; i < nb; ++i) result.optimizer += c(i) * basis[static_cast<std::size_t>(i)];
    return result;
}

bool local_algebra_membership(const CrossedProductElement& a, const AbelianGroup& g, const Region& y) {
    std::vector<char> in(g.size(), 0);
    for (std::size_t x : y) {
        if (x >= g.size()) throw DomainError("local_algebra_membership: region point out of range");
        in[x] = 1;
    }
    for (const auto& [u, f] : a.terms()) {
        for (std::size_t x = 0; x < g.size(); ++x) {
            if (f(static_cast<Eigen::Index>(x)) == Complex(0.0, 0.0)) continue;
            if (!in[x] || !in[g.subtract(x, u)]) return false;
        }
    }
    return true;
}

Region support_of(const CrossedProductElement& a, const AbelianGroup& g, double tol) {
    std::set<std::size_t> pts;
    for (const auto& [u, f] : a.terms()) {
        for (std::size_t x = 0; x < g.size(); ++x) {
            if (std::abs(f(static_cast<Eigen::Index>(x))) <= tol) continue;
            pts.insert(x);
            pts.insert(g.subtract(x, u));
        }
    }
    if (pts.empty()) throw DomainError("support_of: the zero element has no minimal region");
    return Region(pts.begin(), pts.end());
}

double diameter(const Region& y, const PointMetric& metric) {
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) d = std::max(d, metric(y[i], y[j]));
    return d;
}

KLReport kl_check(const CodeProjection& p, const std::vector<Matrix>& errors, double tol) {
    const Matrix& b = p.basis();
    const Eigen::Index k = p.rank();
    if (k == 0) throw DomainError("kl_check: code has rank 0");
    std::vector<Matrix> images;
    images.reserve(errors.size());
    for (const Matrix& e : errors) {
        if (e.rows() != p.dim() || e.cols() != p.dim()) throw DomainError("kl_check: error dimension mismatch");
        images.push_back(e * b);
    }
    KLReport report;
    const auto n = static_cast<Eigen::Index>(errors.size());
    report.lambda = Matrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const Matrix block = images[static_cast<std::size_t>(a)].adjoint() * images[static_cast<std::size_t>(c)];
            const Complex lambda = block.trace() / static_cast<double>(k);
            report.lambda(a, c) = lambda;
            const double v = operator_norm(block - lambda * Matrix::Identity(k, k));
            if (v > report.worst_violation) {
                report.worst_violation = v;
                report.worst_alpha = static_cast<std::size_t>(a);
                report.worst_beta = static_cast<std::size_t>(c);
            }
        }
    }
    report.correctable = report.worst_violation <= tol;
    return report;
}

DistanceResult code_distance_geometric(const CodeProjection& p, const std::vector<LocalizedOperator>& family,
                                       const PointMetric& metric, double tol) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) order.emplace_back(diameter(family[i].region, metric), i);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    DistanceResult out;
    for (const auto& [diam, i] : order) {
        ++out.scanned;
        if (!is_scalar_on_code(family[i].op, p, tol).scalar) {
            out.distance = diam;
            out.infinite = false;
            out.witness = family[i].label;
            return out;
        }
    }
    return out;
}

} // namespace speccode
