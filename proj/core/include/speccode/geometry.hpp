#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "speccode/group.hpp"
#include "speccode/operator_core.hpp"

namespace speccode {

/// Sorted set of point indices.
using Region = std::vector<std::size_t>;

/// Distance between two points, looked up by index.
using PointMetric = std::function<double(std::size_t, std::size_t)>;

/// d(x, y) = wt(x - y).
PointMetric weight_metric(const WeightFunction& weight);

struct NamedMatrix {
    std::string name;
    Matrix matrix;
};

/// Density matrix with a label; ω(a) = tr(ρ a).
struct State {
    std::string label;
    Matrix rho;

    static State vector_state(std::string label, const Vector& v);
    [[nodiscard]] Complex expect(const Matrix& a) const;
};

class FiniteSpectralTriple {
public:
    FiniteSpectralTriple(HermitianOperator dirac, std::vector<NamedMatrix> generators, std::vector<State> states = {});

    [[nodiscard]] Eigen::Index hilbert_dim() const { return dirac_.dim(); }
    [[nodiscard]] const HermitianOperator& dirac() const { return dirac_; }
    [[nodiscard]] const std::vector<NamedMatrix>& generators() const { return generators_; }
    [[nodiscard]] const std::vector<State>& states() const { return states_; }
    [[nodiscard]] const State& state(const std::string& label) const;

    /// ‖[D, a]‖ for every generator, in order.
    [[nodiscard]] std::vector<double> commutator_norms() const;

private:
    HermitianOperator dirac_;
    std::vector<NamedMatrix> generators_;
    std::vector<State> states_;
};

/// Points with positive weights on pairs, realized by one 2x2 block per
/// unordered pair with off-diagonal entry 1/weight(x, y).
class DiscreteMetricTriple {
public:
    /// `weights` must be symmetric with zero diagonal and positive entries
    /// off the diagonal.
    DiscreteMetricTriple(std::vector<std::string> labels, Eigen::MatrixXd weights);

    /// Points of the group with weight(x, y) = wt(x - y).
    static DiscreteMetricTriple from_group(const WeightFunction& weight);

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }
    [[nodiscard]] std::size_t index_of(const std::string& label) const;

    /// Pairs (x, y), x < y, in block order.
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
    [[nodiscard]] Eigen::Index hilbert_dim() const { return static_cast<Eigen::Index>(2 * pairs().size()); }

    [[nodiscard]] HermitianOperator dirac() const;
    /// Diagonal action of f : points → C on the block space.
    [[nodiscard]] Matrix represent_function(const Vector& f) const;
    /// Vector state evaluating functions at point x.
    [[nodiscard]] State point_state(std::size_t x) const;

    /// Triple whose generators are the point indicators and whose states are
    /// the point evaluations.
    [[nodiscard]] FiniteSpectralTriple triple() const;

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd weights_;
};

/// Shortest-path closure of the pairwise caps |f(x) - f(y)| ≤ weight(x, y).
double connes_distance_closed(const DiscreteMetricTriple& t, std::size_t x, std::size_t y);
double connes_distance_closed(const DiscreteMetricTriple& t, const std::string& x, const std::string& y);
/// All pairs at once.
Eigen::MatrixXd connes_distance_matrix(const DiscreteMetricTriple& t);

struct ConnesOptions {
    int restarts = 5;
    int iterations = 2000;
    std::uint64_t seed = 11;
    /// Relative disagreement between restarts above which the result is a
    /// lower bound only.
    double agreement_tol = 1e-4;
};

struct ConnesResult {
    double distance = 0.0;
    bool lower_bound = false;
    bool unbounded = false;
    std::vector<double> restart_values;
    /// Optimal a in terms of the original generators' self-adjoint parts.
    Matrix optimizer;
    int basis_size = 0;
};

/// sup |ω₁(a) - ω₂(a)| over self-adjoint a in the span of the generators with
/// ‖[D, a]‖ ≤ 1, by ratio ascent on a smoothed spectral norm.
ConnesResult connes_distance_general(const FiniteSpectralTriple& t, const State& w1, const State& w2,
                                     const ConnesOptions& options = {});

/// True iff supp(f_u) ⊆ Y ∩ (Y + u) for every term.
bool local_algebra_membership(const CrossedProductElement& a, const AbelianGroup& g, const Region& y);

/// ⋃_u supp(f_u) ∪ (supp(f_u) - u). Throws DomainError on a = 0.
Region support_of(const CrossedProductElement& a, const AbelianGroup& g, double tol = 0.0);

/// Largest pairwise distance; 0 for regions with fewer than two points.
double diameter(const Region& y, const PointMetric& metric);

struct KLReport {
    bool correctable = false;
    Matrix lambda;
    double worst_violation = 0.0;
    std::size_t worst_alpha = 0;
    std::size_t worst_beta = 0;
};

/// λ_{αβ} = tr(P E_α† E_β P)/rank and the worst ‖P E_α† E_β P - λ_{αβ} P‖.
KLReport kl_check(const CodeProjection& p, const std::vector<Matrix>& errors, double tol = kScalarTolerance);

/// Operator with a region in the point set it is localized on.
struct LocalizedOperator {
    std::string label;
    Matrix op;
    Region region;
};

struct DistanceResult {
    double distance = std::numeric_limits<double>::infinity();
    bool infinite = true;
    std::string witness;
    std::size_t scanned = 0;
};

/// min diameter(region) over operators acting non-scalar on the code.
DistanceResult code_distance_geometric(const CodeProjection& p, const std::vector<LocalizedOperator>& family,
                                       const PointMetric& metric, double tol = kScalarTolerance);

} // namespace speccode
