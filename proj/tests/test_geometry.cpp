#include <bit>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles/lp.hpp"
#include "speccode/code_zoo.hpp"
#include "speccode/errors.hpp"
#include "speccode/geometry.hpp"

using namespace speccode;

namespace {

Eigen::MatrixXd random_weights(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.5, 3.0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng);
    return w;
}

std::vector<std::string> labels(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

} // namespace

TEST_CASE("closed-form distance equals the LP optimum") {
    std::mt19937_64 rng(21);
    for (int n : {3, 4, 5}) {
        const Eigen::MatrixXd w = random_weights(rng, n);
        const DiscreteMetricTriple t(labels(n), w);
        const Eigen::MatrixXd all = connes_distance_matrix(t);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                const double lp = oracle::lp_distance(w, x, y);
                CHECK(connes_distance_closed(t, static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == doctest::Approx(lp).epsilon(1e-12));
                CHECK(all(x, y) == doctest::Approx(lp).epsilon(1e-12));
            }
    }
}

TEST_CASE("general solver agrees with the LP on a weighted four-point set") {
    std::mt19937_64 rng(22);
    const Eigen::MatrixXd w = random_weights(rng, 4);
    const DiscreteMetricTriple t(labels(4), w);
    const FiniteSpectralTriple triple = t.triple();
    for (const auto& [x, y] : t.pairs()) {
        const ConnesResult r = connes_distance_general(triple, t.point_state(x), t.point_state(y));
        CHECK_FALSE(r.unbounded);
        CHECK_FALSE(r.lower_bound);
        CHECK(r.distance == doctest::Approx(oracle::lp_distance(w, static_cast<int>(x), static_cast<int>(y))).epsilon(1e-4));
    }
}

TEST_CASE("Hamming cube: closed form equals the Hamming weight") {
    const AbelianGroup g = AbelianGroup::bit_vectors(3);
    const DiscreteMetricTriple t = DiscreteMetricTriple::from_group(WeightFunction::hamming(g));
    CHECK(t.pairs().size() == 28);
    CHECK(t.hilbert_dim() == 56);
    for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y) CHECK(connes_distance_closed(t, x, y) == std::popcount(x ^ y));
    CHECK(connes_distance_closed(t, "000", "111") == 3.0);
}

TEST_CASE("Dirac operator blocks and commutator norms") {
    Eigen::MatrixXd w(2, 2);
    w << 0, 2, 2, 0;
    const DiscreteMetricTriple t({"a", "b"}, w);
    const Matrix d = t.dirac().matrix();
    CHECK(std::abs(d(0, 1) - 0.5) < 1e-15);
    const FiniteSpectralTriple triple = t.triple();
    for (double n : triple.commutator_norms()) CHECK(n == doctest::Approx(0.5));
    CHECK(triple.state("a").expect(triple.generators()[0].matrix) == Complex(1.0));
}

TEST_CASE("invalid weights are rejected") {
    Eigen::MatrixXd w(2, 2);
    w << 0, 1, 2, 0;
    CHECK_THROWS_AS(DiscreteMetricTriple({"a", "b"}, w), DomainError);
    w << 0, -1, -1, 0;
    CHECK_THROWS_AS(DiscreteMetricTriple({"a", "b"}, w), DomainError);
}

TEST_CASE("a generator commuting with D makes the distance unbounded") {
    Matrix d = Matrix::Identity(2, 2);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    const FiniteSpectralTriple t(HermitianOperator(d), {{"a", a}},
                                 {State::vector_state("e0", Vector::Unit(2, 0)), State::vector_state("e1", Vector::Unit(2, 1))});
    const ConnesResult r = connes_distance_general(t, t.state("e0"), t.state("e1"));
    CHECK(r.unbounded);
}

TEST_CASE("locality of crossed-product elements") {
    const AbelianGroup g = AbelianGroup::bit_vectors(2);
    const CrossedProductElement a = CrossedProductElement::monomial(g, 0, 1);
    CHECK(local_algebra_membership(a, g, {0, 1}));
    CHECK_FALSE(local_algebra_membership(a, g, {0}));
    CHECK(support_of(a, g) == Region{0, 1});
    CHECK_THROWS_AS(support_of(CrossedProductElement(g.size()), g), DomainError);
    const PointMetric m = weight_metric(WeightFunction::hamming(g));
    CHECK(diameter({0, 3}, m) == 2.0);
    CHECK(diameter({2}, m) == 0.0);
}

TEST_CASE("Knill-Laflamme check on the bit-flip code") {
    const StabilizerCode code = stabilizer_code(std::vector<std::string>{"ZZI", "IZZ"});
    const std::vector<Matrix> flips{pauli_dense("III"), pauli_dense("XII"), pauli_dense("IXI"), pauli_dense("IIX")};
    const KLReport ok = kl_check(code.p, flips);
    CHECK(ok.correctable);
    CHECK(ok.lambda.rows() == 4);
    CHECK(testing::max_abs(ok.lambda - Matrix::Identity(4, 4)) < 1e-12);
    const KLReport bad = kl_check(code.p, {pauli_dense("XII"), pauli_dense("IXX")});
    CHECK_FALSE(bad.correctable);
    CHECK(bad.worst_violation > 0.5);
    const KLReport phase = kl_check(code.p, {pauli_dense("III"), pauli_dense("ZII")});
    CHECK_FALSE(phase.correctable);
}

TEST_CASE("geometric distance equals the W-set minimum") {
    for (const std::vector<std::string>& gens :
         {std::vector<std::string>{"ZZI", "IZZ"}, std::vector<std::string>{"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}}) {
        const StabilizerCode code = stabilizer_code(gens);
        const WeylRepresentation rep = code.representation();
        const WeightFunction wt = WeightFunction::pauli_weight(code.group());
        const DistanceResult geo = code_distance_geometric(code.p, weyl_monomial_family(rep), weight_metric(wt));
        CHECK_FALSE(geo.infinite);
        CHECK(geo.distance == code_distance_via_W(code.p, rep, wt).distance);
    }
}
