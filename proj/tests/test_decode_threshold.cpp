#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "speccode/code_zoo.hpp"
#include "speccode/decode_threshold.hpp"
#include "speccode/errors.hpp"

using namespace speccode;

namespace {

// ⟨Φ|(E ⊗ id)(|Φ⟩⟨Φ|)|Φ⟩ for the purification Φ = Σ √λ_i |v_i⟩|i⟩ of σ.
double fidelity_by_purification(const Matrix& sigma, const std::vector<Matrix>& kraus) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    const Eigen::Index d = sigma.rows();
    Vector phi = Vector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double l = std::max(es.eigenvalues()(i), 0.0);
        phi += std::sqrt(l) * kron(es.eigenvectors().col(i), Vector::Unit(d, i));
    }
    double f = 0.0;
    for (const Matrix& k : kraus) f += std::norm(phi.dot(kron(k, Matrix::Identity(d, d)) * phi));
    return f;
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const Matrix& k : kraus) out += k * rho * k.adjoint();
    return out;
}

StabilizerCode bit_flip_code() { return stabilizer_code(std::vector<std::string>{"ZZI", "IZZ"}); }

NoiseFamily single_flips() {
    return NoiseFamily::linear({pauli_dense("XII"), pauli_dense("IXI"), pauli_dense("IIX")}, "single flips");
}

} // namespace

TEST_CASE("Kraus channels certify trace preservation") {
    Matrix half = Matrix::Identity(2, 2) / std::sqrt(2.0);
    CHECK_NOTHROW(KrausChannel({half, half}, "mix"));
    CHECK_THROWS_AS(KrausChannel({half}, "lossy"), DomainError);
    CHECK_THROWS_AS(KrausChannel({}, "empty"), DomainError);
    CHECK(KrausChannel::identity(3).trace_defect() == 0.0);
}

TEST_CASE("apply_channel validates its input state") {
    const KrausChannel id = KrausChannel::identity(2);
    Matrix rho = Matrix::Identity(2, 2) / 2.0;
    CHECK(testing::max_abs(apply_channel(id, rho) - rho) < 1e-15);
    CHECK_THROWS_AS(apply_channel(id, Matrix::Identity(2, 2)), DomainError);
    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(apply_channel(id, neg), DomainError);
}

TEST_CASE("linear noise family") {
    const NoiseFamily n = single_flips();
    CHECK(n.theta_max() == doctest::Approx(1.0 / 3.0));
    const KrausChannel e = n.at(0.1);
    CHECK(e.kraus().size() == 4);
    CHECK(e.trace_defect() < 1e-12);
    CHECK_THROWS_AS(static_cast<void>(n.at(0.5)), DomainError);
    CHECK_THROWS_AS(static_cast<void>(n.at(-0.1)), DomainError);
}

TEST_CASE("independent flips match the product of single-qubit channels") {
    const NoiseFamily n = NoiseFamily::independent_flips(2);
    const double t = 0.2;
    const KrausChannel e = n.at(t);
    CHECK(e.kraus().size() == 4);
    std::mt19937_64 rng(51);
    const Matrix a = testing::random_matrix(rng, 4, 4);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    const Matrix x1 = pauli_dense("XI"), x2 = pauli_dense("IX");
    const Matrix step = (1 - t) * rho + t * x1 * rho * x1;
    const Matrix expect = (1 - t) * step + t * x2 * step * x2;
    CHECK(testing::max_abs(apply_channel(e, rho) - expect) < 1e-12);
}

TEST_CASE("entanglement fidelity agrees with the purification formula") {
    std::mt19937_64 rng(52);
    const CodeProjection p = CodeProjection::from_isometry(testing::random_isometry(rng, 4, 2));
    const Matrix sigma = code_state(p);
    const Matrix e1 = testing::random_matrix(rng, 4, 4);
    const NoiseFamily n = NoiseFamily::linear({e1 / operator_norm(e1)}, "random");
    const KrausChannel ch = n.at(0.3);
    CHECK(entanglement_fidelity(sigma, ch) == doctest::Approx(fidelity_by_purification(sigma, ch.kraus())).epsilon(1e-12));
    CHECK(entanglement_fidelity(sigma, KrausChannel::identity(4)) == doctest::Approx(1.0));
}

TEST_CASE("Petz recovery is exact for a correctable family") {
    const StabilizerCode code = bit_flip_code();
    const Matrix sigma = code_state(code.p);
    for (double t : {0.01, 0.05, 0.1, 0.3}) {
        const KrausChannel e = single_flips().at(t);
        const KrausChannel r = petz_recovery(sigma, e);
        CHECK(r.support().has_value());
        CHECK(r.trace_defect() < 1e-8);
        CHECK(entanglement_fidelity(sigma, compose(r, e)) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(residual_error_T(sigma, code.p, single_flips(), t, Decoder::Petz) < 1e-10);
    }
}

TEST_CASE("Petz recovery inverts the channel on the reference state") {
    std::mt19937_64 rng(53);
    const Matrix a = testing::random_matrix(rng, 3, 3);
    Matrix sigma = a * a.adjoint();
    sigma /= sigma.trace();
    const Matrix e1 = testing::random_matrix(rng, 3, 3);
    const KrausChannel e = NoiseFamily::linear({e1 / operator_norm(e1)}, "random").at(0.4);
    const Matrix image = apply_kraus(e.kraus(), sigma);
    CHECK(testing::max_abs(apply_kraus(petz_recovery(sigma, e).kraus(), image) - sigma) < 1e-10);
}

TEST_CASE("conditional expectation") {
    std::mt19937_64 rng(54);
    const Matrix a = testing::random_matrix(rng, 2, 2);
    const Matrix b = testing::random_matrix(rng, 3, 3);
    const Factorization f{2, 3};
    CHECK(testing::max_abs(conditional_expectation(kron(a, b), f) - a * (b.trace() / 3.0)) < 1e-12);
    const KrausChannel ch = conditional_expectation_channel(f);
    Matrix rho = kron(a * a.adjoint(), b * b.adjoint());
    rho /= rho.trace();
    const Matrix out = apply_channel(ch, rho);
    const Matrix expect = kron(partial_trace(rho, {2, 3}, TraceOut::Second), Matrix::Identity(3, 3) / 3.0);
    CHECK(testing::max_abs(out - expect) < 1e-12);
    CHECK_THROWS_AS(conditional_expectation(Matrix::Identity(5, 5), f), DomainError);
}

TEST_CASE("poor decoder Kraus form matches its defining formula") {
    std::mt19937_64 rng(55);
    const CodeProjection p = CodeProjection::from_isometry(testing::random_isometry(rng, 5, 2));
    const KrausChannel ch = poor_decoder_channel(p);
    CHECK(ch.trace_defect() < 1e-12);
    const Matrix a = testing::random_matrix(rng, 5, 5);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    CHECK(testing::max_abs(apply_channel(ch, rho) - poor_decoder(p, rho)) < 1e-12);
}

TEST_CASE("poor-decoder expansion is exact for the X1 family") {
    const StabilizerCode code = bit_flip_code();
    const NoiseFamily n = NoiseFamily::linear({pauli_dense("XII")}, "X1");
    const ExpansionReport r = verify_poor_decoder_expansion(code.p, n, {1e-4, 1e-3, 1e-2});
    CHECK(r.vanishing);
    CHECK(r.certified);
    CHECK(r.variance_sum == doctest::Approx(0.0));
    // Leakage is θ and the residual is (1 - 1/4) θ.
    CHECK(r.t_tilde[2] == doctest::Approx(0.75e-2).epsilon(1e-10));
    CHECK(r.leakage[2] == doctest::Approx(1e-2).epsilon(1e-10));
    CHECK_THROWS_AS(verify_poor_decoder_expansion(code.p, n, {1e-3, 0.05}), DomainError);
}

TEST_CASE("poor-decoder remainder is second order for random codes") {
    std::mt19937_64 rng(56);
    const CodeProjection p = CodeProjection::from_isometry(testing::random_isometry(rng, 8, 2));
    std::vector<Matrix> errors;
    for (int i = 0; i < 3; ++i) {
        const Matrix e = testing::random_matrix(rng, 8, 8);
        errors.push_back(e / operator_norm(e));
    }
    const ExpansionReport r = verify_poor_decoder_expansion(p, NoiseFamily::linear(errors, "random"), {1e-4, 1e-3, 1e-2});
    CHECK_FALSE(r.vanishing);
    CHECK(r.slope >= 1.9);
    CHECK(r.variance_sum == doctest::Approx(poor_decoder_variance(p, errors)));
}

TEST_CASE("PetzThenExpectation needs a factorization") {
    const StabilizerCode code = bit_flip_code();
    const Matrix sigma = code_state(code.p);
    CHECK_THROWS_AS(residual_error_T(sigma, code.p, single_flips(), 0.01, Decoder::PetzThenExpectation), DomainError);
    const double t = residual_error_T(sigma, code.p, single_flips(), 0.01, Decoder::PetzThenExpectation, Factorization{2, 4});
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
}

TEST_CASE("threshold fit recovers synthetic coefficients") {
    std::vector<double> th, s;
    for (int i = 1; i <= 6; ++i) {
        th.push_back(0.01 * i);
        s.push_back(0.3 * th.back() + 5.0 * th.back() * th.back());
    }
    const ThresholdReport r = threshold_estimate(th, s, 0.1);
    CHECK(r.k == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(r.gamma == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(r.theta_th == doctest::Approx(0.14).epsilon(1e-9));
    CHECK(r.monotone);
    CHECK_FALSE(r.clipped);
}

TEST_CASE("threshold fit clips negative coefficients and handles the edge cases") {
    std::vector<double> th{0.01, 0.02, 0.03, 0.04}, s;
    for (double t : th) s.push_back(-0.1 * t + 3.0 * t * t);
    const ThresholdReport r = threshold_estimate(th, s, 0.01);
    CHECK(r.clipped);
    CHECK(r.k == 0.0);
    CHECK(r.gamma > 0.0);

    std::vector<double> zero(4, 0.0);
    const ThresholdReport z = threshold_estimate(th, zero, 0.05);
    CHECK(std::isinf(z.theta_th));
    CHECK(z.monotone);

    std::vector<double> big;
    for (double t : th) big.push_back(1.5 * t);
    CHECK(threshold_estimate(th, big, 0.01).theta_th == 0.0);

    CHECK_THROWS_AS(threshold_estimate({0.01}, {0.0}, 0.01), DomainError);
    CHECK_THROWS_AS(threshold_estimate({0.01, 0.02, 0.03, 0.2}, zero, 0.01), DomainError);
}

TEST_CASE("gap bounds on the bit-flip code") {
    const StabilizerCode code = bit_flip_code();
    const auto bounds = gap_commutator_bounds(*code.d_c, {pauli_dense("XII"), pauli_dense("ZII")});
    CHECK(bounds[0].chain_holds);
    CHECK(bounds[0].gap == doctest::Approx(2.0));
    CHECK(bounds[0].leak_norm == doctest::Approx(1.0));
    CHECK(bounds[0].comm_d == doctest::Approx(2.0));
    CHECK(bounds[0].comm_p == doctest::Approx(1.0));
    // Z commutes with D, so it neither leaks nor has a finite ratio.
    CHECK(bounds[1].comm_d == doctest::Approx(0.0));
    CHECK(bounds[1].c_emp == 0.0);
    CHECK_THROWS_AS(gap_commutator_bounds(HermitianOperator(Matrix::Identity(2, 2)), {}), DomainError);
}
