#include "doctest.h"
#include "helpers.hpp"
#include "speccode/code_zoo.hpp"
#include "speccode/errors.hpp"
#include "speccode/fluctuation.hpp"

using namespace speccode;

namespace {

// M_k(C) acting on itself by left multiplication, vectorized row-major.
Matrix left(const Matrix& a) { return kron(a, Matrix::Identity(a.rows(), a.cols())); }
Matrix right(const Matrix& b) { return kron(Matrix::Identity(b.rows(), b.cols()), b.transpose()); }

} // namespace

TEST_CASE("matrix adjoint is a real structure for left multiplication") {
    const int k = 2;
    const RealStructure j = RealStructure::matrix_adjoint(k);
    CHECK(j.square_defect() < 1e-15);
    std::mt19937_64 rng(61);
    const Matrix a = testing::random_matrix(rng, k, k);
    // J L_a J⁻¹ = R_{a*}
    CHECK(testing::max_abs(j.conjugate(left(a)) - right(a.adjoint())) < 1e-14);
    const Matrix b = testing::random_matrix(rng, k, k);
    CHECK(order_zero_defect(j, {left(a), left(b)}) < 1e-13);
    const Matrix h = testing::random_hermitian(rng, k);
    const HermitianOperator d(left(h) + right(h), 1e-12);
    CHECK(j.dirac_defect(d) < 1e-13);
    CHECK(first_order_defect(j, d, {left(a), left(b)}) < 1e-13);
}

TEST_CASE("complex conjugation") {
    const RealStructure c = RealStructure::conjugation(3);
    Vector v(3);
    v << Complex(1, 2), Complex(0, -1), Complex(3, 0);
    CHECK(testing::max_abs(c.apply(v) - v.conjugate()) == 0.0);
    Matrix nu = Matrix::Identity(2, 2);
    nu(0, 0) = 2.0;
    CHECK_THROWS_AS(RealStructure(nu, 1, 1), DomainError);
    CHECK_THROWS_AS(RealStructure(Matrix::Identity(2, 2), 0, 1), DomainError);
}

TEST_CASE("one-forms and inner fluctuations") {
    std::mt19937_64 rng(62);
    const HermitianOperator d(testing::random_hermitian(rng, 3), 1e-12);
    const Matrix a = testing::random_matrix(rng, 3, 3);
    const Matrix b = testing::random_matrix(rng, 3, 3);
    // (a[D, b])* = b*[D, a*] - [D, b*a*]
    const Matrix id = Matrix::Identity(3, 3);
    const OneForm w = one_form(d, {{a, b}, {b.adjoint(), a.adjoint()}, {-id, b.adjoint() * a.adjoint()}});
    const Matrix x = a * commutator(d.matrix(), b);
    CHECK(testing::max_abs(w.realized - x - x.adjoint()) < 1e-12);
    CHECK(w.is_self_adjoint(1e-10));
    const HermitianOperator da = inner_fluctuation(d, w);
    CHECK(testing::max_abs(da.matrix() - d.matrix() - w.realized) < 1e-12);
    const OneForm not_sa = one_form(d, {{a, b}});
    CHECK_THROWS_AS(inner_fluctuation(d, not_sa), DomainError);
    CHECK_THROWS_AS(one_form(d, {{Matrix::Identity(2, 2), Matrix::Identity(2, 2)}}), DomainError);
}

TEST_CASE("gauge covariance of the fluctuated Dirac operator") {
    const int k = 2;
    std::mt19937_64 rng(63);
    const RealStructure j = RealStructure::matrix_adjoint(k);
    const Matrix h = testing::random_hermitian(rng, k);
    const HermitianOperator d(left(h) + right(h), 1e-12);
    const Matrix a = left(testing::random_matrix(rng, k, k));
    const Matrix b = left(testing::random_matrix(rng, k, k));
    const Matrix id = Matrix::Identity(k * k, k * k);
    const OneForm form = one_form(d, {{a, b}, {b.adjoint(), a.adjoint()}, {-id, b.adjoint() * a.adjoint()}});
    const Matrix u = left(testing::random_unitary(rng, k));
    const OneForm moved = gauge_transform(form, u, d);
    CHECK(moved.is_self_adjoint(1e-10));
    const Matrix w = gauge_unitary(u, j);
    const Matrix lhs = inner_fluctuation(d, moved, j).matrix();
    const Matrix rhs = w * inner_fluctuation(d, form, j).matrix() * w.adjoint();
    CHECK(testing::max_abs(lhs - rhs) < 1e-10);
    CHECK_THROWS_AS(gauge_transform(form, 2.0 * u, d), DomainError);
}

TEST_CASE("code-preserving perturbations") {
    const StabilizerCode code = stabilizer_code(std::vector<std::string>{"ZZI", "IZZ"});
    const Matrix q = Matrix::Identity(8, 8) - code.p.matrix();
    for (double lambda : {0.0, 0.5, 3.0}) {
        const PerturbationResult r = perturb_code_preserving(*code.d_c, {HermitianOperator(q), code.p, 1.0}, lambda);
        CHECK(r.spectrum.gap == doctest::Approx(2.0 + lambda).epsilon(1e-12));
        CHECK(r.kernel_agreement < 1e-10);
        CHECK(r.gap_bound_holds);
    }
    const HermitianOperator x(pauli_dense("XII"));
    CHECK_THROWS_AS(validate_perturbation({x, code.p, 1.0}), DomainError);
    CHECK_THROWS_AS(validate_perturbation({HermitianOperator(Matrix::Identity(8, 8)), code.p, 1.0}), DomainError);
    CHECK_THROWS_AS(validate_perturbation({HermitianOperator(q), code.p, 2.0}), DomainError);
    CHECK_THROWS_AS(perturb_code_preserving(*code.d_c, {HermitianOperator(q), code.p, 1.0}, -1.0), DomainError);
}

TEST_CASE("k(lambda)") {
    CHECK(k_lambda({0.1, 0.2}, 1.0, 2.0, 1.0, 0.0) == doctest::Approx(0.05 * 1.25));
    CHECK(k_lambda({0.1, 0.2}, 1.0, 2.0, 1.0, 2.0) == doctest::Approx(0.05 * (1.0 + 1.0 / 16.0)));
    double prev = 1.0;
    for (double l : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double v = k_lambda({0.1, 0.2}, 1.0, 2.0, 1.0, l);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("leakage and gap sweep") {
    const StabilizerCode code = stabilizer_code(std::vector<std::string>{"ZZI", "IZZ"});
    const SweepReport n = leakage_gap_sweep(*code.d_c, pauli_dense("XII"), 0.01, {0.0, 1.0, 2.0, 4.0});
    REQUIRE(n.rows.size() == 4);
    for (const SweepRow& r : n.rows) {
        CHECK(r.gap == doctest::Approx(2.0 + r.lambda));
        CHECK(r.comm_norm == doctest::Approx(2.0));
        CHECK(r.leak_literal == doctest::Approx(0.01));
    }
    CHECK(n.fitted_exponent == doctest::Approx(-1.0));
    const SweepReport raw = leakage_gap_sweep(*code.d_c, pauli_dense("XII"), 0.01, {0.0, 1.0, 2.0, 4.0}, false);
    // Without rescaling ‖[D_λ, X₁]‖ grows with λ as fast as the gap.
    CHECK(raw.rows.back().comm_norm == doctest::Approx(6.0));
    CHECK(raw.fitted_exponent == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(leakage_gap_sweep(*code.d_c, pauli_dense("XII"), 0.01, {}), DomainError);
}
