#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "speccode/errors.hpp"
#include "speccode/toeplitz.hpp"

using namespace speccode;

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int p, int k) { return std::exp(std::lgamma(p + 1.0) - std::lgamma(k + 1.0) - std::lgamma(p - k + 1.0)); }

// ⟨ψ_k| z |ψ_k⟩ from Beta integrals.
double tz_oracle(int p, int k) {
    return (p + 1) * binom(p, k) * (std::beta(k + 1.0, p - k + 1.0) - 2.0 * std::beta(k + 2.0, p - k + 1.0));
}

// ⟨ψ_{k+1}| x |ψ_k⟩ from Beta integrals.
double tx_oracle(int p, int k) {
    return (p + 1) * std::sqrt(binom(p, k + 1) * binom(p, k)) * std::beta(k + 2.0, p - k + 1.0);
}

} // namespace

TEST_CASE("sections are orthonormal under the quadrature") {
    for (int p : {1, 4, 16, 40}) {
        const ToeplitzQuantizer q = build_quantizer(p, p + 4);
        CHECK(q.gram_defect() < 1e-10);
        CHECK(q.size() == p + 1);
        CHECK(testing::max_abs(toeplitz_matrix(q, SphereFunction::constant(1.0)) - Matrix::Identity(p + 1, p + 1)) < 1e-10);
    }
    CHECK_THROWS_AS(build_quantizer(8, 10), DomainError);
    CHECK_THROWS_AS(build_quantizer(0, 8), DomainError);
}

TEST_CASE("coordinate operators match Beta-integral matrix elements") {
    const int p = 6;
    const ToeplitzQuantizer q = build_quantizer(p, p + 8);
    const Matrix tz = toeplitz_matrix(q, SphereFunction::z());
    const Matrix tx = toeplitz_matrix(q, SphereFunction::x());
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k <= p; ++k) {
            const double z = j == k ? tz_oracle(p, k) : 0.0;
            CHECK(std::abs(tz(j, k) - z) < 1e-12);
            double x = 0.0;
            if (j == k + 1) x = tx_oracle(p, k);
            if (k == j + 1) x = tx_oracle(p, j);
            CHECK(std::abs(tx(j, k) - x) < 1e-12);
        }
    // Closed form of the diagonal: (p - 2k)/(p + 2).
    for (int k = 0; k <= p; ++k) CHECK(tz_oracle(p, k) == doctest::Approx((p - 2.0 * k) / (p + 2.0)));
}

TEST_CASE("su(2) commutation relation") {
    for (int p : {3, 10, 24}) {
        const ToeplitzQuantizer q = build_quantizer(p, p + 8);
        const Matrix tx = toeplitz_matrix(q, SphereFunction::x());
        const Matrix ty = toeplitz_matrix(q, SphereFunction::y());
        const Matrix tz = toeplitz_matrix(q, SphereFunction::z());
        CHECK(testing::max_abs(commutator(tx, ty) - Complex(0.0, -2.0 / (p + 2.0)) * tz) < 1e-12);
    }
}

TEST_CASE("calibration recovers s_p = 2p/(p+2)") {
    const Calibration c = calibrate({8, 16, 32});
    for (std::size_t i = 0; i < c.ps.size(); ++i) {
        const double p = c.ps[i];
        CHECK(c.per_p[i] == doctest::Approx(2.0 * p / (p + 2.0)).epsilon(1e-10));
    }
    CHECK(c.s_inf == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("sphere functions and brackets") {
    const SphereFunction x = SphereFunction::x(), y = SphereFunction::y(), z = SphereFunction::z();
    for (double t : {0.3, 1.1, 2.5})
        for (double f : {0.0, 0.7, 4.0}) {
            CHECK(poisson_bracket(x, y, t, f) == doctest::Approx(-z(t, f)).epsilon(1e-12));
            CHECK(poisson_bracket(y, z, t, f) == doctest::Approx(-x(t, f)).epsilon(1e-12));
            // Finite-difference gradients agree with the analytic ones.
            const SphereFunction fd("fd", [](double a, double b) { return std::sin(a) * std::cos(b) * std::cos(a); });
            const SphereFunction xz = SphereFunction::parse("x*z");
            const Vec3 g1 = fd.gradient(t, f), g2 = xz.gradient(t, f);
            for (int i = 0; i < 3; ++i) CHECK(g1[static_cast<std::size_t>(i)] == doctest::Approx(g2[static_cast<std::size_t>(i)]).epsilon(1e-6));
        }
    const SphereFunction s = SphereFunction::parse("2*x*y^2");
    CHECK(s(1.0, 0.5) == doctest::Approx(2.0 * x(1.0, 0.5) * std::pow(y(1.0, 0.5), 2)));
    CHECK_THROWS_AS(SphereFunction::parse("w"), DomainError);
    CHECK_THROWS_AS(SphereFunction::parse("x^"), DomainError);
    CHECK_THROWS_AS(SphereFunction::parse("x**y"), DomainError);
    CHECK(sup_norm(z) == doctest::Approx(1.0));
    CHECK(sup_norm(SphereFunction::parse("x*y")) == doctest::Approx(0.5).epsilon(1e-4));
    const SphereFunction north = SphereFunction::parse("bump_north");
    CHECK(north(kPi / 6, 0.0) == doctest::Approx(1.0));
    CHECK(north(kPi / 2, 0.0) == 0.0);
}

TEST_CASE("quadrature integrates polynomials exactly") {
    const ToeplitzQuantizer q = build_quantizer(8, 16);
    CHECK(q.integrate(SphereFunction::constant(1.0)) == doctest::Approx(4 * kPi));
    CHECK(q.integrate(SphereFunction::parse("z^2")) == doctest::Approx(4 * kPi / 3));
    CHECK(q.integrate(SphereFunction::parse("x*y")) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("axiom table for f = g = z") {
    const AxiomTable t = verify_axioms({8, 16, 32}, SphereFunction::z(), SphereFunction::z());
    REQUIRE(t.rows.size() == 3);
    for (const AxiomRow& r : t.rows) {
        // T(z)² - T(z²) is exactly diagonal with largest entry 1/(p+3).
        CHECK(r.delta1 == doctest::Approx(1.0 / (r.p + 3.0)).epsilon(1e-9));
        CHECK(r.delta2 < 1e-12);
        CHECK(r.delta3 < 1e-12);
        CHECK(r.delta4 == doctest::Approx(2.0 / (r.p + 2.0)).epsilon(1e-9));
    }
    CHECK(t.slope1 < -0.8);
    CHECK_THROWS_AS(verify_axioms({8, 16}, SphereFunction::z(), SphereFunction::z()), DomainError);
    CHECK_THROWS_AS(verify_axioms({16, 8, 32}, SphereFunction::z(), SphereFunction::z()), DomainError);
}

TEST_CASE("first-order coefficient of the star product") {
    const Calibration c = calibrate({8, 16, 32});
    double prev = std::numeric_limits<double>::infinity();
    for (int p : {8, 16, 32}) {
        const ToeplitzQuantizer q = build_quantizer(p, p + 8).with_hbar(c.s_inf / p);
        const double e = verify_c1(q, SphereFunction::x(), SphereFunction::y());
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("disjoint bumps become approximately orthogonal") {
    const SphereFunction north = SphereFunction::parse("bump_north");
    const SphereFunction south = SphereFunction::parse("bump_south");
    double prev = 1.0;
    for (int p : {4, 8, 16}) {
        const KLApprox k = kl_approx_check(build_quantizer(p, bump_order(p)), north, south);
        CHECK(k.defect < prev);
        CHECK(std::abs(k.lambda) < 1e-2);
        prev = k.defect;
    }
}
