#include "doctest.h"
#include "helpers.hpp"
#include "speccode/errors.hpp"
#include "speccode/pauli.hpp"

using namespace speccode;

TEST_CASE("single-qubit Pauli matrices") {
    Matrix y(2, 2);
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    CHECK(testing::max_abs(pauli_dense("Y") - y) == 0.0);
    CHECK(testing::max_abs(pauli_operator(parse_pauli("Y")).dense() - y) < 1e-15);
}

TEST_CASE("Pauli strings agree with explicit tensor products") {
    for (const std::string s : {"XZ", "ZYI", "YYX", "IXZY", "ZZZZZ"}) {
        CHECK(testing::max_abs(pauli_operator(parse_pauli(s)).dense() - pauli_dense(s)) < 1e-14);
        const Matrix p = pauli_dense(s);
        CHECK(testing::max_abs(p * p - Matrix::Identity(p.rows(), p.cols())) < 1e-14);
        CHECK(testing::max_abs(p - p.adjoint()) < 1e-14);
    }
}

TEST_CASE("labels round trip") {
    for (const std::string s : {"I", "XYZ", "ZIIXY"}) CHECK(pauli_label(parse_pauli(s).u, static_cast<int>(s.size())) == s);
    CHECK(parse_pauli("XYZ").phase == Complex(0, -1));
    CHECK(parse_pauli("YY").phase == Complex(-1, 0));
}

TEST_CASE("malformed strings are rejected") {
    CHECK_THROWS_AS(parse_pauli("XQ"), DomainError);
    CHECK_THROWS_AS(parse_pauli(""), DomainError);
    CHECK_THROWS_AS(pauli_dense("A"), DomainError);
}

TEST_CASE("GF(2) rank") {
    CHECK(f2_rank({1, 2, 3}) == 2);
    CHECK(f2_rank({0b1101, 0b0110, 0b1011}) == 2);
    CHECK(f2_rank({1, 2, 4, 8}) == 4);
    CHECK(f2_rank({}) == 0);
}
