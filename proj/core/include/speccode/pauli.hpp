#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speccode/crossed_product.hpp"

namespace speccode {

/// Pauli product such as "XZZXI" as phase · U_(p|q) in the Pauli
/// representation. The phase (-i)^{#Y} makes the operator equal to the
/// Kronecker product of the named single-qubit matrices.
struct PauliString {
    int n = 0;
    AbelianGroup::Element u = 0;
    Complex phase{1.0, 0.0};
};

PauliString parse_pauli(const std::string& text);
/// "IXYZ" spelling of (p|q); ignores phases.
std::string pauli_label(AbelianGroup::Element u, int n);

MonomialMatrix pauli_operator(const PauliString& s);
/// Dense Kronecker product of single-qubit matrices.
Matrix pauli_dense(const std::string& text);

/// Rank over F2 of bit-mask rows.
int f2_rank(std::vector<std::uint64_t> rows);

} // namespace speccode
