#include "speccode/pauli.hpp"

#include <algorithm>

#include "speccode/errors.hpp"

namespace speccode {

PauliString parse_pauli(const std::string& text) {
    PauliString s;
    s.n = static_cast<int>(text.size());
    if (s.n == 0 || s.n > 20) throw DomainError("parse_pauli: length must be between 1 and 20");
    int ys = 0;
    for (int i = 0; i < s.n; ++i) {
        std::size_t p = 0, q = 0;
        switch (text[static_cast<std::size_t>(i)]) {
        case 'I': break;
        case 'X': p = 1; break;
        case 'Z': q = 1; break;
        case 'Y': p = q = 1; ++ys; break;
        default: throw DomainError("parse_pauli: unexpected character in '" + text + "'");
        }
        s.u |= p << i;
        s.u |= q << (s.n + i);
    }
    // Y = -i Z X
    static const Complex powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    s.phase = powers[ys % 4];
    return s;
}

std::string pauli_label(AbelianGroup::Element u, int n) {
    std::string out(static_cast<std::size_t>(n), 'I');
    for (int i = 0; i < n; ++i) {
        const bool p = (u >> i) & 1u;
        const bool q = (u >> (n + i)) & 1u;
        out[static_cast<std::size_t>(i)] = p ? (q ? 'Y' : 'X') : (q ? 'Z' : 'I');
    }
    return out;
}

MonomialMatrix pauli_operator(const PauliString& s) {
    const AbelianGroup g = AbelianGroup::symplectic(s.n);
    return WeylRepresentation::pauli(Cocycle::one_sided_symplectic(g)).weyl(s.u).scaled(s.phase);
}

Matrix pauli_dense(const std::string& text) {
    Matrix out = Matrix::Identity(1, 1);
    for (char c : text) {
        Matrix m(2, 2);
        switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw DomainError("pauli_dense: unexpected character in '" + text + "'");
        }
        out = kron(out, m);
    }
    return out;
}

int f2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint64_t r) { return r & mask; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != static_cast<std::size_t>(rank) && (rows[i] & mask)) rows[i] ^= rows[static_cast<std::size_t>(rank)];
        }
        ++rank;
    }
    return rank;
}

} // namespace speccode
