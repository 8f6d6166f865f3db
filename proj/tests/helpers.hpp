#pragma once

#include <random>

#include "speccode/operator_core.hpp"

namespace testing {

inline speccode::Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    speccode::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = speccode::Complex(n(rng), n(rng));
    return m;
}

inline speccode::Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
    const speccode::Matrix a = random_matrix(rng, dim, dim);
    return 0.5 * (a + a.adjoint());
}

inline speccode::Matrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
    Eigen::HouseholderQR<speccode::Matrix> qr(random_matrix(rng, dim, dim));
    return qr.householderQ() * speccode::Matrix::Identity(dim, dim);
}

inline speccode::Matrix random_isometry(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    return random_unitary(rng, rows).leftCols(cols);
}

inline double max_abs(const speccode::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing
