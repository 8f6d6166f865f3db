#include "speccode/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "speccode/errors.hpp"

namespace speccode {

HermitianOperator::HermitianOperator(const Matrix& entries, double rel_tol) {
    if (entries.rows() != entries.cols() || entries.rows() == 0) {
        throw DomainError("HermitianOperator: matrix must be square and nonempty");
    }
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > rel_tol * scale) {
        std::ostringstream msg;
        msg << "HermitianOperator: max |H - H^dagger| = " << asym << " exceeds tolerance "
            << rel_tol * scale;
        throw DomainError(msg.str());
    }
    m_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
    return HermitianOperator(Matrix(values.cast<Complex>().asDiagonal()));
}

int SpectrumReport::dim() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

double zero_threshold(double operator_norm) {
    return 1e-9 * std::max(1.0, operator_norm);
}

SpectrumReport summarize_spectrum(const RealVector& values, double threshold) {
    SpectrumReport report;
    report.zero_threshold = threshold;
    report.gap = 0.0;
    bool have_gap = false;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        if (std::abs(v) <= threshold) {
            ++report.kernel_dim;
        } else if (!have_gap || std::abs(v) < report.gap) {
            report.gap = std::abs(v);
            have_gap = true;
        }
        // Levels are anchored at their first member so long runs of nearly
        // equal values do not drift.
        if (!report.levels.empty() && std::abs(v - report.levels.back()) <= threshold) {
            ++report.multiplicities.back();
        } else {
            report.levels.push_back(v);
            report.multiplicities.push_back(1);
        }
    }
    // Representative value per level: the mean of its members.
    Eigen::Index offset = 0;
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        const int m = report.multiplicities[l];
        report.levels[l] = values.segment(offset, m).mean();
        offset += m;
    }
    return report;
}

Eigensystem eigh(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigh: eigensolver failed to converge");
    }
    Eigensystem out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    const double norm = out.values.size() ? out.values.cwiseAbs().maxCoeff() : 0.0;
    out.report = summarize_spectrum(out.values, zero_threshold(norm));
    return out;
}

CodeProjection CodeProjection::from_matrix(const Matrix& p) {
    if (p.rows() != p.cols() || p.rows() == 0) {
        throw DomainError("CodeProjection: matrix must be square and nonempty");
    }
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("CodeProjection: matrix is not Hermitian within 1e-10");
    }
    if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("CodeProjection: matrix is not idempotent within 1e-10");
    }
    const double trace = p.trace().real();
    const double rank = std::round(trace);
    if (std::abs(trace - rank) > 1e-8) {
        throw DomainError("CodeProjection: trace is not an integer within 1e-8");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (p + p.adjoint()));
    const auto r = static_cast<Eigen::Index>(rank);
    // Eigenvalues ascend, so the unit eigenvalues are the trailing block.
    return CodeProjection(solver.eigenvectors().rightCols(r));
}

CodeProjection CodeProjection::from_isometry(const Matrix& basis) {
    if (basis.cols() > 0) {
        const Matrix gram = basis.adjoint() * basis;
        const double defect =
            (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
        if (defect > 1e-10) {
            std::ostringstream msg;
            msg << "CodeProjection: basis columns not orthonormal (defect " << defect << ")";
            throw DomainError(msg.str());
        }
    }
    return CodeProjection(basis);
}

CodeProjection CodeProjection::identity(Eigen::Index dim) {
    return CodeProjection(Matrix::Identity(dim, dim));
}

Matrix CodeProjection::compress(const Matrix& x) const {
    return basis_.adjoint() * x * basis_;
}

CodeProjection spectral_projection(const Eigensystem& eig, Interval interval) {
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || interval.lo > interval.hi) {
        throw DomainError("spectral_projection: interval must be finite with lo <= hi");
    }
    const double thr = eig.report.zero_threshold;
    std::vector<Eigen::Index> picked;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double v = eig.values(i);
        if (v >= interval.lo - thr && v <= interval.hi + thr) picked.push_back(i);
    }
    Matrix basis(eig.vectors.rows(), static_cast<Eigen::Index>(picked.size()));
    for (std::size_t c = 0; c < picked.size(); ++c) {
        basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(picked[c]);
    }
    return CodeProjection::from_isometry(basis);
}

CodeProjection spectral_projection(const HermitianOperator& h, Interval interval) {
    return spectral_projection(eigh(h), interval);
}

CodeProjection kernel_projection(const HermitianOperator& h) {
    return spectral_projection(h, Interval{0.0, 0.0});
}

ScalarTest is_scalar_compressed(const Matrix& compressed, double x_norm, double tol) {
    const Eigen::Index r = compressed.rows();
    if (r == 0) throw DomainError("is_scalar_on_code: code projection has rank 0");
    ScalarTest out;
    out.lambda = compressed.trace() / static_cast<double>(r);
    out.defect = operator_norm(compressed - out.lambda * Matrix::Identity(r, r));
    out.scalar = out.defect <= tol * std::max(1.0, x_norm);
    return out;
}

ScalarTest is_scalar_on_code(const Matrix& x, const CodeProjection& p, double tol) {
    if (p.rank() == 0) throw DomainError("is_scalar_on_code: code projection has rank 0");
    if (x.rows() != p.dim() || x.cols() != p.dim()) {
        throw DomainError("is_scalar_on_code: operator and projection dimensions differ");
    }
    // With P = B B† and B an isometry, ‖PXP - λP‖ = ‖B†XB - λ I‖.
    return is_scalar_compressed(p.compress(x), operator_norm(x), tol);
}

double operator_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    if (x.rows() == 1 || x.cols() == 1) return x.norm();
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues()(0);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    return a * b - b * a;
}

Matrix partial_trace(const Matrix& x, std::pair<Eigen::Index, Eigen::Index> dims, TraceOut which) {
    const auto [da, db] = dims;
    if (da <= 0 || db <= 0 || x.rows() != da * db || x.cols() != da * db) {
        throw DomainError("partial_trace: operator dimension is not the product of the factor dimensions");
    }
    if (which == TraceOut::Second) {
        Matrix out = Matrix::Zero(da, da);
        for (Eigen::Index i = 0; i < da; ++i)
            for (Eigen::Index j = 0; j < da; ++j)
                for (Eigen::Index k = 0; k < db; ++k) out(i, j) += x(i * db + k, j * db + k);
        return out;
    }
    Matrix out = Matrix::Zero(db, db);
    for (Eigen::Index i = 0; i < db; ++i)
        for (Eigen::Index j = 0; j < db; ++j)
            for (Eigen::Index k = 0; k < da; ++k) out(i, j) += x(k * db + i, k * db + j);
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace speccode
