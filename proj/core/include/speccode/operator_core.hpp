#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace speccode {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerance used to accept a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;
/// Default relative tolerance of the scalar-on-code test.
inline constexpr double kScalarTolerance = 1e-9;

/// Dense Hermitian matrix. Construction validates Hermiticity and stores the
/// exactly symmetrized matrix (H + H†)/2.
class HermitianOperator {
public:
    HermitianOperator() = default;

    /// Throws DomainError reporting the largest entry of |H - H†| when it
    /// exceeds `rel_tol * max(1, max|H_ij|)`.
    explicit HermitianOperator(const Matrix& entries, double rel_tol = kHermitianTolerance);

    static HermitianOperator zero(Eigen::Index dim);
    static HermitianOperator diagonal(const RealVector& values);

    [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
    [[nodiscard]] const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
};

/// Spectrum summarized as distinct levels with multiplicities.
struct SpectrumReport {
    std::vector<double> levels;       // ascending
    std::vector<int> multiplicities;  // same length as levels; sums to dim
    double gap = 0.0;                 // smallest |λ| among nonzero eigenvalues; 0 if none
    double zero_threshold = 0.0;      // |λ| <= zero_threshold counts as zero
    int kernel_dim = 0;

    [[nodiscard]] int dim() const;
};

struct Eigensystem {
    RealVector values;  // ascending
    Matrix vectors;     // columns are orthonormal eigenvectors
    SpectrumReport report;
};

/// Zero threshold 1e-9 * max(1, ‖H‖).
double zero_threshold(double operator_norm);

Eigensystem eigh(const HermitianOperator& h);

/// Groups sorted eigenvalues into levels; eigenvalues closer than the zero
/// threshold share a level.
SpectrumReport summarize_spectrum(const RealVector& ascending_values, double zero_threshold);

/// Hermitian idempotent with cached orthonormal range basis.
class CodeProjection {
public:
    CodeProjection() = default;

    /// Validates P² = P, P = P† within 1e-10 and integrality of the trace.
    static CodeProjection from_matrix(const Matrix& p);

    /// Projection onto the column span of an isometry (columns orthonormal
    /// within 1e-10).
    static CodeProjection from_isometry(const Matrix& basis);

    static CodeProjection identity(Eigen::Index dim);

    [[nodiscard]] Eigen::Index dim() const { return basis_.rows(); }
    [[nodiscard]] Eigen::Index rank() const { return basis_.cols(); }
    /// dim × rank isometry B with P = B B†.
    [[nodiscard]] const Matrix& basis() const { return basis_; }
    /// Dense P; materialized on every call.
    [[nodiscard]] Matrix matrix() const { return basis_ * basis_.adjoint(); }
    /// B† X B, the rank × rank restriction of X to the code.
    [[nodiscard]] Matrix compress(const Matrix& x) const;

private:
    explicit CodeProjection(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Projection onto eigenvectors of `h` with eigenvalue in [lo, hi]. Endpoints
/// are widened by the zero threshold so that exact eigenvalues on the
/// boundary are included.
CodeProjection spectral_projection(const HermitianOperator& h, Interval interval);
CodeProjection spectral_projection(const Eigensystem& eig, Interval interval);

/// Spectral projection onto the kernel, i.e. the interval {0}.
CodeProjection kernel_projection(const HermitianOperator& h);

struct ScalarTest {
    bool scalar = false;
    Complex lambda{0.0, 0.0};
    double defect = 0.0;  // ‖PXP - λP‖
};

/// λ = tr(PXP)/rank(P); scalar iff ‖PXP - λP‖ ≤ tol · max(1, ‖X‖).
ScalarTest is_scalar_on_code(const Matrix& x, const CodeProjection& p, double tol = kScalarTolerance);

/// Same test on an already compressed rank × rank block, with ‖X‖ supplied.
ScalarTest is_scalar_compressed(const Matrix& compressed, double x_norm, double tol = kScalarTolerance);

double operator_norm(const Matrix& x);
Matrix commutator(const Matrix& a, const Matrix& b);

enum class TraceOut { First, Second };

/// Partial trace of an operator on C^{dims.first} ⊗ C^{dims.second}; the
/// composite index is i_first * dims.second + i_second.
Matrix partial_trace(const Matrix& x, std::pair<Eigen::Index, Eigen::Index> dims, TraceOut which);

Matrix kron(const Matrix& a, const Matrix& b);

/// f(H) via the eigendecomposition, with f applied to each eigenvalue.
template <class F>
Matrix spectral_function(const Eigensystem& eig, F&& f) {
    Vector mapped(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
    return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

} // namespace speccode
