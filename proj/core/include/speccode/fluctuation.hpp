#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccode/operator_core.hpp"

namespace speccode {

/// A = Σ a_j [D, b_j] together with its terms.
struct OneForm {
    std::vector<std::pair<Matrix, Matrix>> terms;
    Matrix realized;

    /// Re-evaluates the sum against D.
    [[nodiscard]] Matrix recompute(const HermitianOperator& d) const;
    [[nodiscard]] bool is_self_adjoint(double tol = 1e-10) const;
};

OneForm one_form(const HermitianOperator& d, std::vector<std::pair<Matrix, Matrix>> pairs);

/// Antiunitary J ξ = U conj(ξ), so J A J⁻¹ = U conj(A) U†.
class RealStructure {
public:
    RealStructure(Matrix unitary, int epsilon, int epsilon_prime);

    /// Entrywise complex conjugation, ε = ε' = +1.
    static RealStructure conjugation(Eigen::Index dim);
    /// ξ ↦ ξ* on H = M_k(C) with row-major vectorization index i k + j.
    static RealStructure matrix_adjoint(Eigen::Index k);

    [[nodiscard]] const Matrix& unitary() const { return u_; }
    [[nodiscard]] int epsilon() const { return epsilon_; }
    [[nodiscard]] int epsilon_prime() const { return epsilon_prime_; }
    [[nodiscard]] Eigen::Index dim() const { return u_.rows(); }

    [[nodiscard]] Vector apply(const Vector& xi) const { return u_ * xi.conjugate(); }
    /// J A J⁻¹.
    [[nodiscard]] Matrix conjugate(const Matrix& a) const { return u_ * a.conjugate() * u_.adjoint(); }
    /// ‖J² - ε' I‖.
    [[nodiscard]] double square_defect() const;
    /// ‖J D - ε D J‖ as ‖J D J⁻¹ - ε D‖.
    [[nodiscard]] double dirac_defect(const HermitianOperator& d) const;

private:
    Matrix u_;
    int epsilon_;
    int epsilon_prime_;
};

/// max ‖[a, J b J⁻¹]‖ over generator pairs.
double order_zero_defect(const RealStructure& j, const std::vector<Matrix>& algebra);
/// max ‖[[D, a], J b J⁻¹]‖ over generator pairs.
double first_order_defect(const RealStructure& j, const HermitianOperator& d, const std::vector<Matrix>& algebra);

/// D + A + J A J⁻¹, or D + A without J. Rejects non-self-adjoint A.
HermitianOperator inner_fluctuation(const HermitianOperator& d, const OneForm& a,
                                    const std::optional<RealStructure>& j = std::nullopt);

/// Aᵘ = u[D, u*] + u A u*, expressed again as a one-form.
OneForm gauge_transform(const OneForm& a, const Matrix& u, const HermitianOperator& d);

/// u J u J⁻¹.
Matrix gauge_unitary(const Matrix& u, const RealStructure& j);

struct PerturbationSpec {
    HermitianOperator v;
    CodeProjection p;
    double c = 0.0;
};

/// Checks PV = VP, PVP = 0 and (I-P)V(I-P) ≥ c on the complement; throws
/// DomainError naming the failed condition.
void validate_perturbation(const PerturbationSpec& spec);

struct PerturbationResult {
    HermitianOperator d_lambda;
    SpectrumReport spectrum;
    double kernel_agreement = 0.0;  // ‖P_λ - P‖
    bool gap_bound_holds = false;   // gap(D_λ) ≥ gap(D) + λc - 1e-9
};

/// D_λ = D + λV. P must be the kernel projection of D.
PerturbationResult perturb_code_preserving(const HermitianOperator& d, const PerturbationSpec& spec, double lambda);

/// k(λ) = Σ ε_i² (1 + C² / (Δ + λc)²).
double k_lambda(const std::vector<double>& eps, double c_const, double gap, double c, double lambda);

struct SweepRow {
    double lambda = 0.0;
    double gap = 0.0;
    double comm_norm = 0.0;             // ‖[D_λ, E_λ]‖
    double bound = 0.0;                 // comm_norm / gap
    double bound_sq_times_theta = 0.0;  // θ bound²
    double leak_literal = 0.0;          // tr((I-P) E_θ(σ)) for the unscaled error
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double fitted_exponent = 0.0;  // slope of log bound against log gap
    bool normalized = true;
};

/// D_λ = D + λ(I - P) over the λ-grid with a fixed error E. In normalized
/// mode E is rescaled at each λ so that ‖[D_λ, E]‖ = ‖[D, E]‖.
SweepReport leakage_gap_sweep(const HermitianOperator& d, const Matrix& error, double theta,
                              const std::vector<double>& lambdas, bool normalized = true);

} // namespace speccode
