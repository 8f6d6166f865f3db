#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "speccode/operator_core.hpp"

namespace speccode {

/// Completely positive map ρ ↦ Σ K ρ K†. Trace preservation is certified
/// either on the whole space (Σ K†K = I) or on a declared support
/// projection S (Σ K†K = S), as for a Petz map built from a rank-deficient
/// state.
class KrausChannel {
public:
    KrausChannel() = default;
    /// Throws DomainError when ‖Σ K†K - S‖ > tol, S = I unless given.
    KrausChannel(std::vector<Matrix> kraus, std::string label, std::optional<Matrix> support = std::nullopt,
                 double tol = 1e-10);

    static KrausChannel identity(Eigen::Index dim);

    [[nodiscard]] const std::vector<Matrix>& kraus() const { return kraus_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] Eigen::Index dim() const { return kraus_.empty() ? 0 : kraus_.front().cols(); }
    [[nodiscard]] const std::optional<Matrix>& support() const { return support_; }
    /// ‖Σ K†K - S‖.
    [[nodiscard]] double trace_defect() const;

private:
    std::vector<Matrix> kraus_;
    std::string label_;
    std::optional<Matrix> support_;
};

/// `after` ∘ `before`.
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

/// Validates ρ (Hermitian, PSD, unit trace within 1e-10) and that it lies
/// in the channel's support.
Matrix apply_channel(const KrausChannel& ch, const Matrix& rho);

/// θ ↦ Kraus channel, with the first-order error operators kept for the
/// small-noise expansion.
class NoiseFamily {
public:
    /// E_0 = sqrt(I - θ Σ F_i†F_i), E_i = √θ F_i.
    static NoiseFamily linear(std::vector<Matrix> errors, std::string label);
    /// Independent bit flips with probability θ on each of n qubits.
    static NoiseFamily independent_flips(int n_qubits);

    [[nodiscard]] KrausChannel at(double theta) const;
    [[nodiscard]] const std::vector<Matrix>& errors() const { return errors_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] bool is_linear() const { return linear_; }
    /// Largest θ for which the family is trace preserving.
    [[nodiscard]] double theta_max() const { return theta_max_; }
    [[nodiscard]] Eigen::Index dim() const { return dim_; }

private:
    std::vector<Matrix> errors_;
    std::string label_;
    bool linear_ = true;
    double theta_max_ = 1.0;
    Eigen::Index dim_ = 0;
    Matrix error_sum_;  // Σ F_i†F_i
    int qubits_ = 0;
};

/// R_j = σ^{1/2} E_j† E(σ)^{-1/2} with the pseudo-inverse cut at
/// 1e-10·‖E(σ)‖. Trace preserving on the support of E(σ).
KrausChannel petz_recovery(const Matrix& sigma, const KrausChannel& ch);

/// Tensor factorization H = H_low ⊗ H_high, index i_low * high + i_high.
struct Factorization {
    Eigen::Index low = 0;
    Eigen::Index high = 0;
};

/// tr_high(X) / high, an operator on the low factor.
Matrix conditional_expectation(const Matrix& x, const Factorization& f);
/// ρ ↦ tr_high(ρ) ⊗ I/high as a channel on the full space.
KrausChannel conditional_expectation_channel(const Factorization& f);

/// Π(X) = PXP + tr((I-P)X) P/rank.
Matrix poor_decoder(const CodeProjection& p, const Matrix& x);
/// Kraus form: P and |k⟩⟨α|/√rank for code vectors k and complement vectors α.
KrausChannel poor_decoder_channel(const CodeProjection& p);

/// Σ_j |tr(σ K_j)|².
double entanglement_fidelity(const Matrix& sigma, const KrausChannel& ch);

/// tr((I-P) E(σ)).
double leakage_probability(const CodeProjection& p, const KrausChannel& ch, const Matrix& sigma);

/// Maximally mixed code state P/rank.
Matrix code_state(const CodeProjection& p);

enum class Decoder { Petz, Poor, PetzThenExpectation };

/// 1 - F_e(σ, decoder ∘ E_θ). PetzThenExpectation needs a factorization.
double residual_error_T(const Matrix& sigma, const CodeProjection& p, const NoiseFamily& noise, double theta,
                        Decoder decoder, const std::optional<Factorization>& factorization = std::nullopt);

/// Σ_i Var_σ(P F_i P) at σ = P/rank.
double poor_decoder_variance(const CodeProjection& p, const std::vector<Matrix>& errors);

struct ExpansionReport {
    std::vector<double> thetas;
    std::vector<double> t_tilde;     // 1 - F_e(σ, Π ∘ E_θ)
    std::vector<double> prediction;  // θ Σ Var_σ(P F_i P) + (1 - 1/d²) P_ℓ(θ)
    std::vector<double> leakage;
    std::vector<double> remainder;
    double variance_sum = 0.0;
    double slope = 0.0;      // log|remainder| against log θ
    bool vanishing = false;  // max |remainder| ≤ 1e-12
    bool certified = false;  // vanishing or slope ≥ 1.9
};

/// Compares the poor-decoder residual with its first-order expansion at
/// σ = P/rank. θ-grid must lie in (0, 1e-2].
ExpansionReport verify_poor_decoder_expansion(const CodeProjection& p, const NoiseFamily& noise,
                                              const std::vector<double>& thetas);

struct ThresholdReport {
    std::vector<double> thetas;
    std::vector<double> samples;
    double k = 0.0;
    double gamma = 0.0;
    double theta_th = 0.0;  // +inf when γ = 0 and k < 1
    double residual = 0.0;  // ‖T - (kθ + γθ²)‖₂
    bool clipped = false;
    double theta0 = 0.0;
    std::vector<double> iteration;
    bool monotone = false;
};

/// Fit T(θ) ≈ kθ + γθ² with k, γ ≥ 0 and iterate θ_{n+1} = kθ_n + γθ_n².
ThresholdReport threshold_estimate(const std::vector<double>& thetas, const std::vector<double>& samples,
                                   double theta0, int steps = 60);

struct GapBound {
    double leak_norm = 0.0;  // ‖(I-P) E P‖
    double comm_p = 0.0;     // ‖[P, E]‖
    double comm_d = 0.0;     // ‖[D, E]‖
    double gap = 0.0;
    double c_emp = 0.0;      // ‖[P, E]‖ gap / ‖[D, E]‖, 0 when [D, E] = 0
    bool chain_holds = false;
};

/// P is the kernel projection of D; rejects D without a gap.
std::vector<GapBound> gap_commutator_bounds(const HermitianOperator& d, const std::vector<Matrix>& errors);

} // namespace speccode
