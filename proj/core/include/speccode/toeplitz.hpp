#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "speccode/operator_core.hpp"

namespace speccode {

using Vec3 = std::array<double, 3>;

/// Real function on the unit sphere in polar coordinates (θ, φ), with its
/// tangential gradient as an ambient 3-vector. Functions built from a bare
/// callable get central finite-difference gradients (step 1e-5).
class SphereFunction {
public:
    using Value = std::function<double(double, double)>;
    using Gradient = std::function<Vec3(double, double)>;

    SphereFunction(std::string name, Value value, Gradient gradient = nullptr);

    static SphereFunction constant(double c);
    /// x^a y^b z^c restricted to the sphere.
    static SphereFunction monomial(int a, int b, int c);
    static SphereFunction x() { return monomial(1, 0, 0); }
    static SphereFunction y() { return monomial(0, 1, 0); }
    static SphereFunction z() { return monomial(0, 0, 1); }
    /// exp(1 - 1/(1 - r²)) with r = (θ - θ₀)/w, zero for |r| ≥ 1.
    static SphereFunction bump(double theta0, double width);
    static SphereFunction product(const SphereFunction& f, const SphereFunction& g);
    /// Parses "1", "x", "y", "z", "x*y", "z^2", "bump_north", "bump_south".
    static SphereFunction parse(const std::string& text);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] double operator()(double theta, double phi) const { return value_(theta, phi); }
    [[nodiscard]] Vec3 gradient(double theta, double phi) const;

private:
    std::string name_;
    Value value_;
    Gradient gradient_;
};

/// {f, g} = n · (∇g × ∇f) on the unit sphere, so {x, y} = -z.
double poisson_bracket(const SphereFunction& f, const SphereFunction& g, double theta, double phi);
SphereFunction poisson_bracket(const SphereFunction& f, const SphereFunction& g);

/// sup |f| over a (θ, φ) grid that includes both poles.
double sup_norm(const SphereFunction& f, int samples = 256);

/// Lowest-level holomorphic sections at flux p,
///   ψ_k = c_k sin^k(θ/2) cos^{p-k}(θ/2) e^{ikφ},  k = 0..p,
/// sampled on Gauss–Legendre nodes in cos θ times 2p+8 uniform φ nodes,
/// normalized against dμ = d(cos θ) dφ (total area 4π).
class ToeplitzQuantizer {
public:
    [[nodiscard]] int p() const { return p_; }
    [[nodiscard]] int order() const { return q_; }
    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(p_ + 1); }
    [[nodiscard]] double hbar() const { return hbar_; }
    [[nodiscard]] double gram_defect() const { return gram_defect_; }
    [[nodiscard]] const Matrix& samples() const { return psi_; }
    [[nodiscard]] std::size_t points() const { return theta_.size(); }

    /// Same quantizer with ℏ_p replaced.
    [[nodiscard]] ToeplitzQuantizer with_hbar(double hbar) const;

    /// ∫ f dμ by the same quadrature.
    [[nodiscard]] double integrate(const SphereFunction& f) const;

    friend ToeplitzQuantizer build_quantizer(int p, int q);
    friend Matrix toeplitz_matrix(const ToeplitzQuantizer& qz, const SphereFunction& f);

private:
    int p_ = 0;
    int q_ = 0;
    double hbar_ = 0.0;
    double gram_defect_ = 0.0;
    std::vector<double> theta_, phi_, weight_;
    Matrix psi_;  // points × (p+1)
};

/// Requires p ≥ 1 and q ≥ p + 4; rejects a Gram defect above 1e-6.
ToeplitzQuantizer build_quantizer(int p, int q);

/// T(f)_{jk} = Σ w ψ̄_j f ψ_k.
Matrix toeplitz_matrix(const ToeplitzQuantizer& qz, const SphereFunction& f);

struct Calibration {
    std::vector<int> ps;
    std::vector<double> per_p;  // s_p with (i s_p/p)⁻¹ [T(x), T(y)] ≈ T({x, y})
    double s_inf = 1.0;         // extrapolated through s_p = s∞ + b/p + c/p²
};

/// Fits the ℏ scale on the pair (x, y) at each p and extrapolates p → ∞;
/// the calibrated ℏ_p is s∞/p.
Calibration calibrate(const std::vector<int>& ps, int extra_order = 8);

struct AxiomRow {
    int p = 0;
    double gram = 0.0;
    double delta1 = 0.0;  // ‖T(f)T(g) - T(fg)‖
    double delta2 = 0.0;  // ‖(iℏ)⁻¹[T(f), T(g)] - T({f, g})‖
    double delta3 = 0.0;  // |(2πℏ) tr T(f) - ∫ f dμ| / 4π
    double delta4 = 0.0;  // |‖T(f)‖ - sup|f||
    double trace_constant = 0.0;  // (2πℏ) tr T(1) / 4π
};

struct AxiomTable {
    std::vector<AxiomRow> rows;
    double slope1 = 0.0;  // log-log decay rates against p
    double slope2 = 0.0;
    double slope3 = 0.0;
    double slope4 = 0.0;
    double s_inf = 1.0;
};

/// Quantizers at order p + extra_order with ℏ_p = s∞/p from `calibrate`.
AxiomTable verify_axioms(const std::vector<int>& ps, const SphereFunction& f, const SphereFunction& g,
                         int extra_order = 8);

/// C₁(f, g) = -½ ∇f·∇g + (i/2){f, g}, real and imaginary parts.
std::pair<SphereFunction, SphereFunction> c1_coefficient(const SphereFunction& f, const SphereFunction& g);

/// ‖ℏ⁻¹(T(f)T(g) - T(fg)) - T(C₁(f, g))‖ using the quantizer's ℏ.
double verify_c1(const ToeplitzQuantizer& qz, const SphereFunction& f, const SphereFunction& g);

struct KLApprox {
    Complex lambda{0.0, 0.0};
    double defect = 0.0;
};

/// λ = tr(T(f)†T(g))/N and ‖T(f)†T(g) - λI‖.
KLApprox kl_approx_check(const ToeplitzQuantizer& qz, const SphereFunction& f, const SphereFunction& g);

/// Quadrature order used for the bump functions, which are smooth but not
/// polynomial.
inline int bump_order(int p) { return 4 * p + 64; }

} // namespace speccode
