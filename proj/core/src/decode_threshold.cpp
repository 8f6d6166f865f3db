#include "speccode/decode_threshold.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "speccode/errors.hpp"

namespace speccode {

namespace {

Matrix kraus_sum(const std::vector<Matrix>& kraus) {
    Matrix s = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
    for (const Matrix& k : kraus) s += k.adjoint() * k;
    return s;
}

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

KrausChannel::KrausChannel(std::vector<Matrix> kraus, std::string label, std::optional<Matrix> support, double tol)
    : kraus_(std::move(kraus)), label_(std::move(label)), support_(std::move(support)) {
    if (kraus_.empty()) throw DomainError("KrausChannel '" + label_ + "': no Kraus operators");
    const Eigen::Index d = kraus_.front().cols();
    for (const Matrix& k : kraus_) {
        if (k.rows() != d || k.cols() != d) throw DomainError("KrausChannel '" + label_ + "': Kraus operators must be square and of equal size");
    }
    if (support_ && (support_->rows() != d || support_->cols() != d)) {
        throw DomainError("KrausChannel '" + label_ + "': support has the wrong dimension");
    }
    const double defect = trace_defect();
    if (defect > tol) {
        std::ostringstream msg;
        msg << "KrausChannel '" << label_ << "': trace preservation violated, defect " << defect;
        throw DomainError(msg.str());
    }
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
    return KrausChannel({Matrix::Identity(dim, dim)}, "identity");
}

double KrausChannel::trace_defect() const {
    const Matrix s = kraus_sum(kraus_);
    const Matrix target = support_ ? *support_ : Matrix::Identity(s.rows(), s.cols());
    return operator_norm(s - target);
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
    if (after.dim() != before.dim()) throw DomainError("compose: dimension mismatch");
    std::vector<Matrix> ks;
    ks.reserve(after.kraus().size() * before.kraus().size());
    for (const Matrix& a : after.kraus())
        for (const Matrix& b : before.kraus()) ks.push_back(a * b);
    std::optional<Matrix> support;
    if (after.support() || before.support()) support = kraus_sum(ks);
    return KrausChannel(std::move(ks), after.label() + " o " + before.label(), std::move(support), 1e-8);
}

Matrix apply_channel(const KrausChannel& ch, const Matrix& rho) {
    if (rho.rows() != ch.dim() || rho.cols() != ch.dim()) throw DomainError("apply_channel: dimension mismatch");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw DomainError("apply_channel: state not Hermitian");
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError("apply_channel: state trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw DomainError("apply_channel: state not positive semidefinite");
    if (ch.trace_defect() > 1e-8) throw DomainError("apply_channel: channel is not trace preserving");
    if (ch.support() && std::abs((*ch.support() * rho).trace() - 1.0) > 1e-8) {
        throw DomainError("apply_channel: state leaves the channel's trace-preserving support");
    }
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const Matrix& k : ch.kraus()) out += k * rho * k.adjoint();
    return out;
}

NoiseFamily NoiseFamily::linear(std::vector<Matrix> errors, std::string label) {
    if (errors.empty()) throw DomainError("NoiseFamily: no error operators");
    NoiseFamily f;
    f.dim_ = errors.front().rows();
    for (const Matrix& e : errors) {
        if (e.rows() != f.dim_ || e.cols() != f.dim_) throw DomainError("NoiseFamily: error operators differ in size");
    }
    f.error_sum_ = kraus_sum(errors);
    Eigen::SelfAdjointEigenSolver<Matrix> es(f.error_sum_, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    f.theta_max_ = top > 0.0 ? 1.0 / top : std::numeric_limits<double>::infinity();
    f.errors_ = std::move(errors);
    f.label_ = std::move(label);
    return f;
}

NoiseFamily NoiseFamily::independent_flips(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 10) throw DomainError("independent_flips: n must be between 1 and 10");
    NoiseFamily f;
    f.linear_ = false;
    f.qubits_ = n_qubits;
    f.dim_ = Eigen::Index{1} << n_qubits;
    f.theta_max_ = 1.0;
    f.label_ = "independent bit flips";
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    for (int i = 0; i < n_qubits; ++i) {
        Matrix op = Matrix::Identity(1, 1);
        for (int j = 0; j < n_qubits; ++j) op = kron(op, j == i ? x : Matrix(Matrix::Identity(2, 2)));
        f.errors_.push_back(op);
    }
    f.error_sum_ = kraus_sum(f.errors_);
    return f;
}

KrausChannel NoiseFamily::at(double theta) const {
    if (!(theta >= 0.0) || theta > theta_max_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "NoiseFamily '" << label_ << "': theta " << theta << " outside [0, " << theta_max_ << "]";
        throw DomainError(msg.str());
    }
    std::vector<Matrix> ks;
    if (linear_) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(dim_, dim_) - theta * error_sum_);
        const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        ks.push_back(es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
        for (const Matrix& e : errors_) ks.push_back(std::sqrt(theta) * e);
    } else {
        // Every subset of flipped qubits, weighted θ^|S| (1-θ)^(n-|S|).
        for (std::size_t s = 0; s < (std::size_t{1} << qubits_); ++s) {
            Matrix op = Matrix::Identity(dim_, dim_);
            double weight = 1.0;
            for (int i = 0; i < qubits_; ++i) {
                if ((s >> i) & 1u) {
                    op = errors_[static_cast<std::size_t>(i)] * op;
                    weight *= theta;
                } else {
                    weight *= 1.0 - theta;
                }
            }
            ks.push_back(std::sqrt(weight) * op);
        }
    }
    std::ostringstream name;
    name << label_ << " @ " << theta;
    return KrausChannel(std::move(ks), name.str(), std::nullopt, 1e-10);
}

KrausChannel petz_recovery(const Matrix& sigma, const KrausChannel& ch) {
    if (sigma.rows() != ch.dim()) throw DomainError("petz_recovery: dimension mismatch");
    if (std::abs(sigma.trace() - 1.0) > 1e-10) throw DomainError("petz_recovery: reference state trace differs from 1");
    const HermitianOperator s(sigma, 1e-10);
    const Eigensystem se = eigh(s);
    if (se.values.minCoeff() < -1e-10) throw DomainError("petz_recovery: reference state not positive");
    const Matrix sqrt_sigma = spectral_function(se, [](double v) { return std::sqrt(std::max(v, 0.0)); });

    Matrix image = Matrix::Zero(sigma.rows(), sigma.cols());
    for (const Matrix& k : ch.kraus()) image += k * sigma * k.adjoint();
    const Eigensystem ie = eigh(HermitianOperator(0.5 * (image + image.adjoint()), 1e-8));
    const double cut = 1e-10 * std::max(ie.values.cwiseAbs().maxCoeff(), 1e-300);
    const Matrix inv_sqrt = spectral_function(ie, [cut](double v) { return v > cut ? 1.0 / std::sqrt(v) : 0.0; });
    const Matrix support = spectral_function(ie, [cut](double v) { return v > cut ? 1.0 : 0.0; });

    std::vector<Matrix> rs;
    rs.reserve(ch.kraus().size());
    for (const Matrix& k : ch.kraus()) rs.push_back(sqrt_sigma * k.adjoint() * inv_sqrt);
    return KrausChannel(std::move(rs), "petz[" + ch.label() + "]", support, 1e-8);
}

Matrix conditional_expectation(const Matrix& x, const Factorization& f) {
    if (f.low < 1 || f.high < 1 || f.low * f.high != x.rows()) {
        throw DomainError("conditional_expectation: factorization does not match the dimension");
    }
    return partial_trace(x, {f.low, f.high}, TraceOut::Second) / static_cast<double>(f.high);
}

KrausChannel conditional_expectation_channel(const Factorization& f) {
    if (f.low < 1 || f.high < 1) throw DomainError("conditional_expectation_channel: invalid factorization");
    std::vector<Matrix> ks;
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.high));
    for (Eigen::Index a = 0; a < f.high; ++a)
        for (Eigen::Index b = 0; b < f.high; ++b) {
            Matrix e = Matrix::Zero(f.high, f.high);
            e(a, b) = scale;
            ks.push_back(kron(Matrix::Identity(f.low, f.low), e));
        }
    return KrausChannel(std::move(ks), "conditional expectation");
}

Matrix code_state(const CodeProjection& p) {
    if (p.rank() == 0) throw DomainError("code_state: code has rank 0");
    return p.matrix() / static_cast<double>(p.rank());
}

Matrix poor_decoder(const CodeProjection& p, const Matrix& x) {
    const Matrix pm = p.matrix();
    const Complex outside = x.trace() - (pm * x).trace();
    return pm * x * pm + outside * code_state(p);
}

KrausChannel poor_decoder_channel(const CodeProjection& p) {
    const Matrix& code = p.basis();
    const Matrix complement = kernel_projection(HermitianOperator(p.matrix())).basis();
    std::vector<Matrix> ks{p.matrix()};
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.rank()));
    for (Eigen::Index a = 0; a < complement.cols(); ++a)
        for (Eigen::Index k = 0; k < code.cols(); ++k) ks.push_back(scale * code.col(k) * complement.col(a).adjoint());
    return KrausChannel(std::move(ks), "poor decoder");
}

double entanglement_fidelity(const Matrix& sigma, const KrausChannel& ch) {
    if (sigma.rows() != ch.dim()) throw DomainError("entanglement_fidelity: dimension mismatch");
    double f = 0.0;
    for (const Matrix& k : ch.kraus()) f += std::norm((sigma * k).trace());
    return f;
}

double leakage_probability(const CodeProjection& p, const KrausChannel& ch, const Matrix& sigma) {
    Matrix out = Matrix::Zero(sigma.rows(), sigma.cols());
    for (const Matrix& k : ch.kraus()) out += k * sigma * k.adjoint();
    return (out.trace() - (p.matrix() * out).trace()).real();
}

double residual_error_T(const Matrix& sigma, const CodeProjection& p, const NoiseFamily& noise, double theta,
                        Decoder decoder, const std::optional<Factorization>& factorization) {
    const KrausChannel e = noise.at(theta);
    switch (decoder) {
    case Decoder::Poor:
        return 1.0 - entanglement_fidelity(sigma, compose(poor_decoder_channel(p), e));
    case Decoder::Petz:
        return 1.0 - entanglement_fidelity(sigma, compose(petz_recovery(sigma, e), e));
    case Decoder::PetzThenExpectation: {
        if (!factorization) {
            throw DomainError("residual_error_T: the conditional expectation needs a tensor factorization; use the poor decoder");
        }
        const KrausChannel expectation = conditional_expectation_channel(*factorization);
        if (expectation.dim() != e.dim()) throw DomainError("residual_error_T: factorization does not match the dimension");
        return 1.0 - entanglement_fidelity(sigma, compose(expectation, compose(petz_recovery(sigma, e), e)));
    }
    }
    return 0.0;
}

double poor_decoder_variance(const CodeProjection& p, const std::vector<Matrix>& errors) {
    const Matrix sigma = code_state(p);
    const Matrix pm = p.matrix();
    double v = 0.0;
    for (const Matrix& f : errors) {
        if (f.rows() != pm.rows() || f.cols() != pm.cols()) throw DomainError("poor_decoder_variance: error dimension mismatch");
        const Matrix a = pm * f * pm;
        v += (sigma * a.adjoint() * a).trace().real() - std::norm((sigma * a).trace());
    }
    return v;
}

ExpansionReport verify_poor_decoder_expansion(const CodeProjection& p, const NoiseFamily& noise,
                                              const std::vector<double>& thetas) {
    if (thetas.size() < 2) throw DomainError("verify_poor_decoder_expansion: need at least two theta values");
    for (double t : thetas) {
        if (!(t > 0.0) || t > 1e-2) throw DomainError("verify_poor_decoder_expansion: theta must lie in (0, 1e-2]");
    }
    const Matrix sigma = code_state(p);
    const double d = static_cast<double>(p.rank());
    const KrausChannel decoder = poor_decoder_channel(p);

    ExpansionReport r;
    r.variance_sum = poor_decoder_variance(p, noise.errors());
    for (double t : thetas) {
        const KrausChannel e = noise.at(t);
        const double tt = 1.0 - entanglement_fidelity(sigma, compose(decoder, e));
        const double leak = leakage_probability(p, e, sigma);
        const double pred = t * r.variance_sum + (1.0 - 1.0 / (d * d)) * leak;
        r.thetas.push_back(t);
        r.t_tilde.push_back(tt);
        r.leakage.push_back(leak);
        r.prediction.push_back(pred);
        r.remainder.push_back(tt - pred);
    }
    double worst = 0.0;
    for (double v : r.remainder) worst = std::max(worst, std::abs(v));
    r.vanishing = worst <= 1e-12;
    r.slope = r.vanishing ? std::numeric_limits<double>::quiet_NaN() : loglog_slope(r.thetas, r.remainder);
    r.certified = r.vanishing || r.slope >= 1.9;
    return r;
}

ThresholdReport threshold_estimate(const std::vector<double>& thetas, const std::vector<double>& samples,
                                   double theta0, int steps) {
    if (thetas.size() != samples.size()) throw DomainError("threshold_estimate: theta and sample counts differ");
    if (thetas.size() < 4) throw DomainError("threshold_estimate: need at least 4 grid points");
    for (double t : thetas) {
        if (!(t > 0.0) || t > 0.1) throw DomainError("threshold_estimate: theta values must lie in (0, 0.1]");
    }
    ThresholdReport r;
    r.thetas = thetas;
    r.samples = samples;
    r.theta0 = theta0;

    const auto n = static_cast<Eigen::Index>(thetas.size());
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = thetas[static_cast<std::size_t>(i)];
        a(i, 0) = t;
        a(i, 1) = t * t;
        y(i) = samples[static_cast<std::size_t>(i)];
    }
    Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
    // Nonnegativity by clipping one coefficient and refitting the other.
    if (c(0) < 0.0 || c(1) < 0.0) {
        r.clipped = true;
        if (c(0) < 0.0) {
            c(0) = 0.0;
            c(1) = std::max(0.0, a.col(1).dot(y) / a.col(1).squaredNorm());
        } else {
            c(1) = 0.0;
            c(0) = std::max(0.0, a.col(0).dot(y) / a.col(0).squaredNorm());
        }
    }
    r.k = c(0);
    r.gamma = c(1);
    r.residual = (a * c - y).norm();
    if (r.k >= 1.0) {
        r.theta_th = 0.0;
    } else if (r.gamma == 0.0) {
        r.theta_th = std::numeric_limits<double>::infinity();
    } else {
        r.theta_th = (1.0 - r.k) / r.gamma;
    }

    double t = theta0;
    r.iteration.push_back(t);
    bool decreasing = true;
    for (int s = 0; s < steps && t > 1e-300 && std::isfinite(t); ++s) {
        const double next = r.k * t + r.gamma * t * t;
        decreasing = decreasing && next < t;
        t = next;
        r.iteration.push_back(t);
    }
    r.monotone = decreasing && theta0 < r.theta_th;
    return r;
}

std::vector<GapBound> gap_commutator_bounds(const HermitianOperator& d, const std::vector<Matrix>& errors) {
    const Eigensystem eig = eigh(d);
    if (eig.report.kernel_dim == 0 || eig.report.kernel_dim == d.dim() || eig.report.gap <= 0.0) {
        throw DomainError("gap_commutator_bounds: D needs a kernel and a nonzero spectral gap");
    }
    const Matrix p = spectral_projection(eig, {0.0, 0.0}).matrix();
    const Matrix q = Matrix::Identity(d.dim(), d.dim()) - p;
    std::vector<GapBound> out;
    for (const Matrix& e : errors) {
        if (e.rows() != d.dim() || e.cols() != d.dim()) throw DomainError("gap_commutator_bounds: error dimension mismatch");
        GapBound b;
        b.gap = eig.report.gap;
        b.leak_norm = operator_norm(q * e * p);
        b.comm_p = operator_norm(commutator(p, e));
        b.comm_d = operator_norm(commutator(d.matrix(), e));
        b.c_emp = b.comm_d > 0.0 ? b.comm_p * b.gap / b.comm_d : 0.0;
        b.chain_holds = b.leak_norm <= b.comm_p + 1e-12;
        out.push_back(b);
    }
    return out;
}

} // namespace speccode
