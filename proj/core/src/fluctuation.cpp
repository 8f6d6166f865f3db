#include "speccode/fluctuation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "speccode/decode_threshold.hpp"
#include "speccode/errors.hpp"

namespace speccode {

Matrix OneForm::recompute(const HermitianOperator& d) const {
    Matrix out = Matrix::Zero(d.dim(), d.dim());
    for (const auto& [a, b] : terms) out += a * commutator(d.matrix(), b);
    return out;
}

bool OneForm::is_self_adjoint(double tol) const {
    const double scale = std::max(1.0, realized.cwiseAbs().maxCoeff());
    return (realized - realized.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

OneForm one_form(const HermitianOperator& d, std::vector<std::pair<Matrix, Matrix>> pairs) {
    for (const auto& [a, b] : pairs) {
        if (a.rows() != d.dim() || a.cols() != d.dim() || b.rows() != d.dim() || b.cols() != d.dim()) {
            throw DomainError("one_form: algebra elements must match the Dirac dimension");
        }
    }
    OneForm f;
    f.terms = std::move(pairs);
    f.realized = f.recompute(d);
    return f;
}

RealStructure::RealStructure(Matrix unitary, int epsilon, int epsilon_prime)
    : u_(std::move(unitary)), epsilon_(epsilon), epsilon_prime_(epsilon_prime) {
    if (u_.rows() != u_.cols()) throw DomainError("RealStructure: unitary must be square");
    if ((u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols())).norm() > 1e-10) {
        throw DomainError("RealStructure: matrix is not unitary");
    }
    if (std::abs(epsilon_) != 1 || std::abs(epsilon_prime_) != 1) throw DomainError("RealStructure: signs must be +-1");
}

RealStructure RealStructure::conjugation(Eigen::Index dim) {
    return RealStructure(Matrix::Identity(dim, dim), 1, 1);
}

RealStructure RealStructure::matrix_adjoint(Eigen::Index k) {
    Matrix u = Matrix::Zero(k * k, k * k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) u(i * k + j, j * k + i) = 1.0;
    return RealStructure(u, 1, 1);
}

double RealStructure::square_defect() const {
    // J² ξ = U conj(U) ξ
    return operator_norm(u_ * u_.conjugate() - static_cast<double>(epsilon_prime_) * Matrix::Identity(dim(), dim()));
}

double RealStructure::dirac_defect(const HermitianOperator& d) const {
    return operator_norm(conjugate(d.matrix()) - static_cast<double>(epsilon_) * d.matrix());
}

double order_zero_defect(const RealStructure& j, const std::vector<Matrix>& algebra) {
    double worst = 0.0;
    for (const Matrix& a : algebra)
        for (const Matrix& b : algebra) worst = std::max(worst, operator_norm(commutator(a, j.conjugate(b))));
    return worst;
}

double first_order_defect(const RealStructure& j, const HermitianOperator& d, const std::vector<Matrix>& algebra) {
    double worst = 0.0;
    for (const Matrix& a : algebra) {
        const Matrix da = commutator(d.matrix(), a);
        for (const Matrix& b : algebra) worst = std::max(worst, operator_norm(commutator(da, j.conjugate(b))));
    }
    return worst;
}

HermitianOperator inner_fluctuation(const HermitianOperator& d, const OneForm& a, const std::optional<RealStructure>& j) {
    if (a.realized.rows() != d.dim()) throw DomainError("inner_fluctuation: one-form dimension mismatch");
    if (!a.is_self_adjoint()) throw DomainError("inner_fluctuation: one-form is not self-adjoint");
    Matrix out = d.matrix() + a.realized;
    if (j) {
        if (j->dim() != d.dim()) throw DomainError("inner_fluctuation: real structure dimension mismatch");
        out += j->conjugate(a.realized);
    }
    return HermitianOperator(out, 1e-10);
}

OneForm gauge_transform(const OneForm& a, const Matrix& u, const HermitianOperator& d) {
    if (u.rows() != d.dim() || u.cols() != d.dim()) throw DomainError("gauge_transform: dimension mismatch");
    if ((u.adjoint() * u - Matrix::Identity(d.dim(), d.dim())).norm() > 1e-10) {
        throw DomainError("gauge_transform: u is not unitary");
    }
    const Matrix us = u.adjoint();
    // u a [D, b] u* = (u a)[D, b u*] - (u a b)[D, u*]
    std::vector<std::pair<Matrix, Matrix>> terms{{u, us}};
    for (const auto& [x, y] : a.terms) {
        terms.emplace_back(u * x, y * us);
        terms.emplace_back(-(u * x * y), us);
    }
    OneForm out = one_form(d, std::move(terms));
    const Matrix direct = u * commutator(d.matrix(), us) + u * a.realized * us;
    if ((out.realized - direct).norm() > 1e-9 * std::max(1.0, direct.norm())) {
        throw NumericalError("gauge_transform: term expansion disagrees with the direct formula");
    }
    return out;
}

Matrix gauge_unitary(const Matrix& u, const RealStructure& j) { return u * j.conjugate(u); }

void validate_perturbation(const PerturbationSpec& spec) {
    const Matrix p = spec.p.matrix();
    const Matrix& v = spec.v.matrix();
    if (v.rows() != p.rows()) throw DomainError("perturbation: V and P differ in dimension");
    if (!(spec.c > 0.0)) throw DomainError("perturbation: c must be positive");
    const double comm = operator_norm(p * v - v * p);
    if (comm > 1e-10) {
        std::ostringstream msg;
        msg << "perturbation: PV = VP fails, ‖PV - VP‖ = " << comm;
        throw DomainError(msg.str());
    }
    const double inside = operator_norm(p * v * p);
    if (inside > 1e-10) {
        std::ostringstream msg;
        msg << "perturbation: V must vanish on the code, ‖PVP‖ = " << inside;
        throw DomainError(msg.str());
    }
    const Matrix comp = kernel_projection(HermitianOperator(p)).basis();
    if (comp.cols() > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(comp.adjoint() * v * comp, Eigen::EigenvaluesOnly);
        const double low = es.eigenvalues().minCoeff();
        if (low < spec.c - 1e-10) {
            std::ostringstream msg;
            msg << "perturbation: (I-P)V(I-P) >= c(I-P) fails, smallest eigenvalue " << low << " < c = " << spec.c;
            throw DomainError(msg.str());
        }
    }
}

PerturbationResult perturb_code_preserving(const HermitianOperator& d, const PerturbationSpec& spec, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("perturb_code_preserving: lambda must be nonnegative");
    validate_perturbation(spec);
    const Eigensystem base = eigh(d);
    const CodeProjection kernel = spectral_projection(base, {0.0, 0.0});
    if (kernel.rank() != spec.p.rank() || operator_norm(kernel.matrix() - spec.p.matrix()) > 1e-9) {
        throw DomainError("perturb_code_preserving: P is not the kernel projection of D");
    }
    PerturbationResult r;
    r.d_lambda = HermitianOperator(d.matrix() + lambda * spec.v.matrix());
    const Eigensystem eig = eigh(r.d_lambda);
    r.spectrum = eig.report;
    const CodeProjection moved = spectral_projection(eig, {0.0, 0.0});
    r.kernel_agreement = moved.rank() == spec.p.rank() ? operator_norm(moved.matrix() - spec.p.matrix())
                                                        : std::numeric_limits<double>::infinity();
    if (r.kernel_agreement > 1e-9) throw NumericalError("perturb_code_preserving: kernel moved under the perturbation");
    r.gap_bound_holds = r.spectrum.gap >= base.report.gap + lambda * spec.c - 1e-9;
    return r;
}

double k_lambda(const std::vector<double>& eps, double c_const, double gap, double c, double lambda) {
    const double denom = gap + lambda * c;
    double k = 0.0;
    for (double e : eps) k += e * e * (1.0 + c_const * c_const / (denom * denom));
    return k;
}

SweepReport leakage_gap_sweep(const HermitianOperator& d, const Matrix& error, double theta,
                              const std::vector<double>& lambdas, bool normalized) {
    if (lambdas.empty()) throw DomainError("leakage_gap_sweep: empty lambda grid");
    const CodeProjection p = kernel_projection(d);
    if (p.rank() == 0) throw DomainError("leakage_gap_sweep: D has no kernel");
    const Eigen::Index dim = d.dim();
    const Matrix q = Matrix::Identity(dim, dim) - p.matrix();
    const double eps0 = operator_norm(commutator(d.matrix(), error));

    const NoiseFamily noise = NoiseFamily::linear({error}, "fixed error");
    const double leak = leakage_probability(p, noise.at(theta), code_state(p));

    SweepReport rep;
    rep.normalized = normalized;
    std::vector<double> lg, lb;
    for (double lambda : lambdas) {
        const PerturbationResult pr = perturb_code_preserving(d, {HermitianOperator(q), p, 1.0}, lambda);
        SweepRow row;
        row.lambda = lambda;
        row.gap = pr.spectrum.gap;
        const double raw = operator_norm(commutator(pr.d_lambda.matrix(), error));
        row.comm_norm = normalized ? eps0 : raw;
        row.bound = row.comm_norm / row.gap;
        row.bound_sq_times_theta = theta * row.bound * row.bound;
        row.leak_literal = leak;
        if (row.bound > 0.0) {
            lg.push_back(std::log(row.gap));
            lb.push_back(std::log(row.bound));
        }
        rep.rows.push_back(row);
    }
    if (lg.size() >= 2) {
        const auto n = static_cast<double>(lg.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            sx += lg[i];
            sy += lb[i];
            sxx += lg[i] * lg[i];
            sxy += lg[i] * lb[i];
        }
        const double den = n * sxx - sx * sx;
        rep.fitted_exponent = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    }
    return rep;
}

} // namespace speccode
