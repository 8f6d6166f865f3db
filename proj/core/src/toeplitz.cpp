#include "speccode/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <gsl/gsl_integration.h>

#include "speccode/errors.hpp"

namespace speccode {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 normal(double t, double f) { return {std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), std::cos(t)}; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 tangential(const Vec3& g, const Vec3& n) {
    const double s = dot(g, n);
    return {g[0] - s * n[0], g[1] - s * n[1], g[2] - s * n[2]};
}

SphereFunction::Gradient finite_difference(SphereFunction::Value v) {
    return [v = std::move(v)](double t, double f) -> Vec3 {
        constexpr double h = 1e-5;
        const double tc = std::clamp(t, 2 * h, kPi - 2 * h);
        const double ft = (v(tc + h, f) - v(tc - h, f)) / (2 * h);
        const double fp = (v(tc, f + h) - v(tc, f - h)) / (2 * h);
        const double st = std::sin(tc);
        const Vec3 et{std::cos(tc) * std::cos(f), std::cos(tc) * std::sin(f), -st};
        const Vec3 ep{-std::sin(f), std::cos(f), 0.0};
        return {ft * et[0] + fp / st * ep[0], ft * et[1] + fp / st * ep[1], ft * et[2] + fp / st * ep[2]};
    };
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double slope_of(const std::vector<int>& ps, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ys[i] > 0.0) {
            lx.push_back(std::log(static_cast<double>(ps[i])));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) return 0.0;
    const auto n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

SphereFunction::SphereFunction(std::string name, Value value, Gradient gradient)
    : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)) {
    if (!value_) throw DomainError("SphereFunction: empty callable");
    if (!gradient_) gradient_ = finite_difference(value_);
}

Vec3 SphereFunction::gradient(double theta, double phi) const { return gradient_(theta, phi); }

SphereFunction SphereFunction::constant(double c) {
    std::ostringstream name;
    name << c;
    return SphereFunction(name.str(), [c](double, double) { return c; }, [](double, double) { return Vec3{0, 0, 0}; });
}

SphereFunction SphereFunction::monomial(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0) throw DomainError("SphereFunction::monomial: negative exponent");
    std::string name;
    auto factor = [&](const char* v, int e) {
        if (e == 0) return;
        if (!name.empty()) name += "*";
        name += v;
        if (e > 1) name += "^" + std::to_string(e);
    };
    factor("x", a);
    factor("y", b);
    factor("z", c);
    if (name.empty()) name = "1";
    auto value = [a, b, c](double t, double f) {
        const Vec3 n = normal(t, f);
        return ipow(n[0], a) * ipow(n[1], b) * ipow(n[2], c);
    };
    auto grad = [a, b, c](double t, double f) {
        const Vec3 n = normal(t, f);
        const Vec3 g{a > 0 ? a * ipow(n[0], a - 1) * ipow(n[1], b) * ipow(n[2], c) : 0.0,
                     b > 0 ? b * ipow(n[0], a) * ipow(n[1], b - 1) * ipow(n[2], c) : 0.0,
                     c > 0 ? c * ipow(n[0], a) * ipow(n[1], b) * ipow(n[2], c - 1) : 0.0};
        return tangential(g, n);
    };
    return SphereFunction(name, value, grad);
}

SphereFunction SphereFunction::bump(double theta0, double width) {
    if (!(width > 0.0)) throw DomainError("SphereFunction::bump: width must be positive");
    auto value = [theta0, width](double t, double) {
        const double r = (t - theta0) / width;
        if (std::abs(r) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - r * r));
    };
    auto grad = [theta0, width](double t, double f) -> Vec3 {
        const double r = (t - theta0) / width;
        if (std::abs(r) >= 1.0) return {0, 0, 0};
        const double s = 1.0 - r * r;
        const double ft = std::exp(1.0 - 1.0 / s) * (-2.0 * r / (s * s)) / width;
        return {ft * std::cos(t) * std::cos(f), ft * std::cos(t) * std::sin(f), -ft * std::sin(t)};
    };
    std::ostringstream name;
    name << "bump(" << theta0 << "," << width << ")";
    return SphereFunction(name.str(), value, grad);
}

SphereFunction SphereFunction::product(const SphereFunction& f, const SphereFunction& g) {
    return SphereFunction(
        f.name() + "*" + g.name(), [f, g](double t, double p) { return f(t, p) * g(t, p); },
        [f, g](double t, double p) {
            const double a = f(t, p), b = g(t, p);
            const Vec3 ga = f.gradient(t, p), gb = g.gradient(t, p);
            return Vec3{a * gb[0] + b * ga[0], a * gb[1] + b * ga[1], a * gb[2] + b * ga[2]};
        });
}

SphereFunction SphereFunction::parse(const std::string& text) {
    if (text == "bump_north") return bump(kPi / 6, kPi / 6);
    if (text == "bump_south") return bump(5 * kPi / 6, kPi / 6);
    double scale = 1.0;
    int e[3] = {0, 0, 0};
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('*', start), text.size());
        const std::string tok = text.substr(start, end - start);
        if (tok.empty()) throw DomainError("SphereFunction::parse: empty factor in '" + text + "'");
        if (tok[0] == 'x' || tok[0] == 'y' || tok[0] == 'z') {
            int power = 1;
            if (tok.size() > 1) {
                if (tok[1] != '^' || tok.size() < 3) throw DomainError("SphereFunction::parse: bad factor '" + tok + "'");
                try {
                    std::size_t used = 0;
                    power = std::stoi(tok.substr(2), &used);
                    if (used != tok.size() - 2 || power < 0) throw DomainError("");
                } catch (const std::exception&) {
                    throw DomainError("SphereFunction::parse: bad exponent in '" + tok + "'");
                }
            }
            e[tok[0] - 'x'] += power;
        } else {
            try {
                std::size_t used = 0;
                scale *= std::stod(tok, &used);
                if (used != tok.size()) throw DomainError("");
            } catch (const std::exception&) {
                throw DomainError("SphereFunction::parse: cannot read factor '" + tok + "'");
            }
        }
        start = end + 1;
    }
    const SphereFunction m = monomial(e[0], e[1], e[2]);
    if (scale == 1.0) return m;
    return product(constant(scale), m);
}

double poisson_bracket(const SphereFunction& f, const SphereFunction& g, double theta, double phi) {
    return dot(normal(theta, phi), cross(g.gradient(theta, phi), f.gradient(theta, phi)));
}

SphereFunction poisson_bracket(const SphereFunction& f, const SphereFunction& g) {
    return SphereFunction("{" + f.name() + "," + g.name() + "}",
                          [f, g](double t, double p) { return poisson_bracket(f, g, t, p); });
}

double sup_norm(const SphereFunction& f, int samples) {
    double s = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = kPi * i / samples;
        for (int j = 0; j < samples; ++j) s = std::max(s, std::abs(f(t, 2 * kPi * j / samples)));
    }
    return s;
}

ToeplitzQuantizer build_quantizer(int p, int q) {
    if (p < 1) throw DomainError("build_quantizer: p must be positive");
    if (q < p + 4) throw DomainError("build_quantizer: quadrature order must be at least p + 4");
    ToeplitzQuantizer qz;
    qz.p_ = p;
    qz.q_ = q;
    qz.hbar_ = 1.0 / p;

    const int nphi = 2 * p + 8;
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(q));
    if (!table) throw NumericalError("build_quantizer: Gauss-Legendre table allocation failed");
    for (int i = 0; i < q; ++i) {
        double u = 0.0, wu = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &u, &wu, table);
        for (int j = 0; j < nphi; ++j) {
            qz.theta_.push_back(std::acos(u));
            qz.phi_.push_back(2 * kPi * j / nphi);
            qz.weight_.push_back(wu * 2 * kPi / nphi);
        }
    }
    gsl_integration_glfixed_table_free(table);

    const auto npts = static_cast<Eigen::Index>(qz.theta_.size());
    qz.psi_.resize(npts, p + 1);
    for (int k = 0; k <= p; ++k) {
        // c_k² = (p+1) C(p,k) / 4π
        const double log_c = 0.5 * (std::log(p + 1.0) + std::lgamma(p + 1.0) - std::lgamma(k + 1.0) -
                                    std::lgamma(p - k + 1.0) - std::log(4 * kPi));
        for (Eigen::Index i = 0; i < npts; ++i) {
            const double t = qz.theta_[static_cast<std::size_t>(i)];
            const double mag = std::exp(log_c) * ipow(std::sin(t / 2), k) * ipow(std::cos(t / 2), p - k);
            qz.psi_(i, k) = std::polar(mag, k * qz.phi_[static_cast<std::size_t>(i)]);
        }
    }
    const Matrix gram = toeplitz_matrix(qz, SphereFunction::constant(1.0));
    qz.gram_defect_ = operator_norm(gram - Matrix::Identity(p + 1, p + 1));
    if (qz.gram_defect_ > 1e-6) {
        std::ostringstream msg;
        msg << "build_quantizer: Gram defect " << qz.gram_defect_ << " at p = " << p << ", q = " << q;
        throw NumericalError(msg.str());
    }
    return qz;
}

ToeplitzQuantizer ToeplitzQuantizer::with_hbar(double hbar) const {
    if (!(hbar > 0.0)) throw DomainError("with_hbar: hbar must be positive");
    ToeplitzQuantizer out = *this;
    out.hbar_ = hbar;
    return out;
}

double ToeplitzQuantizer::integrate(const SphereFunction& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < theta_.size(); ++i) s += weight_[i] * f(theta_[i], phi_[i]);
    return s;
}

Matrix toeplitz_matrix(const ToeplitzQuantizer& qz, const SphereFunction& f) {
    Eigen::VectorXd wf(static_cast<Eigen::Index>(qz.theta_.size()));
    for (std::size_t i = 0; i < qz.theta_.size(); ++i) {
        wf(static_cast<Eigen::Index>(i)) = qz.weight_[i] * f(qz.theta_[i], qz.phi_[i]);
    }
    const Matrix weighted = qz.psi_.array().colwise() * wf.cast<Complex>().array();
    return qz.psi_.adjoint() * weighted;
}

Calibration calibrate(const std::vector<int>& ps, int extra_order) {
    if (ps.empty()) throw DomainError("calibrate: empty p list");
    Calibration c;
    c.ps = ps;
    const SphereFunction x = SphereFunction::x();
    const SphereFunction y = SphereFunction::y();
    for (int p : ps) {
        const ToeplitzQuantizer qz = build_quantizer(p, p + extra_order);
        const Matrix tx = toeplitz_matrix(qz, x);
        const Matrix ty = toeplitz_matrix(qz, y);
        // {x, y} = -z
        const Matrix b = -toeplitz_matrix(qz, SphereFunction::z());
        const Matrix a = Complex(0.0, -static_cast<double>(p)) * commutator(tx, ty);
        const double t = (a.adjoint() * b).trace().real() / a.squaredNorm();
        c.per_p.push_back(1.0 / t);
    }
    const auto n = static_cast<Eigen::Index>(ps.size());
    const Eigen::Index terms = std::min<Eigen::Index>(n, 3);
    Eigen::MatrixXd a(n, terms);
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double inv = 1.0 / ps[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < terms; ++j) a(i, j) = std::pow(inv, static_cast<double>(j));
        s(i) = c.per_p[static_cast<std::size_t>(i)];
    }
    c.s_inf = a.colPivHouseholderQr().solve(s)(0);
    return c;
}

AxiomTable verify_axioms(const std::vector<int>& ps, const SphereFunction& f, const SphereFunction& g, int extra_order) {
    if (ps.size() < 3) throw DomainError("verify_axioms: need at least three p values");
    for (std::size_t i = 1; i < ps.size(); ++i) {
        if (ps[i] <= ps[i - 1]) throw DomainError("verify_axioms: p values must ascend");
    }
    AxiomTable table;
    table.s_inf = calibrate(ps, extra_order).s_inf;
    const SphereFunction fg = SphereFunction::product(f, g);
    const SphereFunction bracket = poisson_bracket(f, g);
    const double sup_f = sup_norm(f);
    for (int p : ps) {
        const ToeplitzQuantizer qz = build_quantizer(p, p + extra_order).with_hbar(table.s_inf / p);
        const double hbar = qz.hbar();
        const Matrix tf = toeplitz_matrix(qz, f);
        const Matrix tg = toeplitz_matrix(qz, g);
        AxiomRow row;
        row.p = p;
        row.gram = qz.gram_defect();
        row.delta1 = operator_norm(tf * tg - toeplitz_matrix(qz, fg));
        row.delta2 = operator_norm(commutator(tf, tg) / Complex(0.0, hbar) - toeplitz_matrix(qz, bracket));
        row.delta3 = std::abs(2 * kPi * hbar * tf.trace().real() - qz.integrate(f)) / (4 * kPi);
        row.delta4 = std::abs(operator_norm(tf) - sup_f);
        row.trace_constant = 2 * kPi * hbar * toeplitz_matrix(qz, SphereFunction::constant(1.0)).trace().real() / (4 * kPi);
        table.rows.push_back(row);
    }
    std::vector<double> d1, d2, d3, d4;
    for (const auto& r : table.rows) {
        d1.push_back(r.delta1);
        d2.push_back(r.delta2);
        d3.push_back(r.delta3);
        d4.push_back(r.delta4);
    }
    table.slope1 = slope_of(ps, d1);
    table.slope2 = slope_of(ps, d2);
    table.slope3 = slope_of(ps, d3);
    table.slope4 = slope_of(ps, d4);
    return table;
}

std::pair<SphereFunction, SphereFunction> c1_coefficient(const SphereFunction& f, const SphereFunction& g) {
    SphereFunction re("C1re(" + f.name() + "," + g.name() + ")",
                      [f, g](double t, double p) { return -0.5 * dot(f.gradient(t, p), g.gradient(t, p)); });
    SphereFunction im("C1im(" + f.name() + "," + g.name() + ")",
                      [f, g](double t, double p) { return 0.5 * poisson_bracket(f, g, t, p); });
    return {re, im};
}

double verify_c1(const ToeplitzQuantizer& qz, const SphereFunction& f, const SphereFunction& g) {
    const Matrix tf = toeplitz_matrix(qz, f);
    const Matrix tg = toeplitz_matrix(qz, g);
    const Matrix lhs = (tf * tg - toeplitz_matrix(qz, SphereFunction::product(f, g))) / qz.hbar();
    const auto [re, im] = c1_coefficient(f, g);
    const Matrix rhs = toeplitz_matrix(qz, re) + Complex(0.0, 1.0) * toeplitz_matrix(qz, im);
    return operator_norm(lhs - rhs);
}

KLApprox kl_approx_check(const ToeplitzQuantizer& qz, const SphereFunction& f, const SphereFunction& g) {
    const Matrix m = toeplitz_matrix(qz, f).adjoint() * toeplitz_matrix(qz, g);
    KLApprox out;
    out.lambda = m.trace() / static_cast<double>(qz.size());
    out.defect = operator_norm(m - out.lambda * Matrix::Identity(qz.size(), qz.size()));
    return out;
}

} // namespace speccode
