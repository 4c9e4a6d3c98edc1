#include "ambit/kernels.hpp"

#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"
#include "ambit/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ambit {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double gamma_kernel(double t, double alpha, double beta) {
    if (!(t > 0.0)) throw domain_error("gamma_kernel: lag must be > 0, got " + num(t));
    return std::exp((alpha - 1.0) * std::log(t) - beta * t);
}

double laguerre(int k, double alpha, double x) {
    if (k < 0) throw domain_error("laguerre: k must be >= 0");
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    for (int j = 1; j < k; ++j) {
        const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double WeightFunction::operator()(double t) const { return level - amplitude * std::exp(-rate * t); }

double WeightFunction::sup_abs() const { return std::max(std::abs(level), std::abs(level - amplitude)); }

double cardioid_J(double t, double theta_h, double theta_xi, const WeightFunction& w) {
    return (1.0 + w(t) * std::cos(theta_xi - theta_h)) / two_pi;
}

// ---------------------------------------------------------------------------

void Kernel::check_lag(double t) const {
    if (!(t > 0.0)) throw domain_error(family() + ": lag must be > 0, got " + num(t));
}

void Kernel::check_abscissa(cplx z) const {
    if (!(z.real() > -gamma_decay()))
        throw domain_error(family() + ": Re z = " + num(z.real()) + " not above abscissa -" + num(gamma_decay()));
}

cplx Kernel::fourier_coeff(double t, double theta_h, int n) const {
    check_lag(t);
    constexpr int P = 256;
    cplx acc = 0.0;
    for (int j = 0; j < P; ++j) {
        const double phi = two_pi * j / P;
        acc += std::polar(1.0, -n * phi) * eval(t, theta_h, phi);
    }
    return acc / static_cast<double>(P);
}

cplx Kernel::laplace_fourier(cplx z, double theta_h, int n) const {
    check_abscissa(z);
    using namespace boost::math::quadrature;
    auto part = [&](bool imag) {
        auto f = [&](double t) {
            const cplx v = std::exp(-z * t) * fourier_coeff(t, theta_h, n);
            return imag ? v.imag() : v.real();
        };
        tanh_sinh<double> ts;
        exp_sinh<double> es;
        return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
    };
    return {part(false), part(true)};
}

void Kernel::eval_grid(double t, int P, double* out) const {
    for (int j = 0; j < P; ++j)
        for (int l = 0; l < P; ++l) out[j * P + l] = eval(t, two_pi * j / P, two_pi * l / P);
}

KernelTransforms Kernel::transforms() const {
    KernelTransforms kt;
    for (int n = -fourier_order(); n <= fourier_order(); ++n) kt.fourier_support.push_back(n);
    kt.gamma_decay = gamma_decay();
    return kt;
}

// ---------------------------------------------------------------------------

double MeanReversion::operator()(double theta) const {
    double v = mean;
    for (std::size_t k = 0; k < cos_k.size(); ++k) v += cos_k[k] * std::cos((k + 1.0) * theta);
    for (std::size_t k = 0; k < sin_k.size(); ++k) v += sin_k[k] * std::sin((k + 1.0) * theta);
    return v;
}

namespace {

double extremum(const MeanReversion& eta, double sign) {
    constexpr int G = 4096;
    int best = 0;
    double bv = sign * eta(0.0);
    for (int j = 1; j < G; ++j) {
        const double v = sign * eta(two_pi * j / G);
        if (v < bv) {
            bv = v;
            best = j;
        }
    }
    const double h = two_pi / G;
    auto r = boost::math::tools::brent_find_minima([&](double x) { return sign * eta(x); }, (best - 1) * h,
                                                   (best + 1) * h, 52);
    return sign * std::min(bv, r.second);
}

}  // namespace

double MeanReversion::inf() const { return extremum(*this, 1.0); }
double MeanReversion::sup() const { return extremum(*this, -1.0); }

GammaCardioidKernel::GammaCardioidKernel(double alpha, MeanReversion eta, WeightFunction w)
    : alpha_(alpha), eta_(std::move(eta)), w_(w) {
    if (!(alpha > 0.5 && alpha <= 1.0)) throw domain_error("gamma_cardioid: alpha must lie in (1/2, 1], got " + num(alpha));
    eta_min_ = eta_.inf();
    if (!(eta_min_ > 0.0)) throw domain_error("gamma_cardioid: inf eta must be > 0, got " + num(eta_min_));
    if (!(w_.sup_abs() <= 1.0)) throw domain_error("gamma_cardioid: |w(t)| must stay <= 1");
    if (w_.amplitude != 0.0 && !(w_.rate > 0.0)) throw domain_error("gamma_cardioid: weight rate must be > 0");
    M_ = std::pow(t_min, alpha_ - 1.0) * (1.0 + w_.sup_abs()) / two_pi;
}

double GammaCardioidKernel::eval(double t, double theta_h, double theta_xi) const {
    check_lag(t);
    return gamma_kernel(t, alpha_, eta_(theta_h)) * cardioid_J(t, theta_h, theta_xi, w_);
}

void GammaCardioidKernel::eval_grid(double t, int P, double* out) const {
    check_lag(t);
    std::vector<double> c(P);
    for (int d = 0; d < P; ++d) c[d] = std::cos(two_pi * d / P);
    const double wt = w_(t);
    for (int j = 0; j < P; ++j) {
        const double g = gamma_kernel(t, alpha_, eta_(two_pi * j / P)) / two_pi;
        for (int l = 0; l < P; ++l) out[j * P + l] = g * (1.0 + wt * c[(l - j + P) % P]);
    }
}

cplx GammaCardioidKernel::fourier_coeff(double t, double theta_h, int n) const {
    check_lag(t);
    if (std::abs(n) > 1) return 0.0;
    const double g = gamma_kernel(t, alpha_, eta_(theta_h));
    if (n == 0) return g / two_pi;
    return std::polar(1.0, -n * theta_h) * (w_(t) * g / (4.0 * pi));
}

cplx GammaCardioidKernel::laplace_fourier(cplx z, double theta_h, int n) const {
    check_abscissa(z);
    if (std::abs(n) > 1) return 0.0;
    const double eta = eta_(theta_h);
    const double ga = std::tgamma(alpha_);
    const cplx base = std::pow(eta + z, -alpha_);
    if (n == 0) return ga / two_pi * base;
    cplx bracket = w_.level * base;
    if (w_.amplitude != 0.0) bracket -= w_.amplitude * std::pow(eta + z + w_.rate, -alpha_);
    return std::polar(1.0, -n * theta_h) * (ga / (4.0 * pi)) * bracket;
}

// ---------------------------------------------------------------------------

double trig_basis(int a, double theta) {
    if (a == 0) return 1.0;
    const int m = (a + 1) / 2;
    return (a % 2) ? std::cos(m * theta) : std::sin(m * theta);
}

cplx trig_basis_fourier(int a, int n) {
    if (a == 0) return n == 0 ? 1.0 : 0.0;
    const int m = (a + 1) / 2;
    if (std::abs(n) != m) return 0.0;
    if (a % 2) return 0.5;
    return n > 0 ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
}

namespace {

double trig_norm_sq(int a) { return a == 0 ? two_pi : pi; }

}  // namespace

SemiParametricKernel::SemiParametricKernel(double alpha, int order, std::vector<double> coeffs)
    : alpha_(alpha), order_(order), C_(std::move(coeffs)) {
    if (!(alpha > 0.5)) throw domain_error("semi_parametric: alpha must be > 1/2, got " + num(alpha));
    if (order < 0) throw domain_error("semi_parametric: order must be >= 0");
    const std::size_t d = static_cast<std::size_t>(spatial_dim());
    if (C_.size() != (order + 1) * d * d)
        throw domain_error("semi_parametric: coefficient tensor must have (n+1)(2n+1)^2 entries");
    for (double c : C_)
        if (!std::isfinite(c)) throw domain_error("semi_parametric: non-finite coefficient");

    gamma_ = 0.4;
    std::vector<double> row(order_ + 1, 0.0);
    for (int i = 0; i <= order_; ++i)
        for (int a = 0; a < spatial_dim(); ++a)
            for (int b = 0; b < spatial_dim(); ++b) row[i] += std::abs(coeff(i, a, b));
    const double t_max = std::max(200.0, 40.0 * (order_ + alpha_));
    constexpr int G = 8000;
    double sup = 0.0;
    for (int g = 0; g <= G; ++g) {
        const double t = t_min * std::pow(t_max / t_min, static_cast<double>(g) / G);
        double s = 0.0;
        for (int i = 0; i <= order_; ++i) s += row[i] * std::abs(temporal(i, t));
        sup = std::max(sup, s * std::exp(gamma_ * t));
    }
    M_ = 1.05 * sup;
}

SemiParametricKernel SemiParametricKernel::separable(double alpha, const SeparableCoefficients& c) {
    const int n = static_cast<int>(c.c1.size()) - 1;
    if (n < 0) throw domain_error("semi_parametric: empty coefficient arrays");
    for (const auto* v : {&c.c21, &c.c22, &c.c31, &c.c32})
        if (static_cast<int>(v->size()) != n + 1)
            throw domain_error("semi_parametric: coefficient arrays must all have length n+1");
    const int d = 2 * n + 1;
    // K2 and K3 in the raw trig system; sin(0 .) vanishes so c21[0], c31[0] drop out.
    std::vector<double> k2(d, 0.0), k3(d, 0.0);
    k2[0] = c.c22[0];
    k3[0] = c.c32[0];
    for (int m = 1; m <= n; ++m) {
        k2[2 * m - 1] = c.c22[m];
        k2[2 * m] = c.c21[m];
        k3[2 * m - 1] = c.c32[m];
        k3[2 * m] = c.c31[m];
    }
    std::vector<double> C(static_cast<std::size_t>(n + 1) * d * d);
    for (int i = 0; i <= n; ++i)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) C[(static_cast<std::size_t>(i) * d + a) * d + b] = c.c1[i] * k2[a] * k3[b];
    return SemiParametricKernel(alpha, n, std::move(C));
}

double SemiParametricKernel::temporal(int i, double t) const {
    return std::exp((alpha_ - 1.0) * std::log(t) - 0.5 * t) * laguerre(i, alpha_, t);
}

cplx SemiParametricKernel::temporal_laplace(int i, cplx z) const {
    // L_i^(a)(t) = sum_j (-1)^j binom(i+a, i-j) t^j / j!, each term a gamma integral
    const cplx s = z + 0.5;
    const double lg = std::lgamma(i + alpha_ + 1.0);
    cplx acc = 0.0;
    for (int j = 0; j <= i; ++j) {
        const double c = std::exp(lg - std::lgamma(i - j + 1.0) - std::lgamma(j + 1.0)) / (alpha_ + j);
        acc += (j % 2 ? -c : c) * std::pow(s, -(alpha_ + j));
    }
    return acc;
}

double SemiParametricKernel::spatial_sum(int i, double theta_h, double theta_xi) const {
    double acc = 0.0;
    for (int a = 0; a < spatial_dim(); ++a) {
        const double ga = trig_basis(a, theta_h);
        double inner = 0.0;
        for (int b = 0; b < spatial_dim(); ++b) inner += coeff(i, a, b) * trig_basis(b, theta_xi);
        acc += ga * inner;
    }
    return acc;
}

double SemiParametricKernel::eval(double t, double theta_h, double theta_xi) const {
    check_lag(t);
    double acc = 0.0;
    for (int i = 0; i <= order_; ++i) acc += temporal(i, t) * spatial_sum(i, theta_h, theta_xi);
    return acc;
}

void SemiParametricKernel::eval_grid(double t, int P, double* out) const {
    check_lag(t);
    const int d = spatial_dim();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i <= order_; ++i) {
        const double f = temporal(i, t);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) A(a, b) += f * coeff(i, a, b);
    }
    Eigen::MatrixXd B(P, d);
    for (int j = 0; j < P; ++j)
        for (int a = 0; a < d; ++a) B(j, a) = trig_basis(a, two_pi * j / P);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(out, P, P);
    m.noalias() = B * A * B.transpose();
}

namespace {

// sum_{a,b} C[i][a][b] g_a(theta_h) ghat_b(n)
cplx spatial_fourier(const SemiParametricKernel& k, int i, double theta_h, int n) {
    const int m = std::abs(n);
    if (m > k.order()) return 0.0;
    cplx acc = 0.0;
    const int b_lo = m == 0 ? 0 : 2 * m - 1;
    const int b_hi = m == 0 ? 0 : 2 * m;
    for (int a = 0; a < k.spatial_dim(); ++a) {
        const double ga = trig_basis(a, theta_h);
        for (int b = b_lo; b <= b_hi; ++b) acc += ga * k.coeff(i, a, b) * trig_basis_fourier(b, n);
    }
    return acc;
}

}  // namespace

cplx SemiParametricKernel::fourier_coeff(double t, double theta_h, int n) const {
    check_lag(t);
    if (std::abs(n) > order_) return 0.0;
    cplx acc = 0.0;
    for (int i = 0; i <= order_; ++i) acc += temporal(i, t) * spatial_fourier(*this, i, theta_h, n);
    return acc;
}

cplx SemiParametricKernel::laplace_fourier(cplx z, double theta_h, int n) const {
    check_abscissa(z);
    if (std::abs(n) > order_) return 0.0;
    cplx acc = 0.0;
    for (int i = 0; i <= order_; ++i) {
        const cplx sp = spatial_fourier(*this, i, theta_h, n);
        if (sp != 0.0) acc += sp * temporal_laplace(i, z);
    }
    return acc;
}

double SemiParametricKernel::l2_norm_sq() const {
    // int f_i f_j dt = int t^(2a-2) e^-t L_i L_j dt, exact for a rule of order+1 nodes
    const auto rule = gauss_laguerre(order_ + 2, 2.0 * alpha_ - 2.0);
    const int n = order_ + 1;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                G(i, j) += rule.weights[q] * laguerre(i, alpha_, rule.nodes[q]) * laguerre(j, alpha_, rule.nodes[q]);
    double acc = 0.0;
    for (int a = 0; a < spatial_dim(); ++a)
        for (int b = 0; b < spatial_dim(); ++b) {
            Eigen::VectorXd c(n);
            for (int i = 0; i < n; ++i) c(i) = coeff(i, a, b);
            acc += trig_norm_sq(a) * trig_norm_sq(b) * c.dot(G * c);
        }
    return acc;
}

// ---------------------------------------------------------------------------

namespace {

// Angular grid values K(t, phi_j, phi_k) on a P x P periodic grid.
Eigen::MatrixXd angular_grid(const Kernel& k, double t, int P) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(P, P);
    k.eval_grid(t, P, m.data());
    return m;
}

}  // namespace

SemiParametricKernel project_kernel(const Kernel& target, int order, double alpha, const ProjectionOptions& opt) {
    if (order < 0) throw domain_error("project_kernel: order must be >= 0");
    if (!(alpha > 0.5)) throw domain_error("project_kernel: alpha must be > 1/2");
    const int n = order + 1;
    const int D = 2 * order + 1;
    const int P = opt.angle_nodes;
    if (P < 2 * D) throw domain_error("project_kernel: too few angular nodes for the requested order");

    const auto rule = gauss_laguerre(opt.time_nodes, 2.0 * alpha - 2.0);

    Eigen::MatrixXd B(P, D);
    for (int j = 0; j < P; ++j)
        for (int a = 0; a < D; ++a) B(j, a) = trig_basis(a, two_pi * j / P);
    const double cell = (two_pi / P) * (two_pi / P);

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::MatrixXd> d(n, Eigen::MatrixXd::Zero(D, D));
    std::vector<double> lag(n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double w = rule.weights[q];
        for (int i = 0; i < n; ++i) lag[i] = laguerre(i, alpha, t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) G(i, j) += w * lag[i] * lag[j];
        if (w == 0.0) continue;
        // <K, f_i> with the weight t^(2a-2) e^-t factored out of f_i * K
        const double scale = std::exp((1.0 - alpha) * std::log(t) + 0.5 * t);
        const Eigen::MatrixXd S = cell * (B.transpose() * angular_grid(target, t, P) * B);
        if (!S.allFinite())
            throw numerical_error("project_kernel: non-finite kernel values at t = " + num(t));
        for (int i = 0; i < n; ++i) d[i] += (w * lag[i] * scale) * S;
    }

    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw numerical_error("project_kernel: Gram matrix not positive definite");

    std::vector<double> C(static_cast<std::size_t>(n) * D * D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) {
            Eigen::VectorXd rhs(n);
            for (int i = 0; i < n; ++i) rhs(i) = d[i](a, b);
            const Eigen::VectorXd c = llt.solve(rhs) / (trig_norm_sq(a) * trig_norm_sq(b));
            for (int i = 0; i < n; ++i) {
                if (!std::isfinite(c(i)))
                    throw numerical_error("project_kernel: non-finite coefficient (i=" + std::to_string(i) +
                                          ", a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")");
                C[(static_cast<std::size_t>(i) * D + a) * D + b] = c(i);
            }
        }
    return SemiParametricKernel(alpha, order, std::move(C));
}

double l2_kernel_distance(const Kernel& a, const Kernel& b, const ProjectionOptions& opt) {
    const double lambda = 2.0 * std::min(a.time_decay_rate(), b.time_decay_rate());
    const double beta = 2.0 * std::min(a.alpha(), b.alpha()) - 2.0;
    const auto rule = gauss_laguerre(opt.time_nodes, beta);
    const int P = opt.angle_nodes;
    const double cell = (two_pi / P) * (two_pi / P);
    std::vector<double> terms;
    terms.reserve(rule.nodes.size());
    std::vector<double> ga(static_cast<std::size_t>(P) * P), gb(ga.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = rule.nodes[q];
        const double t = u / lambda;
        if (rule.weights[q] == 0.0) continue;
        a.eval_grid(t, P, ga.data());
        b.eval_grid(t, P, gb.data());
        double s = 0.0;
        for (std::size_t k = 0; k < ga.size(); ++k) s += (ga[k] - gb[k]) * (ga[k] - gb[k]);
        terms.push_back(rule.weights[q] * std::exp(-beta * std::log(u) + u) * cell * s);
    }
    const double v = pairwise_sum(terms) / lambda;
    if (!std::isfinite(v)) throw numerical_error("l2_kernel_distance: non-finite quadrature");
    return std::sqrt(std::max(0.0, v));
}

}  // namespace ambit
