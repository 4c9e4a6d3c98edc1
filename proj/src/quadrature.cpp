#include "ambit/quadrature.hpp"

#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace ambit {

QuadratureRule gauss_laguerre(int n, double a) {
    if (n < 1) throw domain_error("gauss_laguerre needs n >= 1");
    if (!(a > -1.0)) throw domain_error("gauss_laguerre needs a > -1");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jac(k, k) = 2.0 * k + 1.0 + a;
        if (k + 1 < n) {
            const double b = std::sqrt((k + 1.0) * (k + 1.0 + a));
            jac(k, k + 1) = b;
            jac(k + 1, k) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success) throw numerical_error("gauss_laguerre: eigen solver failed");
    // Eigenvector weights lose relative accuracy at the large nodes, so polish each
    // node by Newton on the orthonormal polynomial and take Christoffel weights.
    const double p0 = 1.0 / std::sqrt(std::tgamma(a + 1.0));
    auto orthonormal = [&](double x, double& p, double& dp, double& christoffel) {
        double pm = 0.0, dpm = 0.0;
        p = p0;
        dp = 0.0;
        christoffel = p * p;
        double b_prev = 0.0;
        for (int k = 0; k < n; ++k) {
            const double b = std::sqrt((k + 1.0) * (k + 1.0 + a));
            const double d = 2.0 * k + 1.0 + a;
            const double pn = ((x - d) * p - b_prev * pm) / b;
            const double dpn = ((x - d) * dp + p - b_prev * dpm) / b;
            pm = p;
            dpm = dp;
            p = pn;
            dp = dpn;
            b_prev = b;
            if (k + 1 < n) christoffel += p * p;
        }
    };
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double x = es.eigenvalues()(k), p, dp, c;
        for (int it = 0; it < 3; ++it) {
            orthonormal(x, p, dp, c);
            if (dp == 0.0 || !std::isfinite(p / dp)) break;
            x -= p / dp;
        }
        orthonormal(x, p, dp, c);
        r.nodes[k] = x;
        r.weights[k] = 1.0 / c;
    }
    return r;
}

QuadratureRule periodic_trapezoid(int n) {
    if (n < 1) throw domain_error("periodic_trapezoid needs n >= 1");
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.assign(n, two_pi / n);
    for (int j = 0; j < n; ++j) r.nodes[j] = two_pi * j / n;
    return r;
}

std::complex<double> bromwich_inverse(const std::function<std::complex<double>(std::complex<double>)>& F,
                                      double t, double A, int n_terms, int m_euler) {
    if (!(t > 0.0)) throw domain_error("bromwich_inverse needs t > 0");
    const double pi = two_pi / 2.0;
    const double x = A / (2.0 * t);
    const double h = pi / t;
    // partial sums s_k of sum_k (-1)^k a_k
    std::vector<std::complex<double>> partial(n_terms + m_euler + 1);
    std::complex<double> s = 0.5 * F({x, 0.0});
    for (int k = 1; k <= n_terms + m_euler; ++k) {
        const std::complex<double> ak = 0.5 * (F({x, k * h}) + F({x, -k * h}));
        s += (k % 2 ? -1.0 : 1.0) * ak;
        partial[k] = s;
    }
    std::complex<double> acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= m_euler; ++j) {
        acc += binom * partial[n_terms + j];
        binom = binom * (m_euler - j) / (j + 1.0);
    }
    acc /= std::ldexp(1.0, m_euler);
    return std::exp(A / 2.0) / t * acc;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace ambit
