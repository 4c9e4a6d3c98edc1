#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ambit {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Generalized Gauss-Laguerre rule for weight x^a e^{-x} on (0, inf), a > -1,
// from the Jacobi matrix eigenproblem.
QuadratureRule gauss_laguerre(int n, double a);

// Periodic trapezoid nodes 2*pi*j/n, j = 0..n-1, with equal weights 2*pi/n.
QuadratureRule periodic_trapezoid(int n);

// Abate-Whitt Euler inversion of a Laplace transform. F may belong to a
// complex-valued original, so both halves of the Bromwich line are summed.
std::complex<double> bromwich_inverse(const std::function<std::complex<double>(std::complex<double>)>& F,
                                      double t, double A = 18.4, int n_terms = 30, int m_euler = 12);

// Sum with pairwise splitting; the result depends only on the input order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace ambit
