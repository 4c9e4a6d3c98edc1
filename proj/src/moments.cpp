#include "ambit/moments.hpp"

#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace ambit {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr int angle_nodes = 256;

// int_0^inf f, split at 1 so the singular end and the tail each get their own rule.
template <class F>
double half_line(F f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, inf);
}

}  // namespace

cplx field_cumulant(const Kernel& kernel, const CharacteristicQuadruplet& quad, double u, double t, double theta,
                    const VolatilityFunction& sigma) {
    if (u == 0.0) return 0.0;
    // s = t - e^v
    auto inner = [&](double v, bool imag) {
        const double lag = std::exp(v);
        // both ends contribute nothing: lag^(2 alpha - 1) -> 0 and exp(-eta lag) -> 0
        if (!(lag > 0.0) || !std::isfinite(lag)) return 0.0;
        cplx acc = 0.0;
        for (int j = 0; j < angle_nodes; ++j) {
            const double xi = two_pi * (j + 1) / angle_nodes;
            const double s = sigma ? sigma(t - lag, xi) : 1.0;
            acc += seed_cumulant(quad.seed, u * kernel.eval(lag, theta, xi) * s);
        }
        acc *= lag * two_pi / angle_nodes;
        return imag ? acc.imag() : acc.real();
    };
    boost::math::quadrature::exp_sinh<double> es;
    auto part = [&](bool imag) {
        auto f = [&](double v) { return inner(v, imag); };
        auto g = [&](double w) { return inner(-w, imag); };
        // (-inf, 0] as [0, inf) after reflection
        return es.integrate(f, 0.0, inf) + es.integrate(g, 0.0, inf);
    };
    const cplx r(part(false), part(true));
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw numerical_error("field_cumulant: quadrature did not converge");
    return r;
}

double field_mean(const Kernel& kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                  double theta) {
    const double m = quad.mean();
    if (m == 0.0) return 0.0;
    // int int K dxi du = 2 pi Kh(0, h, 0)
    return m * vol.mean() * two_pi * kernel.laplace_fourier(0.0, theta, 0).real();
}

double field_mean_from_origin(const Kernel& kernel, const CharacteristicQuadruplet& quad,
                              const VolatilityFieldSpec& vol, double t, double theta) {
    const double m = quad.mean();
    if (m == 0.0 || t <= 0.0) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double I = ts.integrate([&](double u) { return kernel.fourier_coeff(u, theta, 0).real(); }, 0.0, t);
    return m * vol.mean() * two_pi * I;
}

namespace {

// int K(u,h,xi) K(v,h',xi) dxi
double angular_product(const Kernel& kernel, double u, double v, double h, double hp) {
    const int order = kernel.fourier_order();
    if (order <= 64) {
        double acc = (kernel.fourier_coeff(u, h, 0) * std::conj(kernel.fourier_coeff(v, hp, 0))).real();
        for (int n = 1; n <= order; ++n)
            acc += 2.0 * (kernel.fourier_coeff(u, h, n) * std::conj(kernel.fourier_coeff(v, hp, n))).real();
        return two_pi * acc;
    }
    double acc = 0.0;
    for (int j = 0; j < angle_nodes; ++j) {
        const double xi = two_pi * (j + 1) / angle_nodes;
        acc += kernel.eval(u, h, xi) * kernel.eval(v, hp, xi);
    }
    return acc * two_pi / angle_nodes;
}

}  // namespace

double kernel_cross_integral(const Kernel& kernel, double lag, double theta, double theta_prime) {
    if (lag < 0.0) throw domain_error("kernel_cross_integral: lag must be >= 0");
    const double r = half_line([&](double u) { return angular_product(kernel, u, u + lag, theta, theta_prime); });
    if (!std::isfinite(r)) throw numerical_error("kernel_cross_integral: quadrature did not converge");
    return r;
}

double field_covariance(const Kernel& kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                        const CovarianceQuery& q) {
    // order the points so the second is the later one
    double t1 = q.t, t2 = q.t_prime, h1 = q.theta, h2 = q.theta_prime;
    if (t2 < t1) {
        std::swap(t1, t2);
        std::swap(h1, h2);
    }
    const double lag = t2 - t1;
    double cov = quad.variance() * vol.second_moment() * kernel_cross_integral(kernel, lag, h1, h2);

    const double m = quad.mean();
    if (m != 0.0 && vol.variance() > 0.0) {
        // E[L']^2 int int k(u,h) k(u',h') rho(s - s') with k the angular integral of K,
        // s = t1 - u, s' = t2 - u'
        auto k = [&](double u, double h) { return two_pi * kernel.fourier_coeff(u, h, 0).real(); };
        auto outer = [&](double u) {
            const double ku = k(u, h1);
            auto inner = [&](double up) { return k(up, h2) * vol.autocovariance((t1 - u) - (t2 - up)); };
            // kink where t2 - up = t1 - u
            const double kink = u + lag;
            boost::math::quadrature::tanh_sinh<double> ts;
            boost::math::quadrature::exp_sinh<double> es;
            const double head = kink > 0.0 ? ts.integrate(inner, 0.0, kink) : 0.0;
            return ku * (head + es.integrate(inner, kink, inf));
        };
        cov += m * m * half_line(outer);
    }
    if (!std::isfinite(cov)) throw numerical_error("field_covariance: quadrature did not converge");
    return cov;
}

}  // namespace ambit
