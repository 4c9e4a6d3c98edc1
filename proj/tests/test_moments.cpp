#include "ambit/geometry.hpp"
#include "ambit/moments.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

using namespace ambit;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

const CharacteristicQuadruplet gauss{GaussianSeed{0.0, 0.77}};

// int_0^inf int_0^2pi K(t,h,xi)^2 dxi dt for the cardioid with w = 1 - e^-t:
// the angular integral of J^2 is (1 + w^2/2)/(2 pi)
double cardioid_sq_integral(double alpha, double eta) {
    const double a = 2.0 * alpha - 1.0, c = 2.0 * eta;
    return std::tgamma(a) * (1.5 * std::pow(c, -a) - std::pow(c + 1.0, -a) + 0.5 * std::pow(c + 2.0, -a)) / two_pi;
}

double half_line(const std::function<double(double)>& f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, 1.0, 1e-14) + es.integrate([&](double u) { return f(1.0 + u); }, 1e-14);
}

}  // namespace

TEST_CASE("field cumulant") {
    const GammaCardioidKernel k(0.75);
    CHECK(std::abs(field_cumulant(k, gauss, 0.0, 1.0, 2.0)) == 0.0);
    for (double h : {0.4, pi, 5.5})
        for (double u : {0.3, 1.0, 2.5}) {
            const cplx c = field_cumulant(k, gauss, u, 3.0, h);
            const double expect = -0.5 * u * u * 0.77 * cardioid_sq_integral(0.75, k.eta()(h));
            CHECK(c.real() == Approx(expect).epsilon(1e-8));
            CHECK(std::abs(c.imag()) < 1e-14);
        }
    // deterministic volatility enters squared
    const cplx c1 = field_cumulant(k, gauss, 1.0, 0.0, pi);
    const cplx c2 = field_cumulant(k, gauss, 1.0, 0.0, pi, [](double, double) { return 2.0; });
    CHECK(c2.real() == Approx(4.0 * c1.real()).epsilon(1e-10));

    const CharacteristicQuadruplet nig{nig_mean_zero(0.5, 0.25, 0.25)};
    for (double u : {0.2, 1.0, 3.0}) {
        const cplx a = field_cumulant(k, nig, u, 1.0, 2.0);
        const cplx b = field_cumulant(k, nig, -u, 1.0, 2.0);
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        CHECK(a.real() < 0.0);
    }
    // second derivative at zero gives -Var, shared with the Gaussian case
    const double h = 1e-3;
    const double d2 = (field_cumulant(k, nig, h, 1.0, 2.0) + field_cumulant(k, nig, -h, 1.0, 2.0)).real() / (h * h);
    CHECK(-d2 == Approx(nig.variance() * cardioid_sq_integral(0.75, k.eta()(2.0))).epsilon(1e-5));
}

TEST_CASE("field mean") {
    const GammaCardioidKernel flat(1.0, MeanReversion{1.0, {}, {}});
    const auto one = VolatilityFieldSpec::constant(1.0);
    CHECK(field_mean(flat, gauss, one, 1.0) == 0.0);
    const CharacteristicQuadruplet drift{GaussianSeed{0.3, 0.77}};
    for (double h : {0.1, 2.0, 6.0}) CHECK(field_mean(flat, drift, one, h) == Approx(0.3).epsilon(1e-12));
    CHECK(field_mean(flat, drift, VolatilityFieldSpec::constant(2.0), 1.0) ==
          Approx(2.0 * field_mean(flat, drift, one, 1.0)).epsilon(1e-14));
    const auto ig = VolatilityFieldSpec::exp_ig(2.0, 4.0, 4.0);
    CHECK(field_mean(flat, drift, ig, 1.0) == Approx(0.3 * ig.mean()).epsilon(1e-12));
    // eta(h) = 2 - cos(pi - h): mean is m Gamma(a) eta^-a
    const GammaCardioidKernel k(0.75);
    for (double h : {0.5, pi})
        CHECK(field_mean(k, drift, one, h) == Approx(0.3 * std::tgamma(0.75) * std::pow(k.eta()(h), -0.75)).epsilon(1e-12));
    for (double t : {0.1, 1.0, 5.0})
        CHECK(field_mean_from_origin(flat, drift, one, t, 1.0) == Approx(0.3 * (1.0 - std::exp(-t))).epsilon(1e-8));
    CHECK(field_mean_from_origin(k, drift, one, 60.0, 1.0) == Approx(field_mean(k, drift, one, 1.0)).epsilon(1e-10));
}

TEST_CASE("field covariance") {
    const GammaCardioidKernel k(0.75);
    const auto one = VolatilityFieldSpec::constant(1.0);

    SUBCASE("variance at coincident points") {
        for (double h : {0.3, pi, 4.0}) {
            const double v = field_covariance(k, gauss, one, {2.0, 2.0, h, h});
            CHECK(v == Approx(0.77 * cardioid_sq_integral(0.75, k.eta()(h))).epsilon(1e-8));
        }
    }
    SUBCASE("symmetry and time stationarity") {
        const CovarianceQuery q{1.0, 1.3, 0.5, 2.5};
        const double c = field_covariance(k, gauss, one, q);
        CHECK(field_covariance(k, gauss, one, {1.3, 1.0, 2.5, 0.5}) == Approx(c).epsilon(1e-12));
        for (double off : {-3.0, 7.5, 100.0})
            CHECK(std::abs(field_covariance(k, gauss, one, {1.0 + off, 1.3 + off, 0.5, 2.5}) - c) < 1e-8 * std::abs(c));
        // angles are taken mod 2 pi
        CHECK(field_covariance(k, gauss, one, {1.0, 1.3, 0.5 + two_pi, 2.5 - two_pi}) == Approx(c).epsilon(1e-10));
    }
    SUBCASE("rotation invariance with constant mean reversion") {
        const GammaCardioidKernel iso(0.8, MeanReversion{1.5, {}, {}});
        const double c = field_covariance(iso, gauss, one, {0.0, 0.2, 0.7, 2.0});
        for (double s : {0.5, 3.0, 5.9})
            CHECK(field_covariance(iso, gauss, one, {0.0, 0.2, 0.7 + s, 2.0 + s}) == Approx(c).epsilon(1e-9));
    }
    SUBCASE("positive semidefinite") {
        const std::vector<std::pair<double, double>> pts{{0.0, 0.3}, {0.0, 2.0}, {0.05, 0.3}, {0.2, pi}, {1.0, 5.0}, {0.01, 0.31}};
        Eigen::MatrixXd C(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                C(i, j) = field_covariance(k, gauss, one, {pts[i].first, pts[j].first, pts[i].second, pts[j].second});
        CHECK((C - C.transpose()).cwiseAbs().maxCoeff() < 1e-12 * C.trace());
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues().minCoeff();
        CHECK(lo >= -1e-8 * C.trace());
    }
    SUBCASE("spatially constant kernel reduces to a moving average") {
        const double alpha = 0.8;
        const SemiParametricKernel flat(alpha, 0, {1.0 / std::sqrt(two_pi)});
        auto k1 = [&](double u) { return std::pow(u, alpha - 1.0) * std::exp(-0.5 * u); };
        for (double lag : {0.0, 0.1, 1.0, 4.0}) {
            const double oracle = 0.77 * half_line([&](double u) { return k1(u) * k1(u + lag); });
            CHECK(field_covariance(flat, gauss, one, {0.0, lag, 1.0, 4.0}) == Approx(oracle).epsilon(1e-8));
            CHECK(kernel_cross_integral(flat, lag, 1.0, 4.0) == Approx(oracle / 0.77).epsilon(1e-8));
        }
    }
    SUBCASE("stochastic volatility adds the drift term") {
        // alpha = 1, constant eta: int int k k rho = rho(0) / (eta (eta + kappa))
        const double eta = 1.5, m = 0.4;
        const GammaCardioidKernel g1(1.0, MeanReversion{eta, {}, {}});
        const auto vol = VolatilityFieldSpec::exp_ig(2.0, 4.0, 4.0);
        const CharacteristicQuadruplet q{GaussianSeed{m, 0.77}};
        const double expect = 0.77 * vol.second_moment() * cardioid_sq_integral(1.0, eta) +
                              m * m * vol.variance() / (eta * (eta + vol.kappa));
        CHECK(field_covariance(g1, q, vol, {1.0, 1.0, 2.0, 2.0}) == Approx(expect).epsilon(1e-8));
        // centred seeds only see the first term
        CHECK(field_covariance(g1, gauss, vol, {1.0, 1.0, 2.0, 2.0}) ==
              Approx(0.77 * vol.second_moment() * cardioid_sq_integral(1.0, eta)).epsilon(1e-8));
        CHECK(vol.autocovariance(0.5) == Approx(vol.variance() * std::exp(-1.0)).epsilon(1e-14));
    }
}
