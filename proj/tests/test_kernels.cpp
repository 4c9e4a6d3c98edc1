#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"
#include "ambit/kernels.hpp"
#include "ambit/quadrature.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>

using namespace ambit;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

const GammaCardioidKernel& base_cardioid() {
    static const GammaCardioidKernel k(0.75);
    return k;
}

SemiParametricKernel example_semiparametric() {
    SeparableCoefficients c;
    c.c1 = {1.0, 0.5, 0.25, 0.1};
    c.c21 = {0.0, 0.2, -0.1, 0.05};
    c.c22 = {1.0, 0.3, 0.1, -0.05};
    c.c31 = {0.0, -0.15, 0.1, 0.02};
    c.c32 = {1.0, 0.4, -0.2, 0.1};
    return SemiParametricKernel::separable(0.8, c);
}

SemiParametricKernel random_semiparametric(std::mt19937_64& rng, int order, double alpha) {
    std::normal_distribution<double> nd;
    const int d = 2 * order + 1;
    std::vector<double> C(static_cast<std::size_t>(order + 1) * d * d);
    for (auto& c : C) c = nd(rng);
    return SemiParametricKernel(alpha, order, C);
}

// int_0^inf e^{-z t} f(t) dt, split at 1 so the singularity sits at an endpoint
cplx laplace_quadrature(const std::function<cplx(double)>& f, cplx z) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    auto part = [&](bool imag) {
        auto g = [&](double t) {
            // beyond this the integrand is below 1e-100 for every case used here
            if (t > 600.0) return 0.0;
            const cplx v = std::exp(-z * t) * f(t);
            return imag ? v.imag() : v.real();
        };
        return ts.integrate(g, 0.0, 1.0, 1e-13) + es.integrate([&](double u) { return g(1.0 + u); }, 1e-13);
    };
    return {part(false), part(true)};
}

// ||K||^2 of the default cardioid in closed form in t, trapezoid in theta_h
double cardioid_norm_sq(double alpha, const MeanReversion& eta) {
    // int J^2 dxi = (1 + w^2/2)/(2pi), w = 1 - e^{-t}
    const double a = 2.0 * alpha - 1.0;
    const int P = 512;
    double s = 0.0;
    for (int j = 0; j < P; ++j) {
        const double c = 2.0 * eta(two_pi * j / P);
        const double g = std::tgamma(a);
        s += g * (1.5 * std::pow(c, -a) - std::pow(c + 1.0, -a) + 0.5 * std::pow(c + 2.0, -a)) / two_pi;
    }
    return s * two_pi / P;
}

}  // namespace

TEST_CASE("gamma kernel values") {
    CHECK(gamma_kernel(1.0, 1.0, 1.0) == Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(gamma_kernel(1.0, 0.75, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(gamma_kernel(0.25, 0.75, 1.0) == Approx(std::exp(-0.25 * std::log(0.25) - 0.25)).epsilon(1e-14));
    CHECK(gamma_kernel(1e-8, 0.6, 1.0) > 1e3);
    CHECK_THROWS_AS(gamma_kernel(0.0, 0.75, 1.0), domain_error);
    CHECK_THROWS_AS(gamma_kernel(-1.0, 0.75, 1.0), domain_error);
}

TEST_CASE("cardioid density") {
    for (double h : {0.0, 1.0, 4.0}) {
        CHECK(cardioid_J(0.0, h, h + 0.7) == Approx(1.0 / two_pi));
        CHECK(cardioid_J(0.0, h, h + 3.0) == Approx(1.0 / two_pi));
    }
    CHECK(cardioid_J(60.0, 1.2, 1.2) == Approx(1.0 / pi).epsilon(1e-12));
    const auto rule = periodic_trapezoid(64);
    for (double t : {0.0, 0.3, 2.0, 40.0})
        for (double h : {0.1, 2.5, 5.9}) {
            double s = 0.0;
            double lo = 1.0;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double v = cardioid_J(t, h, rule.nodes[j]);
                s += rule.weights[j] * v;
                lo = std::min(lo, v);
            }
            CHECK(s == Approx(1.0).epsilon(1e-14));
            CHECK(lo > 0.0);
        }
}

TEST_CASE("kernel evaluation") {
    const GammaCardioidKernel flat(1.0, MeanReversion{1.0, {}, {}});
    CHECK(flat.eval(1.0, 0.4, 0.4) ==
          Approx(std::exp(-1.0 + std::log1p(1.0 - std::exp(-1.0)) - std::log(two_pi))).epsilon(1e-14));
    CHECK(flat.eval(1.0, 0.4, 0.4) == Approx(0.09556).epsilon(1e-4));
    CHECK_THROWS_AS(flat.eval(0.0, 0.1, 0.1), domain_error);

    SeparableCoefficients c{{1.0}, {0.0}, {1.0}, {0.0}, {1.0}};
    const auto sp = SemiParametricKernel::separable(0.7, c);
    for (double t : {0.01, 0.5, 3.0, 20.0})
        CHECK(sp.eval(t, 1.0, 2.0) == Approx(std::pow(t, -0.3) * std::exp(-t / 2)).epsilon(1e-14));

    // isotropy with constant mean reversion
    const GammaCardioidKernel iso(0.8, MeanReversion{1.5, {}, {}});
    const auto semi = example_semiparametric();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (int i = 0; i < 100; ++i) {
        const double t = 0.05 + 5.0 * u(rng) / two_pi, h = u(rng), x = u(rng), shift = u(rng);
        CHECK(iso.eval(t, h + shift, x + shift) == Approx(iso.eval(t, h, x)).epsilon(1e-13));
    }
    // the varying mean reversion breaks it
    CHECK(base_cardioid().eval(1.0, 0.0, 0.0) != Approx(base_cardioid().eval(1.0, pi, pi)));
    (void)semi;
}

TEST_CASE("kernel validation") {
    CHECK_THROWS_AS(GammaCardioidKernel(0.5), domain_error);
    CHECK_THROWS_AS(GammaCardioidKernel(1.2), domain_error);
    CHECK_THROWS_AS(GammaCardioidKernel(0.75, MeanReversion{1.0, {1.0}, {}}), domain_error);
    CHECK_THROWS_AS(GammaCardioidKernel(0.75, {}, WeightFunction{1.0, 2.5, 1.0}), domain_error);
    CHECK_NOTHROW(GammaCardioidKernel(0.75, {}, WeightFunction{1.0, 1.5, 1.0}));
    CHECK_THROWS_AS(SemiParametricKernel::separable(0.8, {{1.0, 1.0}, {0.0}, {1.0}, {0.0}, {1.0}}), domain_error);
    CHECK_THROWS_AS(SemiParametricKernel(0.4, 0, {1.0}), domain_error);
    CHECK(base_cardioid().eta().inf() == Approx(1.0).epsilon(1e-10));
    CHECK(base_cardioid().eta().sup() == Approx(3.0).epsilon(1e-10));
    CHECK(base_cardioid().eta()(pi) == Approx(1.0));
}

TEST_CASE("laguerre polynomials") {
    for (double x : {0.0, 0.3, 7.0}) {
        CHECK(laguerre(0, 0.75, x) == 1.0);
        CHECK(laguerre(1, 0.75, x) == Approx(1.75 - x));
        CHECK(laguerre(2, 0.75, x) == Approx((x * x - 2 * 2.75 * x + 2.75 * 1.75) / 2));
    }
    for (double a : {-0.5, 0.0, 0.75, 2.0}) {
        const auto rule = gauss_laguerre(40, a);
        for (int m = 0; m <= 8; ++m)
            for (int k = 0; k <= 8; ++k) {
                double s = 0.0;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                    s += rule.weights[q] * laguerre(m, a, rule.nodes[q]) * laguerre(k, a, rule.nodes[q]);
                const double expect = m == k ? std::exp(std::lgamma(k + a + 1.0) - std::lgamma(k + 1.0)) : 0.0;
                CHECK(std::abs(s - expect) < 1e-8 * std::max(1.0, expect));
            }
    }
}

TEST_CASE("fourier coefficients") {
    const auto& k = base_cardioid();
    for (double t : {0.01, 0.5, 2.0})
        for (double h : {0.3, pi, 5.0}) {
            const cplx c0 = k.fourier_coeff(t, h, 0);
            CHECK(c0.real() == Approx(std::pow(t, -0.25) * std::exp(-k.eta()(h) * t) / two_pi).epsilon(1e-14));
            CHECK(c0.imag() == 0.0);
            for (int n : {2, -2, 3, 7}) CHECK(std::abs(k.fourier_coeff(t, h, n)) == 0.0);
            // closed form agrees with the generic trapezoid
            for (int n : {-1, 0, 1}) {
                const cplx generic = k.Kernel::fourier_coeff(t, h, n);
                CHECK(std::abs(k.fourier_coeff(t, h, n) - generic) < 1e-13 * std::abs(c0));
            }
        }
    const auto sp = example_semiparametric();
    for (double t : {0.1, 1.0, 6.0})
        for (int n = -5; n <= 5; ++n) {
            const cplx a = sp.fourier_coeff(t, 1.1, n);
            CHECK(std::abs(a - std::conj(sp.fourier_coeff(t, 1.1, -n))) < 1e-15);
            if (std::abs(n) > 3) CHECK(std::abs(a) == 0.0);
            const cplx generic = sp.Kernel::fourier_coeff(t, 1.1, n);
            CHECK(std::abs(a - generic) < 1e-12);
        }
}

TEST_CASE("fourier inversion round trip") {
    const auto sp = example_semiparametric();
    const std::vector<const Kernel*> ks{&base_cardioid(), &sp};
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (const Kernel* k : ks)
        for (int i = 0; i < 200; ++i) {
            const double t = 0.01 + 4.0 * u(rng) / two_pi, h = u(rng), x = u(rng);
            cplx s = 0.0;
            for (int n = -k->fourier_order(); n <= k->fourier_order(); ++n)
                s += k->fourier_coeff(t, h, n) * std::exp(cplx(0.0, n * x));
            CHECK(std::abs(s.real() - k->eval(t, h, x)) < 1e-10);
            CHECK(std::abs(s.imag()) < 1e-12);
        }
}

TEST_CASE("laplace transform closed forms") {
    const auto& k = base_cardioid();
    const double g = std::tgamma(0.75);
    for (double h : {0.5, pi, 4.0})
        for (cplx z : {cplx(0.0, 0.0), cplx(-0.4, 0.0), cplx(1.0, 3.0), cplx(-0.5, -20.0)}) {
            const double eta = k.eta()(h);
            const cplx l0 = k.laplace_fourier(z, h, 0);
            CHECK(std::abs(l0 - g / two_pi * std::pow(eta + z, -0.75)) < 1e-14);
            const cplx l1 = k.laplace_fourier(z, h, 1);
            const cplx expect1 =
                std::exp(cplx(0.0, -h)) * g / (2 * two_pi) * (std::pow(eta + z, -0.75) - std::pow(eta + z + 1.0, -0.75));
            CHECK(std::abs(l1 - expect1) < 1e-14);
            CHECK(std::abs(k.laplace_fourier(z, h, -1) - std::conj(k.laplace_fourier(std::conj(z), h, 1))) < 1e-14);
            CHECK(std::abs(k.laplace_fourier(z, h, 2)) == 0.0);

            for (int n : {0, 1, -1}) {
                const cplx oracle = laplace_quadrature([&](double t) { return k.fourier_coeff(t, h, n); }, z);
                CHECK(std::abs(k.laplace_fourier(z, h, n) - oracle) < 1e-6);
            }
        }
    CHECK_THROWS_AS(k.laplace_fourier(cplx(-1.0, 0.0), 0.0, 0), domain_error);
    CHECK_THROWS_AS(k.laplace_fourier(cplx(-1.5, 2.0), 0.0, 1), domain_error);
}

TEST_CASE("semi-parametric laplace transform matches quadrature") {
    const auto sp = example_semiparametric();
    for (cplx z : {cplx(0.0, 0.0), cplx(-0.2, 1.0), cplx(2.0, -5.0)})
        for (int n = -3; n <= 3; ++n) {
            const cplx oracle = laplace_quadrature([&](double t) { return sp.fourier_coeff(t, 0.7, n); }, z);
            CHECK(std::abs(sp.laplace_fourier(z, 0.7, n) - oracle) < 1e-6);
        }
    for (int i = 0; i <= 3; ++i) {
        const cplx z(0.3, 0.4);
        const cplx oracle = laplace_quadrature([&](double t) { return cplx(sp.temporal(i, t)); }, z);
        CHECK(std::abs(sp.temporal_laplace(i, z) - oracle) < 1e-8);
    }
}

TEST_CASE("laplace transform at real z is real and decreasing") {
    const auto sp = example_semiparametric();
    const GammaCardioidKernel k(0.9);
    for (const Kernel* kp : {static_cast<const Kernel*>(&k), static_cast<const Kernel*>(&base_cardioid())}) {
        double prev = INFINITY;
        for (double z = -0.9; z < 10.0; z += 0.1) {
            const cplx v = kp->laplace_fourier(z, 2.0, 0);
            CHECK(v.imag() == 0.0);
            CHECK(v.real() < prev);
            prev = v.real();
        }
    }
    // the generic quadrature path agrees with the closed form
    const cplx z(0.4, 1.5);
    for (int n = -1; n <= 1; ++n)
        CHECK(std::abs(base_cardioid().Kernel::laplace_fourier(z, 1.0, n) - base_cardioid().laplace_fourier(z, 1.0, n)) <
              1e-7);
    (void)sp;
}

TEST_CASE("bromwich round trip") {
    const auto sp = example_semiparametric();
    const std::vector<const Kernel*> ks{&base_cardioid(), &sp};
    for (const Kernel* k : ks)
        for (double t : {0.1, 0.5, 1.0, 2.0})
            for (double h : {0.4, pi})
                for (int n = 0; n <= k->fourier_order(); ++n) {
                    const cplx inv = bromwich_inverse([&](cplx z) { return k->laplace_fourier(z, h, n); }, t);
                    CHECK(std::abs(inv - k->fourier_coeff(t, h, n)) < 1e-4);
                }
}

TEST_CASE("exponential domination certificate") {
    const auto sp = example_semiparametric();
    std::mt19937_64 rng(4);
    const std::vector<std::shared_ptr<const Kernel>> ks{
        std::make_shared<GammaCardioidKernel>(0.75), std::make_shared<GammaCardioidKernel>(0.51),
        std::make_shared<GammaCardioidKernel>(1.0, MeanReversion{0.4, {0.3}, {0.05}}, WeightFunction{0.5, 1.2, 3.0}),
        std::make_shared<SemiParametricKernel>(sp), std::make_shared<SemiParametricKernel>(random_semiparametric(rng, 4, 1.3)),
        std::make_shared<SemiParametricKernel>(random_semiparametric(rng, 2, 0.6))};
    for (const auto& k : ks) {
        CHECK(k->gamma_decay() > 0.0);
        int worst = 0;
        for (int i = 0; i <= 4000; ++i) {
            const double t = Kernel::t_min * std::pow(50.0 / Kernel::t_min, i / 4000.0);
            const double bound = k->bound_M() * std::exp(-k->gamma_decay() * t);
            for (int a = 0; a < 24; ++a)
                for (int b = 0; b < 24; ++b)
                    if (std::abs(k->eval(t, two_pi * a / 24, two_pi * b / 24 + 0.01)) > bound) ++worst;
        }
        CHECK(worst == 0);
        const auto tr = k->transforms();
        CHECK(tr.gamma_decay == k->gamma_decay());
        CHECK(tr.fourier_support.size() == static_cast<std::size_t>(2 * k->fourier_order() + 1));
    }
}

TEST_CASE("mean-square integrability near the origin") {
    for (double alpha : {0.55, 0.75, 1.0}) {
        const GammaCardioidKernel k(alpha);
        const double oracle = cardioid_norm_sq(alpha, k.eta());
        CHECK(std::isfinite(oracle));
        const SemiParametricKernel zero(alpha, 0, {0.0});
        const double d = l2_kernel_distance(k, zero);
        CHECK(d * d == Approx(oracle).epsilon(alpha < 0.6 ? 1e-3 : 1e-6));
    }
}

TEST_CASE("projection onto the semi-parametric basis") {
    SUBCASE("basis member is reproduced") {
        const auto base = SemiParametricKernel::separable(0.75, {{1.0}, {0.0}, {1.0}, {0.0}, {1.0}});
        const auto p0 = project_kernel(base, 0, 0.75);
        CHECK(p0.coeff(0, 0, 0) == Approx(1.0).epsilon(1e-10));
        const auto p2 = project_kernel(base, 2, 0.75);
        CHECK(p2.coeff(0, 0, 0) == Approx(1.0).epsilon(1e-10));
        for (std::size_t i = 1; i < p2.coefficients().size(); ++i) CHECK(std::abs(p2.coefficients()[i]) < 1e-10);
        CHECK(l2_kernel_distance(base, p2) < 1e-10);
    }
    SUBCASE("semi-parametric kernels project onto themselves") {
        const auto sp = example_semiparametric();
        const auto p = project_kernel(sp, 3, sp.alpha());
        for (std::size_t i = 0; i < p.coefficients().size(); ++i)
            CHECK(std::abs(p.coefficients()[i] - sp.coefficients()[i]) < 1e-9);
    }
    SUBCASE("cardioid has no higher spatial harmonics in xi") {
        const GammaCardioidKernel k(0.75, {}, WeightFunction{0.6, 0.0, 1.0});
        const auto p = project_kernel(k, 4, 0.75);
        for (int i = 0; i <= 4; ++i)
            for (int a = 0; a < p.spatial_dim(); ++a)
                for (int b = 3; b < p.spatial_dim(); ++b) CHECK(std::abs(p.coeff(i, a, b)) < 1e-12);
        const GammaCardioidKernel iso(0.75, MeanReversion{1.2, {}, {}}, WeightFunction{0.6, 0.0, 1.0});
        const auto q = project_kernel(iso, 4, 0.75);
        double lower = 0.0;
        for (int i = 0; i <= 4; ++i)
            for (int a = 0; a < q.spatial_dim(); ++a)
                for (int b = 0; b < q.spatial_dim(); ++b) {
                    if (a >= 3 || b >= 3) CHECK(std::abs(q.coeff(i, a, b)) < 1e-12);
                    // sin(h) sin(xi) and cos cos carry the cardioid, sin x cos does not
                    if ((a == 1 && b == 2) || (a == 2 && b == 1) || (a == 0) != (b == 0)) CHECK(std::abs(q.coeff(i, a, b)) < 1e-12);
                    lower = std::max(lower, std::abs(q.coeff(i, 1, 1)));
                }
        CHECK(lower > 1e-3);
    }
    SUBCASE("error is non-increasing in the order and Pythagoras holds") {
        const auto& k = base_cardioid();
        const double norm_sq = cardioid_norm_sq(0.75, k.eta());
        double prev = INFINITY;
        for (int n = 0; n <= 6; ++n) {
            const auto p = project_kernel(k, n, 0.75);
            const double d = l2_kernel_distance(k, p);
            CHECK(d <= prev * (1.0 + 1e-9));
            prev = d;
            const double proj_sq = p.l2_norm_sq();
            CHECK(proj_sq <= norm_sq * (1.0 + 1e-9));
            CHECK(proj_sq + d * d == Approx(norm_sq).epsilon(1e-5));
            MESSAGE("order " << n << ": distance " << d << ", captured " << proj_sq / norm_sq);
        }
        CHECK(prev < 0.5 * l2_kernel_distance(k, project_kernel(k, 0, 0.75)));
    }
}

TEST_CASE("grid evaluation agrees with pointwise evaluation") {
    std::mt19937_64 rng(23);
    const auto sp = random_semiparametric(rng, 3, 0.7);
    const GammaCardioidKernel k(0.6, MeanReversion{1.5, {0.4}, {0.3}}, WeightFunction{0.8, 0.5, 2.0});
    for (const Kernel* kp : {static_cast<const Kernel*>(&sp), static_cast<const Kernel*>(&k)}) {
        const int P = 17;
        std::vector<double> g(P * P);
        kp->eval_grid(0.37, P, g.data());
        for (int j = 0; j < P; ++j)
            for (int l = 0; l < P; ++l)
                CHECK(g[j * P + l] == Approx(kp->eval(0.37, two_pi * j / P, two_pi * l / P)).epsilon(1e-12));
    }
}

TEST_CASE("l2 distance is a metric") {
    std::mt19937_64 rng(17);
    const auto& k = base_cardioid();
    CHECK(l2_kernel_distance(k, k) == 0.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_semiparametric(rng, 2, 0.9);
        const auto b = random_semiparametric(rng, 1, 0.9);
        const auto c = random_semiparametric(rng, 3, 0.9);
        const double ab = l2_kernel_distance(a, b), bc = l2_kernel_distance(b, c), ac = l2_kernel_distance(a, c);
        CHECK(ab == Approx(l2_kernel_distance(b, a)).epsilon(1e-14));
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab > 0.0);
        // exact norm from the Gram matrix agrees with the quadrature
        const SemiParametricKernel zero(0.9, 0, {0.0});
        const double na = l2_kernel_distance(a, zero);
        CHECK(na * na == Approx(a.l2_norm_sq()).epsilon(1e-10));
    }
}
