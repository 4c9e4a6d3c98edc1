#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace ambit {

using cplx = std::complex<double>;

// t^(alpha-1) exp(-beta t), t > 0.
double gamma_kernel(double t, double alpha, double beta);

// Generalized Laguerre polynomial L_k^(alpha)(x) by the three-term recurrence.
double laguerre(int k, double alpha, double x);

// w(t) = level - amplitude * exp(-rate t). Default is 1 - exp(-t).
struct WeightFunction {
    double level = 1.0;
    double amplitude = 1.0;
    double rate = 1.0;

    double operator()(double t) const;
    double sup_abs() const;
};

// (1 + w(t) cos(theta_xi - theta_h)) / (2 pi)
double cardioid_J(double t, double theta_h, double theta_xi, const WeightFunction& w = {});

struct KernelTransforms {
    std::vector<int> fourier_support;
    double gamma_decay = 0.0;
};

// Stationary kernel K(t, theta_h, theta_xi) on lag t > 0.
//
// Fourier coefficients use Kt(t,h,n) = (1/2pi) int exp(-i n phi) K(t,h,phi) dphi,
// so that K(t,h,xi) = sum_n Kt(t,h,n) exp(i n xi). Laplace transforms act on
// the lag: Kh(z,h,n) = int_0^inf exp(-z t) Kt(t,h,n) dt.
class Kernel {
public:
    virtual ~Kernel() = default;

    virtual std::string family() const = 0;
    virtual double eval(double t, double theta_h, double theta_xi) const = 0;
    // out[j*P + l] = K(t, 2 pi j/P, 2 pi l/P)
    virtual void eval_grid(double t, int P, double* out) const;

    // Largest |n| with a nonzero coefficient.
    virtual int fourier_order() const = 0;
    virtual cplx fourier_coeff(double t, double theta_h, int n) const;
    virtual cplx laplace_fourier(cplx z, double theta_h, int n) const;

    // Certificate |K(t,h,xi)| <= M exp(-gamma_decay t) for t >= t_min.
    virtual double gamma_decay() const = 0;
    virtual double bound_M() const = 0;
    static constexpr double t_min = 1e-3;

    // Behaviour t^(alpha-1) near the origin.
    virtual double alpha() const = 0;
    // Slowest exponential rate in the lag over all angles.
    virtual double time_decay_rate() const = 0;

    KernelTransforms transforms() const;

protected:
    void check_lag(double t) const;
    void check_abscissa(cplx z) const;
};

using KernelPtr = std::shared_ptr<const Kernel>;

// eta(theta) = mean + sum_k cos_k[k-1] cos(k theta) + sin_k[k-1] sin(k theta)
struct MeanReversion {
    double mean = 2.0;
    std::vector<double> cos_k{1.0};
    std::vector<double> sin_k{};

    double operator()(double theta) const;
    double inf() const;
    double sup() const;
};

// t^(alpha-1) exp(-eta(theta_h) t) J(t, theta_h, theta_xi)
class GammaCardioidKernel final : public Kernel {
public:
    GammaCardioidKernel(double alpha, MeanReversion eta = {}, WeightFunction w = {});

    std::string family() const override { return "gamma_cardioid"; }
    double eval(double t, double theta_h, double theta_xi) const override;
    void eval_grid(double t, int P, double* out) const override;
    int fourier_order() const override { return 1; }
    cplx fourier_coeff(double t, double theta_h, int n) const override;
    cplx laplace_fourier(cplx z, double theta_h, int n) const override;
    double gamma_decay() const override { return eta_min_; }
    double bound_M() const override { return M_; }
    double alpha() const override { return alpha_; }
    double time_decay_rate() const override { return eta_min_; }

    const MeanReversion& eta() const { return eta_; }
    const WeightFunction& weight() const { return w_; }

private:
    double alpha_;
    MeanReversion eta_;
    WeightFunction w_;
    double eta_min_;
    double M_;
};

// Separable coefficient set of the Laguerre x Fourier family of a given order.
struct SeparableCoefficients {
    std::vector<double> c1;   // Laguerre weights, k = 0..n
    std::vector<double> c21;  // sin(k theta_h)
    std::vector<double> c22;  // cos(k theta_h)
    std::vector<double> c31;  // sin(k theta_xi)
    std::vector<double> c32;  // cos(k theta_xi)
};

// K(t,h,xi) = sum_{i,a,b} C[i][a][b] f_i(t) g_a(theta_h) g_b(theta_xi) with
// f_i(t) = t^(alpha-1) e^(-t/2) L_i^(alpha)(t) and the raw trigonometric
// system g_0 = 1, g_{2m-1} = cos(m .), g_{2m} = sin(m .), m = 1..order.
// The separable product form is the special case C = c1 x K2 x K3.
class SemiParametricKernel final : public Kernel {
public:
    SemiParametricKernel(double alpha, int order, std::vector<double> coeffs);
    static SemiParametricKernel separable(double alpha, const SeparableCoefficients& c);

    std::string family() const override { return "semi_parametric"; }
    double eval(double t, double theta_h, double theta_xi) const override;
    void eval_grid(double t, int P, double* out) const override;
    int fourier_order() const override { return order_; }
    cplx fourier_coeff(double t, double theta_h, int n) const override;
    cplx laplace_fourier(cplx z, double theta_h, int n) const override;
    double gamma_decay() const override { return gamma_; }
    double bound_M() const override { return M_; }
    double alpha() const override { return alpha_; }
    double time_decay_rate() const override { return 0.5; }

    int order() const { return order_; }
    int spatial_dim() const { return 2 * order_ + 1; }
    double coeff(int i, int a, int b) const { return C_[index(i, a, b)]; }
    const std::vector<double>& coefficients() const { return C_; }

    // f_i(t)
    double temporal(int i, double t) const;
    // Laplace transform of f_i
    cplx temporal_laplace(int i, cplx z) const;
    // ||K||^2 over R+ x circle x circle, exact from the Gram matrix.
    double l2_norm_sq() const;

private:
    std::size_t index(int i, int a, int b) const {
        const int d = spatial_dim();
        return (static_cast<std::size_t>(i) * d + a) * d + b;
    }
    double spatial_sum(int i, double theta_h, double theta_xi) const;

    double alpha_;
    int order_;
    std::vector<double> C_;
    double gamma_;
    double M_;
};

// g_a(theta) of the raw trigonometric system above.
double trig_basis(int a, double theta);
// (1/2pi) int exp(-i n phi) g_a(phi) dphi
cplx trig_basis_fourier(int a, int n);

struct ProjectionOptions {
    int time_nodes = 128;
    int angle_nodes = 256;
};

// Orthogonal L2 projection onto the span of f_i x g_a x g_b, i, m <= order.
SemiParametricKernel project_kernel(const Kernel& target, int order, double alpha,
                                    const ProjectionOptions& opt = {});

// L2(R+ x circle x circle) distance by scaled Gauss-Laguerre x trapezoid.
double l2_kernel_distance(const Kernel& a, const Kernel& b, const ProjectionOptions& opt = {});

}  // namespace ambit
