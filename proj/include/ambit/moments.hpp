#pragma once

#include "ambit/kernels.hpp"
#include "ambit/levy.hpp"
#include "ambit/simulate.hpp"

#include <functional>

namespace ambit {

struct CovarianceQuery {
    double t = 0.0;
    double t_prime = 0.0;
    double theta = 0.0;
    double theta_prime = 0.0;
};

// Deterministic volatility sigma(s, xi); empty means sigma = 1.
using VolatilityFunction = std::function<double(double s, double xi)>;

// log E exp(i u D_t(h)) = int_{-inf}^t int C(u K(t-s,h,xi) sigma(s,xi); L') dxi ds
cplx field_cumulant(const Kernel& kernel, const CharacteristicQuadruplet& quad, double u, double t, double theta,
                    const VolatilityFunction& sigma = {});

// Stationary mean E[L'] E[sigma] int_0^inf int K(u,h,xi) dxi du.
double field_mean(const Kernel& kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                  double theta);

// Mean of the field started from zero history at time 0.
double field_mean_from_origin(const Kernel& kernel, const CharacteristicQuadruplet& quad,
                              const VolatilityFieldSpec& vol, double t, double theta);

// int_0^inf int K(u,h,xi) K(u+lag,h',xi) dxi du, lag >= 0.
double kernel_cross_integral(const Kernel& kernel, double lag, double theta, double theta_prime);

// Cov(D_t(h), D_t'(h')) of the stationary field.
double field_covariance(const Kernel& kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                        const CovarianceQuery& q);

}  // namespace ambit
