#pragma once

#include "ambit/random.hpp"

#include <complex>
#include <string>
#include <variant>

namespace ambit {

// Seed with cumulant i*u*drift - u^2 variance / 2.
struct GaussianSeed {
    double drift = 0.0;
    double variance = 1.0;  // Sigma
};

// NIG(alpha, beta, mu, delta): 0 <= |beta| < alpha, delta > 0.
struct NigSeed {
    double alpha = 1.0;
    double beta = 0.0;
    double mu = 0.0;
    double delta = 1.0;
};

// Inverse Gaussian with cumulant delta * (gamma - sqrt(gamma^2 - 2iu)).
// Mean delta/gamma, variance delta/gamma^3.
struct InverseGaussianSeed {
    double delta = 1.0;
    double gamma = 1.0;
};

using LevySeed = std::variant<GaussianSeed, NigSeed, InverseGaussianSeed>;

std::string family_name(const LevySeed& seed);
void validate(const LevySeed& seed);

// NIG seed whose location makes the mean exactly zero.
NigSeed nig_mean_zero(double alpha, double beta, double delta);

// C(u) = log E[exp(i u L')], principal branch. Throws domain_error outside
// the strip of analyticity.
std::complex<double> seed_cumulant(const LevySeed& seed, std::complex<double> u);

// log E[exp(v L')] = C(-i v).
std::complex<double> seed_log_mgf(const LevySeed& seed, std::complex<double> v);

double seed_mean(const LevySeed& seed);
double seed_variance(const LevySeed& seed);

// Levy basis on the cylinder with intensity equal to the Riemannian measure.
// The intensity is fixed; only the seed varies.
struct CharacteristicQuadruplet {
    enum class Intensity { cylinder_riemannian };

    LevySeed seed;
    static constexpr Intensity intensity = Intensity::cylinder_riemannian;

    double mean() const { return seed_mean(seed); }
    double variance() const { return seed_variance(seed); }
    bool centered(double tol = 1e-13) const;
};

struct EsscherTilt {
    double q = 0.0;
};

// Exponentially tilted quadruplet, nu~(dx) = exp(q x) nu(dx). Gaussian drift
// moves by q*Sigma, NIG beta moves to beta + q, IG gamma moves to
// sqrt(gamma^2 - 2q). Throws domain_error when the exponential moment fails.
CharacteristicQuadruplet esscher_tilt(const CharacteristicQuadruplet& quad, EsscherTilt tilt);

// Exact draw of L(A) for a set of Riemannian measure `area`.
double sample_patch(const CharacteristicQuadruplet& quad, double area, Rng& rng);

// Fills out[0..count) with independent draws of L(A), |A| = area.
void sample_patches(const CharacteristicQuadruplet& quad, double area, std::size_t count, double* out, Rng& rng);

// Michael-Schucany-Haas draw in (mean, shape) parameterisation.
double sample_inverse_gaussian(double mean, double shape, Rng& rng);

}  // namespace ambit
