#include "ambit/levy.hpp"

#include "ambit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ambit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(const char* what, double v) {
    std::ostringstream os;
    os << what << " (got " << v << ")";
    return os.str();
}

}  // namespace

std::string family_name(const LevySeed& seed) {
    return std::visit(overloaded{[](const GaussianSeed&) { return std::string("gaussian"); },
                                 [](const NigSeed&) { return std::string("nig"); },
                                 [](const InverseGaussianSeed&) { return std::string("inverse_gaussian"); }},
                      seed);
}

void validate(const LevySeed& seed) {
    std::visit(overloaded{
                   [](const GaussianSeed& g) {
                       if (!(g.variance >= 0.0) || !std::isfinite(g.variance))
                           throw domain_error(fmt("gaussian variance must be >= 0", g.variance));
                       if (!std::isfinite(g.drift)) throw domain_error("gaussian drift must be finite");
                   },
                   [](const NigSeed& s) {
                       if (!(s.alpha > 0.0)) throw domain_error(fmt("nig alpha must be > 0", s.alpha));
                       if (!(std::abs(s.beta) < s.alpha))
                           throw domain_error(fmt("nig requires |beta| < alpha", s.beta));
                       if (!(s.delta > 0.0)) throw domain_error(fmt("nig delta must be > 0", s.delta));
                       if (!std::isfinite(s.mu)) throw domain_error("nig mu must be finite");
                   },
                   [](const InverseGaussianSeed& s) {
                       if (!(s.delta > 0.0)) throw domain_error(fmt("ig delta must be > 0", s.delta));
                       if (!(s.gamma > 0.0)) throw domain_error(fmt("ig gamma must be > 0", s.gamma));
                   }},
               seed);
}

NigSeed nig_mean_zero(double alpha, double beta, double delta) {
    NigSeed s{alpha, beta, 0.0, delta};
    validate(s);
    s.mu = -delta * beta / std::sqrt(alpha * alpha - beta * beta);
    return s;
}

std::complex<double> seed_cumulant(const LevySeed& seed, std::complex<double> u) {
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    return std::visit(
        overloaded{[&](const GaussianSeed& g) -> C { return i * u * g.drift - 0.5 * g.variance * u * u; },
                   [&](const NigSeed& s) -> C {
                       // E exp(v X) is finite iff |beta + v| < alpha; v = -Im u along the strip.
                       if (!(std::abs(s.beta - u.imag()) < s.alpha))
                           throw domain_error(fmt("nig cumulant outside strip, Im u", u.imag()));
                       const C b = s.beta + i * u;
                       return i * u * s.mu +
                              s.delta * (std::sqrt(s.alpha * s.alpha - s.beta * s.beta) -
                                         std::sqrt(s.alpha * s.alpha - b * b));
                   },
                   [&](const InverseGaussianSeed& s) -> C {
                       if (!(u.imag() > -0.5 * s.gamma * s.gamma))
                           throw domain_error(fmt("ig cumulant outside strip, Im u", u.imag()));
                       return s.delta * (s.gamma - std::sqrt(s.gamma * s.gamma - 2.0 * i * u));
                   }},
        seed);
}

std::complex<double> seed_log_mgf(const LevySeed& seed, std::complex<double> v) {
    return seed_cumulant(seed, std::complex<double>(0.0, -1.0) * v);
}

double seed_mean(const LevySeed& seed) {
    return std::visit(overloaded{[](const GaussianSeed& g) { return g.drift; },
                                 [](const NigSeed& s) {
                                     return s.mu + s.delta * s.beta / std::sqrt(s.alpha * s.alpha - s.beta * s.beta);
                                 },
                                 [](const InverseGaussianSeed& s) { return s.delta / s.gamma; }},
                      seed);
}

double seed_variance(const LevySeed& seed) {
    return std::visit(overloaded{[](const GaussianSeed& g) { return g.variance; },
                                 [](const NigSeed& s) {
                                     const double g2 = s.alpha * s.alpha - s.beta * s.beta;
                                     return s.delta * s.alpha * s.alpha / (g2 * std::sqrt(g2));
                                 },
                                 [](const InverseGaussianSeed& s) { return s.delta / (s.gamma * s.gamma * s.gamma); }},
                      seed);
}

bool CharacteristicQuadruplet::centered(double tol) const {
    return std::abs(mean()) <= tol * std::max(1.0, std::sqrt(variance()));
}

CharacteristicQuadruplet esscher_tilt(const CharacteristicQuadruplet& quad, EsscherTilt tilt) {
    const double q = tilt.q;
    CharacteristicQuadruplet out = quad;
    std::visit(overloaded{[&](GaussianSeed& g) { g.drift += q * g.variance; },
                          [&](NigSeed& s) {
                              if (!(std::abs(s.beta + q) < s.alpha))
                                  throw domain_error(fmt("esscher tilt violates |beta + q| < alpha, q", q));
                              s.beta += q;
                          },
                          [&](InverseGaussianSeed& s) {
                              if (!(2.0 * q < s.gamma * s.gamma))
                                  throw domain_error(fmt("esscher tilt violates q < gamma^2/2, q", q));
                              s.gamma = std::sqrt(s.gamma * s.gamma - 2.0 * q);
                          }},
               out.seed);
    return out;
}

double sample_inverse_gaussian(double mean, double shape, Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double z = normal(rng);
    const double r = mean * z * z / (2.0 * shape);
    // smaller root of the quadratic, written to avoid cancellation
    const double x = mean / (1.0 + r + std::sqrt(r * r + 2.0 * r));
    if (unif(rng) * (mean + x) <= mean) return x;
    return mean * mean / x;
}

double sample_patch(const CharacteristicQuadruplet& quad, double area, Rng& rng) {
    if (!(area >= 0.0)) throw domain_error(fmt("patch area must be >= 0", area));
    if (area == 0.0) return 0.0;
    return std::visit(overloaded{[&](const GaussianSeed& g) {
                                     std::normal_distribution<double> normal;
                                     return area * g.drift + std::sqrt(area * g.variance) * normal(rng);
                                 },
                                 [&](const NigSeed& s) {
                                     const double gam = std::sqrt(s.alpha * s.alpha - s.beta * s.beta);
                                     const double d = area * s.delta;
                                     const double v = sample_inverse_gaussian(d / gam, d * d, rng);
                                     std::normal_distribution<double> normal;
                                     return area * s.mu + s.beta * v + std::sqrt(v) * normal(rng);
                                 },
                                 [&](const InverseGaussianSeed& s) {
                                     const double d = area * s.delta;
                                     return sample_inverse_gaussian(d / s.gamma, d * d, rng);
                                 }},
                      quad.seed);
}

void sample_patches(const CharacteristicQuadruplet& quad, double area, std::size_t count, double* out, Rng& rng) {
    if (!(area >= 0.0)) throw domain_error(fmt("patch area must be >= 0", area));
    if (const auto* g = std::get_if<GaussianSeed>(&quad.seed)) {
        if (area == 0.0 || g->variance == 0.0) {
            std::fill(out, out + count, area * g->drift);
            return;
        }
        std::normal_distribution<double> normal(area * g->drift, std::sqrt(area * g->variance));
        for (std::size_t i = 0; i < count; ++i) out[i] = normal(rng);
        return;
    }
    for (std::size_t i = 0; i < count; ++i) out[i] = sample_patch(quad, area, rng);
}

}  // namespace ambit
