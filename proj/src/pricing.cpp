#include "ambit/pricing.hpp"

#include "ambit/errors.hpp"
#include "ambit/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace ambit {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

long grid_index(double tau, double dt) { return std::lround(tau / dt); }

bool on_grid(double tau, double dt) { return std::abs(tau / dt - std::round(tau / dt)) < 1e-7; }

}  // namespace

void validate_window(const SimulationGrid& grid, double tau0, double tau1, double tau2) {
    std::vector<std::string> v;
    if (tau0 != 0.0) v.push_back("pricing.tau0_years must be 0 (got " + num(tau0) + ")");
    if (!(tau1 >= tau0)) v.push_back("pricing.tau1_years must be >= tau0 (got " + num(tau1) + ")");
    if (!(tau2 > tau1)) v.push_back("pricing.tau2_years must be > tau1 (got " + num(tau2) + ")");
    if (tau2 > grid.horizon() * (1.0 + 1e-12))
        v.push_back("settlement window ends at " + num(tau2) + " beyond the simulated horizon " + num(grid.horizon()));
    if (!on_grid(tau1, grid.dt) || !on_grid(tau2, grid.dt))
        v.push_back("settlement window [" + num(tau1) + ", " + num(tau2) + "] is not aligned with dt = " + num(grid.dt));
    if (!v.empty()) throw config_error(v);
}

McEstimate mc_estimate(const std::vector<double>& samples) {
    McEstimate e;
    e.paths = samples.size();
    if (samples.empty()) throw config_error("Monte Carlo estimate needs at least one path");
    const double n = static_cast<double>(samples.size());
    e.value = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - e.value) * (samples[i] - e.value);
    e.stderr = samples.size() > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1.0) / n) : 0.0;
    return e;
}

std::vector<double> simulate_window_functional(const Model& model, double tau0, double tau1, double tau2,
                                               const std::vector<double>& angle_weights, std::size_t paths,
                                               int threads) {
    if (paths == 0) throw config_error("paths must be >= 1");
    validate_window(model.grid, tau0, tau1, tau2);
    const double dt = model.grid.dt;
    const long j1 = grid_index(tau1, dt), j2 = grid_index(tau2, dt);
    auto time_weight = [&](long j) { return (j == j1 || j == j2 ? 0.5 : 1.0) * dt; };

    const auto angles = model.grid.output_angles();
    if (angle_weights.size() != angles.size()) throw domain_error("one angle weight per output angle required");

    double seasonal = 0.0;
    if (model.seasonal)
        for (long j = j1; j <= j2; ++j)
            for (std::size_t o = 0; o < angles.size(); ++o)
                seasonal += time_weight(j) * angle_weights[o] * model.seasonal(j * dt, angles[o]);

    const int T = std::max(1, threads);
    std::vector<std::unique_ptr<FieldSimulator>> sims(T);
    std::vector<std::unique_ptr<ReconstructionTable>> tables(T);
    std::vector<double> out(paths);
    run_paths(paths, T, [&](std::size_t p, int w) {
        if (!sims[w]) {
            sims[w] = std::make_unique<FieldSimulator>(model.kernel, model.quad, model.vol, model.grid);
            tables[w] = std::make_unique<ReconstructionTable>(sims[w]->table().collapse(angle_weights));
        }
        FieldSimulator& sim = *sims[w];
        sim.reset(p);
        double acc = 0.0;
        for (long j = 1; j <= j2; ++j) {
            sim.step();
            if (j >= j1) {
                double y = 0.0;
                tables[w]->reconstruct(sim.state(), &y);
                acc += time_weight(j) * y;
            }
        }
        out[p] = acc + seasonal;
    });
    for (double x : out)
        if (!std::isfinite(x)) throw numerical_error("Monte Carlo payoff is not finite");
    return out;
}

FuturesQuote futures_price_mc(const Model& model, const FuturesSpec& spec, std::size_t paths, int threads) {
    const std::size_t H = static_cast<std::size_t>(model.grid.H);
    const double len = spec.tau2 - spec.tau1;
    std::vector<double> w(H, 1.0 / (H * (len > 0.0 ? len : 1.0)));
    const auto samples = simulate_window_functional(model, spec.tau0, spec.tau1, spec.tau2, w, paths, threads);
    FuturesQuote q;
    q.expectation = mc_estimate(samples);
    q.net = q.expectation.value - spec.strike;
    return q;
}

double futures_mean_analytic(const Model& model, const FuturesSpec& spec) {
    validate_window(model.grid, spec.tau0, spec.tau1, spec.tau2);
    const auto angles = model.grid.output_angles();
    const double m = model.quad.mean() * model.vol.mean();
    double acc = 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    // int_{tau1}^{tau2} int_0^t g(u) du dt = int_0^{tau2} g(u) (tau2 - max(u, tau1)) du
    for (double h : angles) {
        auto g = [&](double u) {
            return two_pi * model.kernel->fourier_coeff(u, h, 0).real() * (spec.tau2 - std::max(u, spec.tau1));
        };
        acc += spec.tau1 > 0.0 ? ts.integrate(g, 0.0, spec.tau1) + ts.integrate(g, spec.tau1, spec.tau2)
                               : ts.integrate(g, 0.0, spec.tau2);
    }
    double mean = m * acc / (angles.size() * (spec.tau2 - spec.tau1));
    if (model.seasonal) {
        auto s = [&](double t) {
            double a = 0.0;
            for (double h : angles) a += model.seasonal(t, h);
            return a / angles.size();
        };
        mean += ts.integrate(s, spec.tau1, spec.tau2) / (spec.tau2 - spec.tau1);
    }
    return mean;
}

std::vector<double> spread_angle_weights(const std::vector<double>& angles, const AngularSet& H1,
                                         const AngularSet& H2) {
    const double half = angles.empty() ? 0.0 : std::numbers::pi / angles.size();
    std::vector<double> w(angles.size());
    for (std::size_t o = 0; o < angles.size(); ++o)
        w[o] = H1.overlap(angles[o] - half, angles[o] + half) - H2.overlap(angles[o] - half, angles[o] + half);
    return w;
}

double spread_kernel_integrals(const Kernel& kernel, const AngularSet& H1, const AngularSet& H2, double t_lag,
                               double theta_xi) {
    if (!(t_lag > 0.0)) throw domain_error("spread_kernel_integrals: lag must be > 0");
    auto integral = [&](const AngularSet& set) {
        double s = 0.0;
        for (const auto& iv : set.intervals())
            s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [&](double phi) { return kernel.eval(t_lag, phi, theta_xi); }, iv.lo, iv.hi, 15, 1e-13);
        return s;
    };
    return integral(H1) - integral(H2);
}

std::vector<double> spread_payoffs_mc(const Model& model, const SpreadSpec& spec, std::size_t paths, int threads) {
    if (spec.H1.empty() || spec.H2.empty()) throw config_error("spread sets H1 and H2 must be nonempty");
    const auto w = spread_angle_weights(model.grid.output_angles(), spec.H1, spec.H2);
    return simulate_window_functional(model, spec.tau0, spec.tau1, spec.tau2, w, paths, threads);
}

McEstimate spread_price_mc(const Model& model, const SpreadSpec& spec, std::size_t paths, int threads) {
    return mc_estimate(spread_payoffs_mc(model, spec, paths, threads));
}

SpreadOptionResult spread_option_quotes(std::vector<double> payoffs, double maturity,
                                        const std::vector<double>& strikes) {
    SpreadOptionResult r;
    r.payoffs = std::move(payoffs);
    r.forward = mc_estimate(r.payoffs);
    r.maturity = maturity;
    std::vector<double> pay(r.payoffs.size());
    for (double P : strikes) {
        for (std::size_t i = 0; i < pay.size(); ++i) pay[i] = std::max(r.payoffs[i] - P, 0.0);
        const auto e = mc_estimate(pay);
        OptionQuote q;
        q.strike = P;
        q.price = e.value;
        q.stderr = e.stderr;
        if (maturity > 0.0 && e.value > std::max(r.forward.value - P, 0.0)) {
            try {
                q.implied_vol = bachelier_iv(e.value, r.forward.value, P, maturity);
                q.iv_stderr = iv_stderr(r.payoffs, maturity, q);
            } catch (const numerical_error&) {
            }
        }
        r.quotes.push_back(q);
    }
    return r;
}

SpreadOptionResult spread_option_mc(const Model& model, const SpreadSpec& spec, const std::vector<double>& strikes,
                                    std::size_t paths, int threads) {
    return spread_option_quotes(spread_payoffs_mc(model, spec, paths, threads), spec.tau1, strikes);
}

// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(two_pi); }

double bachelier_price(double forward, double strike, double maturity, double vol) {
    const double s = vol * std::sqrt(maturity);
    if (s <= 0.0) return std::max(forward - strike, 0.0);
    const double d = (forward - strike) / s;
    return (forward - strike) * normal_cdf(d) + s * normal_pdf(d);
}

double bachelier_vega(double forward, double strike, double maturity, double vol) {
    const double s = vol * std::sqrt(maturity);
    if (s <= 0.0) return 0.0;
    return std::sqrt(maturity) * normal_pdf((forward - strike) / s);
}

double bachelier_iv(double price, double forward, double strike, double maturity) {
    if (!(maturity > 0.0)) throw numerical_error("bachelier_iv: maturity must be > 0, got " + num(maturity));
    const double intrinsic = std::max(forward - strike, 0.0);
    if (!(price > intrinsic) || !std::isfinite(price))
        throw numerical_error("bachelier_iv: price " + num(price) + " outside the no-arbitrage envelope (intrinsic " +
                              num(intrinsic) + ")");
    auto f = [&](double v) { return bachelier_price(forward, strike, maturity, v) - price; };
    double lo = 0.0;
    double hi = std::max(price, 1e-300) * std::sqrt(two_pi / maturity);
    for (int k = 0; f(hi) < 0.0; ++k) {
        if (k > 200) throw numerical_error("bachelier_iv: could not bracket the implied volatility");
        lo = hi;
        hi *= 2.0;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fv = f(v);
        if (fv > 0.0)
            hi = v;
        else
            lo = v;
        const double vega = bachelier_vega(forward, strike, maturity, v);
        double next = vega > 0.0 ? v - fv / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 1e-14 * next || hi - lo <= 1e-15 * hi) return next;
        v = next;
    }
    if (hi - lo <= 1e-10 * hi) return 0.5 * (lo + hi);
    throw numerical_error("bachelier_iv: no convergence for price " + num(price));
}

double iv_stderr(const std::vector<double>& payoffs, double maturity, const OptionQuote& a,
                 const std::optional<OptionQuote>& b) {
    if (payoffs.size() < 2) return 0.0;
    const double n = static_cast<double>(payoffs.size());
    const double F = pairwise_sum(payoffs) / n;
    auto influence = [&](const OptionQuote& q, std::vector<double>& psi, double sign) {
        if (!q.implied_vol) throw numerical_error("iv_stderr: quote has no implied volatility");
        const double s = *q.implied_vol * std::sqrt(maturity);
        const double delta = normal_cdf((F - q.strike) / s);
        const double vega = bachelier_vega(F, q.strike, maturity, *q.implied_vol);
        for (std::size_t i = 0; i < payoffs.size(); ++i) {
            const double p = std::max(payoffs[i] - q.strike, 0.0);
            psi[i] += sign * ((p - q.price) - delta * (payoffs[i] - F)) / vega;
        }
    };
    std::vector<double> psi(payoffs.size(), 0.0);
    influence(a, psi, 1.0);
    if (b) influence(*b, psi, -1.0);
    for (double& x : psi) x *= x;
    return std::sqrt(pairwise_sum(psi) / (n - 1.0) / n);
}

}  // namespace ambit
