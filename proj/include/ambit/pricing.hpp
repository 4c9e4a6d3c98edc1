#pragma once

#include "ambit/geometry.hpp"
#include "ambit/kernels.hpp"
#include "ambit/levy.hpp"
#include "ambit/simulate.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ambit {

// Everything needed to simulate the spot field under the pricing measure.
struct Model {
    KernelPtr kernel;
    CharacteristicQuadruplet quad;
    VolatilityFieldSpec vol;
    SimulationGrid grid;
    // Deterministic offset added to the simulated field, s0(t, theta).
    std::function<double(double, double)> seasonal;
};

struct FuturesSpec {
    double tau0 = 0.0;
    double tau1 = 0.0;
    double tau2 = 1.0;
    double strike = 0.0;  // P
};

struct SpreadSpec {
    double tau0 = 0.0;
    double tau1 = 1.0;
    double tau2 = 2.0;
    AngularSet H1;
    AngularSet H2;
};

struct McEstimate {
    double value = 0.0;
    double stderr = 0.0;
    std::size_t paths = 0;
};

struct FuturesQuote {
    McEstimate expectation;  // time-space average of E[S]
    double net = 0.0;        // expectation - P
};

struct OptionQuote {
    double strike = 0.0;
    double price = 0.0;
    double stderr = 0.0;
    std::optional<double> implied_vol;
    std::optional<double> iv_stderr;
};

struct SpreadOptionResult {
    std::vector<double> payoffs;  // X per path
    McEstimate forward;           // sample mean of X
    double maturity = 0.0;        // tau1, used for the Bachelier inversion
    std::vector<OptionQuote> quotes;
};

// Pathwise int_{tau1}^{tau2} sum_o w_o S(t, theta_o) dt with the time
// trapezoid on grid points. Window ends must sit on the time grid.
std::vector<double> simulate_window_functional(const Model& model, double tau0, double tau1, double tau2,
                                               const std::vector<double>& angle_weights, std::size_t paths,
                                               int threads);

McEstimate mc_estimate(const std::vector<double>& samples);

FuturesQuote futures_price_mc(const Model& model, const FuturesSpec& spec, std::size_t paths, int threads = 1);

// Continuous-time futures expectation from a zero history at time 0, by quadrature.
double futures_mean_analytic(const Model& model, const FuturesSpec& spec);

// Angular weights |cell_o ∩ H1| - |cell_o ∩ H2| of the output cells (theta_o -+ pi/H).
std::vector<double> spread_angle_weights(const std::vector<double>& angles, const AngularSet& H1,
                                         const AngularSet& H2);

// int_{H1} K(t, phi, xi) dphi - int_{H2} K(t, phi, xi) dphi
double spread_kernel_integrals(const Kernel& kernel, const AngularSet& H1, const AngularSet& H2, double t_lag,
                               double theta_xi);

std::vector<double> spread_payoffs_mc(const Model& model, const SpreadSpec& spec, std::size_t paths, int threads = 1);
McEstimate spread_price_mc(const Model& model, const SpreadSpec& spec, std::size_t paths, int threads = 1);

// Call quotes (X - P)^+ for every strike from one set of paths.
SpreadOptionResult spread_option_mc(const Model& model, const SpreadSpec& spec, const std::vector<double>& strikes,
                                    std::size_t paths, int threads = 1);
// Same, from payoffs already simulated.
SpreadOptionResult spread_option_quotes(std::vector<double> payoffs, double maturity,
                                        const std::vector<double>& strikes);

double normal_cdf(double x);
double normal_pdf(double x);

double bachelier_price(double forward, double strike, double maturity, double vol);
double bachelier_vega(double forward, double strike, double maturity, double vol);
double bachelier_iv(double price, double forward, double strike, double maturity);

// Delta-method standard error of iv(P_a) - iv(P_b) from common paths; pass
// a strike with no partner (b = nullopt) for the error of a single iv.
double iv_stderr(const std::vector<double>& payoffs, double maturity, const OptionQuote& a,
                 const std::optional<OptionQuote>& b = std::nullopt);

void validate_window(const SimulationGrid& grid, double tau0, double tau1, double tau2);

}  // namespace ambit
