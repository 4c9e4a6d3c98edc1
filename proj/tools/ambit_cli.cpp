// Command-line front end: simulate, price, panel-stats, kernel-diag.

#include "ambit/csv.hpp"
#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"
#include "ambit/kernels.hpp"
#include "ambit/panel.hpp"
#include "ambit/pricing.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/scenario.hpp"
#include "ambit/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ambit;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw config_error("cannot open '" + p.string() + "' for writing");
    f << text;
}

fs::path prepare_out(const ScenarioConfig& c) {
    fs::path out(c.output_dir);
    fs::create_directories(out);
    write_text(out / "manifest.json", c.resolved_json);
    return out;
}

json grid_json(const SimulationGrid& g) {
    return {{"dt_years", g.dt},
            {"steps", g.J},
            {"output_angles", g.H},
            {"noise_cells", g.M_cells},
            {"contour_abscissa_per_year", g.z_r},
            {"contour_range_per_year", g.z_range},
            {"contour_step_per_year", g.dz},
            {"truncation_order", g.N}};
}

int cmd_simulate(const ScenarioConfig& c) {
    const fs::path out = prepare_out(c);
    const FieldPath f = simulate_field(c.kernel, c.quad, c.vol, c.grid);
    write_field_csv((out / "field.csv").string(), f);
    if (!f.volatility.empty()) write_volatility_csv((out / "volatility.csv").string(), f);
    if (f.max_imag_residual > 1e-8)
        std::cerr << "warning: contour reconstruction imaginary residual " << f.max_imag_residual
                  << " exceeds 1e-8; refine contour_step_per_year or widen contour_range_per_year\n";
    return 0;
}

std::string opt_num(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

int cmd_price(const ScenarioConfig& c) {
    if (c.pricing.empty()) throw config_error("pricing: no products configured");
    const fs::path out = prepare_out(c);
    const Model model = c.model();
    for (const auto& req : c.pricing) {
        CsvTable t;
        t.header = {"strike", "price", "stderr", "implied_vol"};
        json meta = {{"product", ""}, {"seed", c.seed}, {"paths", c.paths}, {"grid", grid_json(c.grid)}};
        switch (req.product) {
            case PricingRequest::Product::futures: {
                const auto q = futures_price_mc(model, req.futures, c.paths, c.threads);
                t.rows.push_back({format_double(0.0), format_double(q.expectation.value),
                                  format_double(q.expectation.stderr), ""});
                t.rows.push_back({format_double(req.futures.strike), format_double(q.net),
                                  format_double(q.expectation.stderr), ""});
                meta["product"] = "futures";
                meta["rows"] = {"expectation of the time-space averaged spot (P = 0)",
                                "net contract value expectation - P at the configured strike"};
                meta["tau1_years"] = req.futures.tau1;
                meta["tau2_years"] = req.futures.tau2;
                break;
            }
            case PricingRequest::Product::spread: {
                const auto e = spread_price_mc(model, req.spread, c.paths, c.threads);
                t.rows.push_back({"", format_double(e.value), format_double(e.stderr), ""});
                meta["product"] = "spread";
                meta["tau1_years"] = req.spread.tau1;
                meta["tau2_years"] = req.spread.tau2;
                break;
            }
            case PricingRequest::Product::spread_option: {
                const auto r = spread_option_mc(model, req.spread, req.strikes, c.paths, c.threads);
                for (const auto& q : r.quotes)
                    t.rows.push_back({format_double(q.strike), format_double(q.price), format_double(q.stderr),
                                      opt_num(q.implied_vol)});
                meta["product"] = "spread_option";
                meta["forward"] = r.forward.value;
                meta["forward_stderr"] = r.forward.stderr;
                meta["maturity_years"] = r.maturity;
                meta["tau1_years"] = req.spread.tau1;
                meta["tau2_years"] = req.spread.tau2;
                break;
            }
        }
        write_csv((out / (req.name + ".csv")).string(), t);
        write_text(out / (req.name + ".meta.json"), meta.dump(2) + "\n");
    }
    return 0;
}

int cmd_kernel_diag(const ScenarioConfig& c) {
    const fs::path out = prepare_out(c);
    const Kernel& k = *c.kernel;
    CsvTable t;
    t.header = {"diagnostic", "parameter", "value", "note"};
    const auto angles = c.grid.output_angles();

    for (int N = 0; N <= k.fourier_order() + 1; ++N) {
        std::string value, note;
        try {
            value = format_double(truncation_error_bound(k, c.quad, c.vol.second_moment(), c.grid.z_r, N, angles).max);
        } catch (const domain_error& e) {
            value = "nan";
            note = e.what();
        }
        t.rows.push_back({"truncation_bound", std::to_string(N), value, note});
    }

    const double norm = l2_kernel_distance(k, SemiParametricKernel(c.projection_alpha, 0, {0.0}));
    for (int n = 0; n <= c.projection_max_order; ++n) {
        const auto p = project_kernel(k, n, c.projection_alpha);
        const double d = l2_kernel_distance(k, p);
        t.rows.push_back({"projection_l2_error", std::to_string(n), format_double(d), ""});
        t.rows.push_back({"projection_relative_error", std::to_string(n), format_double(d / norm), ""});
    }

    const int order = std::min(k.fourier_order(), 64);
    for (double lag : {0.1, 0.5, 1.0, 2.0}) {
        double fourier = 0.0, laplace = 0.0;
        for (int a = 0; a < 8; ++a) {
            const double h = two_pi * (a + 1) / 8;
            for (int b = 0; b < 16; ++b) {
                const double xi = two_pi * (b + 1) / 16;
                cplx s = 0.0;
                for (int n = -order; n <= order; ++n) s += k.fourier_coeff(lag, h, n) * std::polar(1.0, n * xi);
                fourier = std::max(fourier, std::abs(s - k.eval(lag, h, xi)));
            }
            for (int n = 0; n <= order; ++n) {
                const cplx inv = bromwich_inverse([&](cplx z) { return k.laplace_fourier(z, h, n); }, lag);
                laplace = std::max(laplace, std::abs(inv - k.fourier_coeff(lag, h, n)));
            }
        }
        t.rows.push_back({"fourier_roundtrip_residual", format_double(lag), format_double(fourier), ""});
        t.rows.push_back({"laplace_roundtrip_residual", format_double(lag), format_double(laplace), ""});
    }
    write_csv((out / "kernel_diag.csv").string(), t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ambit field simulation and pricing on the cylinder"};
    app.require_subcommand(1);

    std::string config, out, input;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    int threads = 0, periods = 0;
    double day_length = 1.0 / 365.0, burn_in = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--paths", paths, "Monte Carlo paths (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (overrides the config)");
    };
    auto* sim = app.add_subcommand("simulate", "simulate one field path and write CSVs");
    add_common(sim);
    auto* price = app.add_subcommand("price", "Monte Carlo prices of the configured products");
    add_common(price);
    auto* diag = app.add_subcommand("kernel-diag", "truncation bounds, projection errors and transform residuals");
    add_common(diag);
    auto* panel = app.add_subcommand("panel-stats", "correlation structure of a daily panel");
    panel->add_option("--input", input, "field CSV (first column t) or panel CSV (one row per day)")
        ->required()
        ->check(CLI::ExistingFile);
    panel->add_option("--periods", periods, "delivery periods per day; checked against the columns");
    panel->add_option("--day-length", day_length, "day length in years for daily sampling");
    panel->add_option("--burn-in", burn_in, "discard rows with t <= burn-in (years)");
    panel->add_option("--out", out, "output directory")->default_val("out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (panel->parsed()) {
            const auto stats = panel_stats_from_csv(read_csv(input), periods, day_length, burn_in);
            fs::create_directories(out);
            write_csv((fs::path(out) / "panel_corr.csv").string(), panel_corr_table(stats));
            write_csv((fs::path(out) / "panel_scores.csv").string(), panel_score_table(stats));
            return 0;
        }
        ScenarioOverrides ov;
        CLI::App* sub = sim->parsed() ? sim : price->parsed() ? price : diag;
        if (sub->count("--seed")) ov.seed = seed;
        if (sub->count("--out")) ov.output_dir = out;
        if (sub->count("--paths")) ov.paths = paths;
        if (sub->count("--threads")) ov.threads = threads;
        const ScenarioConfig c = load_scenario(config, ov);
        if (sim->parsed()) return cmd_simulate(c);
        if (price->parsed()) return cmd_price(c);
        return cmd_kernel_diag(c);
    } catch (const config_error& e) {
        std::cerr << "configuration error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return exit_config;
    } catch (const domain_error& e) {
        std::cerr << "configuration error:\n  - " << e.what() << "\n";
        return exit_config;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}
