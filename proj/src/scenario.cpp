#include "ambit/scenario.hpp"

#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ambit {

using json = nlohmann::ordered_json;

namespace {

// Reads typed fields from one JSON object, recording problems instead of
// stopping at the first one. Whatever is read (or defaulted) is written to
// `out`, which becomes the resolved configuration.
class Reader {
public:
    Reader(const json* in, std::string path, std::vector<std::string>& errors)
        : in_(in), path_(std::move(path)), errors_(errors) {
        if (in_ && !in_->is_object()) {
            fail("", "must be an object");
            in_ = nullptr;
        }
    }

    json out = json::object();

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void fail(const std::string& key, const std::string& msg) { errors_.push_back(where(key) + ": " + msg); }

    const json* raw(const std::string& key) {
        seen_.insert(key);
        if (!in_) return nullptr;
        auto it = in_->find(key);
        return it == in_->end() ? nullptr : &*it;
    }
    bool has(const std::string& key) { return raw(key) != nullptr; }

    double number(const std::string& key, std::optional<double> def = std::nullopt) {
        const json* v = raw(key);
        if (!v) {
            if (!def) {
                fail(key, "missing");
                return 0.0;
            }
            out[key] = *def;
            return *def;
        }
        if (!v->is_number()) {
            fail(key, "must be a number");
            return def.value_or(0.0);
        }
        const double d = v->get<double>();
        out[key] = *v;
        return d;
    }

    long integer(const std::string& key, std::optional<long> def = std::nullopt) {
        const json* v = raw(key);
        if (!v) {
            if (!def) {
                fail(key, "missing");
                return 0;
            }
            out[key] = *def;
            return *def;
        }
        if (!v->is_number_integer()) {
            fail(key, "must be an integer");
            return def.value_or(0);
        }
        out[key] = *v;
        return v->get<long>();
    }

    std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
        const json* v = raw(key);
        if (!v) {
            if (!def) {
                fail(key, "missing");
                return {};
            }
            out[key] = *def;
            return *def;
        }
        if (!v->is_string()) {
            fail(key, "must be a string");
            return def.value_or("");
        }
        out[key] = *v;
        return v->get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = std::nullopt) {
        const json* v = raw(key);
        if (!v) {
            if (!def) {
                fail(key, "missing");
                return {};
            }
            out[key] = *def;
            return *def;
        }
        if (!v->is_array()) {
            fail(key, "must be an array of numbers");
            return {};
        }
        std::vector<double> r;
        for (const auto& x : *v) {
            if (!x.is_number()) {
                fail(key, "must be an array of numbers");
                return {};
            }
            r.push_back(x.get<double>());
        }
        out[key] = *v;
        return r;
    }

    void check_unknown() {
        if (!in_) return;
        for (auto it = in_->begin(); it != in_->end(); ++it)
            if (!seen_.count(it.key())) fail(it.key(), "unknown field");
    }

private:
    const json* in_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

void positive(Reader& r, const std::string& key, double v) {
    if (!(v > 0.0)) r.fail(key, "must be > 0");
}

KernelPtr read_kernel(Reader& r) {
    const std::string fam = r.string("family");
    try {
        if (fam == "gamma_cardioid") {
            const double alpha = r.number("alpha", 0.75);
            MeanReversion eta;
            eta.mean = r.number("eta_mean_per_year", 2.0);
            eta.cos_k = r.numbers("eta_cos_per_year", std::vector<double>{1.0});
            eta.sin_k = r.numbers("eta_sin_per_year", std::vector<double>{});
            WeightFunction w;
            w.level = r.number("w_level", 1.0);
            w.amplitude = r.number("w_amplitude", 1.0);
            w.rate = r.number("w_rate_per_year", 1.0);
            return std::make_shared<GammaCardioidKernel>(alpha, eta, w);
        }
        if (fam == "semi_parametric") {
            const double alpha = r.number("alpha");
            if (r.has("coefficients")) {
                const long order = r.integer("order");
                auto c = r.numbers("coefficients");
                return std::make_shared<SemiParametricKernel>(alpha, static_cast<int>(order), c);
            }
            SeparableCoefficients c;
            c.c1 = r.numbers("c1");
            c.c21 = r.numbers("c21");
            c.c22 = r.numbers("c22");
            c.c31 = r.numbers("c31");
            c.c32 = r.numbers("c32");
            return std::make_shared<SemiParametricKernel>(SemiParametricKernel::separable(alpha, c));
        }
        if (!fam.empty()) r.fail("family", "unknown kernel family '" + fam + "' (gamma_cardioid, semi_parametric)");
    } catch (const domain_error& e) {
        r.fail("", e.what());
    }
    return nullptr;
}

LevySeed read_seed(Reader& r) {
    const std::string fam = r.string("family");
    if (fam == "gaussian") return GaussianSeed{r.number("drift", 0.0), r.number("variance")};
    if (fam == "nig") {
        NigSeed s{r.number("alpha"), r.number("beta"), 0.0, r.number("delta")};
        const json* mu = r.raw("mu");
        if (!mu || (mu->is_string() && mu->get<std::string>() == "mean_zero")) {
            r.out["mu"] = "mean_zero";
            if (s.alpha > 0.0 && std::abs(s.beta) < s.alpha && s.delta > 0.0)
                s.mu = nig_mean_zero(s.alpha, s.beta, s.delta).mu;
        } else {
            s.mu = r.number("mu");
        }
        return s;
    }
    if (fam == "inverse_gaussian") return InverseGaussianSeed{r.number("delta"), r.number("gamma")};
    if (!fam.empty()) r.fail("family", "unknown seed family '" + fam + "' (gaussian, nig, inverse_gaussian)");
    return GaussianSeed{};
}

VolatilityFieldSpec read_vol(Reader& r) {
    const std::string kind = r.string("kind", std::string("constant"));
    if (kind == "constant") {
        const double v = r.number("value", 1.0);
        positive(r, "value", v);
        return VolatilityFieldSpec::constant(v);
    }
    if (kind == "exp_ig") {
        auto s = VolatilityFieldSpec::exp_ig(r.number("kappa_per_year", 1.0), r.number("ig_delta", 4.0),
                                             r.number("ig_gamma", 4.0));
        positive(r, "kappa_per_year", s.kappa);
        positive(r, "ig_delta", s.delta);
        positive(r, "ig_gamma", s.gamma);
        return s;
    }
    r.fail("kind", "unknown volatility kind '" + kind + "' (constant, exp_ig)");
    return {};
}

AngularSet read_set(Reader& r, const std::string& key, const json& raw) {
    std::vector<AngularInterval> iv;
    if (!raw.is_array()) {
        r.fail(key, "must be an array of [lo, hi] pairs");
        return {};
    }
    for (const auto& p : raw) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            r.fail(key, "must be an array of [lo, hi] pairs");
            return {};
        }
        iv.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
        AngularSet s(iv);
        r.out[key] = raw;
        return s;
    } catch (const std::exception& e) {
        r.fail(key, e.what());
        return {};
    }
}

json set_json(const AngularSet& s) {
    json a = json::array();
    for (const auto& iv : s.intervals()) a.push_back({iv.lo, iv.hi});
    return a;
}

PricingRequest read_pricing(Reader& r, std::size_t index) {
    PricingRequest p;
    const std::string product = r.string("product");
    p.name = r.string("name", product + "_" + std::to_string(index + 1));
    const double tau0 = r.number("tau0_years", 0.0);
    const double tau1 = r.number("tau1_years");
    const double tau2 = r.number("tau2_years");
    if (product == "futures") {
        p.product = PricingRequest::Product::futures;
        p.futures = {tau0, tau1, tau2, r.number("strike", 0.0)};
        return p;
    }
    if (product != "spread" && product != "spread_option") {
        if (!product.empty()) r.fail("product", "unknown product '" + product + "' (futures, spread, spread_option)");
        return p;
    }
    p.product = product == "spread" ? PricingRequest::Product::spread : PricingRequest::Product::spread_option;
    p.spread.tau0 = tau0;
    p.spread.tau1 = tau1;
    p.spread.tau2 = tau2;
    if (const json* h1 = r.raw("H1_radians")) {
        p.spread.H1 = read_set(r, "H1_radians", *h1);
    } else {
        r.fail("H1_radians", "missing");
    }
    if (const json* h2 = r.raw("H2_radians")) {
        p.spread.H2 = read_set(r, "H2_radians", *h2);
    } else if (!p.spread.H1.empty()) {
        p.spread.H2 = p.spread.H1.complement();
        r.out["H2_radians"] = set_json(p.spread.H2);
    }
    if (p.product == PricingRequest::Product::spread_option) {
        const double from = r.number("strike_from", -0.05);
        const double to = r.number("strike_to", 0.05);
        const long count = r.integer("strike_count", 11);
        if (count < 1) r.fail("strike_count", "must be >= 1");
        for (long k = 0; k < count; ++k)
            p.strikes.push_back(count == 1 ? from : from + (to - from) * k / (count - 1.0));
    }
    return p;
}

}  // namespace

Model ScenarioConfig::model() const {
    Model m{kernel, quad, vol, grid, {}};
    if (seasonal_offset != 0.0) {
        const double s0 = seasonal_offset;
        m.seasonal = [s0](double, double) { return s0; };
    }
    return m;
}

ScenarioConfig parse_scenario(const std::string& json_text, const ScenarioOverrides& overrides) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (overrides.seed) root["seed"] = *overrides.seed;
    if (overrides.paths) root["paths"] = *overrides.paths;
    if (overrides.threads) root["threads"] = *overrides.threads;
    if (overrides.output_dir) root["output_dir"] = *overrides.output_dir;

    std::vector<std::string> errors;
    Reader top(&root, "", errors);
    ScenarioConfig c;

    const long seed = top.integer("seed", 0);
    if (seed < 0) top.fail("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    const long paths = top.integer("paths", 1000);
    if (paths < 1) top.fail("paths", "must be >= 1");
    c.paths = static_cast<std::size_t>(std::max(paths, 1L));
    c.threads = static_cast<int>(top.integer("threads", 1));
    if (c.threads < 1) top.fail("threads", "must be >= 1");
    c.output_dir = top.string("output_dir", std::string("out"));

    {
        Reader r(top.raw("kernel"), "kernel", errors);
        if (!top.has("kernel")) top.fail("kernel", "missing");
        else {
            c.kernel = read_kernel(r);
            r.check_unknown();
            top.out["kernel"] = r.out;
        }
    }
    {
        Reader r(top.raw("levy"), "levy", errors);
        if (!top.has("levy")) top.fail("levy", "missing");
        else {
            c.quad.seed = read_seed(r);
            r.check_unknown();
            top.out["levy"] = r.out;
            try {
                validate(c.quad.seed);
            } catch (const domain_error& e) {
                r.fail("", e.what());
            }
        }
    }
    c.esscher_q = top.number("esscher_q", 0.0);
    try {
        c.quad = esscher_tilt(c.quad, EsscherTilt{c.esscher_q});
    } catch (const domain_error& e) {
        top.fail("esscher_q", e.what());
    }
    {
        Reader r(top.raw("volatility"), "volatility", errors);
        c.vol = read_vol(r);
        r.check_unknown();
        top.out["volatility"] = r.out;
    }
    {
        Reader r(top.raw("grid"), "grid", errors);
        SimulationGrid& g = c.grid;
        g.dt = r.number("dt_years", 0.005);
        const double horizon = r.number("horizon_years", 5.0);
        if (g.dt > 0.0 && horizon > 0.0) {
            const double steps = horizon / g.dt;
            if (std::abs(steps - std::round(steps)) > 1e-7 * std::max(1.0, steps))
                r.fail("horizon_years", "must be a multiple of dt_years");
            g.J = static_cast<int>(std::llround(steps));
        } else {
            positive(r, "horizon_years", horizon);
        }
        g.H = static_cast<int>(r.integer("output_angles", 24));
        g.M_cells = static_cast<int>(r.integer("noise_cells", 2 * g.H));
        const double gd = c.kernel ? c.kernel->gamma_decay() : 1.0;
        g.z_r = r.number("contour_abscissa_per_year", -gd / 2.0);
        g.z_range = r.number("contour_range_per_year", 50.0);
        g.dz = r.number("contour_step_per_year", 0.1);
        g.N = static_cast<int>(r.integer("truncation_order", c.kernel ? c.kernel->fourier_order() : 1));
        g.seed = c.seed;
        r.check_unknown();
        for (auto& v : g.violations(c.kernel.get())) errors.push_back(v);
        top.out["grid"] = r.out;
    }
    c.seasonal_offset = top.number("seasonal_offset", 0.0);

    {
        json list = json::array();
        const json* pr = top.raw("pricing");
        if (pr && !pr->is_array()) top.fail("pricing", "must be an array");
        if (pr && pr->is_array()) {
            for (std::size_t i = 0; i < pr->size(); ++i) {
                Reader r(&(*pr)[i], "pricing[" + std::to_string(i) + "]", errors);
                auto req = read_pricing(r, i);
                r.check_unknown();
                const double t1 = req.product == PricingRequest::Product::futures ? req.futures.tau1 : req.spread.tau1;
                const double t2 = req.product == PricingRequest::Product::futures ? req.futures.tau2 : req.spread.tau2;
                const double t0 = req.product == PricingRequest::Product::futures ? req.futures.tau0 : req.spread.tau0;
                try {
                    validate_window(c.grid, t0, t1, t2);
                } catch (const config_error& e) {
                    for (const auto& v : e.violations()) r.fail("", v);
                }
                c.pricing.push_back(std::move(req));
                list.push_back(r.out);
            }
        }
        top.out["pricing"] = list;
    }
    {
        Reader r(top.raw("panel"), "panel", errors);
        c.day_length = r.number("day_length_years", 1.0 / 365.0);
        positive(r, "day_length_years", c.day_length);
        const double gd = c.kernel ? c.kernel->gamma_decay() : 1.0;
        c.burn_in = r.number("burn_in_years", 10.0 / gd);
        if (c.burn_in < 0.0) r.fail("burn_in_years", "must be >= 0");
        r.check_unknown();
        top.out["panel"] = r.out;
    }
    {
        Reader r(top.raw("diagnostics"), "diagnostics", errors);
        c.projection_max_order = static_cast<int>(r.integer("projection_max_order", 6));
        if (c.projection_max_order < 0) r.fail("projection_max_order", "must be >= 0");
        c.projection_alpha = r.number("projection_alpha", c.kernel ? c.kernel->alpha() : 0.75);
        if (!(c.projection_alpha > 0.5)) r.fail("projection_alpha", "must be > 1/2");
        r.check_unknown();
        top.out["diagnostics"] = r.out;
    }
    top.check_unknown();

    if (!errors.empty()) throw config_error(errors);
    c.resolved_json = top.out.dump(2) + "\n";
    return c;
}

ScenarioConfig load_scenario(const std::string& path, const ScenarioOverrides& overrides) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return parse_scenario(os.str(), overrides);
}

}  // namespace ambit
