#pragma once

#include "ambit/kernels.hpp"
#include "ambit/levy.hpp"
#include "ambit/pricing.hpp"
#include "ambit/simulate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ambit {

struct PricingRequest {
    enum class Product { futures, spread, spread_option };

    Product product = Product::futures;
    std::string name;
    FuturesSpec futures;
    SpreadSpec spread;
    std::vector<double> strikes;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t paths = 1000;
    int threads = 1;
    std::string output_dir = "out";

    KernelPtr kernel;
    CharacteristicQuadruplet quad;  // after the Esscher tilt
    double esscher_q = 0.0;
    VolatilityFieldSpec vol;
    SimulationGrid grid;
    double seasonal_offset = 0.0;
    std::vector<PricingRequest> pricing;

    double day_length = 1.0 / 365.0;
    double burn_in = 0.0;

    int projection_max_order = 6;
    double projection_alpha = 0.75;

    // The configuration with every default written out; loading it again
    // reproduces this object.
    std::string resolved_json;

    Model model() const;
};

struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<int> threads;
    std::optional<std::string> output_dir;
};

// Throws config_error listing every violation found.
ScenarioConfig parse_scenario(const std::string& json_text, const ScenarioOverrides& overrides = {});
ScenarioConfig load_scenario(const std::string& path, const ScenarioOverrides& overrides = {});

}  // namespace ambit
