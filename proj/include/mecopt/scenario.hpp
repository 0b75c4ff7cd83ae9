#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace mecopt {

// Pathloss in dB as intercept + slope * log10(distance_km).
struct PathlossModel {
    double intercept_db;
    double slope_db_per_decade;

    double loss_db(double distance_km) const;
};

// Every physical quantity is SI. See units.hpp for the convenience-unit
// conversions accepted by from_json.
struct ScenarioConfig {
    std::size_t num_imds = 10;
    std::size_t num_sbs = 10;
    std::size_t num_tasks = 3;
    double cell_radius_km = 0.5;
    double bandwidth_hz = 20e6;
    double noise_power_w = 1e-14;
    double backhaul_rate_bps = 1e9;
    double imd_cpu_hz = 1e9;
    double sbs_cpu_hz = 20e9;
    double mbs_cpu_hz = 20e9;
    double kappa_chip = 1e-25;         // J s^2 / cycle^3
    double cycle_energy_sbs = 1e-9;    // J / cycle
    double cycle_energy_mbs = 1e-9;    // J / cycle
    double wired_power_w = 1e-3;
    double deadline_min_s = 5.0;
    double deadline_max_s = 10.0;
    double data_min_bits = 200.0 * 8000.0;
    double data_max_bits = 500.0 * 8000.0;
    double cycles_per_bit_min = 50.0;
    double cycles_per_bit_max = 100.0;
    double p_max_w = 0.19952623149688797; // 23 dBm
    double theta = 1e-20;
    PathlossModel mbs_pathloss{128.1, 37.6};
    PathlossModel sbs_pathloss{140.7, 36.7};
    double shadowing_std_db = 8.0;
    double min_distance_km = 0.01;
    std::uint64_t seed = 1;

    // Throws ConfigError naming the first offending field.
    void validate() const;
};

// Reads a flat JSON object. SI keys (`bandwidth_hz`) and convenience keys
// (`bandwidth_mhz`, `p_max_dbm`, `data_min_kb`, ...) are both accepted;
// specifying both forms of one quantity is an error. Missing keys keep
// their defaults. Unknown keys are rejected.
ScenarioConfig scenario_config_from_json(const nlohmann::json& j);
// Always writes SI keys.
nlohmann::json to_json(const ScenarioConfig& cfg);

struct Point {
    double x_km = 0.0;
    double y_km = 0.0;
};

// A frozen random network instance. BS index 0 is the MBS, 1..S are SBSs.
// Row-major matrices: gain is U x (S+1), task arrays are U x K.
struct Scenario {
    ScenarioConfig config;
    std::vector<Point> imd_positions;
    std::vector<Point> bs_positions;
    std::vector<double> gain;
    std::vector<double> task_bits;
    std::vector<double> task_cycles_per_bit;
    std::vector<double> deadline_s;

    std::size_t num_imds() const { return config.num_imds; }
    std::size_t num_sbs() const { return config.num_sbs; }
    std::size_t num_bs() const { return config.num_sbs + 1; }
    std::size_t num_tasks() const { return config.num_tasks; }

    double h(std::size_t imd, std::size_t bs) const { return gain[imd * num_bs() + bs]; }
    double bits(std::size_t imd, std::size_t task) const { return task_bits[imd * num_tasks() + task]; }
    double cpb(std::size_t imd, std::size_t task) const
    {
        return task_cycles_per_bit[imd * num_tasks() + task];
    }
    double cycles(std::size_t imd, std::size_t task) const { return bits(imd, task) * cpb(imd, task); }
};

// Pure function of the config (seed included). Each IMD draws its position,
// tasks, deadline and link shadowing from its own sub-stream, so the first U
// IMDs of a larger instance with the same seed coincide with a smaller one.
Scenario generate_scenario(const ScenarioConfig& config);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

} // namespace mecopt
