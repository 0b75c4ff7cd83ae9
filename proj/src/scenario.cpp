#include "mecopt/scenario.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "mecopt/error.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/units.hpp"

namespace mecopt {

namespace {

enum : std::uint64_t { kStreamBs = 1, kStreamImd = 2 };

void require(bool ok, const char* field, const char* what)
{
    if (!ok) {
        throw ConfigError(field, what);
    }
}

void require_positive(double v, const char* field)
{
    require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
}

Point uniform_in_disc(Rng& rng, double radius)
{
    double r = radius * std::sqrt(uniform01(rng));
    double phi = 2.0 * std::numbers::pi * uniform01(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

double uniform_in(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace

double PathlossModel::loss_db(double distance_km) const
{
    return intercept_db + slope_db_per_decade * std::log10(distance_km);
}

void ScenarioConfig::validate() const
{
    require(num_imds >= 1, "num_imds", "must be >= 1");
    require(num_sbs >= 1, "num_sbs", "must be >= 1");
    require(num_tasks >= 1, "num_tasks", "must be >= 1");
    require_positive(cell_radius_km, "cell_radius_km");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(noise_power_w, "noise_power_w");
    require_positive(backhaul_rate_bps, "backhaul_rate_bps");
    require_positive(imd_cpu_hz, "imd_cpu_hz");
    require_positive(sbs_cpu_hz, "sbs_cpu_hz");
    require_positive(mbs_cpu_hz, "mbs_cpu_hz");
    require_positive(kappa_chip, "kappa_chip");
    require_positive(cycle_energy_sbs, "cycle_energy_sbs");
    require_positive(cycle_energy_mbs, "cycle_energy_mbs");
    require_positive(wired_power_w, "wired_power_w");
    require_positive(deadline_min_s, "deadline_min_s");
    require_positive(deadline_max_s, "deadline_max_s");
    require(deadline_min_s <= deadline_max_s, "deadline_min_s", "must be <= deadline_max_s");
    require_positive(data_min_bits, "data_min_bits");
    require_positive(data_max_bits, "data_max_bits");
    require(data_min_bits <= data_max_bits, "data_min_bits", "must be <= data_max_bits");
    require_positive(cycles_per_bit_min, "cycles_per_bit_min");
    require_positive(cycles_per_bit_max, "cycles_per_bit_max");
    require(cycles_per_bit_min <= cycles_per_bit_max, "cycles_per_bit_min", "must be <= cycles_per_bit_max");
    require_positive(p_max_w, "p_max_w");
    require_positive(theta, "theta");
    require(theta < p_max_w, "theta", "must be below p_max_w");
    require(theta < data_min_bits, "theta", "must be below data_min_bits");
    require(theta < 1.0, "theta", "must be below 1");
    require(std::isfinite(mbs_pathloss.intercept_db), "mbs_pathloss_intercept_db", "must be finite");
    require(std::isfinite(mbs_pathloss.slope_db_per_decade), "mbs_pathloss_slope_db", "must be finite");
    require(std::isfinite(sbs_pathloss.intercept_db), "sbs_pathloss_intercept_db", "must be finite");
    require(std::isfinite(sbs_pathloss.slope_db_per_decade), "sbs_pathloss_slope_db", "must be finite");
    require(std::isfinite(shadowing_std_db) && shadowing_std_db >= 0.0, "shadowing_std_db", "must be >= 0");
    require_positive(min_distance_km, "min_distance_km");
}

namespace {

using nlohmann::json;

struct Key {
    const char* si;
    const char* alt;  // convenience-unit key, may be null
    std::function<double(double)> from_alt;
    std::function<double(double)> to_alt;
    double ScenarioConfig::*member;
};

const std::vector<Key>& real_keys()
{
    using namespace units;
    static const std::vector<Key> keys = {
        {"cell_radius_km", nullptr, {}, {}, &ScenarioConfig::cell_radius_km},
        {"bandwidth_hz", "bandwidth_mhz", mhz_to_hz, hz_to_mhz, &ScenarioConfig::bandwidth_hz},
        {"noise_power_w", "noise_power_dbm", dbm_to_watt, watt_to_dbm, &ScenarioConfig::noise_power_w},
        {"backhaul_rate_bps", "backhaul_rate_gbps", gbps_to_bps, bps_to_gbps, &ScenarioConfig::backhaul_rate_bps},
        {"imd_cpu_hz", "imd_cpu_ghz", ghz_to_hz, hz_to_ghz, &ScenarioConfig::imd_cpu_hz},
        {"sbs_cpu_hz", "sbs_cpu_ghz", ghz_to_hz, hz_to_ghz, &ScenarioConfig::sbs_cpu_hz},
        {"mbs_cpu_hz", "mbs_cpu_ghz", ghz_to_hz, hz_to_ghz, &ScenarioConfig::mbs_cpu_hz},
        {"kappa_chip", nullptr, {}, {}, &ScenarioConfig::kappa_chip},
        {"cycle_energy_sbs", "cycle_energy_sbs_w_per_ghz", watt_per_ghz_to_joule_per_cycle,
         joule_per_cycle_to_watt_per_ghz, &ScenarioConfig::cycle_energy_sbs},
        {"cycle_energy_mbs", "cycle_energy_mbs_w_per_ghz", watt_per_ghz_to_joule_per_cycle,
         joule_per_cycle_to_watt_per_ghz, &ScenarioConfig::cycle_energy_mbs},
        {"wired_power_w", "wired_power_mw", mw_to_watt, watt_to_mw, &ScenarioConfig::wired_power_w},
        {"deadline_min_s", nullptr, {}, {}, &ScenarioConfig::deadline_min_s},
        {"deadline_max_s", nullptr, {}, {}, &ScenarioConfig::deadline_max_s},
        {"data_min_bits", "data_min_kb", kb_to_bits, bits_to_kb, &ScenarioConfig::data_min_bits},
        {"data_max_bits", "data_max_kb", kb_to_bits, bits_to_kb, &ScenarioConfig::data_max_bits},
        {"cycles_per_bit_min", nullptr, {}, {}, &ScenarioConfig::cycles_per_bit_min},
        {"cycles_per_bit_max", nullptr, {}, {}, &ScenarioConfig::cycles_per_bit_max},
        {"p_max_w", "p_max_dbm", dbm_to_watt, watt_to_dbm, &ScenarioConfig::p_max_w},
        {"theta", nullptr, {}, {}, &ScenarioConfig::theta},
        {"shadowing_std_db", nullptr, {}, {}, &ScenarioConfig::shadowing_std_db},
        {"min_distance_km", nullptr, {}, {}, &ScenarioConfig::min_distance_km},
    };
    return keys;
}

double read_number(const json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return v.get<double>();
}

std::size_t read_count(const json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

} // namespace

ScenarioConfig scenario_config_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ConfigError("<root>", "scenario config must be a JSON object");
    }
    ScenarioConfig cfg;
    std::set<std::string> known;

    for (const char* k : {"num_imds", "num_sbs", "num_tasks"}) {
        known.insert(k);
    }
    if (j.contains("num_imds")) cfg.num_imds = read_count(j, "num_imds");
    if (j.contains("num_sbs")) cfg.num_sbs = read_count(j, "num_sbs");
    if (j.contains("num_tasks")) cfg.num_tasks = read_count(j, "num_tasks");

    known.insert("seed");
    if (j.contains("seed")) {
        const auto& v = j.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        cfg.seed = v.get<std::uint64_t>();
    }

    for (const auto& key : real_keys()) {
        known.insert(key.si);
        bool has_si = j.contains(key.si);
        bool has_alt = key.alt && j.contains(key.alt);
        if (key.alt) {
            known.insert(key.alt);
        }
        if (has_si && has_alt) {
            throw ConfigError(key.alt, std::string("conflicts with ") + key.si);
        }
        if (has_si) {
            cfg.*key.member = read_number(j, key.si);
        } else if (has_alt) {
            cfg.*key.member = key.from_alt(read_number(j, key.alt));
        }
    }

    const std::pair<const char*, double*> pathloss[] = {
        {"mbs_pathloss_intercept_db", &cfg.mbs_pathloss.intercept_db},
        {"mbs_pathloss_slope_db", &cfg.mbs_pathloss.slope_db_per_decade},
        {"sbs_pathloss_intercept_db", &cfg.sbs_pathloss.intercept_db},
        {"sbs_pathloss_slope_db", &cfg.sbs_pathloss.slope_db_per_decade},
    };
    for (auto [name, target] : pathloss) {
        known.insert(name);
        if (j.contains(name)) {
            *target = read_number(j, name);
        }
    }

    for (const auto& [k, v] : j.items()) {
        if (!known.contains(k)) {
            throw ConfigError(k, "unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

json to_json(const ScenarioConfig& cfg)
{
    json j;
    j["num_imds"] = cfg.num_imds;
    j["num_sbs"] = cfg.num_sbs;
    j["num_tasks"] = cfg.num_tasks;
    j["seed"] = cfg.seed;
    for (const auto& key : real_keys()) {
        j[key.si] = cfg.*key.member;
    }
    j["mbs_pathloss_intercept_db"] = cfg.mbs_pathloss.intercept_db;
    j["mbs_pathloss_slope_db"] = cfg.mbs_pathloss.slope_db_per_decade;
    j["sbs_pathloss_intercept_db"] = cfg.sbs_pathloss.intercept_db;
    j["sbs_pathloss_slope_db"] = cfg.sbs_pathloss.slope_db_per_decade;
    return j;
}

Scenario generate_scenario(const ScenarioConfig& config)
{
    config.validate();
    const std::size_t U = config.num_imds;
    const std::size_t S = config.num_sbs;
    const std::size_t K = config.num_tasks;

    Scenario s;
    s.config = config;
    s.bs_positions.resize(S + 1);
    s.imd_positions.resize(U);
    s.gain.resize(U * (S + 1));
    s.task_bits.resize(U * K);
    s.task_cycles_per_bit.resize(U * K);
    s.deadline_s.resize(U);

    s.bs_positions[0] = {0.0, 0.0};
    for (std::size_t j = 1; j <= S; ++j) {
        Rng rng(derive_seed(config.seed, {kStreamBs, j}));
        s.bs_positions[j] = uniform_in_disc(rng, config.cell_radius_km);
    }

    for (std::size_t i = 0; i < U; ++i) {
        Rng rng(derive_seed(config.seed, {kStreamImd, i}));
        s.imd_positions[i] = uniform_in_disc(rng, config.cell_radius_km);
        for (std::size_t k = 0; k < K; ++k) {
            s.task_bits[i * K + k] = uniform_in(rng, config.data_min_bits, config.data_max_bits);
            s.task_cycles_per_bit[i * K + k] =
                uniform_in(rng, config.cycles_per_bit_min, config.cycles_per_bit_max);
        }
        s.deadline_s[i] = uniform_in(rng, config.deadline_min_s, config.deadline_max_s);

        std::normal_distribution<double> shadow(0.0, 1.0);
        for (std::size_t j = 0; j <= S; ++j) {
            const Point& bs = s.bs_positions[j];
            const Point& ue = s.imd_positions[i];
            double dist = std::max(std::hypot(ue.x_km - bs.x_km, ue.y_km - bs.y_km), config.min_distance_km);
            const PathlossModel& model = j == 0 ? config.mbs_pathloss : config.sbs_pathloss;
            double shadow_db = config.shadowing_std_db * shadow(rng);
            s.gain[i * (S + 1) + j] = std::pow(10.0, -(model.loss_db(dist) + shadow_db) / 10.0);
        }
    }
    return s;
}

json to_json(const Scenario& s)
{
    json j;
    j["config"] = to_json(s.config);
    auto points = [](const std::vector<Point>& ps) {
        json arr = json::array();
        for (const auto& p : ps) {
            arr.push_back({p.x_km, p.y_km});
        }
        return arr;
    };
    j["imd_positions_km"] = points(s.imd_positions);
    j["bs_positions_km"] = points(s.bs_positions);
    j["gain"] = s.gain;
    j["task_bits"] = s.task_bits;
    j["task_cycles_per_bit"] = s.task_cycles_per_bit;
    j["deadline_s"] = s.deadline_s;
    return j;
}

Scenario scenario_from_json(const json& j)
{
    Scenario s;
    try {
        s.config = scenario_config_from_json(j.at("config"));
        auto points = [](const json& arr) {
            std::vector<Point> ps;
            for (const auto& p : arr) {
                ps.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            }
            return ps;
        };
        s.imd_positions = points(j.at("imd_positions_km"));
        s.bs_positions = points(j.at("bs_positions_km"));
        s.gain = j.at("gain").get<std::vector<double>>();
        s.task_bits = j.at("task_bits").get<std::vector<double>>();
        s.task_cycles_per_bit = j.at("task_cycles_per_bit").get<std::vector<double>>();
        s.deadline_s = j.at("deadline_s").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError("", std::string("scenario: ") + e.what());
    }
    const std::size_t U = s.num_imds(), K = s.num_tasks();
    if (s.imd_positions.size() != U || s.bs_positions.size() != s.num_bs() || s.gain.size() != U * s.num_bs()
        || s.task_bits.size() != U * K || s.task_cycles_per_bit.size() != U * K || s.deadline_s.size() != U) {
        throw ParseError("", "scenario: array sizes do not match config dimensions");
    }
    return s;
}

} // namespace mecopt
