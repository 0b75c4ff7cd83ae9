#include "mecopt/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "mecopt/error.hpp"

namespace mecopt {

namespace {

// log2(1 + snr), accurate for the vanishing SNRs produced at the power floor.
double spectral_efficiency(double snr)
{
    return std::log1p(snr) / std::numbers::ln2;
}

double safe_ratio(double num, double den)
{
    return num > 0.0 ? num / den : 0.0;
}

} // namespace

void EvalConfig::validate(std::size_t num_imds) const
{
    if (!(default_penalty > 0.0) || !std::isfinite(default_penalty)) {
        throw ConfigError("penalty_factor", "must be finite and > 0");
    }
    if (!penalty_factor.empty()) {
        if (penalty_factor.size() != num_imds) {
            throw ConfigError("penalty_factor", "needs one entry per IMD");
        }
        for (double a : penalty_factor) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw ConfigError("penalty_factor", "must be finite and > 0");
            }
        }
    }
}

double Evaluation::support_ratio() const
{
    if (supported.empty()) {
        return 0.0;
    }
    auto n = std::count(supported.begin(), supported.end(), std::uint8_t{1});
    return static_cast<double>(n) / static_cast<double>(supported.size());
}

void check_feasible(const Scenario& scenario, const Solution& sol)
{
    const auto& cfg = scenario.config;
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    const double theta = cfg.theta;

    if (sol.assoc.size() != U || sol.power_w.size() != U || sol.first_hop_bits.size() != U * K
        || sol.second_hop_bits.size() != U * K) {
        throw ContractError("solution dimensions do not match the scenario");
    }
    if (!(sol.lambda >= theta && sol.lambda <= 1.0)) {
        throw ContractError(fmt::format("lambda {} outside [theta, 1]", sol.lambda));
    }
    for (std::size_t i = 0; i < U; ++i) {
        if (sol.assoc[i] > scenario.num_sbs()) {
            throw ContractError(fmt::format("IMD {} associated with unknown BS {}", i, sol.assoc[i]));
        }
        double p = sol.power_w[i];
        if (!(p >= theta && p <= cfg.p_max_w)) {
            throw ContractError(fmt::format("IMD {} power {} outside [theta, p_max]", i, p));
        }
        for (std::size_t k = 0; k < K; ++k) {
            double first = sol.first_hop(i, k, K);
            double d = scenario.bits(i, k);
            if (!(first >= theta && first <= d)) {
                throw ContractError(fmt::format("IMD {} task {} first hop {} outside [theta, d]", i, k, first));
            }
            if (sol.assoc[i] >= 1) {
                double second = sol.second_hop(i, k, K);
                if (!(second >= theta && second <= first)) {
                    throw ContractError(
                        fmt::format("IMD {} task {} second hop {} outside [theta, first hop]", i, k, second));
                }
            }
        }
    }
}

NetworkLoad::NetworkLoad(const Scenario& scenario, const Solution& solution)
    : scenario_(scenario),
      solution_(solution),
      devices_(scenario.num_bs(), 0),
      local_total_(scenario.num_imds(), 0.0),
      sbs_retained_(scenario.num_bs(), 0.0)
{
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    for (std::size_t i = 0; i < U; ++i) {
        std::size_t b = solution.assoc[i];
        ++devices_[b];
        for (std::size_t k = 0; k < K; ++k) {
            local_total_[i] += remaining_cycles(i, k);
            if (b >= 1) {
                sbs_retained_[b] += retained_cycles(i, k);
            }
            mbs_total_ += mbs_cycles(i, k);
        }
    }
}

double NetworkLoad::remaining_cycles(std::size_t i, std::size_t k) const
{
    const std::size_t K = scenario_.num_tasks();
    return (scenario_.bits(i, k) - solution_.first_hop(i, k, K)) * scenario_.cpb(i, k);
}

double NetworkLoad::retained_cycles(std::size_t i, std::size_t k) const
{
    if (solution_.assoc[i] == 0) {
        return 0.0;
    }
    const std::size_t K = scenario_.num_tasks();
    return (solution_.first_hop(i, k, K) - solution_.second_hop(i, k, K)) * scenario_.cpb(i, k);
}

double NetworkLoad::mbs_cycles(std::size_t i, std::size_t k) const
{
    const std::size_t K = scenario_.num_tasks();
    double bits = solution_.assoc[i] == 0 ? solution_.first_hop(i, k, K) : solution_.second_hop(i, k, K);
    return bits * scenario_.cpb(i, k);
}

double NetworkLoad::uplink_rate(std::size_t i) const
{
    const auto& cfg = scenario_.config;
    const std::size_t b = solution_.assoc[i];
    const double snr = solution_.power_w[i] * scenario_.h(i, b) / cfg.noise_power_w;
    const double n = static_cast<double>(devices_[b]);
    if (b == 0) {
        return solution_.lambda * cfg.bandwidth_hz / n * spectral_efficiency(snr);
    }
    // The SBS tier keeps at least theta of the band so lambda = 1 stays finite.
    const double sbs_fraction = std::max(1.0 - solution_.lambda, cfg.theta);
    return sbs_fraction * cfg.bandwidth_hz / (static_cast<double>(scenario_.num_sbs()) * n)
           * spectral_efficiency(snr);
}

double NetworkLoad::local_cpu(std::size_t i, std::size_t k) const
{
    return safe_ratio(remaining_cycles(i, k), local_total_[i]) * scenario_.config.imd_cpu_hz;
}

double NetworkLoad::sbs_cpu(std::size_t i, std::size_t k) const
{
    const std::size_t b = solution_.assoc[i];
    if (b == 0) {
        return 0.0;
    }
    return safe_ratio(retained_cycles(i, k), sbs_retained_[b]) * scenario_.config.sbs_cpu_hz;
}

double NetworkLoad::mbs_cpu(std::size_t i, std::size_t k) const
{
    return safe_ratio(mbs_cycles(i, k), mbs_total_) * scenario_.config.mbs_cpu_hz;
}

TaskCost NetworkLoad::task_cost(std::size_t i, std::size_t k) const
{
    const auto& cfg = scenario_.config;
    const std::size_t K = scenario_.num_tasks();
    TaskCost c;

    const double remaining = remaining_cycles(i, k);
    if (remaining > 0.0) {
        const double f = local_cpu(i, k);
        c.local_time = remaining / f;
        c.local_energy = cfg.kappa_chip * remaining * f * f;
    }

    const double rate = uplink_rate(i);
    const double first = solution_.first_hop(i, k, K);
    const double upload_time = first / rate;
    const double p = solution_.power_w[i];
    const double at_mbs = mbs_cycles(i, k);
    const double mbs_time = at_mbs > 0.0 ? at_mbs / mbs_cpu(i, k) : 0.0;

    if (solution_.assoc[i] == 0) {
        c.offload_time = upload_time + mbs_time;
        c.offload_energy = p * upload_time + at_mbs * cfg.cycle_energy_mbs;
        return c;
    }

    const double second = solution_.second_hop(i, k, K);
    const double retained = retained_cycles(i, k);
    const double sbs_time = retained > 0.0 ? retained / sbs_cpu(i, k) : 0.0;
    const double backhaul_time = second / cfg.backhaul_rate_bps;
    c.offload_time = upload_time + sbs_time + backhaul_time + mbs_time;
    c.offload_energy = p * upload_time + retained * cfg.cycle_energy_sbs
                       + cfg.wired_power_w * backhaul_time + at_mbs * cfg.cycle_energy_mbs;
    return c;
}

namespace {

void require_assoc(const Solution& s, std::size_t imd, std::size_t bs)
{
    if (imd >= s.assoc.size() || s.assoc[imd] != bs) {
        throw ContractError(fmt::format("IMD {} is not associated with BS {}", imd, bs));
    }
}

} // namespace

double uplink_rate_sbs(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t sbs)
{
    if (sbs == 0) {
        throw ContractError("uplink_rate_sbs needs an SBS index >= 1");
    }
    require_assoc(solution, imd, sbs);
    return NetworkLoad(scenario, solution).uplink_rate(imd);
}

double uplink_rate_mbs(const Scenario& scenario, const Solution& solution, std::size_t imd)
{
    require_assoc(solution, imd, 0);
    return NetworkLoad(scenario, solution).uplink_rate(imd);
}

std::vector<double> local_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd)
{
    NetworkLoad load(scenario, solution);
    std::vector<double> f(scenario.num_tasks());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = load.local_cpu(imd, k);
    }
    return f;
}

double sbs_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task)
{
    if (imd >= solution.assoc.size() || solution.assoc[imd] == 0) {
        throw ContractError(fmt::format("IMD {} is not associated with an SBS", imd));
    }
    return NetworkLoad(scenario, solution).sbs_cpu(imd, task);
}

double mbs_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task)
{
    return NetworkLoad(scenario, solution).mbs_cpu(imd, task);
}

TaskCost task_time_energy(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task)
{
    check_feasible(scenario, solution);
    return NetworkLoad(scenario, solution).task_cost(imd, task);
}

Evaluation evaluate(const Scenario& scenario, const Solution& solution, const EvalConfig& cfg)
{
    check_feasible(scenario, solution);
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    NetworkLoad load(scenario, solution);

    Evaluation ev;
    ev.imd_time_s.assign(U, 0.0);
    ev.imd_energy_j.assign(U, 0.0);
    ev.supported.assign(U, 0);
    ev.tasks.resize(U * K);

    for (std::size_t i = 0; i < U; ++i) {
        double time = 0.0, energy = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            TaskCost c = load.task_cost(i, k);
            ev.tasks[i * K + k] = c;
            time += std::max(c.local_time, c.offload_time);
            energy += c.local_energy + c.offload_energy;
            ev.bs_energy += c.offload_energy;
            ev.local_energy += c.local_energy;
        }
        ev.imd_time_s[i] = time;
        ev.imd_energy_j[i] = energy;
        ev.total_energy += energy;
        ev.supported[i] = time <= scenario.deadline_s[i] ? 1 : 0;
        ev.penalty += cfg.alpha(i) * std::max(0.0, time - scenario.deadline_s[i]);
    }
    ev.fitness = -ev.total_energy - ev.penalty;
    return ev;
}

nlohmann::json to_json(const Solution& s)
{
    return {{"assoc", s.assoc},
            {"power_w", s.power_w},
            {"first_hop_bits", s.first_hop_bits},
            {"second_hop_bits", s.second_hop_bits},
            {"lambda", s.lambda}};
}

Solution solution_from_json(const nlohmann::json& j)
{
    try {
        Solution s;
        s.assoc = j.at("assoc").get<std::vector<std::size_t>>();
        s.power_w = j.at("power_w").get<std::vector<double>>();
        s.first_hop_bits = j.at("first_hop_bits").get<std::vector<double>>();
        s.second_hop_bits = j.at("second_hop_bits").get<std::vector<double>>();
        s.lambda = j.at("lambda").get<double>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("", std::string("solution: ") + e.what());
    }
}

nlohmann::json to_json(const Evaluation& e)
{
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : e.tasks) {
        tasks.push_back({{"local_time", t.local_time},
                         {"offload_time", t.offload_time},
                         {"local_energy", t.local_energy},
                         {"offload_energy", t.offload_energy}});
    }
    return {{"imd_time_s", e.imd_time_s},
            {"imd_energy_j", e.imd_energy_j},
            {"supported", e.supported},
            {"total_energy", e.total_energy},
            {"bs_energy", e.bs_energy},
            {"local_energy", e.local_energy},
            {"penalty", e.penalty},
            {"fitness", e.fitness},
            {"support_ratio", e.support_ratio()},
            {"tasks", tasks}};
}

} // namespace mecopt
