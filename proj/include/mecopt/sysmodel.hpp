#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "mecopt/scenario.hpp"

namespace mecopt {

// Decision variables. assoc[i] == 0 means IMD i is served by the MBS.
// first_hop / second_hop are U x K row-major. second_hop is only meaningful
// for SBS-associated IMDs and is carried unchanged otherwise.
struct Solution {
    std::vector<std::size_t> assoc;
    std::vector<double> power_w;
    std::vector<double> first_hop_bits;
    std::vector<double> second_hop_bits;
    double lambda = 1.0;

    double first_hop(std::size_t i, std::size_t k, std::size_t K) const { return first_hop_bits[i * K + k]; }
    double second_hop(std::size_t i, std::size_t k, std::size_t K) const { return second_hop_bits[i * K + k]; }
};

struct EvalConfig {
    double default_penalty = 10.0;
    // Optional per-IMD override; empty means default_penalty for everyone.
    std::vector<double> penalty_factor;

    double alpha(std::size_t imd) const { return penalty_factor.empty() ? default_penalty : penalty_factor[imd]; }
    void validate(std::size_t num_imds) const;
};

struct TaskCost {
    double local_time = 0.0;
    double offload_time = 0.0;
    double local_energy = 0.0;
    double offload_energy = 0.0;
};

struct Evaluation {
    std::vector<double> imd_time_s;
    std::vector<double> imd_energy_j;
    std::vector<std::uint8_t> supported;
    std::vector<TaskCost> tasks;  // U x K row-major
    double total_energy = 0.0;
    double bs_energy = 0.0;
    double local_energy = 0.0;
    double penalty = 0.0;
    double fitness = 0.0;

    double support_ratio() const;
};

// Throws ContractError when the solution breaks any of the association,
// power, offload-amount or band-split constraints, or has wrong dimensions.
void check_feasible(const Scenario& scenario, const Solution& solution);

// Load aggregates shared by every IMD: devices per BS, cycles retained at
// each SBS and cycles executed at the MBS. Built once per solution.
class NetworkLoad {
public:
    NetworkLoad(const Scenario& scenario, const Solution& solution);

    // Rate of IMD i on its associated link.
    double uplink_rate(std::size_t imd) const;
    // Local CPU share of task k; 0 when nothing of the IMD stays local.
    double local_cpu(std::size_t imd, std::size_t task) const;
    // CPU share granted by the serving SBS; 0 when the task retains nothing there.
    double sbs_cpu(std::size_t imd, std::size_t task) const;
    // CPU share granted by the MBS; 0 when the task places nothing there.
    double mbs_cpu(std::size_t imd, std::size_t task) const;

    TaskCost task_cost(std::size_t imd, std::size_t task) const;

    std::size_t devices_on(std::size_t bs) const { return devices_[bs]; }

private:
    double remaining_cycles(std::size_t imd, std::size_t task) const;
    double retained_cycles(std::size_t imd, std::size_t task) const;
    double mbs_cycles(std::size_t imd, std::size_t task) const;

    const Scenario& scenario_;
    const Solution& solution_;
    std::vector<std::size_t> devices_;
    std::vector<double> local_total_;     // per IMD
    std::vector<double> sbs_retained_;    // per BS (index 0 unused)
    double mbs_total_ = 0.0;
};

double uplink_rate_sbs(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t sbs);
double uplink_rate_mbs(const Scenario& scenario, const Solution& solution, std::size_t imd);
std::vector<double> local_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd);
double sbs_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task);
double mbs_cpu_allocation(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task);
TaskCost task_time_energy(const Scenario& scenario, const Solution& solution, std::size_t imd, std::size_t task);

// Full model: per-IMD sequential time and energy, total energy, deadline
// penalty and fitness = -(total_energy + penalty). Checks feasibility first.
Evaluation evaluate(const Scenario& scenario, const Solution& solution, const EvalConfig& cfg);

nlohmann::json to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Evaluation& e);

} // namespace mecopt
