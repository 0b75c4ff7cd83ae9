#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "mecopt/ga.hpp"
#include "mecopt/pso.hpp"
#include "mecopt/scenario.hpp"
#include "mecopt/sysmodel.hpp"

namespace mecopt {

// Grid of experiment cells: every (rho_ue, rho_sbs, pmax_dbm, seed) runs
// every listed solver, and CM once per entry of cm_lambdas.
struct SweepSpec {
    std::vector<std::size_t> rho_ue{5, 15, 25, 35};
    std::vector<std::size_t> rho_sbs{35};
    std::vector<double> pmax_dbm{23.0};
    std::vector<std::string> solvers{"has", "hgp", "cmt", "cm"};
    std::vector<double> cm_lambdas{0.25, 0.5, 0.75, 1.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::uint64_t master_seed = 20240601;
    ScenarioConfig base;
    GaConfig ga;
    PsoConfig pso;
    double penalty_factor = 10.0;
    bool write_traces = true;
    bool parallel_cells = false;
    bool parallel_eval = false;

    void validate() const;
};

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

struct MetricsRow {
    std::string solver;
    std::uint64_t seed = 0;
    std::uint64_t cell_seed = 0;
    std::size_t rho_ue = 0;
    std::size_t rho_sbs = 0;
    double pmax_dbm = 0.0;
    double lambda = std::numeric_limits<double>::quiet_NaN();  // CM only
    double total_energy = 0.0;
    double bs_energy = 0.0;
    double support_ratio = 0.0;
    double penalty = 0.0;
    double runtime_s = 0.0;
};

inline constexpr const char* kSweepHeader =
    "solver,seed,cell_seed,rho_ue,rho_sbs,pmax_dbm,lambda,total_energy,bs_energy,support_ratio,penalty";
inline constexpr const char* kTimingHeader = "solver,seed,cell_seed,rho_ue,rho_sbs,pmax_dbm,lambda,runtime_s";

// Scenario seed of one cell. Depends only on the cell's own coordinates, so
// adding cells leaves existing ones untouched.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t rho_ue, std::size_t rho_sbs, double pmax_dbm,
                        std::uint64_t replicate);

ScenarioConfig cell_config(const SweepSpec& spec, std::size_t rho_ue, std::size_t rho_sbs, double pmax_dbm,
                           std::uint64_t replicate);

// Runs the whole grid and writes sweep.csv, timing.csv, manifest.json and one
// trace_<solver>_<cell_seed>.csv per traced run into out_dir. Rows are in
// grid order regardless of parallelism. Returns the rows.
std::vector<MetricsRow> run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir);

void write_sweep_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

// Median, mean and population standard deviation of every metric column,
// grouped by the given key columns. Throws ParseError naming the offending
// column when the input does not follow the sweep schema.
void summarize(std::istream& in, const std::vector<std::string>& group_keys, std::ostream& out);
void summarize(const std::filesystem::path& csv, const std::vector<std::string>& group_keys, std::ostream& out);

} // namespace mecopt
