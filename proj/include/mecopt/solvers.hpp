#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "mecopt/fitness.hpp"
#include "mecopt/ga.hpp"
#include "mecopt/pso.hpp"
#include "mecopt/scenario.hpp"
#include "mecopt/sysmodel.hpp"
#include "mecopt/trace.hpp"

namespace mecopt {

struct SolverResult {
    std::string solver;
    std::uint64_t seed = 0;
    Solution solution;
    Evaluation evaluation;
    SolverTrace trace;
    double wall_seconds = 0.0;
};

struct SolveOptions {
    bool parallel = false;
    FitnessEvaluator::Observer observer;
};

// Hierarchical adaptive search: adaptive GA with diversity-guided mutation
// for the coarse stage, then adaptive PSO started from the GA population.
SolverResult run_has(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& ga_cfg,
                     const PsoConfig& pso_cfg, std::uint64_t seed, const SolveOptions& options = {});

// Same pipeline with both stages in their traditional (non-adaptive) modes.
SolverResult run_hgp(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& ga_cfg,
                     const PsoConfig& pso_cfg, std::uint64_t seed, const SolveOptions& options = {});

// Everything executed on the device.
SolverResult solve_cmt(const Scenario& scenario, const EvalConfig& eval_cfg);

// Everything uploaded to the MBS at full power with band split `lambda`.
SolverResult solve_cm(const Scenario& scenario, const EvalConfig& eval_cfg, double lambda);

nlohmann::json to_json(const SolverResult& r);

} // namespace mecopt
