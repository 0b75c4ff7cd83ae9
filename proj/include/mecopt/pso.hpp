#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"
#include "mecopt/encoding.hpp"
#include "mecopt/fitness.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/trace.hpp"

namespace mecopt {

struct PsoConfig {
    std::size_t iterations = 200;
    double w1 = 2.0;  // cognitive
    double w2 = 2.0;  // social
    double w3 = 0.72; // momentum of the global-best resample
    double kappa_max = 0.9;
    double kappa_min = 0.4;
    double beta0 = 1.0;
    std::size_t success_threshold = 15;
    std::size_t failure_threshold = 5;
    // Shared linear inertia decay; no global-best resampling.
    bool traditional_mode = false;
    // Apply the resample perturbation in raw gene units instead of scaling
    // it by each gene's feasible width.
    bool raw_beta = false;

    void validate() const;
};

nlohmann::json to_json(const PsoConfig& c);
PsoConfig pso_config_from_json(const nlohmann::json& j);

struct Swarm {
    std::vector<GeneVector> position;
    std::vector<Velocity> velocity;
    std::vector<double> fitness;
    std::vector<double> inertia;
    std::vector<GeneVector> pbest_position;
    std::vector<Velocity> pbest_velocity;
    std::vector<double> pbest_fitness;
    std::size_t gbest_index = 0;  // particle owning the global best
    GeneVector gbest;
    double gbest_fitness = 0.0;
    double beta = 1.0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::size_t iteration = 0;

    std::size_t size() const { return position.size(); }
};

// Positions from `initial`, zero velocities, pbest = positions, inertia at
// kappa_max, gbest = best pbest. Evaluates every particle.
Swarm init_swarm(const FitnessEvaluator& evaluator, const std::vector<GeneVector>& initial, const PsoConfig& cfg);

// Re-derive gbest from the personal bests. Ties keep the current owner.
void refresh_gbest(Swarm& swarm);

// Global-best owner's inertia grows by t*(kmax-kmin)/T, all others shrink
// by the same step; clamped to [kmin, kmax].
void update_inertia(Swarm& swarm, const PsoConfig& cfg, std::size_t t);
// One velocity component given its random coefficients r and r_hat.
double velocity_step(double kappa, double v, double x, double pbest, double gbest, double r, double r_hat,
                     const PsoConfig& cfg);
void update_velocities(Swarm& swarm, const PsoConfig& cfg, Rng& rng);
// x += v with the association block rounded, then projected.
void update_positions(Swarm& swarm, const GeneDomain& domain);
// Perturbation added to one gene of the resampled particle; delta is the
// gene's uniform draw and width its feasible interval (1 for raw_beta).
double resample_offset(double beta, double delta, double width);
// Moves the gbest owner to a random point around gbest.
void resample_gbest(Swarm& swarm, const PsoConfig& cfg, Rng& rng, const GeneDomain& domain);
// Records a success (gbest fitness changed) or failure and rescales beta.
void update_beta(Swarm& swarm, const PsoConfig& cfg, bool success);

struct PsoResult {
    GeneVector best;
    double best_fitness = 0.0;
    Swarm swarm;
    SolverTrace trace;
};

PsoResult run_pso(const FitnessEvaluator& evaluator, const PsoConfig& cfg, const std::vector<GeneVector>& initial,
                  Rng& rng);
PsoResult run_pso(const Scenario& scenario, const EvalConfig& eval_cfg, const PsoConfig& cfg,
                  const std::vector<GeneVector>& initial, Rng& rng);

} // namespace mecopt
