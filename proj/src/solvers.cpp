#include "mecopt/solvers.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "mecopt/error.hpp"

namespace mecopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverResult hierarchical(const char* name, const Scenario& scenario, const EvalConfig& eval_cfg,
                          const GaConfig& ga_cfg, const PsoConfig& pso_cfg, std::uint64_t seed,
                          const SolveOptions& options)
{
    const auto start = Clock::now();
    FitnessEvaluator evaluator(scenario, eval_cfg, options.parallel);
    if (options.observer) {
        evaluator.set_observer(options.observer);
    }
    Rng rng(seed);

    GaResult ga = run_ga(evaluator, ga_cfg, rng);

    // PSO starts from the final GA population with the GA's historical best
    // reinstated over the worst individual, so gbest starts there.
    std::vector<GeneVector> initial = ga.population.individuals;
    if (std::find(initial.begin(), initial.end(), ga.population.best) == initial.end()) {
        const auto& f = ga.population.fitness;
        auto worst = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
        initial[worst] = ga.population.best;
    }
    PsoResult pso = run_pso(evaluator, pso_cfg, initial, rng);

    const GeneVector& best =
        pso.best_fitness >= ga.population.best_fitness ? pso.best : ga.population.best;

    SolverResult r;
    r.solver = name;
    r.seed = seed;
    r.solution = decode(best, scenario);
    r.evaluation = evaluate(scenario, r.solution, eval_cfg);
    r.trace = std::move(ga.trace);
    r.trace.append(pso.trace);
    r.wall_seconds = seconds_since(start);
    return r;
}

Solution uniform_solution(const Scenario& scenario, double power, double first_hop_fraction, double lambda)
{
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    const double theta = scenario.config.theta;
    Solution s;
    s.assoc.assign(U, 0);
    s.power_w.assign(U, power);
    s.first_hop_bits.resize(U * K);
    s.second_hop_bits.resize(U * K);
    for (std::size_t i = 0; i < U; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            double bits = first_hop_fraction > 0.0 ? scenario.bits(i, k) * first_hop_fraction : theta;
            s.first_hop_bits[i * K + k] = bits;
            s.second_hop_bits[i * K + k] = bits;
        }
    }
    s.lambda = lambda;
    return s;
}

} // namespace

SolverResult run_has(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& ga_cfg,
                     const PsoConfig& pso_cfg, std::uint64_t seed, const SolveOptions& options)
{
    return hierarchical("has", scenario, eval_cfg, ga_cfg, pso_cfg, seed, options);
}

SolverResult run_hgp(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& ga_cfg,
                     const PsoConfig& pso_cfg, std::uint64_t seed, const SolveOptions& options)
{
    GaConfig ga = ga_cfg;
    ga.traditional_mode = true;
    PsoConfig pso = pso_cfg;
    pso.traditional_mode = true;
    return hierarchical("hgp", scenario, eval_cfg, ga, pso, seed, options);
}

SolverResult solve_cmt(const Scenario& scenario, const EvalConfig& eval_cfg)
{
    const auto start = Clock::now();
    SolverResult r;
    r.solver = "cmt";
    // Offload amounts sit at the theta floor; full power and full MBS band
    // keep the residual upload terms negligible.
    r.solution = uniform_solution(scenario, scenario.config.p_max_w, 0.0, 1.0);
    r.evaluation = evaluate(scenario, r.solution, eval_cfg);
    r.wall_seconds = seconds_since(start);
    return r;
}

SolverResult solve_cm(const Scenario& scenario, const EvalConfig& eval_cfg, double lambda)
{
    if (!(lambda >= scenario.config.theta && lambda <= 1.0)) {
        throw ConfigError("lambda", fmt::format("{} outside [theta, 1]", lambda));
    }
    const auto start = Clock::now();
    SolverResult r;
    r.solver = "cm";
    r.solution = uniform_solution(scenario, scenario.config.p_max_w, 1.0, lambda);
    r.evaluation = evaluate(scenario, r.solution, eval_cfg);
    r.wall_seconds = seconds_since(start);
    return r;
}

nlohmann::json to_json(const SolverResult& r)
{
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& row : r.trace.rows) {
        nlohmann::json jr = {{"stage", row.stage},
                             {"iteration", row.iteration},
                             {"best_fitness", row.best_fitness},
                             {"mean_fitness", row.mean_fitness},
                             {"diversity", row.diversity}};
        if (row.stage == "pso" && row.beta == row.beta) {
            jr["beta"] = row.beta;
        }
        trace.push_back(std::move(jr));
    }
    return {{"solver", r.solver},
            {"seed", r.seed},
            {"solution", to_json(r.solution)},
            {"evaluation", to_json(r.evaluation)},
            {"trace", trace},
            {"wall_seconds", r.wall_seconds}};
}

} // namespace mecopt
