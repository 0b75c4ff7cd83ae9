#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mecopt/encoding.hpp"
#include "mecopt/fitness.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/trace.hpp"

namespace mecopt {

struct GaConfig {
    std::size_t population_size = 64;
    std::size_t iterations = 200;
    double n1 = 0.8;  // crossover, below-average pairs
    double n2 = 0.8;  // crossover, above-average pairs
    double n3 = 0.3;  // mutation, above-average individuals
    double n4 = 0.3;  // mutation, below-average individuals
    double n5 = 0.6;  // DGM probability at low diversity
    double n6 = 0.03;
    double n7 = 1e-5;
    double y1 = 0.01;  // diversity thresholds
    double y2 = 0.25;
    std::size_t tournament_size = 2;
    // Fixed pc/pm and no diversity-guided mutation.
    bool traditional_mode = false;
    double fixed_pc = 0.8;
    double fixed_pm = 0.1;

    void validate() const;
};

nlohmann::json to_json(const GaConfig& c);
GaConfig ga_config_from_json(const nlohmann::json& j);

struct Population {
    std::vector<GeneVector> individuals;
    std::vector<double> fitness;
    GeneVector best;
    double best_fitness = 0.0;
    std::size_t iteration = 0;
};

// Adaptive crossover probability of a pair whose lower fitness is pair_min.
double crossover_probability(double pair_min, double f_min, double f_avg, const GaConfig& cfg);
// Adaptive mutation probability of an individual with fitness f.
double mutation_probability(double f, double f_max, double f_avg, const GaConfig& cfg);
// Mutation probability applied by diversity-guided mutation.
double dgm_probability(double diversity, const GaConfig& cfg);

// Source of (magnitude, direction) coefficient pairs, one pair per gene.
using CoefficientSource = std::function<std::pair<double, double>()>;

// Each gene moves toward its upper bound by a random fraction c1 when
// c2 > 0.5, otherwise toward its lower anchor. The second hop is moved toward
// the freshly mutated first hop. Output is projected.
GeneVector mutate_with(const GeneVector& genes, const GeneDomain& domain, const CoefficientSource& draw);
GeneVector mutate(const GeneVector& genes, const GeneDomain& domain, Rng& rng);

// One-point crossover: the leading floor(u * length) genes of every block
// are exchanged. First/second hop blocks share the cut so their pairs move
// together; the band split is exchanged when u > 0.5.
std::pair<GeneVector, GeneVector> crossover_at(const GeneVector& a, const GeneVector& b, double u,
                                               const GeneDomain& domain);
std::pair<GeneVector, GeneVector> crossover(const GeneVector& a, const GeneVector& b, const GeneDomain& domain,
                                            Rng& rng);

// Mean normalized distance to the population centroid, averaged over blocks.
double diversity(const std::vector<GeneVector>& population, const GeneDomain& domain);

// Tournament selection with replacement. Returns indices into fitness.
std::vector<std::size_t> tournament_select(const std::vector<double>& fitness, std::size_t tournament_size,
                                           Rng& rng);

struct GaResult {
    Population population;
    SolverTrace trace;
};

GaResult run_ga(const FitnessEvaluator& evaluator, const GaConfig& cfg, Rng& rng);
GaResult run_ga(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& cfg, Rng& rng);

} // namespace mecopt
