#include "mecopt/fitness.hpp"

#include <tbb/parallel_for.h>

namespace mecopt {

FitnessEvaluator::FitnessEvaluator(const Scenario& scenario, EvalConfig cfg, bool parallel)
    : scenario_(scenario), cfg_(std::move(cfg)), domain_(GeneDomain::from(scenario)), parallel_(parallel)
{
    cfg_.validate(scenario.num_imds());
}

Evaluation FitnessEvaluator::evaluate(const GeneVector& genes) const
{
    Solution sol = decode(genes, scenario_);
    Evaluation ev = mecopt::evaluate(scenario_, sol, cfg_);
    if (observer_) {
        observer_(sol, ev);
    }
    return ev;
}

double FitnessEvaluator::fitness(const GeneVector& genes) const
{
    return evaluate(genes).fitness;
}

void FitnessEvaluator::evaluate_all(std::span<const GeneVector> population, std::span<double> fitness,
                                    std::span<const char> dirty) const
{
    auto one = [&](std::size_t z) {
        if (dirty.empty() || dirty[z]) {
            fitness[z] = this->fitness(population[z]);
        }
    };
    if (parallel_ && population.size() > 1) {
        tbb::parallel_for(std::size_t{0}, population.size(), one);
    } else {
        for (std::size_t z = 0; z < population.size(); ++z) {
            one(z);
        }
    }
}

} // namespace mecopt
