#pragma once

#include <functional>
#include <span>

#include "mecopt/encoding.hpp"
#include "mecopt/scenario.hpp"
#include "mecopt/sysmodel.hpp"

namespace mecopt {

// Decodes and evaluates candidate gene vectors. Evaluation is pure, so the
// batch entry point may fan out over worker threads without affecting the
// results.
class FitnessEvaluator {
public:
    // Called once for every evaluated candidate. Must be thread-safe when
    // parallel evaluation is enabled.
    using Observer = std::function<void(const Solution&, const Evaluation&)>;

    FitnessEvaluator(const Scenario& scenario, EvalConfig cfg, bool parallel = false);

    const Scenario& scenario() const { return scenario_; }
    const EvalConfig& config() const { return cfg_; }
    const GeneDomain& domain() const { return domain_; }

    void set_observer(Observer obs) { observer_ = std::move(obs); }
    void set_parallel(bool parallel) { parallel_ = parallel; }

    double fitness(const GeneVector& genes) const;
    Evaluation evaluate(const GeneVector& genes) const;

    // fitness[z] = fitness(population[z]) for every z with dirty[z] set
    // (or every z when dirty is empty).
    void evaluate_all(std::span<const GeneVector> population, std::span<double> fitness,
                      std::span<const char> dirty = {}) const;

private:
    const Scenario& scenario_;
    EvalConfig cfg_;
    GeneDomain domain_;
    bool parallel_;
    Observer observer_;
};

} // namespace mecopt
