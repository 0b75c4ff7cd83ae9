#include "mecopt/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mecopt/error.hpp"

namespace mecopt {

void GaConfig::validate() const
{
    if (population_size < 2 || population_size % 2 != 0) {
        throw ConfigError("population_size", "must be even and >= 2");
    }
    auto in = [](double x, double lo, double hi, bool hi_closed) {
        return x > lo && (hi_closed ? x <= hi : x < hi);
    };
    if (!in(n1, 0, 1, true)) throw ConfigError("n1", "must lie in (0, 1]");
    if (!in(n2, 0, 1, true)) throw ConfigError("n2", "must lie in (0, 1]");
    if (!in(n3, 0, 1, false)) throw ConfigError("n3", "must lie in (0, 1)");
    if (!in(n4, 0, 1, false)) throw ConfigError("n4", "must lie in (0, 1)");
    if (!in(n5, 0, 1, true)) throw ConfigError("n5", "must lie in (0, 1]");
    if (!in(n6, 0, 1, true)) throw ConfigError("n6", "must lie in (0, 1]");
    if (!in(n7, 0, 1, true)) throw ConfigError("n7", "must lie in (0, 1]");
    if (!(y1 > 0 && y1 < y2 && y2 < 1)) throw ConfigError("y1", "need 0 < y1 < y2 < 1");
    if (tournament_size < 1) throw ConfigError("tournament_size", "must be >= 1");
    if (!in(fixed_pc, 0, 1, true) && fixed_pc != 0) throw ConfigError("fixed_pc", "must lie in [0, 1]");
    if (!in(fixed_pm, 0, 1, true) && fixed_pm != 0) throw ConfigError("fixed_pm", "must lie in [0, 1]");
}

nlohmann::json to_json(const GaConfig& c)
{
    return {{"population_size", c.population_size},
            {"iterations", c.iterations},
            {"n1", c.n1},
            {"n2", c.n2},
            {"n3", c.n3},
            {"n4", c.n4},
            {"n5", c.n5},
            {"n6", c.n6},
            {"n7", c.n7},
            {"y1", c.y1},
            {"y2", c.y2},
            {"tournament_size", c.tournament_size},
            {"traditional_mode", c.traditional_mode},
            {"fixed_pc", c.fixed_pc},
            {"fixed_pm", c.fixed_pm}};
}

GaConfig ga_config_from_json(const nlohmann::json& j)
{
    GaConfig c;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "population_size") c.population_size = value.get<std::size_t>();
            else if (key == "iterations") c.iterations = value.get<std::size_t>();
            else if (key == "n1") c.n1 = value.get<double>();
            else if (key == "n2") c.n2 = value.get<double>();
            else if (key == "n3") c.n3 = value.get<double>();
            else if (key == "n4") c.n4 = value.get<double>();
            else if (key == "n5") c.n5 = value.get<double>();
            else if (key == "n6") c.n6 = value.get<double>();
            else if (key == "n7") c.n7 = value.get<double>();
            else if (key == "y1") c.y1 = value.get<double>();
            else if (key == "y2") c.y2 = value.get<double>();
            else if (key == "tournament_size") c.tournament_size = value.get<std::size_t>();
            else if (key == "traditional_mode") c.traditional_mode = value.get<bool>();
            else if (key == "fixed_pc") c.fixed_pc = value.get<double>();
            else if (key == "fixed_pm") c.fixed_pm = value.get<double>();
            else throw ConfigError("ga." + key, "unknown key");
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("ga." + key, "wrong type");
        }
    }
    c.validate();
    return c;
}

double crossover_probability(double pair_min, double f_min, double f_avg, const GaConfig& cfg)
{
    if (pair_min >= f_avg || f_avg <= f_min) {
        return cfg.n2;
    }
    return cfg.n1 * (pair_min - f_min) / (f_avg - f_min);
}

double mutation_probability(double f, double f_max, double f_avg, const GaConfig& cfg)
{
    if (f < f_avg) {
        return cfg.n4;
    }
    if (f_max <= f_avg) {
        return cfg.n3;
    }
    return cfg.n3 * (f_max - f) / (f_max - f_avg);
}

double dgm_probability(double diversity, const GaConfig& cfg)
{
    if (diversity < cfg.y1) {
        return cfg.n5;
    }
    if (diversity < cfg.y2) {
        return cfg.n6;
    }
    return cfg.n7;
}

GeneVector mutate_with(const GeneVector& genes, const GeneDomain& domain, const CoefficientSource& draw)
{
    GeneVector g = genes;
    const double s_max = domain.max_assoc;

    for (int& b : g.assoc) {
        auto [c1, c2] = draw();
        double anchor = c2 > 0.5 ? s_max : 1.0;
        b = static_cast<int>(std::lround(c1 * anchor + (1.0 - c1) * b));
    }
    for (double& q : g.power) {
        auto [c1, c2] = draw();
        q = c2 > 0.5 ? c1 * domain.p_max + (1.0 - c1) * q : (1.0 - c1) * q;
    }
    for (std::size_t v = 0; v < g.first_hop.size(); ++v) {
        auto [c1, c2] = draw();
        double& x = g.first_hop[v];
        x = c2 > 0.5 ? c1 * domain.data_bits[v] + (1.0 - c1) * x : (1.0 - c1) * x;
    }
    for (std::size_t v = 0; v < g.second_hop.size(); ++v) {
        auto [c1, c2] = draw();
        double& x = g.second_hop[v];
        x = c2 > 0.5 ? c1 * g.first_hop[v] + (1.0 - c1) * x : (1.0 - c1) * x;
    }
    {
        auto [c1, c2] = draw();
        double& x = g.band_split;
        x = c2 > 0.5 ? c1 + (1.0 - c1) * x : (1.0 - c1) * x;
    }
    return project(std::move(g), domain);
}

GeneVector mutate(const GeneVector& genes, const GeneDomain& domain, Rng& rng)
{
    return mutate_with(genes, domain, [&rng] {
        double c1 = uniform01(rng);
        double c2 = uniform01(rng);
        return std::pair{c1, c2};
    });
}

namespace {

template <class T>
void swap_prefix(std::vector<T>& a, std::vector<T>& b, std::size_t n)
{
    std::swap_ranges(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin());
}

std::size_t cut_point(double u, std::size_t length)
{
    auto c = static_cast<std::size_t>(std::floor(u * static_cast<double>(length)));
    return std::min(c, length);
}

} // namespace

std::pair<GeneVector, GeneVector> crossover_at(const GeneVector& a, const GeneVector& b, double u,
                                               const GeneDomain& domain)
{
    GeneVector x = a, y = b;
    const std::size_t cut_imd = cut_point(u, x.assoc.size());
    const std::size_t cut_virtual = cut_point(u, x.first_hop.size());
    swap_prefix(x.assoc, y.assoc, cut_imd);
    swap_prefix(x.power, y.power, cut_imd);
    swap_prefix(x.first_hop, y.first_hop, cut_virtual);
    swap_prefix(x.second_hop, y.second_hop, cut_virtual);
    if (u > 0.5) {
        std::swap(x.band_split, y.band_split);
    }
    return {project(std::move(x), domain), project(std::move(y), domain)};
}

std::pair<GeneVector, GeneVector> crossover(const GeneVector& a, const GeneVector& b, const GeneDomain& domain,
                                            Rng& rng)
{
    return crossover_at(a, b, uniform01(rng), domain);
}

namespace {

template <class Getter>
double block_spread(const std::vector<GeneVector>& pop, std::size_t length, Getter get)
{
    const double z = static_cast<double>(pop.size());
    // Centroid as an offset from the first individual, so identical
    // individuals give exactly zero spread.
    std::vector<double> mean(length, 0.0);
    for (const auto& g : pop) {
        for (std::size_t i = 0; i < length; ++i) {
            mean[i] += get(g, i) - get(pop.front(), i);
        }
    }
    for (std::size_t i = 0; i < length; ++i) {
        mean[i] = get(pop.front(), i) + mean[i] / z;
    }
    double total = 0.0;
    for (const auto& g : pop) {
        double sq = 0.0;
        for (std::size_t i = 0; i < length; ++i) {
            double d = get(g, i) - mean[i];
            sq += d * d;
        }
        total += std::sqrt(sq);
    }
    return total;
}

} // namespace

double diversity(const std::vector<GeneVector>& pop, const GeneDomain& domain)
{
    if (pop.empty()) {
        return 0.0;
    }
    const std::size_t U = pop.front().assoc.size();
    const std::size_t V = pop.front().first_hop.size();
    const double spreads[kNumBlocks] = {
        block_spread(pop, U, [](const GeneVector& g, std::size_t i) { return static_cast<double>(g.assoc[i]); }),
        block_spread(pop, U, [](const GeneVector& g, std::size_t i) { return g.power[i]; }),
        block_spread(pop, V, [](const GeneVector& g, std::size_t i) { return g.first_hop[i]; }),
        block_spread(pop, V, [](const GeneVector& g, std::size_t i) { return g.second_hop[i]; }),
        block_spread(pop, 1, [](const GeneVector& g, std::size_t) { return g.band_split; }),
    };
    const double z = static_cast<double>(pop.size());
    double y = 0.0;
    for (std::size_t l = 0; l < kNumBlocks; ++l) {
        // A degenerate box (e.g. no SBS) has no spread to measure.
        if (domain.diagonal[l] > 0.0) {
            y += spreads[l] / (z * domain.diagonal[l]);
        }
    }
    return y / static_cast<double>(kNumBlocks);
}

std::vector<std::size_t> tournament_select(const std::vector<double>& fitness, std::size_t tournament_size,
                                           Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
    std::vector<std::size_t> chosen(fitness.size());
    for (auto& c : chosen) {
        std::size_t best = pick(rng);
        for (std::size_t t = 1; t < tournament_size; ++t) {
            std::size_t other = pick(rng);
            if (fitness[other] > fitness[best]) {
                best = other;
            }
        }
        c = best;
    }
    return chosen;
}

namespace {

double mean_of(const std::vector<double>& xs)
{
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::size_t argmax(const std::vector<double>& xs)
{
    return static_cast<std::size_t>(std::max_element(xs.begin(), xs.end()) - xs.begin());
}

std::size_t argmin(const std::vector<double>& xs)
{
    return static_cast<std::size_t>(std::min_element(xs.begin(), xs.end()) - xs.begin());
}

void record(SolverTrace& trace, const Population& pop, const GeneDomain& domain)
{
    trace.rows.push_back(
        {"ga", pop.iteration, pop.best_fitness, mean_of(pop.fitness), diversity(pop.individuals, domain)});
}

} // namespace

GaResult run_ga(const FitnessEvaluator& evaluator, const GaConfig& cfg, Rng& rng)
{
    cfg.validate();
    const auto& scenario = evaluator.scenario();
    const auto& domain = evaluator.domain();
    const std::size_t Z = cfg.population_size;

    GaResult result;
    Population& pop = result.population;
    pop.individuals.reserve(Z);
    for (std::size_t z = 0; z < Z; ++z) {
        pop.individuals.push_back(init_genes(scenario, rng));
    }
    pop.fitness.assign(Z, 0.0);
    evaluator.evaluate_all(pop.individuals, pop.fitness);
    std::size_t top = argmax(pop.fitness);
    pop.best = pop.individuals[top];
    pop.best_fitness = pop.fitness[top];
    record(result.trace, pop, domain);

    std::vector<char> dirty(Z);
    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        // Selection, then reinsert the historical best over the worst pick.
        auto picks = tournament_select(pop.fitness, cfg.tournament_size, rng);
        std::vector<GeneVector> next;
        std::vector<double> next_fitness;
        next.reserve(Z);
        next_fitness.reserve(Z);
        for (std::size_t idx : picks) {
            next.push_back(pop.individuals[idx]);
            next_fitness.push_back(pop.fitness[idx]);
        }
        if (std::find(next.begin(), next.end(), pop.best) == next.end()) {
            std::size_t worst = argmin(next_fitness);
            next[worst] = pop.best;
            next_fitness[worst] = pop.best_fitness;
        }
        pop.individuals = std::move(next);
        pop.fitness = std::move(next_fitness);

        std::fill(dirty.begin(), dirty.end(), 0);
        if (!cfg.traditional_mode) {
            const double pd = dgm_probability(diversity(pop.individuals, domain), cfg);
            for (std::size_t z = 0; z < Z; ++z) {
                if (uniform01(rng) < pd) {
                    pop.individuals[z] = mutate(pop.individuals[z], domain, rng);
                    dirty[z] = 1;
                }
            }
            evaluator.evaluate_all(pop.individuals, pop.fitness, dirty);
        }

        // Crossover and mutation both read the fitness values computed above.
        const double f_min = *std::min_element(pop.fitness.begin(), pop.fitness.end());
        const double f_max = *std::max_element(pop.fitness.begin(), pop.fitness.end());
        const double f_avg = mean_of(pop.fitness);

        std::fill(dirty.begin(), dirty.end(), 0);
        for (std::size_t z = 0; z + 1 < Z; z += 2) {
            double pc = cfg.traditional_mode
                            ? cfg.fixed_pc
                            : crossover_probability(std::min(pop.fitness[z], pop.fitness[z + 1]), f_min, f_avg, cfg);
            if (uniform01(rng) < pc) {
                auto [a, b] = crossover(pop.individuals[z], pop.individuals[z + 1], domain, rng);
                pop.individuals[z] = std::move(a);
                pop.individuals[z + 1] = std::move(b);
                dirty[z] = dirty[z + 1] = 1;
            }
        }
        for (std::size_t z = 0; z < Z; ++z) {
            double pm = cfg.traditional_mode ? cfg.fixed_pm : mutation_probability(pop.fitness[z], f_max, f_avg, cfg);
            if (uniform01(rng) < pm) {
                pop.individuals[z] = mutate(pop.individuals[z], domain, rng);
                dirty[z] = 1;
            }
        }
        evaluator.evaluate_all(pop.individuals, pop.fitness, dirty);

        top = argmax(pop.fitness);
        if (pop.fitness[top] > pop.best_fitness) {
            pop.best = pop.individuals[top];
            pop.best_fitness = pop.fitness[top];
        }
        pop.iteration = t;
        record(result.trace, pop, domain);
    }
    return result;
}

GaResult run_ga(const Scenario& scenario, const EvalConfig& eval_cfg, const GaConfig& cfg, Rng& rng)
{
    FitnessEvaluator evaluator(scenario, eval_cfg);
    return run_ga(evaluator, cfg, rng);
}

} // namespace mecopt
