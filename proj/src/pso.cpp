#include "mecopt/pso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "mecopt/error.hpp"
#include "mecopt/ga.hpp"

namespace mecopt {

void PsoConfig::validate() const
{
    if (!(w1 > 0.0) || !std::isfinite(w1)) throw ConfigError("w1", "must be finite and > 0");
    if (!(w2 > 0.0) || !std::isfinite(w2)) throw ConfigError("w2", "must be finite and > 0");
    if (!std::isfinite(w3)) throw ConfigError("w3", "must be finite");
    if (!(kappa_min < kappa_max)) throw ConfigError("kappa_min", "must be below kappa_max");
    if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw ConfigError("beta0", "must be finite and > 0");
}

nlohmann::json to_json(const PsoConfig& c)
{
    return {{"iterations", c.iterations},
            {"w1", c.w1},
            {"w2", c.w2},
            {"w3", c.w3},
            {"kappa_max", c.kappa_max},
            {"kappa_min", c.kappa_min},
            {"beta0", c.beta0},
            {"success_threshold", c.success_threshold},
            {"failure_threshold", c.failure_threshold},
            {"traditional_mode", c.traditional_mode},
            {"raw_beta", c.raw_beta}};
}

PsoConfig pso_config_from_json(const nlohmann::json& j)
{
    PsoConfig c;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "iterations") c.iterations = value.get<std::size_t>();
            else if (key == "w1") c.w1 = value.get<double>();
            else if (key == "w2") c.w2 = value.get<double>();
            else if (key == "w3") c.w3 = value.get<double>();
            else if (key == "kappa_max") c.kappa_max = value.get<double>();
            else if (key == "kappa_min") c.kappa_min = value.get<double>();
            else if (key == "beta0") c.beta0 = value.get<double>();
            else if (key == "success_threshold") c.success_threshold = value.get<std::size_t>();
            else if (key == "failure_threshold") c.failure_threshold = value.get<std::size_t>();
            else if (key == "traditional_mode") c.traditional_mode = value.get<bool>();
            else if (key == "raw_beta") c.raw_beta = value.get<bool>();
            else throw ConfigError("pso." + key, "unknown key");
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("pso." + key, "wrong type");
        }
    }
    c.validate();
    return c;
}

Swarm init_swarm(const FitnessEvaluator& evaluator, const std::vector<GeneVector>& initial, const PsoConfig& cfg)
{
    if (initial.empty()) {
        throw ContractError("PSO needs a non-empty initial population");
    }
    Swarm s;
    const std::size_t Z = initial.size();
    s.position.reserve(Z);
    for (const auto& g : initial) {
        s.position.push_back(project(g, evaluator.domain()));
    }
    s.velocity.reserve(Z);
    for (const auto& g : s.position) {
        s.velocity.push_back(Velocity::zeros_like(g));
    }
    s.fitness.assign(Z, 0.0);
    evaluator.evaluate_all(s.position, s.fitness);
    s.inertia.assign(Z, cfg.kappa_max);
    s.pbest_position = s.position;
    s.pbest_velocity = s.velocity;
    s.pbest_fitness = s.fitness;
    s.gbest_index = static_cast<std::size_t>(std::max_element(s.pbest_fitness.begin(), s.pbest_fitness.end())
                                             - s.pbest_fitness.begin());
    s.gbest = s.pbest_position[s.gbest_index];
    s.gbest_fitness = s.pbest_fitness[s.gbest_index];
    s.beta = cfg.beta0;
    return s;
}

void refresh_gbest(Swarm& s)
{
    for (std::size_t z = 0; z < s.pbest_fitness.size(); ++z) {
        if (s.pbest_fitness[z] > s.gbest_fitness) {
            s.gbest_index = z;
            s.gbest_fitness = s.pbest_fitness[z];
        }
    }
    s.gbest = s.pbest_position[s.gbest_index];
}

void update_inertia(Swarm& s, const PsoConfig& cfg, std::size_t t)
{
    if (cfg.iterations == 0 || t < 1 || t > cfg.iterations) {
        throw ContractError("inertia update needs 1 <= t <= iterations");
    }
    const double step = static_cast<double>(t) * (cfg.kappa_max - cfg.kappa_min) / static_cast<double>(cfg.iterations);
    for (std::size_t z = 0; z < s.size(); ++z) {
        double k = z == s.gbest_index ? s.inertia[z] + step : s.inertia[z] - step;
        s.inertia[z] = std::clamp(k, cfg.kappa_min, cfg.kappa_max);
    }
}

double velocity_step(double kappa, double v, double x, double pbest, double gbest, double r, double r_hat,
                     const PsoConfig& cfg)
{
    return kappa * v + cfg.w1 * r * (pbest - x) + cfg.w2 * r_hat * (gbest - x);
}

namespace {

template <class Pos>
void pull(std::vector<double>& vel, const std::vector<Pos>& x, const std::vector<Pos>& pbest,
          const std::vector<Pos>& gbest, double kappa, const PsoConfig& cfg, Rng& rng)
{
    for (std::size_t i = 0; i < vel.size(); ++i) {
        double r = uniform01(rng);
        double r_hat = uniform01(rng);
        vel[i] = velocity_step(kappa, vel[i], static_cast<double>(x[i]), static_cast<double>(pbest[i]),
                               static_cast<double>(gbest[i]), r, r_hat, cfg);
    }
}

} // namespace

void update_velocities(Swarm& s, const PsoConfig& cfg, Rng& rng)
{
    for (std::size_t z = 0; z < s.size(); ++z) {
        const GeneVector& x = s.position[z];
        const GeneVector& pb = s.pbest_position[z];
        Velocity& v = s.velocity[z];
        const double kappa = s.inertia[z];
        pull(v.assoc, x.assoc, pb.assoc, s.gbest.assoc, kappa, cfg, rng);
        pull(v.power, x.power, pb.power, s.gbest.power, kappa, cfg, rng);
        pull(v.first_hop, x.first_hop, pb.first_hop, s.gbest.first_hop, kappa, cfg, rng);
        pull(v.second_hop, x.second_hop, pb.second_hop, s.gbest.second_hop, kappa, cfg, rng);
        double r = uniform01(rng);
        double r_hat = uniform01(rng);
        v.band_split =
            velocity_step(kappa, v.band_split, x.band_split, pb.band_split, s.gbest.band_split, r, r_hat, cfg);
    }
}

namespace {

int round_assoc(double x)
{
    // Out-of-range values are clamped by projection; bound them first so
    // the integer conversion is always defined.
    return static_cast<int>(std::lround(std::clamp(x, -1e9, 1e9)));
}

GeneVector moved(const GeneVector& x, const Velocity& v, const GeneDomain& domain)
{
    GeneVector y = x;
    for (std::size_t i = 0; i < y.assoc.size(); ++i) {
        y.assoc[i] = round_assoc(static_cast<double>(x.assoc[i]) + v.assoc[i]);
    }
    for (std::size_t i = 0; i < y.power.size(); ++i) {
        y.power[i] += v.power[i];
    }
    for (std::size_t i = 0; i < y.first_hop.size(); ++i) {
        y.first_hop[i] += v.first_hop[i];
        y.second_hop[i] += v.second_hop[i];
    }
    y.band_split += v.band_split;
    return project(std::move(y), domain);
}

} // namespace

void update_positions(Swarm& s, const GeneDomain& domain)
{
    for (std::size_t z = 0; z < s.size(); ++z) {
        s.position[z] = moved(s.position[z], s.velocity[z], domain);
    }
}

double resample_offset(double beta, double delta, double width)
{
    return beta * (1.0 - 2.0 * delta) * width;
}

void resample_gbest(Swarm& s, const PsoConfig& cfg, Rng& rng, const GeneDomain& domain)
{
    const std::size_t z = s.gbest_index;
    const GeneVector& x = s.position[z];
    Velocity& v = s.velocity[z];

    auto offset = [&](Block block, std::size_t index) {
        double delta = uniform01(rng);
        double scale = cfg.raw_beta ? 1.0 : domain.width(block, index);
        return resample_offset(s.beta, delta, scale);
    };
    // The new position is gbest + w3 * v + offset; the velocity becomes the
    // step from x to it.
    GeneVector y = s.gbest;
    auto resample = [&](std::vector<double>& vel, const auto& pos, auto& out, Block block) {
        for (std::size_t i = 0; i < vel.size(); ++i) {
            double target = static_cast<double>(out[i]) + cfg.w3 * vel[i] + offset(block, i);
            vel[i] = target - static_cast<double>(pos[i]);
            if constexpr (std::is_same_v<std::decay_t<decltype(out[i])>, int>) {
                out[i] = round_assoc(target);
            } else {
                out[i] = target;
            }
        }
    };
    resample(v.assoc, x.assoc, y.assoc, Block::Assoc);
    resample(v.power, x.power, y.power, Block::Power);
    resample(v.first_hop, x.first_hop, y.first_hop, Block::FirstHop);
    resample(v.second_hop, x.second_hop, y.second_hop, Block::SecondHop);
    double target = y.band_split + cfg.w3 * v.band_split + offset(Block::BandSplit, 0);
    v.band_split = target - x.band_split;
    y.band_split = target;

    s.position[z] = project(std::move(y), domain);
}

void update_beta(Swarm& s, const PsoConfig& cfg, bool success)
{
    if (success) {
        ++s.successes;
        s.failures = 0;
    } else {
        ++s.failures;
        s.successes = 0;
    }
    if (s.successes > cfg.success_threshold) {
        s.beta *= 2.0;
    } else if (s.failures > cfg.failure_threshold) {
        s.beta *= 0.5;
    }
}

namespace {

void record(SolverTrace& trace, const Swarm& s, const GeneDomain& domain, bool with_beta)
{
    double mean = std::accumulate(s.fitness.begin(), s.fitness.end(), 0.0) / static_cast<double>(s.size());
    TraceRow row{"pso", s.iteration, s.gbest_fitness, mean, diversity(s.position, domain)};
    if (with_beta) {
        row.beta = s.beta;
    }
    trace.rows.push_back(row);
}

void update_personal_best(Swarm& s, std::size_t z)
{
    if (s.fitness[z] > s.pbest_fitness[z]) {
        s.pbest_fitness[z] = s.fitness[z];
        s.pbest_position[z] = s.position[z];
        s.pbest_velocity[z] = s.velocity[z];
    }
}

} // namespace

PsoResult run_pso(const FitnessEvaluator& evaluator, const PsoConfig& cfg, const std::vector<GeneVector>& initial,
                  Rng& rng)
{
    cfg.validate();
    const auto& domain = evaluator.domain();
    PsoResult result;
    Swarm& s = result.swarm;
    s = init_swarm(evaluator, initial, cfg);
    const bool adaptive = !cfg.traditional_mode;
    record(result.trace, s, domain, adaptive);

    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        const double previous_best = s.gbest_fitness;
        if (adaptive) {
            update_inertia(s, cfg, t);
        } else {
            double k = cfg.kappa_max
                       - (cfg.kappa_max - cfg.kappa_min) * static_cast<double>(t) / static_cast<double>(cfg.iterations);
            std::fill(s.inertia.begin(), s.inertia.end(), k);
        }
        update_velocities(s, cfg, rng);
        update_positions(s, domain);
        evaluator.evaluate_all(s.position, s.fitness);
        for (std::size_t z = 0; z < s.size(); ++z) {
            update_personal_best(s, z);
        }
        refresh_gbest(s);

        if (adaptive) {
            resample_gbest(s, cfg, rng, domain);
            const std::size_t owner = s.gbest_index;
            s.fitness[owner] = evaluator.fitness(s.position[owner]);
            update_personal_best(s, owner);
            refresh_gbest(s);
            update_beta(s, cfg, s.gbest_fitness != previous_best);
        }
        s.iteration = t;
        record(result.trace, s, domain, adaptive);
    }
    result.best = s.gbest;
    result.best_fitness = s.gbest_fitness;
    return result;
}

PsoResult run_pso(const Scenario& scenario, const EvalConfig& eval_cfg, const PsoConfig& cfg,
                  const std::vector<GeneVector>& initial, Rng& rng)
{
    FitnessEvaluator evaluator(scenario, eval_cfg);
    return run_pso(evaluator, cfg, initial, rng);
}

} // namespace mecopt
