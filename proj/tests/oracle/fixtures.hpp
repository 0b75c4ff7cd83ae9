#pragma once

// Small hand-built scenarios and random feasible solutions for tests.

#include <cstddef>
#include <vector>

#include "mecopt/encoding.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/scenario.hpp"
#include "mecopt/sysmodel.hpp"

namespace fixtures {

// Uniform scenario: every gain, task size, cycles/bit and deadline equal.
inline mecopt::Scenario flat_scenario(std::size_t U, std::size_t S, std::size_t K, double gain = 1e-12,
                                      double bits = 1e6, double cpb = 100.0, double deadline = 5.0)
{
    mecopt::Scenario s;
    s.config.num_imds = U;
    s.config.num_sbs = S;
    s.config.num_tasks = K;
    s.imd_positions.assign(U, {});
    s.bs_positions.assign(S + 1, {});
    s.gain.assign(U * (S + 1), gain);
    s.task_bits.assign(U * K, bits);
    s.task_cycles_per_bit.assign(U * K, cpb);
    s.deadline_s.assign(U, deadline);
    return s;
}

inline mecopt::Solution flat_solution(const mecopt::Scenario& s, std::size_t assoc, double power, double first,
                                      double second, double lambda)
{
    const std::size_t U = s.num_imds(), K = s.num_tasks();
    mecopt::Solution sol;
    sol.assoc.assign(U, assoc);
    sol.power_w.assign(U, power);
    sol.first_hop_bits.assign(U * K, first);
    sol.second_hop_bits.assign(U * K, second);
    sol.lambda = lambda;
    return sol;
}

// Random feasible solution with lambda kept away from its end points.
inline mecopt::Solution random_solution(const mecopt::Scenario& s, mecopt::Rng& rng)
{
    mecopt::GeneVector g = mecopt::init_genes(s, rng);
    g.band_split = 0.05 + 0.9 * mecopt::uniform01(rng);
    return mecopt::decode(g, s);
}

inline mecopt::ScenarioConfig tiny_config(std::uint64_t seed, std::size_t U = 2, std::size_t S = 2,
                                          std::size_t K = 2)
{
    mecopt::ScenarioConfig c;
    c.num_imds = U;
    c.num_sbs = S;
    c.num_tasks = K;
    c.seed = seed;
    return c;
}

} // namespace fixtures
