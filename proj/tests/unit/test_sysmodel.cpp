#include "doctest.h"

#include <cmath>

#include "oracle/fixtures.hpp"
#include "mecopt/error.hpp"
#include "mecopt/sysmodel.hpp"
#include "oracle/reference_model.hpp"

using namespace mecopt;
using doctest::Approx;

namespace {

constexpr double kTheta = 1e-20;

double rel_err(double a, double b)
{
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace

TEST_CASE("SBS uplink rate")
{
    Scenario s = fixtures::flat_scenario(1, 2, 1, 1e-12);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, 1e5, kTheta, 0.5);
    double expected = 5e6 * std::log(11.0) / std::log(2.0);
    CHECK(uplink_rate_sbs(s, sol, 0, 1) == Approx(expected).epsilon(1e-13));
    CHECK(expected == Approx(1.7297e7).epsilon(1e-4));
    CHECK_THROWS_AS(uplink_rate_sbs(s, sol, 0, 2), ContractError);
    CHECK_THROWS_AS(uplink_rate_mbs(s, sol, 0), ContractError);
}

TEST_CASE("SBS rate vanishes with the SINR and keeps a floor at full macro band")
{
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-40);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, 1e5, kTheta, 0.5);
    CHECK(uplink_rate_sbs(s, sol, 0, 1) < 1e-10);
    s.gain.assign(s.gain.size(), 1e-13);
    sol.lambda = 1.0;
    double r = uplink_rate_sbs(s, sol, 0, 1);
    CHECK(r > 0.0);
    CHECK(r == Approx(kTheta * 20e6).epsilon(1e-12));
}

TEST_CASE("MBS uplink rate")
{
    // gamma = 0.1 * 1e-13 / 1e-14 = 1
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-13);
    Solution sol = fixtures::flat_solution(s, 0, 0.1, 1e5, kTheta, 1.0);
    CHECK(uplink_rate_mbs(s, sol, 0) == Approx(20e6).epsilon(1e-14));

    Scenario two = fixtures::flat_scenario(2, 1, 1, 3e-13);
    Solution sol2 = fixtures::flat_solution(two, 0, 0.1, 1e5, kTheta, 0.5);
    CHECK(uplink_rate_mbs(two, sol2, 0) == Approx(10e6).epsilon(1e-14));
    CHECK(uplink_rate_mbs(two, sol2, 1) == Approx(10e6).epsilon(1e-14));

    sol.lambda = kTheta;
    CHECK(uplink_rate_mbs(s, sol, 0) < 1e-10);
}

TEST_CASE("local CPU allocation is proportional to remaining cycles")
{
    Scenario s = fixtures::flat_scenario(1, 1, 2, 1e-12, 1e6, 1.0);
    s.task_bits = {1e6, 3e6};
    Solution sol = fixtures::flat_solution(s, 1, 0.1, kTheta, kTheta, 0.5);
    auto f = local_cpu_allocation(s, sol, 0);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == Approx(2.5e8).epsilon(1e-13));
    CHECK(f[1] == Approx(7.5e8).epsilon(1e-13));

    sol.first_hop_bits = {1e6, 3e6};
    f = local_cpu_allocation(s, sol, 0);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
    TaskCost c = task_time_energy(s, sol, 0, 0);
    CHECK(c.local_time == 0.0);
    CHECK(c.local_energy == 0.0);

    Scenario one = fixtures::flat_scenario(1, 1, 1);
    Solution sol1 = fixtures::flat_solution(one, 1, 0.1, 3e5, kTheta, 0.5);
    CHECK(local_cpu_allocation(one, sol1, 0)[0] == Approx(1e9).epsilon(1e-15));
}

TEST_CASE("SBS CPU allocation")
{
    Scenario s = fixtures::flat_scenario(1, 1, 1);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, 5e5, kTheta, 0.5);
    CHECK(sbs_cpu_allocation(s, sol, 0, 0) == Approx(20e9).epsilon(1e-15));

    Scenario two = fixtures::flat_scenario(2, 1, 1);
    Solution sol2 = fixtures::flat_solution(two, 1, 0.1, 5e5, kTheta, 0.5);
    CHECK(sbs_cpu_allocation(two, sol2, 0, 0) == Approx(10e9).epsilon(1e-14));
    CHECK(sbs_cpu_allocation(two, sol2, 1, 0) == Approx(10e9).epsilon(1e-14));

    // everything forwarded: nothing retained, no SBS time or energy
    Solution fwd = fixtures::flat_solution(s, 1, 0.1, 5e5, 5e5, 0.5);
    CHECK(sbs_cpu_allocation(s, fwd, 0, 0) == 0.0);
    NetworkLoad load(s, fwd);
    TaskCost full = load.task_cost(0, 0);
    double R = load.uplink_rate(0);
    double expected_t = 5e5 / R + 5e5 / 1e9 + 5e5 * 100.0 / 20e9;
    double expected_e = 0.1 * 5e5 / R + 1e-3 * 5e5 / 1e9 + 5e5 * 100.0 * 1e-9;
    CHECK(full.offload_time == Approx(expected_t).epsilon(1e-13));
    CHECK(full.offload_energy == Approx(expected_e).epsilon(1e-13));
}

TEST_CASE("MBS CPU allocation")
{
    Scenario s = fixtures::flat_scenario(2, 1, 1, 1e-12, 1e6, 100.0);
    s.task_bits = {1e6, 3e6};
    Solution sol = fixtures::flat_solution(s, 0, 0.1, 0.0, kTheta, 1.0);
    sol.first_hop_bits = {1e6, 3e6};
    CHECK(mbs_cpu_allocation(s, sol, 0, 0) == Approx(5e9).epsilon(1e-13));
    CHECK(mbs_cpu_allocation(s, sol, 1, 0) == Approx(1.5e10).epsilon(1e-13));

    Scenario one = fixtures::flat_scenario(1, 1, 1);
    Solution only = fixtures::flat_solution(one, 0, 0.1, 4e5, kTheta, 0.7);
    CHECK(mbs_cpu_allocation(one, only, 0, 0) == Approx(20e9).epsilon(1e-15));

    // forwarded and direct traffic compete for the same MBS capacity
    Scenario mixed = fixtures::flat_scenario(2, 1, 1);
    Solution m = fixtures::flat_solution(mixed, 0, 0.1, 1e6, 1e6, 0.5);
    m.assoc[1] = 1;
    CHECK(mbs_cpu_allocation(mixed, m, 0, 0) == Approx(10e9).epsilon(1e-14));
    CHECK(mbs_cpu_allocation(mixed, m, 1, 0) == Approx(10e9).epsilon(1e-14));
}

TEST_CASE("task time and energy: local execution")
{
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-12, 1e6, 100.0);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, kTheta, kTheta, 0.5);
    TaskCost c = task_time_energy(s, sol, 0, 0);
    CHECK(c.local_time == Approx(0.1).epsilon(1e-13));
    CHECK(c.local_energy == Approx(10.0).epsilon(1e-13));
    CHECK(c.offload_time < 1e-20);
}

TEST_CASE("task time and energy: two-step offload")
{
    // (1 - 0.5) * 20e6 * log2(1 + 1) = 1e7 bit/s
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-13, 1e6, 100.0);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, 1e6, kTheta, 0.5);
    TaskCost c = task_time_energy(s, sol, 0, 0);
    CHECK(c.offload_time == Approx(0.105).epsilon(1e-13));
    CHECK(c.offload_energy == Approx(0.11).epsilon(1e-13));
    CHECK(c.local_time == 0.0);
    CHECK(c.local_energy == 0.0);
}

TEST_CASE("task time and energy: direct to MBS")
{
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-13, 1e6, 100.0);
    Solution sol = fixtures::flat_solution(s, 0, 0.1, 1e6, kTheta, 1.0);
    TaskCost c = task_time_energy(s, sol, 0, 0);
    CHECK(c.offload_time == Approx(0.055).epsilon(1e-13));
    CHECK(c.offload_energy == Approx(0.105).epsilon(1e-13));
}

TEST_CASE("evaluate: sequential tasks and max of parallel paths")
{
    Scenario s = fixtures::flat_scenario(1, 1, 2, 1e-13, 1e6, 100.0);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, 5e5, kTheta, 0.5);
    Evaluation ev = evaluate(s, sol, EvalConfig{});
    double t = 0.0, e = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        TaskCost c = ev.tasks[k];
        t += std::max(c.local_time, c.offload_time);
        e += c.local_energy + c.offload_energy;
    }
    CHECK(ev.imd_time_s[0] == Approx(t).epsilon(1e-15));
    CHECK(ev.imd_energy_j[0] == Approx(e).epsilon(1e-15));
    CHECK(ev.total_energy == Approx(e).epsilon(1e-15));
    CHECK(ev.total_energy == Approx(ev.local_energy + ev.bs_energy).epsilon(1e-14));
}

TEST_CASE("evaluate: all-local equals the closed form")
{
    Scenario s = fixtures::flat_scenario(3, 2, 2, 1e-12, 1e6, 100.0);
    Solution sol = fixtures::flat_solution(s, 2, 0.1, kTheta, kTheta, 0.5);
    Evaluation ev = evaluate(s, sol, EvalConfig{});
    // K=2 tasks of 1e8 cycles sharing 1 GHz: 0.2 s each, 2 * 1e-25 * 1e8 * (5e8)^2 = 5 J
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ev.imd_time_s[i] == Approx(0.4).epsilon(1e-12));
        CHECK(ev.imd_energy_j[i] == Approx(5.0).epsilon(1e-12));
        CHECK(ev.supported[i] == 1);
    }
    CHECK(ev.penalty == 0.0);
    CHECK(ev.fitness == -ev.total_energy);
    CHECK(ev.support_ratio() == 1.0);
}

TEST_CASE("evaluate: deadline penalty")
{
    // 2e9 cycles on 1 GHz takes 2 s, the deadline is 1 s
    Scenario s = fixtures::flat_scenario(1, 1, 1, 1e-12, 2e7, 100.0, 1.0);
    Solution sol = fixtures::flat_solution(s, 1, 0.1, kTheta, kTheta, 0.5);
    Evaluation ev = evaluate(s, sol, EvalConfig{});
    CHECK(ev.imd_time_s[0] == Approx(2.0).epsilon(1e-14));
    CHECK(ev.total_energy == Approx(200.0).epsilon(1e-14));
    CHECK(ev.penalty == Approx(10.0).epsilon(1e-14));
    CHECK(ev.fitness == Approx(-210.0).epsilon(1e-14));
    CHECK(ev.supported[0] == 0);
    CHECK(ev.support_ratio() == 0.0);

    EvalConfig custom;
    custom.penalty_factor = {3.0};
    CHECK(evaluate(s, sol, custom).penalty == Approx(3.0).epsilon(1e-14));
}

TEST_CASE("infeasible solutions are rejected")
{
    Scenario s = fixtures::flat_scenario(2, 2, 1);
    Solution ok = fixtures::flat_solution(s, 1, 0.1, 5e5, 1e5, 0.5);
    CHECK_NOTHROW(check_feasible(s, ok));

    auto bad = ok;
    bad.assoc[0] = 3;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.power_w[1] = 0.3;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.power_w[1] = 0.0;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.first_hop_bits[0] = 2e6;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.second_hop_bits[0] = 6e5;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.lambda = 1.5;
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.lambda = std::nan("");
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);
    bad = ok;
    bad.power_w.pop_back();
    CHECK_THROWS_AS(evaluate(s, bad, {}), ContractError);

    // the second hop is ignored for MBS-associated devices
    auto mbs = ok;
    mbs.assoc[0] = 0;
    mbs.second_hop_bits[0] = 9e5;
    CHECK_NOTHROW(check_feasible(s, mbs));
}

TEST_CASE("bad penalty config")
{
    EvalConfig c;
    c.default_penalty = 0.0;
    CHECK_THROWS_AS(c.validate(3), ConfigError);
    c = {};
    c.penalty_factor = {1.0, 2.0};
    CHECK_THROWS_AS(c.validate(3), ConfigError);
}

TEST_CASE("evaluate agrees with the reference model on random instances")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Scenario s = generate_scenario(fixtures::tiny_config(seed, 3, 3, 2));
        Rng rng(seed);
        for (int rep = 0; rep < 5; ++rep) {
            Solution sol = fixtures::random_solution(s, rng);
            Evaluation ev = evaluate(s, sol, EvalConfig{});
            oracle::Result ref = oracle::evaluate(s, sol, 10.0);
            for (std::size_t i = 0; i < s.num_imds(); ++i) {
                CHECK(rel_err(ev.imd_time_s[i], ref.time[i]) <= 1e-9);
                CHECK(rel_err(ev.imd_energy_j[i], ref.energy[i]) <= 1e-9);
            }
            CHECK(rel_err(ev.fitness, ref.fitness) <= 1e-9);
            CHECK(rel_err(ev.bs_energy, ref.bs_energy) <= 1e-9);
        }
    }
}

TEST_CASE("solution json round trip")
{
    Scenario s = generate_scenario(fixtures::tiny_config(3));
    Rng rng(5);
    Solution sol = fixtures::random_solution(s, rng);
    Solution back = solution_from_json(nlohmann::json::parse(to_json(sol).dump()));
    CHECK(back.assoc == sol.assoc);
    CHECK(back.power_w == sol.power_w);
    CHECK(back.first_hop_bits == sol.first_hop_bits);
    CHECK(back.second_hop_bits == sol.second_hop_bits);
    CHECK(back.lambda == sol.lambda);
}
