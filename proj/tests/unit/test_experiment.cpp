#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mecopt/error.hpp"
#include "mecopt/experiment.hpp"
#include "mecopt/solvers.hpp"
#include "mecopt/trace.hpp"

using namespace mecopt;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("mecopt_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepSpec tiny_spec()
{
    SweepSpec s;
    s.rho_ue = {3};
    s.rho_sbs = {4};
    s.seeds = {1};
    s.solvers = {"cmt"};
    return s;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string line; std::getline(ss, line);) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("real numbers render with round-trip precision")
{
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(std::nan("")) == "");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("trace csv")
{
    SolverTrace t;
    t.rows.push_back({"ga", 0, -3.5, -7.0, 0.25});
    t.rows.push_back({"pso", 1, -3.0, -6.0, 0.125, 0.5});
    std::ostringstream out;
    write_trace_csv(out, "has", 42, t);
    CHECK(out.str() == std::string(kTraceHeader) + "\nhas,42,ga,0,-3.5,-7,0.25,\nhas,42,pso,1,-3,-6,0.125,0.5\n");
}

TEST_CASE("cell seeds depend on every coordinate")
{
    const auto base = cell_seed(7, 5, 35, 23.0, 1);
    CHECK(base == cell_seed(7, 5, 35, 23.0, 1));
    CHECK(base != cell_seed(8, 5, 35, 23.0, 1));
    CHECK(base != cell_seed(7, 15, 35, 23.0, 1));
    CHECK(base != cell_seed(7, 5, 25, 23.0, 1));
    CHECK(base != cell_seed(7, 5, 35, 20.0, 1));
    CHECK(base != cell_seed(7, 5, 35, 23.0, 2));

    SweepSpec spec;
    ScenarioConfig c = cell_config(spec, 15, 35, 20.0, 3);
    CHECK(c.num_imds == 15);
    CHECK(c.num_sbs == 35);
    CHECK(c.p_max_w == doctest::Approx(0.1));
    CHECK(c.seed == cell_seed(spec.master_seed, 15, 35, 20.0, 3));
}

TEST_CASE("single-cell all-local sweep")
{
    fs::path dir = fresh_dir("single");
    SweepSpec spec = tiny_spec();
    auto rows = run_sweep(spec, dir);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].solver == "cmt");
    Scenario s = generate_scenario(cell_config(spec, 3, 4, 23.0, 1));
    Evaluation ev = solve_cmt(s, EvalConfig{}).evaluation;
    CHECK(rows[0].penalty == ev.penalty);
    CHECK(rows[0].total_energy == ev.total_energy);

    auto sweep = lines_of(slurp(dir / "sweep.csv"));
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0] == kSweepHeader);
    CHECK(lines_of(slurp(dir / "timing.csv"))[0] == kTimingHeader);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(sweep_spec_from_json(nlohmann::json::parse(slurp(dir / "manifest.json"))).seeds == spec.seeds);
}

TEST_CASE("sweep reruns are byte-identical")
{
    SweepSpec spec = tiny_spec();
    spec.rho_ue = {2, 3};
    spec.solvers = {"has", "hgp", "cmt", "cm"};
    spec.cm_lambdas = {0.25, 0.75};
    spec.seeds = {1, 2};
    spec.ga.population_size = 8;
    spec.ga.iterations = 4;
    spec.pso.iterations = 4;
    fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    auto rows = run_sweep(spec, a);
    // 2 cells x 2 seeds x (has, hgp, cmt, 2 x cm)
    CHECK(rows.size() == 20);
    spec.parallel_cells = true;
    spec.parallel_eval = true;
    run_sweep(spec, b);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "timing.csv" || name == "manifest.json") continue;
        CHECK(slurp(entry.path()) == slurp(b / name));
        ++compared;
    }
    // sweep.csv plus one trace per has/hgp run
    CHECK(compared == 1 + 8);
}

TEST_CASE("sweep errors")
{
    SweepSpec spec = tiny_spec();
    spec.solvers = {"foo"};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_spec();
    spec.seeds = {};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_spec();
    spec.cm_lambdas = {1.5};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"rho": [1]})")), ConfigError);
    CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"ga": {"population_size": 3}})")),
                    ConfigError);

    fs::path file = fresh_dir("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(run_sweep(tiny_spec(), file / "out"), IoError);
    fs::remove(file);
}

TEST_CASE("summarize a single row")
{
    std::istringstream in(std::string(kSweepHeader) + "\ncmt,1,99,5,35,23,,2.5,0.5,1,0\n");
    std::ostringstream out;
    summarize(in, {"solver", "rho_ue"}, out);
    auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("solver,rho_ue,count,total_energy_median,total_energy_mean,total_energy_std", 0) == 0);
    CHECK(lines[1] == "cmt,5,1,2.5,2.5,0,0.5,0.5,0,1,1,0,0,0,0");
}

TEST_CASE("summarize two rows")
{
    std::string header = kSweepHeader;
    std::istringstream in(header + "\nhas,1,7,5,35,23,,2,1,1,0\nhas,2,8,5,35,23,,4,3,0,2\n");
    std::ostringstream out;
    summarize(in, {"solver"}, out);
    auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "has,2,3,3,1,2,2,1,0.5,0.5,0.5,1,1,1");
}

TEST_CASE("summarize groups sort numerically")
{
    std::string header = kSweepHeader;
    std::istringstream in(header + "\ncm,1,7,15,35,23,0.5,2,1,1,0\ncm,1,7,5,35,23,0.5,3,1,1,0\n"
                                   "cm,1,7,5,35,23,0.25,4,1,1,0\n");
    std::ostringstream out;
    summarize(in, {"rho_ue", "lambda"}, out);
    auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[1].rfind("5,0.25,1,4", 0) == 0);
    CHECK(lines[2].rfind("5,0.5,1,3", 0) == 0);
    CHECK(lines[3].rfind("15,0.5,1,2", 0) == 0);
}

TEST_CASE("summarize schema errors name the column")
{
    auto column_of = [](const std::string& text, std::vector<std::string> keys) {
        std::istringstream in(text);
        std::ostringstream out;
        try {
            summarize(in, keys, out);
        } catch (const ParseError& e) {
            return e.column();
        }
        return std::string("none");
    };
    CHECK(column_of("solver,seed,cell_seed,rho_ue,rho_sbs,pmax_dbm,lambda,total_energy\nhas,1,2,3,4,5,,6\n",
                    {"solver"})
          == "bs_energy");
    CHECK(column_of(std::string(kSweepHeader) + "\n", {"colour"}) == "colour");
    CHECK(column_of(std::string(kSweepHeader) + "\nhas,1,7,5,35,23,,abc,1,1,0\n", {"solver"}) == "total_energy");
    CHECK_THROWS_AS(summarize(fs::path("/nonexistent/sweep.csv"), {"solver"}, std::cout), IoError);
}
