// mecopt: single solves, parameter sweeps and CSV summaries.
//
// Exit codes: 0 success, 2 configuration or input error, 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mecopt/error.hpp"
#include "mecopt/experiment.hpp"
#include "mecopt/solvers.hpp"
#include "mecopt/units.hpp"

namespace fs = std::filesystem;
using namespace mecopt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

nlohmann::json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
}

struct RunArgs {
    std::string solver = "has";
    std::uint64_t seed = 1;
    std::optional<std::size_t> imds, sbs, tasks, ga_iters, pso_iters, pop;
    std::optional<double> pmax_dbm;
    double lambda = 0.5;
    std::string scenario_config;
    bool parallel = false;
    std::string out;
};

int do_run(const RunArgs& a)
{
    ScenarioConfig cfg;
    if (!a.scenario_config.empty()) {
        cfg = scenario_config_from_json(read_json(a.scenario_config));
    }
    if (a.imds) cfg.num_imds = *a.imds;
    if (a.sbs) cfg.num_sbs = *a.sbs;
    if (a.tasks) cfg.num_tasks = *a.tasks;
    if (a.pmax_dbm) cfg.p_max_w = units::dbm_to_watt(*a.pmax_dbm);
    cfg.seed = a.seed;
    if (cfg.num_sbs < cfg.num_imds) {
        std::cerr << "warning: fewer SBSs (" << cfg.num_sbs << ") than IMDs (" << cfg.num_imds << ")\n";
    }
    const Scenario scenario = generate_scenario(cfg);

    GaConfig ga;
    PsoConfig pso;
    if (a.ga_iters) ga.iterations = *a.ga_iters;
    if (a.pso_iters) pso.iterations = *a.pso_iters;
    if (a.pop) ga.population_size = *a.pop;
    ga.validate();
    pso.validate();
    EvalConfig eval;
    SolveOptions options;
    options.parallel = a.parallel;

    SolverResult result;
    if (a.solver == "has") {
        result = run_has(scenario, eval, ga, pso, a.seed, options);
    } else if (a.solver == "hgp") {
        result = run_hgp(scenario, eval, ga, pso, a.seed, options);
    } else if (a.solver == "cmt") {
        result = solve_cmt(scenario, eval);
    } else {
        result = solve_cm(scenario, eval, a.lambda);
    }
    result.seed = a.seed;

    const auto& ev = result.evaluation;
    std::cout << fmt::format("solver={} seed={} total_energy_j={:.6g} bs_energy_j={:.6g} support_ratio={:.4g} "
                             "penalty={:.6g} fitness={:.6g} seconds={:.3f}\n",
                             result.solver, a.seed, ev.total_energy, ev.bs_energy, ev.support_ratio(), ev.penalty,
                             ev.fitness, result.wall_seconds);

    if (!a.out.empty()) {
        fs::path dir(a.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) {
            throw IoError("cannot create output directory " + dir.string());
        }
        nlohmann::json j = to_json(result);
        j["scenario"] = to_json(scenario);
        std::ofstream out(dir / "result.json");
        out << j.dump(2) << '\n';
        if (!out) {
            throw IoError("failed writing " + (dir / "result.json").string());
        }
        if (!result.trace.rows.empty()) {
            const fs::path path = dir / fmt::format("trace_{}_{}.csv", result.solver, a.seed);
            std::ofstream tr(path);
            write_trace_csv(tr, result.solver, a.seed, result.trace);
            if (!tr) {
                throw IoError("failed writing " + path.string());
            }
        }
    }
    return 0;
}

int do_sweep(const std::string& spec_path, const std::string& out)
{
    SweepSpec spec = sweep_spec_from_json(read_json(spec_path));
    auto rows = run_sweep(spec, out);
    std::cout << "wrote " << rows.size() << " rows to " << (fs::path(out) / "sweep.csv").string() << '\n';
    return 0;
}

std::vector<std::string> split_keys(const std::string& s)
{
    std::vector<std::string> keys;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) keys.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) keys.push_back(cur);
    return keys;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Joint association, offloading and band-split optimizer for dense MEC networks"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Generate one scenario and solve it");
    run_cmd->add_option("--solver", run.solver, "has | hgp | cmt | cm")
        ->check(CLI::IsMember({"has", "hgp", "cmt", "cm"}));
    run_cmd->add_option("--seed", run.seed, "Scenario and solver seed");
    run_cmd->add_option("--imds", run.imds, "Number of IMDs");
    run_cmd->add_option("--sbs", run.sbs, "Number of SBSs");
    run_cmd->add_option("--tasks", run.tasks, "Tasks per IMD");
    run_cmd->add_option("--pmax-dbm", run.pmax_dbm, "Maximum transmit power (dBm)");
    run_cmd->add_option("--lambda", run.lambda, "Band split for the CM solver");
    run_cmd->add_option("--ga-iters", run.ga_iters, "GA iterations");
    run_cmd->add_option("--pso-iters", run.pso_iters, "PSO iterations");
    run_cmd->add_option("--pop", run.pop, "Population / swarm size");
    run_cmd->add_option("--config", run.scenario_config, "Scenario config JSON");
    run_cmd->add_flag("--parallel", run.parallel, "Evaluate populations in parallel");
    run_cmd->add_option("--out", run.out, "Directory for result.json and the trace");

    std::string spec_path, sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep_cmd->add_option("--spec", spec_path, "Sweep spec JSON (a manifest.json works too)")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

    std::string in_path, by = "solver,rho_ue,rho_sbs,pmax_dbm,lambda";
    auto* sum_cmd = app.add_subcommand("summarize", "Aggregate a sweep.csv over seeds");
    sum_cmd->add_option("--in", in_path, "sweep.csv")->required();
    sum_cmd->add_option("--by", by, "Comma-separated group columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run_cmd) {
            return do_run(run);
        }
        if (*sweep_cmd) {
            return do_sweep(spec_path, sweep_out);
        }
        summarize(fs::path(in_path), split_keys(by), std::cout);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
}
