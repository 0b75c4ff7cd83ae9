#include "mecopt/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <tbb/parallel_for.h>

#include "mecopt/error.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/solvers.hpp"
#include "mecopt/trace.hpp"
#include "mecopt/units.hpp"

namespace mecopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kKnownSolvers{"has", "hgp", "cmt", "cm"};

template <class T>
void require_non_empty(const std::vector<T>& v, const char* field)
{
    if (v.empty()) {
        throw ConfigError(field, "must not be empty");
    }
}

template <class T>
T get_field(const json& j, const std::string& key)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(key, "missing or wrong type");
    }
}

} // namespace

void SweepSpec::validate() const
{
    require_non_empty(rho_ue, "rho_ue");
    require_non_empty(rho_sbs, "rho_sbs");
    require_non_empty(pmax_dbm, "pmax_dbm");
    require_non_empty(solvers, "solvers");
    require_non_empty(seeds, "seeds");
    for (const auto& s : solvers) {
        if (!kKnownSolvers.contains(s)) {
            throw ConfigError("solvers", "unknown solver '" + s + "'");
        }
    }
    if (std::find(solvers.begin(), solvers.end(), "cm") != solvers.end()) {
        require_non_empty(cm_lambdas, "cm_lambdas");
    }
    for (double l : cm_lambdas) {
        if (!(l >= base.theta && l <= 1.0)) {
            throw ConfigError("cm_lambdas", "values must lie in [theta, 1]");
        }
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        throw ConfigError("seeds", "must be distinct");
    }
    for (auto u : rho_ue) {
        if (u == 0) throw ConfigError("rho_ue", "must be >= 1");
    }
    for (auto s : rho_sbs) {
        if (s == 0) throw ConfigError("rho_sbs", "must be >= 1");
    }
    for (double p : pmax_dbm) {
        if (!std::isfinite(p)) throw ConfigError("pmax_dbm", "must be finite");
    }
    if (!(penalty_factor > 0.0)) {
        throw ConfigError("penalty_factor", "must be > 0");
    }
    base.validate();
    ga.validate();
    pso.validate();
}

json to_json(const SweepSpec& s)
{
    return {{"rho_ue", s.rho_ue},
            {"rho_sbs", s.rho_sbs},
            {"pmax_dbm", s.pmax_dbm},
            {"solvers", s.solvers},
            {"cm_lambdas", s.cm_lambdas},
            {"seeds", s.seeds},
            {"master_seed", s.master_seed},
            {"base", to_json(s.base)},
            {"ga", to_json(s.ga)},
            {"pso", to_json(s.pso)},
            {"penalty_factor", s.penalty_factor},
            {"write_traces", s.write_traces},
            {"parallel_cells", s.parallel_cells},
            {"parallel_eval", s.parallel_eval}};
}

SweepSpec sweep_spec_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ConfigError("<root>", "sweep spec must be a JSON object");
    }
    SweepSpec s;
    for (const auto& [key, value] : j.items()) {
        if (key == "rho_ue") s.rho_ue = get_field<std::vector<std::size_t>>(j, key);
        else if (key == "rho_sbs") s.rho_sbs = get_field<std::vector<std::size_t>>(j, key);
        else if (key == "pmax_dbm") s.pmax_dbm = get_field<std::vector<double>>(j, key);
        else if (key == "solvers") s.solvers = get_field<std::vector<std::string>>(j, key);
        else if (key == "cm_lambdas") s.cm_lambdas = get_field<std::vector<double>>(j, key);
        else if (key == "seeds") s.seeds = get_field<std::vector<std::uint64_t>>(j, key);
        else if (key == "master_seed") s.master_seed = get_field<std::uint64_t>(j, key);
        else if (key == "base") s.base = scenario_config_from_json(value);
        else if (key == "ga") s.ga = ga_config_from_json(value);
        else if (key == "pso") s.pso = pso_config_from_json(value);
        else if (key == "penalty_factor") s.penalty_factor = get_field<double>(j, key);
        else if (key == "write_traces") s.write_traces = get_field<bool>(j, key);
        else if (key == "parallel_cells") s.parallel_cells = get_field<bool>(j, key);
        else if (key == "parallel_eval") s.parallel_eval = get_field<bool>(j, key);
        else throw ConfigError(key, "unknown key");
    }
    s.validate();
    return s;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t rho_ue, std::size_t rho_sbs, double pmax_dbm,
                        std::uint64_t replicate)
{
    return derive_seed(master_seed, {rho_ue, rho_sbs, std::bit_cast<std::uint64_t>(pmax_dbm), replicate});
}

ScenarioConfig cell_config(const SweepSpec& spec, std::size_t rho_ue, std::size_t rho_sbs, double pmax_dbm,
                           std::uint64_t replicate)
{
    ScenarioConfig cfg = spec.base;
    cfg.num_imds = rho_ue;
    cfg.num_sbs = rho_sbs;
    cfg.p_max_w = units::dbm_to_watt(pmax_dbm);
    cfg.seed = cell_seed(spec.master_seed, rho_ue, rho_sbs, pmax_dbm, replicate);
    return cfg;
}

namespace {

struct Job {
    std::size_t rho_ue;
    std::size_t rho_sbs;
    double pmax_dbm;
    std::uint64_t replicate;
    std::string solver;
    double lambda;  // CM only
};

struct JobOutput {
    MetricsRow row;
    SolverTrace trace;
    bool traced = false;
};

std::vector<Job> expand(const SweepSpec& spec)
{
    std::vector<Job> jobs;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto ue : spec.rho_ue) {
        for (auto sbs : spec.rho_sbs) {
            for (double p : spec.pmax_dbm) {
                for (auto seed : spec.seeds) {
                    for (const auto& solver : spec.solvers) {
                        if (solver == "cm") {
                            for (double l : spec.cm_lambdas) {
                                jobs.push_back({ue, sbs, p, seed, solver, l});
                            }
                        } else {
                            jobs.push_back({ue, sbs, p, seed, solver, nan});
                        }
                    }
                }
            }
        }
    }
    return jobs;
}

JobOutput run_job(const SweepSpec& spec, const Job& job)
{
    const ScenarioConfig cfg = cell_config(spec, job.rho_ue, job.rho_sbs, job.pmax_dbm, job.replicate);
    const Scenario scenario = generate_scenario(cfg);
    EvalConfig eval_cfg;
    eval_cfg.default_penalty = spec.penalty_factor;
    SolveOptions options;
    options.parallel = spec.parallel_eval;

    SolverResult result;
    if (job.solver == "has") {
        result = run_has(scenario, eval_cfg, spec.ga, spec.pso, cfg.seed, options);
    } else if (job.solver == "hgp") {
        result = run_hgp(scenario, eval_cfg, spec.ga, spec.pso, cfg.seed, options);
    } else if (job.solver == "cmt") {
        result = solve_cmt(scenario, eval_cfg);
    } else {
        result = solve_cm(scenario, eval_cfg, job.lambda);
    }

    JobOutput out;
    MetricsRow& r = out.row;
    r.solver = job.solver;
    r.seed = job.replicate;
    r.cell_seed = cfg.seed;
    r.rho_ue = job.rho_ue;
    r.rho_sbs = job.rho_sbs;
    r.pmax_dbm = job.pmax_dbm;
    r.lambda = job.lambda;
    r.total_energy = result.evaluation.total_energy;
    r.bs_energy = result.evaluation.bs_energy;
    r.support_ratio = result.evaluation.support_ratio();
    r.penalty = result.evaluation.penalty;
    r.runtime_s = result.wall_seconds;
    out.traced = !result.trace.rows.empty();
    out.trace = std::move(result.trace);
    return out;
}

std::ofstream open_for_write(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void close_checked(std::ofstream& out, const fs::path& path)
{
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<MetricsRow>& rows)
{
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << r.solver << ',' << r.seed << ',' << r.cell_seed << ',' << r.rho_ue << ',' << r.rho_sbs << ','
            << format_real(r.pmax_dbm) << ',' << format_real(r.lambda) << ',' << format_real(r.total_energy) << ','
            << format_real(r.bs_energy) << ',' << format_real(r.support_ratio) << ',' << format_real(r.penalty)
            << '\n';
    }
}

void write_timing_csv(std::ostream& out, const std::vector<MetricsRow>& rows)
{
    out << kTimingHeader << '\n';
    for (const auto& r : rows) {
        out << r.solver << ',' << r.seed << ',' << r.cell_seed << ',' << r.rho_ue << ',' << r.rho_sbs << ','
            << format_real(r.pmax_dbm) << ',' << format_real(r.lambda) << ',' << format_real(r.runtime_s) << '\n';
    }
}

std::vector<MetricsRow> run_sweep(const SweepSpec& spec, const fs::path& out_dir)
{
    spec.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string());
    }
    for (auto ue : spec.rho_ue) {
        for (auto sbs : spec.rho_sbs) {
            if (sbs < ue) {
                std::cerr << "warning: rho_sbs=" << sbs << " is below rho_ue=" << ue << '\n';
            }
        }
    }

    // Manifest first: it fully determines everything below.
    {
        const fs::path path = out_dir / "manifest.json";
        auto out = open_for_write(path);
        out << to_json(spec).dump(2) << '\n';
        close_checked(out, path);
    }

    const auto jobs = expand(spec);
    std::vector<JobOutput> outputs(jobs.size());
    if (spec.parallel_cells) {
        tbb::parallel_for(std::size_t{0}, jobs.size(), [&](std::size_t i) { outputs[i] = run_job(spec, jobs[i]); });
    } else {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            outputs[i] = run_job(spec, jobs[i]);
        }
    }

    std::vector<MetricsRow> rows;
    rows.reserve(outputs.size());
    for (auto& o : outputs) {
        rows.push_back(o.row);
        if (spec.write_traces && o.traced) {
            const fs::path path = out_dir / ("trace_" + o.row.solver + "_" + std::to_string(o.row.cell_seed) + ".csv");
            auto out = open_for_write(path);
            write_trace_csv(out, o.row.solver, o.row.cell_seed, o.trace);
            close_checked(out, path);
        }
    }
    {
        const fs::path path = out_dir / "sweep.csv";
        auto out = open_for_write(path);
        write_sweep_csv(out, rows);
        close_checked(out, path);
    }
    {
        const fs::path path = out_dir / "timing.csv";
        auto out = open_for_write(path);
        write_timing_csv(out, rows);
        close_checked(out, path);
    }
    return rows;
}

namespace {

const std::vector<std::string> kMetricColumns{"total_energy", "bs_energy", "support_ratio", "penalty"};

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) {
        return false;
    }
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

// Numeric keys sort numerically, everything else lexically.
bool key_less(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x, y;
        bool nx = parse_double(a[i], x), ny = parse_double(b[i], y);
        if (nx && ny) {
            if (x != y) return x < y;
        } else if (nx != ny) {
            return nx;
        } else if (a[i] != b[i]) {
            return a[i] < b[i];
        }
    }
    return false;
}

double median(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace

void summarize(std::istream& in, const std::vector<std::string>& group_keys, std::ostream& out)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("", "empty input, expected a header row");
    }
    const auto header = split_csv_line(line);
    auto column_of = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ParseError(name, "missing column");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    for (const auto& col : split_csv_line(kSweepHeader)) {
        column_of(col);
    }
    std::vector<std::size_t> key_cols;
    for (const auto& k : group_keys) {
        key_cols.push_back(column_of(k));
    }
    std::vector<std::size_t> metric_cols;
    for (const auto& m : kMetricColumns) {
        metric_cols.push_back(column_of(m));
    }

    using Key = std::vector<std::string>;
    std::map<Key, std::vector<std::vector<double>>, decltype(&key_less)> groups(&key_less);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("", "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size())
                                     + " fields, got " + std::to_string(fields.size()));
        }
        Key key;
        for (auto c : key_cols) {
            key.push_back(fields[c]);
        }
        auto& metrics = groups[key];
        metrics.resize(metric_cols.size());
        for (std::size_t m = 0; m < metric_cols.size(); ++m) {
            double v;
            if (!parse_double(fields[metric_cols[m]], v)) {
                throw ParseError(kMetricColumns[m],
                                 "line " + std::to_string(line_no) + ": not a number '" + fields[metric_cols[m]] + "'");
            }
            metrics[m].push_back(v);
        }
    }

    for (const auto& k : group_keys) {
        out << k << ',';
    }
    out << "count";
    for (const auto& m : kMetricColumns) {
        out << ',' << m << "_median," << m << "_mean," << m << "_std";
    }
    out << '\n';
    for (const auto& [key, metrics] : groups) {
        for (const auto& k : key) {
            out << k << ',';
        }
        out << metrics.front().size();
        for (const auto& xs : metrics) {
            const double n = static_cast<double>(xs.size());
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= n;
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            out << ',' << format_real(median(xs)) << ',' << format_real(mean) << ','
                << format_real(std::sqrt(var / n));
        }
        out << '\n';
    }
}

void summarize(const fs::path& csv, const std::vector<std::string>& group_keys, std::ostream& out)
{
    std::ifstream in(csv);
    if (!in) {
        throw IoError("cannot read " + csv.string());
    }
    summarize(in, group_keys, out);
}

} // namespace mecopt
