#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace mecopt {

struct TraceRow {
    std::string stage;  // "ga" or "pso"
    std::size_t iteration = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double diversity = 0.0;
    double beta = std::numeric_limits<double>::quiet_NaN();  // PSO only
};

struct SolverTrace {
    std::vector<TraceRow> rows;

    void append(const SolverTrace& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

// 17 significant digits, so the text parses back to the same double.
// NaN renders as an empty field.
std::string format_real(double x);

inline constexpr const char* kTraceHeader = "solver,seed,stage,iteration,best_fitness,mean_fitness,diversity,beta";

void write_trace_csv(std::ostream& out, const std::string& solver, std::uint64_t seed, const SolverTrace& trace);

} // namespace mecopt
