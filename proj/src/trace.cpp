#include "mecopt/trace.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace mecopt {

std::string format_real(double x)
{
    if (std::isnan(x)) {
        return {};
    }
    return fmt::format("{:.17g}", x);
}

void write_trace_csv(std::ostream& out, const std::string& solver, std::uint64_t seed, const SolverTrace& trace)
{
    out << kTraceHeader << '\n';
    for (const auto& r : trace.rows) {
        out << solver << ',' << seed << ',' << r.stage << ',' << r.iteration << ',' << format_real(r.best_fitness)
            << ',' << format_real(r.mean_fitness) << ',' << format_real(r.diversity) << ',' << format_real(r.beta)
            << '\n';
    }
}

} // namespace mecopt
