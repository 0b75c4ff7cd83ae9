#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mecopt/rng.hpp"
#include "mecopt/scenario.hpp"
#include "mecopt/sysmodel.hpp"

namespace mecopt {

// Flat chromosome / particle position. The first_hop and second_hop blocks
// are indexed by virtual IMD (column-major over the U x K task grid, see
// virtual_index_to_pair), not by the row-major layout of Solution.
struct GeneVector {
    std::vector<int> assoc;          // U, BS index per IMD
    std::vector<double> power;       // U, W
    std::vector<double> first_hop;   // U*K, bits
    std::vector<double> second_hop;  // U*K, bits
    double band_split = 1.0;

    friend bool operator==(const GeneVector&, const GeneVector&) = default;
};

// Real-valued counterpart of GeneVector used as PSO velocity.
struct Velocity {
    std::vector<double> assoc;
    std::vector<double> power;
    std::vector<double> first_hop;
    std::vector<double> second_hop;
    double band_split = 0.0;

    static Velocity zeros_like(const GeneVector& g);
    bool all_finite() const;

    friend bool operator==(const Velocity&, const Velocity&) = default;
};

enum class Block { Assoc = 0, Power = 1, FirstHop = 2, SecondHop = 3, BandSplit = 4 };
inline constexpr std::size_t kNumBlocks = 5;

// Per-gene feasible boxes and the diagonal length of each block's box.
// The second-hop box is taken as [theta, d] (its dynamic upper bound is the
// first hop).
struct GeneDomain {
    std::size_t num_imds = 0;
    std::size_t num_tasks = 0;
    int max_assoc = 0;
    double theta = 0.0;
    double p_max = 0.0;
    std::vector<double> data_bits;  // per virtual IMD
    double diagonal[kNumBlocks] = {};

    static GeneDomain from(const Scenario& scenario);

    // Width of the feasible interval of gene `index` within `block`.
    double width(Block block, std::size_t index) const;
};

// Virtual index (1-based, 1..U*K) to 1-based (imd, task).
std::pair<std::size_t, std::size_t> virtual_index_to_pair(std::size_t index, std::size_t num_imds,
                                                          std::size_t num_tasks);
// 0-based helpers used internally.
inline std::size_t virtual_imd(std::size_t v, std::size_t num_imds) { return v % num_imds; }
inline std::size_t virtual_task(std::size_t v, std::size_t num_imds) { return v / num_imds; }

// Clamp every gene into its feasible box. Idempotent.
GeneVector project(GeneVector genes, const GeneDomain& domain);
GeneVector project(GeneVector genes, const Scenario& scenario);

// Random individual: uniform association, q in (0, p_max], g in (0, d],
// h in (0, g], v in (0, 1], then projected.
GeneVector init_genes(const Scenario& scenario, Rng& rng);

Solution decode(const GeneVector& genes, const Scenario& scenario);
GeneVector encode(const Solution& solution, const Scenario& scenario);

nlohmann::json to_json(const GeneVector& g);
GeneVector gene_vector_from_json(const nlohmann::json& j);

} // namespace mecopt
