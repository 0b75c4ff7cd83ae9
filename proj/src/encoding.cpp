#include "mecopt/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "mecopt/error.hpp"

namespace mecopt {

namespace {

double clamp_real(double x, double lo, double hi)
{
    if (std::isnan(x)) {
        return lo;
    }
    return std::clamp(x, lo, hi);
}

bool finite(const std::vector<double>& xs)
{
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

Velocity Velocity::zeros_like(const GeneVector& g)
{
    Velocity v;
    v.assoc.assign(g.assoc.size(), 0.0);
    v.power.assign(g.power.size(), 0.0);
    v.first_hop.assign(g.first_hop.size(), 0.0);
    v.second_hop.assign(g.second_hop.size(), 0.0);
    v.band_split = 0.0;
    return v;
}

bool Velocity::all_finite() const
{
    return finite(assoc) && finite(power) && finite(first_hop) && finite(second_hop) && std::isfinite(band_split);
}

GeneDomain GeneDomain::from(const Scenario& scenario)
{
    GeneDomain d;
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    d.num_imds = U;
    d.num_tasks = K;
    d.max_assoc = static_cast<int>(scenario.num_sbs());
    d.theta = scenario.config.theta;
    d.p_max = scenario.config.p_max_w;
    d.data_bits.resize(U * K);
    double data_sq = 0.0;
    for (std::size_t v = 0; v < U * K; ++v) {
        d.data_bits[v] = scenario.bits(virtual_imd(v, U), virtual_task(v, U));
        data_sq += (d.data_bits[v] - d.theta) * (d.data_bits[v] - d.theta);
    }
    const double u = static_cast<double>(U);
    d.diagonal[0] = std::sqrt(u) * d.max_assoc;
    d.diagonal[1] = std::sqrt(u) * (d.p_max - d.theta);
    d.diagonal[2] = std::sqrt(data_sq);
    d.diagonal[3] = std::sqrt(data_sq);
    d.diagonal[4] = 1.0 - d.theta;
    return d;
}

double GeneDomain::width(Block block, std::size_t index) const
{
    switch (block) {
    case Block::Assoc: return static_cast<double>(max_assoc);
    case Block::Power: return p_max - theta;
    case Block::FirstHop:
    case Block::SecondHop: return data_bits[index] - theta;
    case Block::BandSplit: return 1.0 - theta;
    }
    return 0.0;
}

std::pair<std::size_t, std::size_t> virtual_index_to_pair(std::size_t index, std::size_t num_imds,
                                                          std::size_t num_tasks)
{
    if (num_imds == 0 || index < 1 || index > num_imds * num_tasks) {
        throw ContractError(fmt::format("virtual index {} outside 1..{}", index, num_imds * num_tasks));
    }
    return {(index - 1) % num_imds + 1, (index - 1) / num_imds + 1};
}

GeneVector project(GeneVector g, const GeneDomain& d)
{
    for (int& b : g.assoc) {
        b = std::clamp(b, 0, d.max_assoc);
    }
    for (double& q : g.power) {
        q = clamp_real(q, d.theta, d.p_max);
    }
    for (std::size_t v = 0; v < g.first_hop.size(); ++v) {
        g.first_hop[v] = clamp_real(g.first_hop[v], d.theta, d.data_bits[v]);
        g.second_hop[v] = clamp_real(g.second_hop[v], d.theta, g.first_hop[v]);
    }
    g.band_split = clamp_real(g.band_split, d.theta, 1.0);
    return g;
}

GeneVector project(GeneVector genes, const Scenario& scenario)
{
    return project(std::move(genes), GeneDomain::from(scenario));
}

GeneVector init_genes(const Scenario& scenario, Rng& rng)
{
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    const auto domain = GeneDomain::from(scenario);
    GeneVector g;
    g.assoc.resize(U);
    g.power.resize(U);
    g.first_hop.resize(U * K);
    g.second_hop.resize(U * K);

    std::uniform_int_distribution<int> pick_bs(0, domain.max_assoc);
    for (std::size_t i = 0; i < U; ++i) {
        g.assoc[i] = pick_bs(rng);
    }
    for (std::size_t i = 0; i < U; ++i) {
        g.power[i] = domain.p_max * uniform_open_closed(rng);
    }
    for (std::size_t v = 0; v < U * K; ++v) {
        g.first_hop[v] = domain.data_bits[v] * uniform_open_closed(rng);
    }
    for (std::size_t v = 0; v < U * K; ++v) {
        g.second_hop[v] = g.first_hop[v] * uniform_open_closed(rng);
    }
    g.band_split = uniform_open_closed(rng);
    return project(std::move(g), domain);
}

Solution decode(const GeneVector& genes, const Scenario& scenario)
{
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    Solution s;
    s.assoc.resize(U);
    for (std::size_t i = 0; i < U; ++i) {
        s.assoc[i] = static_cast<std::size_t>(genes.assoc[i]);
    }
    s.power_w = genes.power;
    s.first_hop_bits.resize(U * K);
    s.second_hop_bits.resize(U * K);
    for (std::size_t v = 0; v < U * K; ++v) {
        std::size_t row = virtual_imd(v, U) * K + virtual_task(v, U);
        s.first_hop_bits[row] = genes.first_hop[v];
        s.second_hop_bits[row] = genes.second_hop[v];
    }
    s.lambda = genes.band_split;
    return s;
}

GeneVector encode(const Solution& s, const Scenario& scenario)
{
    const std::size_t U = scenario.num_imds(), K = scenario.num_tasks();
    GeneVector g;
    g.assoc.resize(U);
    for (std::size_t i = 0; i < U; ++i) {
        g.assoc[i] = static_cast<int>(s.assoc[i]);
    }
    g.power = s.power_w;
    g.first_hop.resize(U * K);
    g.second_hop.resize(U * K);
    for (std::size_t v = 0; v < U * K; ++v) {
        std::size_t row = virtual_imd(v, U) * K + virtual_task(v, U);
        g.first_hop[v] = s.first_hop_bits[row];
        g.second_hop[v] = s.second_hop_bits[row];
    }
    g.band_split = s.lambda;
    return g;
}

nlohmann::json to_json(const GeneVector& g)
{
    return {{"assoc", g.assoc},
            {"power", g.power},
            {"first_hop", g.first_hop},
            {"second_hop", g.second_hop},
            {"band_split", g.band_split}};
}

GeneVector gene_vector_from_json(const nlohmann::json& j)
{
    try {
        GeneVector g;
        g.assoc = j.at("assoc").get<std::vector<int>>();
        g.power = j.at("power").get<std::vector<double>>();
        g.first_hop = j.at("first_hop").get<std::vector<double>>();
        g.second_hop = j.at("second_hop").get<std::vector<double>>();
        g.band_split = j.at("band_split").get<double>();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("", std::string("gene vector: ") + e.what());
    }
}

} // namespace mecopt
