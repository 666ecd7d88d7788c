#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ncs/optim.hpp"

namespace ncs {

struct GaConfig {
    std::size_t population_size = 20;
    std::size_t elite_count = 2;
    double crossover_ratio = 0.8;
    double mutation_ratio = 0.2;
    int max_generations = 100;
    std::vector<Interval> bounds;
    std::uint64_t seed = 1;

    void validate() const;
};

using GaRun = OptimizationRun;

// One generation of individuals with their cached fitness values.
struct GaState {
    std::vector<Point> population;
    std::vector<double> fitness;
    int generation = 0;
    std::size_t evaluations = 0;
    std::mt19937_64 rng;

    [[nodiscard]] std::size_t best_index() const;
};

// Uniform initial population, evaluated in index order.
[[nodiscard]] GaState ga_init(const Objective& fitness, const GaConfig& config);

// Rank-weighted roulette selection, blend crossover with lambda drawn from
// [-0.25, 1.25], Gaussian mutation (sigma = 10% of each range), offspring
// clipped to the box. The elite_count best individuals pass unchanged and
// are not re-evaluated.
[[nodiscard]] GaState ga_step(GaState state, const GaConfig& config, const Objective& fitness);

[[nodiscard]] GaRun ga_minimize(const Objective& fitness, const GaConfig& config,
                                const std::function<bool(double)>& early_stop = {});

} // namespace ncs
