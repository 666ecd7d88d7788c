#include "ncs/ga.hpp"

#include <algorithm>
#include <numeric>

namespace ncs {

namespace {

std::vector<std::size_t> rank_order(const std::vector<double>& fitness) {
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    return order;
}

// Rank r (0 = best) gets weight P - r.
std::size_t select_by_rank(const std::vector<std::size_t>& order, std::mt19937_64& rng) {
    const std::size_t p = order.size();
    const double total = static_cast<double>(p * (p + 1) / 2);
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    for (std::size_t r = 0; r < p; ++r) {
        u -= static_cast<double>(p - r);
        if (u < 0.0) {
            return order[r];
        }
    }
    return order.back();
}

} // namespace

void GaConfig::validate() const {
    validate_bounds(bounds);
    if (population_size < 2) {
        throw std::invalid_argument("GA: population must hold at least two individuals");
    }
    if (elite_count >= population_size) {
        throw std::invalid_argument("GA: elite count must be smaller than the population");
    }
    if (crossover_ratio < 0.0 || crossover_ratio > 1.0 || mutation_ratio < 0.0 || mutation_ratio > 1.0) {
        throw std::invalid_argument("GA: crossover and mutation ratios must lie in [0, 1]");
    }
    if (max_generations < 0) {
        throw std::invalid_argument("GA: negative generation budget");
    }
}

std::size_t GaState::best_index() const {
    return static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
}

GaState ga_init(const Objective& fitness, const GaConfig& config) {
    config.validate();
    GaState state;
    state.rng.seed(config.seed);
    state.population.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Point x(config.bounds.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = std::uniform_real_distribution<double>(config.bounds[j].lower, config.bounds[j].upper)(state.rng);
        }
        state.population.push_back(std::move(x));
    }
    for (const auto& x : state.population) {
        state.fitness.push_back(fitness(x));
    }
    state.evaluations = state.population.size();
    return state;
}

GaState ga_step(GaState state, const GaConfig& config, const Objective& fitness) {
    const auto order = rank_order(state.fitness);
    const std::size_t p = config.population_size;
    const std::size_t dims = config.bounds.size();

    std::vector<Point> next;
    std::vector<double> next_fitness;
    next.reserve(p);
    for (std::size_t e = 0; e < config.elite_count; ++e) {
        next.push_back(state.population[order[e]]);
        next_fitness.push_back(state.fitness[order[e]]);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> blend(-0.25, 1.25);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (next.size() < p) {
        Point child = state.population[select_by_rank(order, state.rng)];
        if (unit(state.rng) < config.crossover_ratio) {
            const Point& other = state.population[select_by_rank(order, state.rng)];
            const double lambda = blend(state.rng);
            for (std::size_t j = 0; j < dims; ++j) {
                child[j] = lambda * child[j] + (1.0 - lambda) * other[j];
            }
        }
        if (unit(state.rng) < config.mutation_ratio) {
            for (std::size_t j = 0; j < dims; ++j) {
                child[j] += 0.1 * config.bounds[j].range() * gauss(state.rng);
            }
        }
        for (std::size_t j = 0; j < dims; ++j) {
            child[j] = config.bounds[j].clamp(child[j]);
        }
        next.push_back(std::move(child));
    }
    for (std::size_t i = config.elite_count; i < p; ++i) {
        next_fitness.push_back(fitness(next[i]));
    }
    state.evaluations += p - config.elite_count;
    state.population = std::move(next);
    state.fitness = std::move(next_fitness);
    ++state.generation;
    return state;
}

GaRun ga_minimize(const Objective& fitness, const GaConfig& config, const std::function<bool(double)>& early_stop) {
    GaState state = ga_init(fitness, config);
    GaRun run;
    auto record = [&] {
        const std::size_t best = state.best_index();
        if (run.history.empty() || state.fitness[best] < run.best_value) {
            run.best_point = state.population[best];
            run.best_value = state.fitness[best];
        }
        run.history.push_back(run.best_value);
    };
    record();
    while (!(early_stop && early_stop(run.best_value)) && state.generation < config.max_generations) {
        state = ga_step(std::move(state), config, fitness);
        record();
    }
    run.iterations = state.generation;
    run.evaluations = state.evaluations;
    run.stopped_early = early_stop && early_stop(run.best_value);
    return run;
}

} // namespace ncs
