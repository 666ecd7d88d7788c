#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ncs/ga.hpp"

using namespace ncs;

namespace {

GaConfig box_config(std::vector<Interval> bounds, int generations, std::uint64_t seed) {
    GaConfig c;
    c.bounds = std::move(bounds);
    c.max_generations = generations;
    c.seed = seed;
    return c;
}

double sphere(const Point& x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

} // namespace

TEST_CASE("ga_minimize: sphere reaches the origin") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto run = ga_minimize(sphere, box_config({{-5, 5}, {-5, 5}}, 50, seed));
        CHECK(run.best_value < 1e-2);
        CHECK(run.best_value == doctest::Approx(sphere(run.best_point)));
    }
}

TEST_CASE("ga_minimize: constant fitness keeps a flat history") {
    const auto run = ga_minimize([](const Point&) { return 4.0; }, box_config({{0, 1}, {2, 3}}, 10, 2));
    CHECK(run.best_value == 4.0);
    CHECK(std::all_of(run.history.begin(), run.history.end(), [](double h) { return h == 4.0; }));
    CHECK(run.best_point[0] >= 0.0);
    CHECK(run.best_point[1] <= 3.0);
}

TEST_CASE("ga_minimize: early stop near a known optimum") {
    const auto run = ga_minimize([](const Point& x) { return std::abs(x[0] - 3.0); }, box_config({{0, 10}}, 500, 3),
                                 [](double f) { return f < 1e-3; });
    CHECK(run.stopped_early);
    CHECK(run.iterations < 500);
    CHECK(std::abs(run.best_point[0] - 3.0) < 1e-3);
}

TEST_CASE("ga_step: elitism, bounds and exact monotone history") {
    const GaConfig c = box_config({{-2, 1}, {0, 4}, {-1, 1}}, 40, 9);
    std::vector<Point> evaluated;
    const Objective f = [&](const Point& x) {
        evaluated.push_back(x);
        return std::cos(3.0 * x[0]) + x[1] * x[1] + std::sin(5.0 * x[2]);
    };
    GaState s = ga_init(f, c);
    for (int g = 0; g < 30; ++g) {
        const Point best = s.population[s.best_index()];
        const double best_value = s.fitness[s.best_index()];
        s = ga_step(std::move(s), c, f);
        CHECK(std::find(s.population.begin(), s.population.end(), best) != s.population.end());
        CHECK(s.fitness[s.best_index()] <= best_value);
    }
    for (const auto& x : evaluated) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            CHECK(c.bounds[j].contains(x[j]));
        }
    }
    const auto run = ga_minimize(f, c);
    for (std::size_t i = 1; i < run.history.size(); ++i) {
        CHECK(run.history[i] <= run.history[i - 1]);
    }
}

TEST_CASE("ga_step: without crossover or mutation children are copies of parents") {
    GaConfig c = box_config({{0, 1}, {0, 1}}, 5, 4);
    c.crossover_ratio = 0.0;
    c.mutation_ratio = 0.0;
    GaState s = ga_init(sphere, c);
    const auto parents = s.population;
    s = ga_step(std::move(s), c, sphere);
    for (const auto& child : s.population) {
        CHECK(std::find(parents.begin(), parents.end(), child) != parents.end());
    }
}

TEST_CASE("ga_minimize: identical seeds give identical runs") {
    const GaConfig c = box_config({{-3, 3}, {-3, 3}}, 20, 77);
    CHECK(ga_minimize(sphere, c) == ga_minimize(sphere, c));
    GaConfig other = c;
    other.seed = 78;
    CHECK_FALSE(ga_minimize(sphere, c) == ga_minimize(sphere, other));
}

TEST_CASE("ga: evaluations count and config validation") {
    const GaConfig c = box_config({{0, 1}}, 7, 1);
    std::size_t calls = 0;
    const auto run = ga_minimize([&](const Point& x) { ++calls; return x[0]; }, c);
    CHECK(run.evaluations == calls);
    CHECK(calls == c.population_size + 7 * (c.population_size - c.elite_count));

    GaConfig bad = c;
    bad.elite_count = bad.population_size;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.bounds = {{1, 1}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.crossover_ratio = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
