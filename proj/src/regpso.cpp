#include "ncs/regpso.hpp"

#include <algorithm>
#include <cmath>

namespace ncs {

void RegPsoConfig::validate() const {
    validate_bounds(bounds);
    if (swarm_size < 2) {
        throw std::invalid_argument("RegPSO: swarm must hold at least two particles");
    }
    if (!(clamp_fraction > 0.0 && clamp_fraction <= 1.0)) {
        throw std::invalid_argument("RegPSO: velocity clamp fraction must lie in (0, 1]");
    }
    if (!(stagnation_threshold > 0.0)) {
        throw std::invalid_argument("RegPSO: stagnation threshold must be positive");
    }
    if (max_iterations < 0) {
        throw std::invalid_argument("RegPSO: negative iteration budget");
    }
}

SwarmState regpso_init(const Objective& objective, const RegPsoConfig& config) {
    config.validate();
    SwarmState s;
    s.rng.seed(config.seed);
    s.box = config.bounds;
    const std::size_t dims = config.bounds.size();
    for (std::size_t i = 0; i < config.swarm_size; ++i) {
        Point x(dims);
        Point v(dims);
        for (std::size_t j = 0; j < dims; ++j) {
            const auto& b = config.bounds[j];
            const double vmax = config.clamp_fraction * b.range();
            x[j] = std::uniform_real_distribution<double>(b.lower, b.upper)(s.rng);
            v[j] = std::uniform_real_distribution<double>(-vmax, vmax)(s.rng);
        }
        s.positions.push_back(std::move(x));
        s.velocities.push_back(std::move(v));
    }
    for (const auto& x : s.positions) {
        s.personal_best.push_back(x);
        s.personal_best_value.push_back(objective(x));
    }
    s.evaluations = config.swarm_size;
    const auto best = std::min_element(s.personal_best_value.begin(), s.personal_best_value.end());
    const auto gi = static_cast<std::size_t>(best - s.personal_best_value.begin());
    s.global_best = s.personal_best[gi];
    s.global_best_value = *best;
    return s;
}

SwarmState pso_step(SwarmState s, const RegPsoConfig& config, const Objective& objective) {
    const std::size_t dims = config.bounds.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        Point& x = s.positions[i];
        Point& v = s.velocities[i];
        for (std::size_t j = 0; j < dims; ++j) {
            const double phi1 = unit(s.rng);
            const double phi2 = unit(s.rng);
            double vj = config.inertia * v[j] + config.c1 * phi1 * (s.personal_best[i][j] - x[j]) +
                        config.c2 * phi2 * (s.global_best[j] - x[j]);
            const double vmax = config.clamp_fraction * s.box[j].range();
            vj = std::clamp(vj, -vmax, vmax);
            double xj = x[j] + vj;
            if (!config.bounds[j].contains(xj)) {
                xj = config.bounds[j].clamp(xj);
                vj = 0.0;
            }
            x[j] = xj;
            v[j] = vj;
        }
    }
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        const double value = objective(s.positions[i]);
        if (value < s.personal_best_value[i]) {
            s.personal_best_value[i] = value;
            s.personal_best[i] = s.positions[i];
        }
    }
    s.evaluations += s.positions.size();
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        if (s.personal_best_value[i] < s.global_best_value) {
            s.global_best_value = s.personal_best_value[i];
            s.global_best = s.personal_best[i];
        }
    }
    ++s.iteration;
    return s;
}

SwarmRadius swarm_radius(const SwarmState& s, const RegPsoConfig& config) {
    double radius = 0.0;
    for (const auto& x : s.positions) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - s.global_best[j];
            d2 += d * d;
        }
        radius = std::max(radius, std::sqrt(d2));
    }
    double range2 = 0.0;
    for (const auto& b : config.bounds) {
        range2 += b.range() * b.range();
    }
    return {radius, radius / std::sqrt(range2)};
}

SwarmState regroup(SwarmState s, const RegPsoConfig& config) {
    const std::size_t dims = config.bounds.size();
    const double rho = config.regroup_factor();
    for (std::size_t j = 0; j < dims; ++j) {
        const auto& original = config.bounds[j];
        double deviation = 0.0;
        for (const auto& x : s.positions) {
            deviation = std::max(deviation, std::abs(x[j] - s.global_best[j]));
        }
        double width = std::min(original.range(), rho * deviation);
        width = std::max(width, 1e-12 * original.range());
        const double g = s.global_best[j];
        s.box[j] = Interval{std::max(original.lower, g - 0.5 * width), std::min(original.upper, g + 0.5 * width)};
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        for (std::size_t j = 0; j < dims; ++j) {
            const auto& b = s.box[j];
            s.positions[i][j] = b.clamp(b.lower + unit(s.rng) * b.range());
            const double vmax = config.clamp_fraction * b.range();
            s.velocities[i][j] = std::clamp(s.velocities[i][j], -vmax, vmax);
        }
    }
    ++s.regroups;
    return s;
}

OptimizationRun regpso_minimize(const Objective& objective, const RegPsoConfig& config) {
    SwarmState s = regpso_init(objective, config);
    OptimizationRun run;
    run.history.push_back(s.global_best_value);
    while (s.iteration < config.max_iterations) {
        s = pso_step(std::move(s), config, objective);
        run.history.push_back(s.global_best_value);
        if (swarm_radius(s, config).normalized < config.stagnation_threshold) {
            s = regroup(std::move(s), config);
        }
    }
    run.best_point = s.global_best;
    run.best_value = s.global_best_value;
    run.iterations = s.iteration;
    run.evaluations = s.evaluations;
    run.regroups = s.regroups;
    return run;
}

} // namespace ncs
