#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ncs/optim.hpp"

namespace ncs {

struct RegPsoConfig {
    std::size_t swarm_size = 20;
    double inertia = 0.71633;
    double c1 = 1.4962;
    double c2 = 1.4962;
    double clamp_fraction = 0.15;
    double stagnation_threshold = 1.1e-4;
    int max_iterations = 200;
    std::vector<Interval> bounds;
    std::uint64_t seed = 1;

    // rho = 6 / (5 epsilon)
    [[nodiscard]] double regroup_factor() const { return 6.0 / (5.0 * stagnation_threshold); }
    void validate() const;
};

struct SwarmState {
    std::vector<Point> positions;
    std::vector<Point> velocities;
    std::vector<Point> personal_best;
    std::vector<double> personal_best_value;
    Point global_best;
    double global_best_value = 0.0;
    std::vector<Interval> box;  // current regrouping box, initially the full search box
    int regroups = 0;
    int iteration = 0;
    std::size_t evaluations = 0;
    std::mt19937_64 rng;
};

struct SwarmRadius {
    double radius = 0.0;
    double normalized = 0.0;
};

[[nodiscard]] SwarmState regpso_init(const Objective& objective, const RegPsoConfig& config);

// Velocity and position update with fresh uniform phi1, phi2 per particle and
// dimension. Velocities are clamped to clamp_fraction * range of the current
// box. Positions leaving the original box are clipped to it and the
// velocity component on that dimension is zeroed. Personal and global bests
// only move on strict improvement.
[[nodiscard]] SwarmState pso_step(SwarmState state, const RegPsoConfig& config, const Objective& objective);

// Largest distance of any particle from the global best, and that distance
// over the norm of the original box's range vector.
[[nodiscard]] SwarmRadius swarm_radius(const SwarmState& state, const RegPsoConfig& config);

// Re-centres the box on the global best with per-dimension width
// min(original range, rho * max_i |x_ij - g_j|) (floored at 1e-12 of the
// original range), clipped to the original box, and re-seeds positions
// uniformly inside it. Bests are kept.
[[nodiscard]] SwarmState regroup(SwarmState state, const RegPsoConfig& config);

[[nodiscard]] OptimizationRun regpso_minimize(const Objective& objective, const RegPsoConfig& config);

} // namespace ncs
