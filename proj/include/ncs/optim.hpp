#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ncs {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] double range() const { return upper - lower; }
    [[nodiscard]] double clamp(double v) const { return v < lower ? lower : (v > upper ? upper : v); }
    [[nodiscard]] bool contains(double v) const { return v >= lower && v <= upper; }
};

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;

inline void validate_bounds(const std::vector<Interval>& bounds) {
    if (bounds.empty()) {
        throw std::invalid_argument("search box must have at least one dimension");
    }
    for (const auto& b : bounds) {
        if (!(b.upper > b.lower)) {
            throw std::invalid_argument("search box has a degenerate dimension");
        }
    }
}

// Record shared by the GA and RegPSO drivers. `history[i]` is the best value
// known after iteration i (index 0 is the initial population).
struct OptimizationRun {
    Point best_point;
    double best_value = 0.0;
    int iterations = 0;
    std::vector<double> history;
    bool stopped_early = false;
    std::size_t evaluations = 0;
    int regroups = 0;

    friend bool operator==(const OptimizationRun&, const OptimizationRun&) = default;
};

} // namespace ncs
