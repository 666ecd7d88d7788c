#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ncs/linalg.hpp"
#include "ncs/plant.hpp"

namespace ncs {

// Closed-loop trajectory over steps k = 0..N. x_bar is the state held by the
// controller; dropped[k] marks that the measurement of x(k) was lost.
struct SimTrace {
    std::vector<Matrix> x;
    std::vector<Matrix> x_bar;
    std::vector<Matrix> u;
    std::vector<double> y;
    std::vector<bool> dropped;
    double sample_time = 0.0;
    double ref_amplitude = 0.0;

    [[nodiscard]] std::size_t horizon() const { return x.empty() ? 0 : x.size() - 1; }
};

struct CostEstimate {
    double mean = 0.0;
    double std_dev = 0.0;
    std::vector<double> per_realization;
    std::size_t realizations = 0;
};

struct SimSetup {
    double p_tx = 0.7;
    double ref_amplitude = 1.0;
    int horizon = 100;
};

// u(k) = -K (x_bar(k) - x_ref) with x_ref = (ref, 0, ..., 0); x_bar(0) = x(0).
// Each later measurement is lost independently with probability 1 - p_tx.
// p_tx = 1 is accepted and means a lossless channel.
[[nodiscard]] SimTrace simulate_once(const DiscretePlant& d, const Matrix& k, const SimSetup& setup,
                                     std::uint64_t seed);
[[nodiscard]] SimTrace simulate_once(const DiscretePlant& d, const Matrix& k, const SimSetup& setup,
                                     std::uint64_t seed, const Matrix& x0);

// sum_{k=1..N} k |ref - y(k)|
[[nodiscard]] double itae_cost(const SimTrace& trace);

// Realization i uses seed derive_seed(seed_base, i).
[[nodiscard]] std::vector<std::uint64_t> realization_seeds(std::uint64_t seed_base, std::size_t count);

[[nodiscard]] CostEstimate expected_itae(const DiscretePlant& d, const Matrix& k, const SimSetup& setup,
                                         std::span<const std::uint64_t> seeds);
[[nodiscard]] CostEstimate expected_itae(const DiscretePlant& d, const Matrix& k, const SimSetup& setup,
                                         std::size_t realizations, std::uint64_t seed_base);

// Columns: k, t, x1..xn, xbar1..xbarn, u (or u1..um), y, dropped.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

} // namespace ncs
