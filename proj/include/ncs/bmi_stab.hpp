#pragma once

#include <optional>

#include "ncs/ga.hpp"
#include "ncs/lmi.hpp"
#include "ncs/plant.hpp"

namespace ncs {

struct StabilityResult {
    bool certified = false;
    std::optional<StabilityCertificate> certificate;
    int generations_used = 0;
    std::size_t evaluations = 0;
    std::vector<double> history;
};

// Search box for (a1, a2): the delivered mode must contract (a1 > 1), and the
// identity hold block of Phi2 rules out a2 > 1.
inline constexpr Interval kA1Bounds{1.0 + 1e-6, 1.5};
inline constexpr Interval kA2Bounds{0.5, 1.0};

// GA settings for the (a1, a2) search: 20 individuals, 2 elites, crossover
// 0.8, mutation 0.2, 50 generations.
[[nodiscard]] GaConfig default_bmi_ga_config(std::uint64_t seed = 1);

// 1 - a1^r a2^(1-r) when the LMIs for this (a1, a2) are feasible, otherwise
// 1 + degree of infeasibility. Negative means certified.
[[nodiscard]] double bmi_fitness(double a1, double a2, const SwitchedClosedLoop& cl,
                                 int lmi_budget = kDefaultLmiBudget);

struct CertifyOptions {
    GaConfig ga = default_bmi_ga_config();
    int lmi_budget = kDefaultLmiBudget;
    // Keep minimizing after the first negative fitness instead of stopping.
    bool refine = false;
};

// Runs the GA over (a1, a2) and re-verifies the winner from scratch. An
// uncertified result is a normal outcome, not an error.
[[nodiscard]] StabilityResult certify_gain(const DiscretePlant& d, const Matrix& k, double p_tx,
                                           const CertifyOptions& options = {});

} // namespace ncs
