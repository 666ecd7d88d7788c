#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ncs/synth.hpp"

namespace ncs {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything a CLI run may need: the synthesis settings plus optional fixed
// weights or a fixed gain for the single-shot subcommands.
struct ProblemConfig {
    SynthConfig synth;
    std::optional<LqrWeights> weights;
    std::optional<Matrix> gain;
};

// Layout (all keys optional, unknown keys rejected):
//
//   plant: {a, b, c} continuous or {g, h, c} discrete, each a row-major list
//          of numbers (flat or nested); dimensions are inferred from a / g.
//   sample_time, p_tx, outer, penalty, master_seed
//   weight_bounds: [[lo, hi], ...] in log10 units for (q1..qn, R)
//   regpso: {swarm_size, max_iterations, inertia, c1, c2, clamp_fraction,
//            stagnation_threshold}
//   ga: {population_size, elite_count, crossover_ratio, mutation_ratio,
//        max_generations}
//   bmi: {generations, lmi_budget}
//   sim: {horizon, ref_amplitude, realizations, report_realizations}
//   lqr: {q: [...], r}
//   gain: [...] (row-major, inputs x states)
[[nodiscard]] ProblemConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ProblemConfig load_config(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json to_json(const Matrix& m);
[[nodiscard]] nlohmann::json to_json(const StabilityCertificate& c);
[[nodiscard]] nlohmann::json to_json(const CostEstimate& c);
[[nodiscard]] nlohmann::json to_json(const SynthesisResult& r);

} // namespace ncs
