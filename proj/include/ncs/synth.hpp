#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ncs/bmi_stab.hpp"
#include "ncs/ga.hpp"
#include "ncs/lqr.hpp"
#include "ncs/regpso.hpp"
#include "ncs/sim.hpp"

namespace ncs {

enum class OuterOptimizer { regpso, ga };

[[nodiscard]] std::string to_string(OuterOptimizer o);
// Accepts "regpso" or "ga"; throws std::invalid_argument otherwise.
[[nodiscard]] OuterOptimizer parse_outer(const std::string& name);

struct SynthConfig {
    // Continuous plants are discretized with `sample_time`; discrete plants
    // carry their own.
    std::variant<ContinuousPlant, DiscretePlant> plant = reference_plant();
    double sample_time = 0.3;
    double p_tx = 0.7;
    // log10 ranges for (q1..qn, R); empty means [-2, 2] on every coordinate.
    std::vector<Interval> weight_bounds;
    OuterOptimizer outer = OuterOptimizer::regpso;
    // Bounds and seed of these two are filled in per run.
    RegPsoConfig regpso = default_outer_regpso();
    GaConfig ga = default_outer_ga();
    int bmi_generations = 50;
    int lmi_budget = kDefaultLmiBudget;
    SimSetup sim;
    std::size_t realizations = 20;
    std::size_t report_realizations = 200;
    double penalty = 1e6;
    std::uint64_t master_seed = 1;

    [[nodiscard]] DiscretePlant discrete_plant() const;
    [[nodiscard]] std::vector<Interval> search_box() const;
    void validate() const;

    static RegPsoConfig default_outer_regpso();
    static GaConfig default_outer_ga();
};

// Seeds used by one synthesis run, all derived from master_seed.
struct RunSeeds {
    std::uint64_t outer = 0;
    std::uint64_t bmi = 0;
    std::vector<std::uint64_t> realizations;
    std::vector<std::uint64_t> report;
};

[[nodiscard]] RunSeeds run_seeds(const SynthConfig& cfg);

// log10 coordinates -> weights.
[[nodiscard]] LqrWeights weights_from_point(const Point& x);
[[nodiscard]] Point point_from_weights(const LqrWeights& w);

struct Evaluation {
    double cost = 0.0;
    bool certified = false;
    std::optional<LqrDesign> design;
    std::optional<StabilityCertificate> certificate;
    CostEstimate estimate;
};

// DARE -> certification -> mean ITAE over `seeds`. Any failure along the
// way yields cfg.penalty.
[[nodiscard]] Evaluation evaluate_design(const LqrWeights& w, const SynthConfig& cfg, const DiscretePlant& d,
                                         std::uint64_t bmi_seed, std::span<const std::uint64_t> seeds);
[[nodiscard]] double evaluate_weights(const LqrWeights& w, const SynthConfig& cfg,
                                      std::span<const std::uint64_t> seeds);

struct SynthesisResult {
    LqrWeights weights;
    Matrix k;
    StabilityCertificate certificate;
    CostEstimate expected_cost;
    std::vector<double> convergence;
    std::size_t evaluations = 0;
    double wall_time = 0.0;
    OuterOptimizer outer = OuterOptimizer::regpso;
    std::uint64_t master_seed = 0;
};

class NoCertifiedDesignError : public std::runtime_error {
public:
    NoCertifiedDesignError(Point best_point, double best_value, std::size_t evaluations);
    [[nodiscard]] const Point& best_point() const noexcept { return best_point_; }
    [[nodiscard]] double best_value() const noexcept { return best_value_; }
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

private:
    Point best_point_;
    double best_value_;
    std::size_t evaluations_;
};

// Outer search over log10 weights. The result's certificate has been
// re-verified from scratch and its cost is measured on report_realizations
// fresh seeds.
[[nodiscard]] SynthesisResult synthesize(const SynthConfig& cfg);

struct RunEntry {
    std::uint64_t master_seed = 0;
    double cost = 0.0;
    bool certified = false;
    std::optional<SynthesisResult> result;
};

struct ArmStatistics {
    OuterOptimizer outer = OuterOptimizer::regpso;
    std::vector<RunEntry> runs;
    double mean = 0.0;
    double std_dev = 0.0;
    double best = 0.0;
    double worst = 0.0;
    std::size_t failures = 0;
};

// Master seed of run i.
[[nodiscard]] std::uint64_t run_master_seed(std::uint64_t base, std::size_t run);

// Summary of per-run costs. Runs without a certified design enter with the
// penalty value and are counted in `failures`.
[[nodiscard]] ArmStatistics summarize_runs(OuterOptimizer outer, std::vector<RunEntry> runs);

// n_runs syntheses with master seeds run_master_seed(cfg.master_seed, i).
[[nodiscard]] ArmStatistics run_statistics(const SynthConfig& cfg, std::size_t n_runs);

// arm,mean,std,best,worst,failures
void write_stats_csv(std::ostream& os, const std::vector<ArmStatistics>& arms);
// iteration,best_cost
void write_convergence_csv(std::ostream& os, const std::vector<double>& convergence);

} // namespace ncs
