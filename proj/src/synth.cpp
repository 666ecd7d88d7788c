#include "ncs/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ncs/seeds.hpp"

namespace ncs {

std::string to_string(OuterOptimizer o) { return o == OuterOptimizer::regpso ? "regpso" : "ga"; }

OuterOptimizer parse_outer(const std::string& name) {
    if (name == "regpso") {
        return OuterOptimizer::regpso;
    }
    if (name == "ga") {
        return OuterOptimizer::ga;
    }
    throw std::invalid_argument("unknown outer optimizer '" + name + "' (expected regpso or ga)");
}

RegPsoConfig SynthConfig::default_outer_regpso() {
    RegPsoConfig c;
    c.swarm_size = 20;
    c.max_iterations = 30;
    return c;
}

GaConfig SynthConfig::default_outer_ga() {
    GaConfig c;
    c.population_size = 20;
    c.elite_count = 2;
    c.crossover_ratio = 0.8;
    c.mutation_ratio = 0.2;
    c.max_generations = 30;
    return c;
}

DiscretePlant SynthConfig::discrete_plant() const {
    if (const auto* d = std::get_if<DiscretePlant>(&plant)) {
        return *d;
    }
    return discretize_zoh(std::get<ContinuousPlant>(plant), sample_time);
}

std::vector<Interval> SynthConfig::search_box() const {
    if (!weight_bounds.empty()) {
        return weight_bounds;
    }
    const std::size_t n = std::visit([](const auto& p) { return p.states(); }, plant);
    return std::vector<Interval>(n + 1, Interval{-2.0, 2.0});
}

void SynthConfig::validate() const {
    std::visit([](const auto& p) { p.validate(); }, plant);
    if (std::holds_alternative<ContinuousPlant>(plant) && !(sample_time > 0.0)) {
        throw std::invalid_argument("sample time must be positive");
    }
    const DiscretePlant d = discrete_plant();
    if (!(p_tx > 0.0 && p_tx < 1.0)) {
        throw std::invalid_argument("p_tx must lie in (0, 1)");
    }
    const auto box = search_box();
    if (box.size() != d.states() + 1) {
        throw std::invalid_argument("weight_bounds needs one interval per state plus one for R");
    }
    validate_bounds(box);
    if (regpso.swarm_size < 2 || regpso.max_iterations < 1) {
        throw std::invalid_argument("regpso budget must be positive");
    }
    if (ga.population_size < 2 || ga.max_generations < 1 || ga.elite_count >= ga.population_size) {
        throw std::invalid_argument("ga budget must be positive");
    }
    if (bmi_generations < 1 || lmi_budget < 1) {
        throw std::invalid_argument("bmi and lmi budgets must be positive");
    }
    if (sim.horizon < 1 || realizations < 1 || report_realizations < 1) {
        throw std::invalid_argument("simulation horizon and realization counts must be positive");
    }
    if (!(penalty > 0.0) || !std::isfinite(penalty)) {
        throw std::invalid_argument("penalty must be positive and finite");
    }
}

RunSeeds run_seeds(const SynthConfig& cfg) {
    RunSeeds s;
    s.outer = derive_seed(cfg.master_seed, "outer");
    s.bmi = derive_seed(cfg.master_seed, "bmi");
    s.realizations = realization_seeds(derive_seed(cfg.master_seed, "realizations"), cfg.realizations);
    s.report = realization_seeds(derive_seed(cfg.master_seed, "report"), cfg.report_realizations);
    return s;
}

LqrWeights weights_from_point(const Point& x) {
    LqrWeights w;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        w.q_diag.push_back(std::pow(10.0, x[i]));
    }
    w.r_value = std::pow(10.0, x.back());
    return w;
}

Point point_from_weights(const LqrWeights& w) {
    Point x;
    for (double q : w.q_diag) {
        x.push_back(std::log10(q));
    }
    x.push_back(std::log10(w.r_value));
    return x;
}

namespace {

SimSetup sim_setup(const SynthConfig& cfg) {
    SimSetup s = cfg.sim;
    s.p_tx = cfg.p_tx;
    return s;
}

} // namespace

Evaluation evaluate_design(const LqrWeights& w, const SynthConfig& cfg, const DiscretePlant& d, std::uint64_t bmi_seed,
                           std::span<const std::uint64_t> seeds) {
    Evaluation ev;
    ev.cost = cfg.penalty;
    try {
        ev.design = solve_dare(d, w);
    } catch (const std::exception&) {
        return ev;
    }
    CertifyOptions opts;
    opts.ga = default_bmi_ga_config(bmi_seed);
    opts.ga.max_generations = cfg.bmi_generations;
    opts.lmi_budget = cfg.lmi_budget;
    const StabilityResult stab = certify_gain(d, ev.design->k, cfg.p_tx, opts);
    if (!stab.certified) {
        return ev;
    }
    ev.certified = true;
    ev.certificate = stab.certificate;
    ev.estimate = expected_itae(d, ev.design->k, sim_setup(cfg), seeds);
    // Penalty dominance: a certified design never costs as much as the penalty.
    ev.cost = std::isfinite(ev.estimate.mean) ? std::min(ev.estimate.mean, std::nextafter(cfg.penalty, 0.0))
                                              : std::nextafter(cfg.penalty, 0.0);
    return ev;
}

double evaluate_weights(const LqrWeights& w, const SynthConfig& cfg, std::span<const std::uint64_t> seeds) {
    return evaluate_design(w, cfg, cfg.discrete_plant(), run_seeds(cfg).bmi, seeds).cost;
}

NoCertifiedDesignError::NoCertifiedDesignError(Point best_point, double best_value, std::size_t evaluations)
    : std::runtime_error("no certified design found within budget"),
      best_point_(std::move(best_point)),
      best_value_(best_value),
      evaluations_(evaluations) {}

SynthesisResult synthesize(const SynthConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const DiscretePlant d = cfg.discrete_plant();
    const RunSeeds seeds = run_seeds(cfg);
    const auto box = cfg.search_box();

    // Both optimizers may revisit a point (elites, clipped particles).
    std::map<Point, Evaluation> cache;
    std::size_t distinct = 0;
    const Objective objective = [&](const Point& x) {
        auto it = cache.find(x);
        if (it == cache.end()) {
            ++distinct;
            it = cache.emplace(x, evaluate_design(weights_from_point(x), cfg, d, seeds.bmi, seeds.realizations))
                     .first;
        }
        return it->second.cost;
    };

    OptimizationRun run;
    if (cfg.outer == OuterOptimizer::regpso) {
        RegPsoConfig rc = cfg.regpso;
        rc.bounds = box;
        rc.seed = seeds.outer;
        run = regpso_minimize(objective, rc);
    } else {
        GaConfig gc = cfg.ga;
        gc.bounds = box;
        gc.seed = seeds.outer;
        run = ga_minimize(objective, gc);
    }

    const auto it = cache.find(run.best_point);
    if (it == cache.end() || !it->second.certified) {
        throw NoCertifiedDesignError(run.best_point, run.best_value, run.evaluations);
    }
    const Evaluation& best = it->second;

    SynthesisResult out;
    out.weights = weights_from_point(run.best_point);
    out.k = best.design->k;
    const SwitchedClosedLoop cl = closed_loop_phi(d, out.k, cfg.p_tx);
    const StabilityCertificate& found = *best.certificate;
    out.certificate = verify_certificate(cl, found.a1, found.a2, found.p);
    if (!out.certificate.valid()) {
        throw NoCertifiedDesignError(run.best_point, run.best_value, run.evaluations);
    }
    out.expected_cost = expected_itae(d, out.k, sim_setup(cfg), seeds.report);
    out.convergence = run.history;
    out.evaluations = distinct;
    out.outer = cfg.outer;
    out.master_seed = cfg.master_seed;
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::uint64_t run_master_seed(std::uint64_t base, std::size_t run) { return derive_seed(base, run); }

ArmStatistics summarize_runs(OuterOptimizer outer, std::vector<RunEntry> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("summarize_runs: no runs");
    }
    ArmStatistics s;
    s.outer = outer;
    s.runs = std::move(runs);
    std::vector<double> costs;
    for (const auto& r : s.runs) {
        costs.push_back(r.cost);
        if (!r.certified) {
            ++s.failures;
        }
    }
    const double n = static_cast<double>(costs.size());
    s.mean = std::accumulate(costs.begin(), costs.end(), 0.0) / n;
    double ss = 0.0;
    for (double c : costs) {
        ss += (c - s.mean) * (c - s.mean);
    }
    s.std_dev = costs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.best = *std::min_element(costs.begin(), costs.end());
    s.worst = *std::max_element(costs.begin(), costs.end());
    return s;
}

ArmStatistics run_statistics(const SynthConfig& cfg, std::size_t n_runs) {
    if (n_runs < 2) {
        throw std::invalid_argument("run_statistics needs at least two runs");
    }
    std::vector<RunEntry> runs;
    for (std::size_t i = 0; i < n_runs; ++i) {
        SynthConfig c = cfg;
        c.master_seed = run_master_seed(cfg.master_seed, i);
        RunEntry e;
        e.master_seed = c.master_seed;
        try {
            e.result = synthesize(c);
            e.cost = e.result->expected_cost.mean;
            e.certified = true;
        } catch (const NoCertifiedDesignError&) {
            e.cost = cfg.penalty;
        }
        runs.push_back(std::move(e));
    }
    return summarize_runs(cfg.outer, std::move(runs));
}

void write_stats_csv(std::ostream& os, const std::vector<ArmStatistics>& arms) {
    os << "arm,mean,std,best,worst,failures\n";
    os.precision(10);
    for (const auto& a : arms) {
        os << to_string(a.outer) << ',' << a.mean << ',' << a.std_dev << ',' << a.best << ',' << a.worst << ','
           << a.failures << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<double>& convergence) {
    os << "iteration,best_cost\n";
    os.precision(12);
    for (std::size_t i = 0; i < convergence.size(); ++i) {
        os << i << ',' << convergence[i] << '\n';
    }
}

} // namespace ncs
