#include "ncs/bmi_stab.hpp"

namespace ncs {

GaConfig default_bmi_ga_config(std::uint64_t seed) {
    GaConfig cfg;
    cfg.population_size = 20;
    cfg.elite_count = 2;
    cfg.crossover_ratio = 0.8;
    cfg.mutation_ratio = 0.2;
    cfg.max_generations = 50;
    cfg.bounds = {kA1Bounds, kA2Bounds};
    cfg.seed = seed;
    return cfg;
}

double bmi_fitness(double a1, double a2, const SwitchedClosedLoop& cl, int lmi_budget) {
    const LmiSearchResult search = search_lyapunov_matrix(cl, a1, a2, lmi_budget);
    if (search.feasible()) {
        return 1.0 - decay_product(a1, a2, cl.p_tx);
    }
    return 1.0 + search.best_violation;
}

StabilityResult certify_gain(const DiscretePlant& d, const Matrix& k, double p_tx, const CertifyOptions& options) {
    const SwitchedClosedLoop cl = closed_loop_phi(d, k, p_tx);
    const Objective fitness = [&](const Point& x) { return bmi_fitness(x[0], x[1], cl, options.lmi_budget); };
    std::function<bool(double)> stop;
    if (!options.refine) {
        stop = [](double f) { return f < 0.0; };
    }
    const GaRun run = ga_minimize(fitness, options.ga, stop);

    StabilityResult result;
    result.generations_used = run.iterations;
    result.evaluations = run.evaluations;
    result.history = run.history;
    if (!(run.best_value < 0.0)) {
        return result;
    }
    const double a1 = run.best_point[0];
    const double a2 = run.best_point[1];
    const auto p = find_feasible_p(cl, a1, a2, options.lmi_budget);
    if (!p) {
        return result;
    }
    StabilityCertificate cert = verify_certificate(cl, a1, a2, *p);
    result.certified = cert.valid();
    result.certificate = std::move(cert);
    return result;
}

} // namespace ncs
