// Acceptance checks. `acceptance <n>` runs criterion n (1-8) and prints one
// line "criterion <n>: PASS|FAIL <details>"; the exit status is 0 on PASS.
// Without an argument every criterion runs in turn.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "ncs/bmi_stab.hpp"
#include "ncs/config.hpp"
#include "ncs/ga.hpp"
#include "ncs/lqr.hpp"
#include "ncs/regpso.hpp"
#include "ncs/seeds.hpp"
#include "ncs/sim.hpp"
#include "ncs/synth.hpp"
#include "oracles.hpp"

using namespace ncs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Discretization against the closed form, under 1 ms.
Outcome criterion_1() {
    const auto z = oracle::reference_zoh(0.3);
    const auto start = Clock::now();
    DiscretePlant d;
    constexpr int reps = 100;
    for (int i = 0; i < reps; ++i) {
        d = discretize_zoh(reference_plant(), 0.3);
    }
    const double per_call = seconds_since(start) / reps;
    const double err = std::max({std::abs(d.g(0, 0) - 1.0), std::abs(d.g(0, 1) - z.g12), std::abs(d.g(1, 0)),
                                 std::abs(d.g(1, 1) - z.g22), std::abs(d.h(0, 0) - z.h1),
                                 std::abs(d.h(1, 0) - z.h2)});
    const bool printed = std::abs(d.g(0, 1) - 0.295545) < 1e-6 && std::abs(d.g(1, 1) - 0.970446) < 1e-6 &&
                         std::abs(d.h(0, 0) - 0.004455) < 1e-6 && std::abs(d.h(1, 0) - 0.029554) < 1e-6;
    return {err < 1e-6 && printed && per_call < 1e-3,
            fmt("max error vs closed form %.2e (tol 1e-6), printed digits match %s, %.1f us per call (limit 1 ms)",
                err, printed ? "yes" : "no", per_call * 1e6)};
}

// Published gains from published weights within 1e-3, under 1 s each.
Outcome criterion_2() {
    const auto d = discretize_zoh(reference_plant(), 0.3);
    bool pass = true;
    std::string detail;
    for (const auto* p : {&oracle::kGaGa, &oracle::kRegPsoGa}) {
        const auto start = Clock::now();
        const auto des = solve_dare(d, LqrWeights{{p->q[0], p->q[1]}, p->r});
        const double t = seconds_since(start);
        const double e0 = std::abs(des.k(0, 0) - p->k[0]);
        const double e1 = std::abs(des.k(0, 1) - p->k[1]);
        const bool ok = e0 <= 1e-3 && e1 <= 1e-3 && t < 1.0;
        pass = pass && ok;
        detail += fmt("[K = %.6f %.6f vs %.5f %.5f, errors %.2e %.2e (tol 1e-3), %.2f ms] ", des.k(0, 0),
                      des.k(0, 1), p->k[0], p->k[1], e0, e1, t * 1e3);
    }
    return {pass, detail};
}

// The two printed Lyapunov matrices verify on the reconstructed loops.
Outcome criterion_3() {
    const auto d = discretize_zoh(reference_plant(), 0.3);
    bool pass = true;
    std::string detail;
    for (const auto* p : {&oracle::kGaGa, &oracle::kRegPsoGa}) {
        const Matrix pt = oracle::lyapunov(*p);
        const double floor = 1e-2 * norm2(pt);
        const auto cl = closed_loop_phi(d, oracle::gain(*p), 0.7);
        const auto cert = verify_certificate(cl, p->a1, p->a2, pt, floor);
        const double lmin = min_eigenvalue(cert.p);
        const bool ok = std::abs(lmin - p->eig[0]) <= 1e-3 && cert.margin_p >= 0.0 && cert.margin1 >= -floor &&
                        cert.margin2 >= -floor && std::abs(cert.decay_product - p->decay) <= 1e-3;
        pass = pass && ok;
        detail += fmt("[lambda_min %.4f vs %.4f, margins %.4f %.4f (floor -%.3f), decay %.5f vs %.4f] ", lmin,
                      p->eig[0], cert.margin1, cert.margin2, floor, cert.decay_product, p->decay);
    }
    return {pass, detail};
}

// GA-driven certification: >= 9/10 for the first published gain, 0/10 for K = 0.
Outcome criterion_4() {
    const auto d = discretize_zoh(reference_plant(), 0.3);
    int certified = 0;
    int zero_certified = 0;
    double slowest = 0.0;
    int max_generations = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CertifyOptions o;
        o.ga = default_bmi_ga_config(seed);
        auto start = Clock::now();
        const auto r = certify_gain(d, oracle::gain(oracle::kGaGa), 0.7, o);
        slowest = std::max(slowest, seconds_since(start));
        if (r.certified && r.certificate && r.certificate->decay_product > 1.0 && r.generations_used <= 50) {
            ++certified;
        }
        max_generations = std::max(max_generations, r.generations_used);
        start = Clock::now();
        const auto z = certify_gain(d, Matrix(1, 2), 0.7, o);
        slowest = std::max(slowest, seconds_since(start));
        zero_certified += z.certified ? 1 : 0;
    }
    return {certified >= 9 && zero_certified == 0 && slowest < 30.0,
            fmt("published gain certified %d/10 (need >= 9, max %d generations), zero gain certified %d/10 (need 0), "
                "slowest run %.2f s (limit 30 s)",
                certified, max_generations, zero_certified, slowest)};
}

// Ordering of the two published gains under common random numbers.
Outcome criterion_5() {
    const auto d = discretize_zoh(reference_plant(), 0.3);
    const SimSetup setup{0.7, 1.0, 100};
    const auto seeds = realization_seeds(derive_seed(1, "acceptance-ordering"), 200);
    const double first = expected_itae(d, oracle::gain(oracle::kGaGa), setup, seeds).mean;
    const double second = expected_itae(d, oracle::gain(oracle::kRegPsoGa), setup, seeds).mean;
    return {second < first, fmt("mean ITAE second design %.4f < first design %.4f (N = 100, M = 200)", second, first)};
}

// Two-arm comparison at desk scale with equal budgets.
Outcome criterion_6() {
    SynthConfig cfg;
    cfg.regpso.swarm_size = 12;
    cfg.regpso.max_iterations = 20;
    cfg.ga.population_size = 12;
    cfg.ga.max_generations = 20;
    cfg.master_seed = 2024;
    const auto start = Clock::now();
    std::vector<ArmStatistics> arms;
    for (auto outer : {OuterOptimizer::regpso, OuterOptimizer::ga}) {
        cfg.outer = outer;
        arms.push_back(run_statistics(cfg, 10));
    }
    const double elapsed = seconds_since(start);

    bool all_verified = true;
    for (const auto& arm : arms) {
        for (const auto& run : arm.runs) {
            if (!run.result) {
                all_verified = false;
                continue;
            }
            const auto cl = closed_loop_phi(cfg.discrete_plant(), run.result->k, cfg.p_tx);
            const auto& c = run.result->certificate;
            all_verified = all_verified && verify_certificate(cl, c.a1, c.a2, c.p).valid();
        }
    }
    return {arms[0].mean <= arms[1].mean && all_verified && elapsed <= 1800.0,
            fmt("mean best cost regpso %.4f (std %.4f) vs ga %.4f (std %.4f), all designs re-verified %s, "
                "%.0f s total (limit 1800 s)",
                arms[0].mean, arms[0].std_dev, arms[1].mean, arms[1].std_dev, all_verified ? "yes" : "no", elapsed)};
}

// Tracking and boundedness of the second published gain.
Outcome criterion_7() {
    const auto d = discretize_zoh(reference_plant(), 0.3);
    const SimSetup setup{0.7, 1.0, 100};
    int settled = 0;
    double peak = 0.0;
    const auto seeds = realization_seeds(derive_seed(1, "acceptance-tracking"), 200);
    for (auto seed : seeds) {
        const auto tr = simulate_once(d, oracle::gain(oracle::kRegPsoGa), setup, seed);
        settled += std::abs(tr.y[100] - 1.0) < 0.05 ? 1 : 0;
        for (const auto& x : tr.x) {
            peak = std::max(peak, frobenius_norm(x));
        }
    }
    const double fraction = settled / 200.0;
    return {fraction >= 0.95 && peak < 1e3,
            fmt("|y(100) - 1| < 0.05 in %.1f%% of 200 runs (need 95%%), max |x| %.3f (limit 1e3)", fraction * 100.0,
                peak)};
}

// Always-on property suites, condensed.
Outcome criterion_8() {
    std::vector<std::string> failed;
    auto require = [&](bool ok, const char* name) {
        if (!ok) {
            failed.emplace_back(name);
        }
    };
    std::mt19937_64 rng(8);
    const auto d = discretize_zoh(reference_plant(), 0.3);

    // Simulator equals the realized product of switching matrices.
    {
        const Matrix k = oracle::gain(oracle::kRegPsoGa);
        const auto cl = closed_loop_phi(d, k, 0.7);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const Matrix x0 = oracle::random_matrix(rng, 2, 1);
            const auto tr = simulate_once(d, k, SimSetup{0.7, 0.0, 100}, seed, x0);
            Matrix z(4, 1);
            z.set_block(0, 0, x0);
            z.set_block(2, 0, x0);
            for (std::size_t s = 1; s <= 100; ++s) {
                z = (tr.dropped[s] ? cl.phi2 : cl.phi1) * z;
                Matrix got(4, 1);
                got.set_block(0, 0, tr.x[s]);
                got.set_block(2, 0, tr.x_bar[s]);
                worst = std::max(worst, frobenius_norm(got - z));
            }
        }
        require(worst <= 1e-12, "switched-matrix equivalence");
    }
    // DARE residual.
    {
        std::uniform_real_distribution<double> w(-2.0, 2.0);
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            const LqrWeights lw{{std::pow(10.0, w(rng)), std::pow(10.0, w(rng))}, std::pow(10.0, w(rng))};
            const auto des = solve_dare(d, lw);
            ok = ok && des.residual <= 1e-9 * (1.0 + frobenius_norm(des.p));
        }
        require(ok, "dare residual");
    }
    // Eigen reconstruction.
    {
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            const std::size_t n = 1 + static_cast<std::size_t>(i % 8);
            const Matrix m = oracle::random_symmetric(rng, n, 5.0);
            const auto e = sym_eig(m);
            const Matrix back = e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
            ok = ok && frobenius_norm(m - back) <= 1e-10 * (1.0 + frobenius_norm(m)) &&
                 frobenius_norm(e.vectors.transpose() * e.vectors - Matrix::identity(n)) <= 1e-10;
        }
        require(ok, "eigen reconstruction");
    }
    // RegPSO identities: clamp, regroup bounds, rho * epsilon.
    {
        RegPsoConfig c;
        c.bounds = {{-5.12, 5.12}, {-5.12, 5.12}};
        c.max_iterations = 300;
        c.seed = 4;
        require(c.regroup_factor() * c.stagnation_threshold == 6.0 / 5.0, "rho * epsilon = 6/5");
        const Objective rastrigin = [](const Point& x) {
            double s = 20.0;
            for (double v : x) {
                s += v * v - 10.0 * std::cos(2.0 * 3.14159265358979323846 * v);
            }
            return s;
        };
        SwarmState s = regpso_init(rastrigin, c);
        bool clamp_ok = true;
        bool regroup_ok = true;
        int regroups = 0;
        for (int it = 0; it < c.max_iterations; ++it) {
            s = pso_step(std::move(s), c, rastrigin);
            for (const auto& v : s.velocities) {
                for (std::size_t j = 0; j < v.size(); ++j) {
                    clamp_ok = clamp_ok && std::abs(v[j]) <= c.clamp_fraction * s.box[j].range();
                }
            }
            if (swarm_radius(s, c).normalized < c.stagnation_threshold) {
                s = regroup(std::move(s), c);
                ++regroups;
                for (const auto& x : s.positions) {
                    for (std::size_t j = 0; j < x.size(); ++j) {
                        regroup_ok = regroup_ok && s.box[j].contains(x[j]) && c.bounds[j].contains(x[j]);
                    }
                }
            }
        }
        require(clamp_ok, "velocity clamp");
        require(regroup_ok && regroups > 0, "regroup bounds");
    }
    // GA elitism.
    {
        GaConfig c;
        c.bounds = {{-3, 3}, {-3, 3}};
        c.max_generations = 60;
        c.seed = 6;
        const auto run = ga_minimize([](const Point& x) { return std::sin(3 * x[0]) + x[1] * x[1]; }, c);
        bool ok = true;
        for (std::size_t i = 1; i < run.history.size(); ++i) {
            ok = ok && run.history[i] <= run.history[i - 1];
        }
        require(ok, "elitism monotonicity");
    }
    // Determinism of a full synthesis run.
    {
        SynthConfig c;
        c.regpso.swarm_size = 5;
        c.regpso.max_iterations = 3;
        c.realizations = 5;
        c.report_realizations = 10;
        c.master_seed = 99;
        const auto a = synthesize(c);
        const auto b = synthesize(c);
        require(a.k == b.k && a.certificate.p == b.certificate.p && a.convergence == b.convergence &&
                    a.expected_cost.per_realization == b.expected_cost.per_realization,
                "run determinism");
    }

    std::string detail = failed.empty() ? "all property suites hold" : "failed:";
    for (const auto& f : failed) {
        detail += " " + f + ";";
    }
    return {failed.empty(), detail};
}

int run(int n) {
    static const std::function<Outcome()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                        criterion_5, criterion_6, criterion_7, criterion_8};
    Outcome o;
    try {
        o = criteria[n - 1]();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 8) {
            std::fprintf(stderr, "usage: %s [1-8]\n", argv[0]);
            return 2;
        }
        return run(n);
    }
    int failures = 0;
    for (int n = 1; n <= 8; ++n) {
        failures += run(n);
    }
    return failures == 0 ? 0 : 1;
}
