// ncs-design: gain synthesis for a feedback loop closed over a lossy link.
//
// Exit codes: 0 success (certified design), 2 no certified design,
// 1 configuration or usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ncs/config.hpp"
#include "ncs/seeds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUncertified = 2;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string arm;
    std::size_t runs = 0;
};

ncs::ProblemConfig load(const Options& o) {
    ncs::ProblemConfig pc = o.config_path.empty() ? ncs::parse_config(json::object()) : ncs::load_config(o.config_path);
    if (o.seed) {
        pc.synth.master_seed = *o.seed;
    }
    if (!o.arm.empty()) {
        pc.synth.outer = ncs::parse_outer(o.arm);
    }
    return pc;
}

std::optional<fs::path> out_dir(const Options& o) {
    if (o.out_dir.empty()) {
        return std::nullopt;
    }
    fs::create_directories(o.out_dir);
    return fs::path(o.out_dir);
}

void emit(const json& j, const Options& o, const std::string& name = "result.json") {
    std::cout << j.dump(2) << '\n';
    if (auto dir = out_dir(o)) {
        std::ofstream(*dir / name) << j.dump(2) << '\n';
    }
}

// Gain from the config, or from its LQR weights.
ncs::Matrix resolve_gain(const ncs::ProblemConfig& pc, const ncs::DiscretePlant& d) {
    if (pc.gain) {
        return *pc.gain;
    }
    if (pc.weights) {
        return ncs::solve_dare(d, *pc.weights).k;
    }
    throw ncs::ConfigError("this command needs a 'gain' or an 'lqr' section");
}

int cmd_discretize(const Options& o) {
    const auto pc = load(o);
    const auto d = pc.synth.discrete_plant();
    emit({{"sample_time", d.sample_time}, {"g", ncs::to_json(d.g)}, {"h", ncs::to_json(d.h)}, {"c", ncs::to_json(d.c)}},
         o);
    return kExitOk;
}

int cmd_lqr(const Options& o) {
    const auto pc = load(o);
    if (!pc.weights) {
        throw ncs::ConfigError("lqr needs an 'lqr' section with q and r");
    }
    const auto d = pc.synth.discrete_plant();
    const auto des = ncs::solve_dare(d, *pc.weights);
    emit({{"gain", ncs::to_json(des.k)},
          {"p", ncs::to_json(des.p)},
          {"iterations", des.iterations},
          {"residual", des.residual},
          {"nominal_spectral_radius", des.nominal_spectral_radius}},
         o);
    return kExitOk;
}

int cmd_certify(const Options& o) {
    const auto pc = load(o);
    const auto d = pc.synth.discrete_plant();
    const auto k = resolve_gain(pc, d);
    ncs::CertifyOptions opts;
    opts.ga = ncs::default_bmi_ga_config(ncs::derive_seed(pc.synth.master_seed, "bmi"));
    opts.ga.max_generations = pc.synth.bmi_generations;
    opts.lmi_budget = pc.synth.lmi_budget;
    const auto res = ncs::certify_gain(d, k, pc.synth.p_tx, opts);
    json j{{"gain", ncs::to_json(k)},
           {"certified", res.certified},
           {"generations_used", res.generations_used},
           {"evaluations", res.evaluations}};
    if (res.certificate) {
        j["certificate"] = ncs::to_json(*res.certificate);
    }
    emit(j, o);
    return res.certified ? kExitOk : kExitUncertified;
}

int cmd_simulate(const Options& o) {
    const auto pc = load(o);
    const auto d = pc.synth.discrete_plant();
    const auto k = resolve_gain(pc, d);
    const std::size_t runs = o.runs > 0 ? o.runs : pc.synth.report_realizations;
    ncs::SimSetup setup = pc.synth.sim;
    setup.p_tx = pc.synth.p_tx;
    const auto seeds = ncs::realization_seeds(pc.synth.master_seed, runs);
    const auto estimate = ncs::expected_itae(d, k, setup, seeds);
    if (auto dir = out_dir(o)) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            std::ofstream csv(*dir / ("trace_" + std::to_string(i) + ".csv"));
            ncs::write_trace_csv(csv, ncs::simulate_once(d, k, setup, seeds[i]));
        }
    }
    emit({{"gain", ncs::to_json(k)}, {"expected_cost", ncs::to_json(estimate)}}, o);
    return kExitOk;
}

int cmd_synthesize(const Options& o) {
    const auto pc = load(o);
    try {
        const auto result = ncs::synthesize(pc.synth);
        if (auto dir = out_dir(o)) {
            std::ofstream csv(*dir / "convergence.csv");
            ncs::write_convergence_csv(csv, result.convergence);
        }
        emit(ncs::to_json(result), o);
        return kExitOk;
    } catch (const ncs::NoCertifiedDesignError& e) {
        std::cerr << e.what() << " (best objective " << e.best_value() << " after " << e.evaluations()
                  << " evaluations)\n";
        return kExitUncertified;
    }
}

int cmd_compare(const Options& o) {
    auto pc = load(o);
    const std::size_t runs = o.runs > 0 ? o.runs : 10;
    std::vector<ncs::ArmStatistics> arms;
    json detail = json::array();
    for (const auto outer : {ncs::OuterOptimizer::regpso, ncs::OuterOptimizer::ga}) {
        pc.synth.outer = outer;
        auto stats = ncs::run_statistics(pc.synth, runs);
        for (const auto& r : stats.runs) {
            json e{{"arm", ncs::to_string(outer)}, {"master_seed", r.master_seed}, {"cost", r.cost},
                   {"certified", r.certified}};
            if (r.result) {
                e["result"] = ncs::to_json(*r.result);
            }
            detail.push_back(e);
        }
        std::cerr << ncs::to_string(outer) << ": mean " << stats.mean << " std " << stats.std_dev << " best "
                  << stats.best << " worst " << stats.worst << " failures " << stats.failures << '\n';
        arms.push_back(std::move(stats));
    }
    ncs::write_stats_csv(std::cout, arms);
    if (auto dir = out_dir(o)) {
        std::ofstream csv(*dir / "stats.csv");
        ncs::write_stats_csv(csv, arms);
        std::ofstream(*dir / "result.json") << detail.dump(2) << '\n';
    }
    for (const auto& a : arms) {
        if (a.failures > 0) {
            return kExitUncertified;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LQR gain synthesis for networked control under packet loss"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "master seed (overrides the config)");
        sub->add_option("--out", opts.out_dir, "output directory");
    };

    int code = kExitOk;
    auto wrap = [&](int (*fn)(const Options&)) { return [&code, &opts, fn] { code = fn(opts); }; };

    auto* disc = app.add_subcommand("discretize", "zero-order-hold discretization");
    add_common(disc);
    disc->callback(wrap(cmd_discretize));

    auto* lqr = app.add_subcommand("lqr", "discrete LQR gain for the configured weights");
    add_common(lqr);
    lqr->callback(wrap(cmd_lqr));

    auto* cert = app.add_subcommand("certify", "search a stability certificate for a gain");
    add_common(cert);
    cert->callback(wrap(cmd_certify));

    auto* sim = app.add_subcommand("simulate", "Monte Carlo runs under packet loss");
    add_common(sim);
    sim->add_option("--runs", opts.runs, "number of realizations");
    sim->callback(wrap(cmd_simulate));

    auto* syn = app.add_subcommand("synthesize", "optimize LQR weights for a certified low-ITAE gain");
    add_common(syn);
    syn->add_option("--arm", opts.arm, "outer optimizer")->check(CLI::IsMember({"regpso", "ga"}));
    syn->callback(wrap(cmd_synthesize));

    auto* cmp = app.add_subcommand("compare", "repeated synthesis with both outer optimizers");
    add_common(cmp);
    cmp->add_option("--runs", opts.runs, "runs per arm (default 10)");
    cmp->callback(wrap(cmd_compare));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const ncs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ncs::DareError& e) {
        std::cerr << "riccati solver failed: " << e.what() << '\n';
        return kExitUncertified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return code;
}
