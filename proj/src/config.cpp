#include "ncs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ncs {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

std::vector<double> flat_numbers(const json& j, const std::string& where) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
        return out;
    }
    if (!j.is_array()) {
        throw ConfigError(where + ": expected a number list");
    }
    for (const auto& e : j) {
        if (e.is_array()) {
            for (const auto& v : e) {
                if (!v.is_number()) {
                    throw ConfigError(where + ": non-numeric entry");
                }
                out.push_back(v.get<double>());
            }
        } else if (e.is_number()) {
            out.push_back(e.get<double>());
        } else {
            throw ConfigError(where + ": non-numeric entry");
        }
    }
    return out;
}

Matrix square_matrix(const json& j, const std::string& where) {
    const auto v = flat_numbers(j, where);
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n == 0 || n * n != v.size()) {
        throw ConfigError(where + ": entry count is not a perfect square");
    }
    return Matrix(n, n, v);
}

// rows x (len / rows) or (len / cols) x cols, whichever is fixed.
Matrix matrix_with_rows(const json& j, std::size_t rows, const std::string& where) {
    const auto v = flat_numbers(j, where);
    if (v.empty() || v.size() % rows != 0) {
        throw ConfigError(where + ": entry count must be a multiple of " + std::to_string(rows));
    }
    return Matrix(rows, v.size() / rows, v);
}

Matrix matrix_with_cols(const json& j, std::size_t cols, const std::string& where) {
    const auto v = flat_numbers(j, where);
    if (v.empty() || v.size() % cols != 0) {
        throw ConfigError(where + ": entry count must be a multiple of " + std::to_string(cols));
    }
    return Matrix(v.size() / cols, cols, v);
}

template <typename T>
void read(const json& j, const char* key, T& target, const std::string& where) {
    if (!j.contains(key)) {
        return;
    }
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

void parse_plant(const json& j, SynthConfig& cfg) {
    reject_unknown(j, {"a", "b", "c", "g", "h"}, "plant");
    const bool continuous = j.contains("a");
    const bool discrete = j.contains("g");
    if (continuous == discrete) {
        throw ConfigError("plant: give either a (continuous) or g (discrete)");
    }
    const char* state_key = continuous ? "a" : "g";
    const char* input_key = continuous ? "b" : "h";
    if (!j.contains(input_key) || !j.contains("c")) {
        throw ConfigError(std::string("plant: missing ") + input_key + " or c");
    }
    const Matrix state = square_matrix(j.at(state_key), std::string("plant.") + state_key);
    const std::size_t n = state.rows();
    const Matrix input = matrix_with_rows(j.at(input_key), n, std::string("plant.") + input_key);
    const Matrix output = matrix_with_cols(j.at("c"), n, "plant.c");
    if (continuous) {
        cfg.plant = ContinuousPlant{state, input, output};
    } else {
        cfg.plant = DiscretePlant{state, input, output, cfg.sample_time};
    }
}

} // namespace

ProblemConfig parse_config(const json& j) {
    reject_unknown(j,
                   {"plant", "sample_time", "p_tx", "outer", "penalty", "master_seed", "weight_bounds", "regpso", "ga",
                    "bmi", "sim", "lqr", "gain"},
                   "config");
    ProblemConfig pc;
    SynthConfig& cfg = pc.synth;
    read(j, "sample_time", cfg.sample_time, "config");
    read(j, "p_tx", cfg.p_tx, "config");
    read(j, "penalty", cfg.penalty, "config");
    read(j, "master_seed", cfg.master_seed, "config");
    if (j.contains("outer")) {
        try {
            cfg.outer = parse_outer(j.at("outer").get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config.outer: ") + e.what());
        }
    }
    if (j.contains("plant")) {
        parse_plant(j.at("plant"), cfg);
    }
    if (auto* d = std::get_if<DiscretePlant>(&cfg.plant)) {
        d->sample_time = cfg.sample_time;
    }
    if (j.contains("weight_bounds")) {
        const auto& wb = j.at("weight_bounds");
        if (!wb.is_array()) {
            throw ConfigError("weight_bounds: expected a list of [lo, hi] pairs");
        }
        for (const auto& pair : wb) {
            const auto v = flat_numbers(pair, "weight_bounds");
            if (v.size() != 2) {
                throw ConfigError("weight_bounds: each entry must be [lo, hi]");
            }
            cfg.weight_bounds.push_back({v[0], v[1]});
        }
    }
    if (j.contains("regpso")) {
        const auto& r = j.at("regpso");
        reject_unknown(r,
                       {"swarm_size", "max_iterations", "inertia", "c1", "c2", "clamp_fraction",
                        "stagnation_threshold"},
                       "regpso");
        read(r, "swarm_size", cfg.regpso.swarm_size, "regpso");
        read(r, "max_iterations", cfg.regpso.max_iterations, "regpso");
        read(r, "inertia", cfg.regpso.inertia, "regpso");
        read(r, "c1", cfg.regpso.c1, "regpso");
        read(r, "c2", cfg.regpso.c2, "regpso");
        read(r, "clamp_fraction", cfg.regpso.clamp_fraction, "regpso");
        read(r, "stagnation_threshold", cfg.regpso.stagnation_threshold, "regpso");
    }
    if (j.contains("ga")) {
        const auto& g = j.at("ga");
        reject_unknown(g, {"population_size", "elite_count", "crossover_ratio", "mutation_ratio", "max_generations"},
                       "ga");
        read(g, "population_size", cfg.ga.population_size, "ga");
        read(g, "elite_count", cfg.ga.elite_count, "ga");
        read(g, "crossover_ratio", cfg.ga.crossover_ratio, "ga");
        read(g, "mutation_ratio", cfg.ga.mutation_ratio, "ga");
        read(g, "max_generations", cfg.ga.max_generations, "ga");
    }
    if (j.contains("bmi")) {
        const auto& b = j.at("bmi");
        reject_unknown(b, {"generations", "lmi_budget"}, "bmi");
        read(b, "generations", cfg.bmi_generations, "bmi");
        read(b, "lmi_budget", cfg.lmi_budget, "bmi");
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        reject_unknown(s, {"horizon", "ref_amplitude", "realizations", "report_realizations"}, "sim");
        read(s, "horizon", cfg.sim.horizon, "sim");
        read(s, "ref_amplitude", cfg.sim.ref_amplitude, "sim");
        read(s, "realizations", cfg.realizations, "sim");
        read(s, "report_realizations", cfg.report_realizations, "sim");
    }
    cfg.sim.p_tx = cfg.p_tx;

    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const DiscretePlant d = cfg.discrete_plant();

    if (j.contains("lqr")) {
        const auto& l = j.at("lqr");
        reject_unknown(l, {"q", "r"}, "lqr");
        LqrWeights w;
        if (l.contains("q")) {
            w.q_diag = flat_numbers(l.at("q"), "lqr.q");
        } else {
            w.q_diag.assign(d.states(), 1.0);
        }
        read(l, "r", w.r_value, "lqr");
        if (w.q_diag.size() != d.states()) {
            throw ConfigError("lqr.q: need one weight per state");
        }
        try {
            w.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("lqr: ") + e.what());
        }
        pc.weights = w;
    }
    if (j.contains("gain")) {
        const Matrix k = matrix_with_cols(j.at("gain"), d.states(), "gain");
        if (k.rows() != d.inputs()) {
            throw ConfigError("gain: expected inputs x states entries");
        }
        pc.gain = k;
    }
    return pc;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

json to_json(const StabilityCertificate& c) {
    return json{{"a1", c.a1},
                {"a2", c.a2},
                {"p_tx", c.p_tx},
                {"decay_product", c.decay_product},
                {"margin_p", c.margin_p},
                {"margin1", c.margin1},
                {"margin2", c.margin2},
                {"tol_lmi", c.tol_lmi},
                {"valid", c.valid()},
                {"p", to_json(c.p)}};
}

json to_json(const CostEstimate& c) {
    return json{{"mean", c.mean},
                {"std_dev", c.std_dev},
                {"realizations", c.realizations},
                {"per_realization", c.per_realization}};
}

json to_json(const SynthesisResult& r) {
    return json{{"outer", to_string(r.outer)},
                {"master_seed", r.master_seed},
                {"weights", {{"q", r.weights.q_diag}, {"r", r.weights.r_value}}},
                {"gain", to_json(r.k)},
                {"certificate", to_json(r.certificate)},
                {"expected_cost", to_json(r.expected_cost)},
                {"convergence", r.convergence},
                {"evaluations", r.evaluations},
                {"wall_time", r.wall_time}};
}

} // namespace ncs
