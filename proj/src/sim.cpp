#include "ncs/sim.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "ncs/seeds.hpp"

namespace ncs {

namespace {

void validate_setup(const DiscretePlant& d, const Matrix& k, const SimSetup& setup) {
    d.validate();
    if (k.rows() != d.inputs() || k.cols() != d.states()) {
        throw DimensionError("simulate: gain has the wrong shape");
    }
    if (!(setup.p_tx > 0.0 && setup.p_tx <= 1.0)) {
        throw std::invalid_argument("simulate: transmission probability must lie in (0, 1]");
    }
    if (setup.horizon < 1) {
        throw std::invalid_argument("simulate: horizon must be at least one step");
    }
}

} // namespace

SimTrace simulate_once(const DiscretePlant& d, const Matrix& k, const SimSetup& setup, std::uint64_t seed) {
    return simulate_once(d, k, setup, seed, Matrix(d.states(), 1));
}

SimTrace simulate_once(const DiscretePlant& d, const Matrix& k, const SimSetup& setup, std::uint64_t seed,
                       const Matrix& x0) {
    validate_setup(d, k, setup);
    if (x0.rows() != d.states() || x0.cols() != 1) {
        throw DimensionError("simulate: initial state has the wrong shape");
    }
    const auto steps = static_cast<std::size_t>(setup.horizon);
    Matrix x_ref(d.states(), 1);
    x_ref(0, 0) = setup.ref_amplitude;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double drop_probability = 1.0 - setup.p_tx;

    SimTrace tr;
    tr.sample_time = d.sample_time;
    tr.ref_amplitude = setup.ref_amplitude;
    tr.x.reserve(steps + 1);
    tr.x_bar.reserve(steps + 1);
    tr.u.reserve(steps + 1);

    tr.x.push_back(x0);
    tr.x_bar.push_back(x0);
    tr.dropped.push_back(false);
    for (std::size_t step = 0; step < steps; ++step) {
        Matrix u = -(k * (tr.x_bar.back() - x_ref));
        Matrix next = d.g * tr.x.back() + d.h * u;
        tr.u.push_back(std::move(u));
        const bool lost = unit(rng) < drop_probability;
        tr.x_bar.push_back(lost ? tr.x_bar.back() : next);
        tr.x.push_back(std::move(next));
        tr.dropped.push_back(lost);
    }
    tr.u.push_back(-(k * (tr.x_bar.back() - x_ref)));
    tr.y.reserve(steps + 1);
    for (const auto& x : tr.x) {
        tr.y.push_back((d.c * x)(0, 0));
    }
    return tr;
}

double itae_cost(const SimTrace& trace) {
    double j = 0.0;
    for (std::size_t step = 1; step < trace.y.size(); ++step) {
        j += static_cast<double>(step) * std::abs(trace.ref_amplitude - trace.y[step]);
    }
    return j;
}

std::vector<std::uint64_t> realization_seeds(std::uint64_t seed_base, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) {
        seeds[i] = derive_seed(seed_base, i);
    }
    return seeds;
}

CostEstimate expected_itae(const DiscretePlant& d, const Matrix& k, const SimSetup& setup,
                           std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) {
        throw std::invalid_argument("expected_itae: need at least one realization");
    }
    CostEstimate est;
    est.realizations = seeds.size();
    est.per_realization.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        est.per_realization.push_back(itae_cost(simulate_once(d, k, setup, seed)));
    }
    double sum = 0.0;
    for (double j : est.per_realization) {
        sum += j;
    }
    est.mean = sum / static_cast<double>(seeds.size());
    if (seeds.size() > 1) {
        double ss = 0.0;
        for (double j : est.per_realization) {
            ss += (j - est.mean) * (j - est.mean);
        }
        est.std_dev = std::sqrt(ss / static_cast<double>(seeds.size() - 1));
    }
    return est;
}

CostEstimate expected_itae(const DiscretePlant& d, const Matrix& k, const SimSetup& setup, std::size_t realizations,
                           std::uint64_t seed_base) {
    const auto seeds = realization_seeds(seed_base, realizations);
    return expected_itae(d, k, setup, seeds);
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
    if (trace.x.empty()) {
        return;
    }
    const std::size_t n = trace.x.front().rows();
    const std::size_t m = trace.u.front().rows();
    os << "k,t";
    for (std::size_t i = 0; i < n; ++i) {
        os << ",x" << i + 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        os << ",xbar" << i + 1;
    }
    if (m == 1) {
        os << ",u";
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            os << ",u" << i + 1;
        }
    }
    os << ",y,dropped\n";
    const auto old_precision = os.precision(12);
    for (std::size_t step = 0; step < trace.x.size(); ++step) {
        os << step << ',' << static_cast<double>(step) * trace.sample_time;
        for (std::size_t i = 0; i < n; ++i) {
            os << ',' << trace.x[step](i, 0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            os << ',' << trace.x_bar[step](i, 0);
        }
        for (std::size_t i = 0; i < m; ++i) {
            os << ',' << trace.u[step](i, 0);
        }
        os << ',' << trace.y[step] << ',' << (trace.dropped[step] ? 1 : 0) << '\n';
    }
    os.precision(old_precision);
}

} // namespace ncs
