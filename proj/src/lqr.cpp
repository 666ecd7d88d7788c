#include "ncs/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncs {

namespace {

Matrix riccati_map(const Matrix& p, const Matrix& g, const Matrix& h, const Matrix& q, const Matrix& r) {
    const Matrix gt = g.transpose();
    const Matrix ht = h.transpose();
    const Matrix hpg = ht * p * g;
    const Matrix s = symmetrize(r + ht * p * h);
    return symmetrize(q + gt * p * g - hpg.transpose() * solve_spd(s, hpg));
}

} // namespace

void LqrWeights::validate() const {
    if (q_diag.empty()) {
        throw std::invalid_argument("LQR weights: empty state weight vector");
    }
    bool any_positive = false;
    for (double v : q_diag) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("LQR weights: state weights must be finite and non-negative");
        }
        any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) {
        throw std::invalid_argument("LQR weights: at least one state weight must be positive");
    }
    if (!(r_value > 0.0) || !std::isfinite(r_value)) {
        throw std::invalid_argument("LQR weights: control weight must be positive");
    }
}

Matrix lqr_gain(const Matrix& p, const DiscretePlant& d, const LqrWeights& w) {
    const Matrix ht = d.h.transpose();
    const Matrix s = symmetrize(w.r(d.inputs()) + ht * p * d.h);
    return solve_spd(s, ht * p * d.g);
}

double riccati_residual(const Matrix& p, const DiscretePlant& d, const LqrWeights& w) {
    return frobenius_norm(p - riccati_map(p, d.g, d.h, w.q(), w.r(d.inputs())));
}

LqrDesign solve_dare(const DiscretePlant& d, const LqrWeights& w, const DareOptions& opts) {
    d.validate();
    w.validate();
    if (w.q_diag.size() != d.states()) {
        throw DimensionError("solve_dare: expected " + std::to_string(d.states()) + " state weights");
    }
    const Matrix q = w.q();
    const Matrix r = w.r(d.inputs());

    Matrix p = q;
    double step = 0.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        Matrix next;
        try {
            next = riccati_map(p, d.g, d.h, q, r);
        } catch (const NotSpdError&) {
            throw DareError("DARE did not converge: R + H'PH lost positive definiteness", step);
        }
        if (!next.all_finite()) {
            throw DareError("DARE did not converge: iterate diverged", step);
        }
        step = frobenius_norm(next - p);
        p = std::move(next);
        if (step <= opts.tolerance * (1.0 + frobenius_norm(p))) {
            break;
        }
    }
    if (it == opts.max_iterations) {
        throw DareError("DARE did not converge within " + std::to_string(opts.max_iterations) +
                            " iterations (last step " + std::to_string(step) + ")",
                        step);
    }

    LqrDesign design;
    design.weights = w;
    design.p = p;
    design.k = lqr_gain(p, d, w);
    design.iterations = it + 1;
    design.residual = riccati_residual(p, d, w);
    design.nominal_spectral_radius = spectral_radius_estimate(d.g - d.h * design.k);
    if (!(design.nominal_spectral_radius < 1.0)) {
        throw DareError("DARE converged to a non-stabilizing solution (spectral radius " +
                            std::to_string(design.nominal_spectral_radius) + ")",
                        design.residual);
    }
    return design;
}

double nominal_cost(const Matrix& p, const Matrix& x0) { return 0.5 * quadratic_form(p, x0); }

} // namespace ncs
