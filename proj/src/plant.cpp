#include "ncs/plant.hpp"

#include <cmath>
#include <string>

namespace ncs {

void ContinuousPlant::validate() const {
    if (!a.is_square() || a.empty()) {
        throw DimensionError("continuous plant: A must be square and non-empty");
    }
    if (b.rows() != a.rows() || b.cols() == 0) {
        throw DimensionError("continuous plant: B must have " + std::to_string(a.rows()) + " rows");
    }
    if (c.cols() != a.rows() || c.rows() == 0) {
        throw DimensionError("continuous plant: C must have " + std::to_string(a.rows()) + " columns");
    }
    if (!a.all_finite() || !b.all_finite() || !c.all_finite()) {
        throw std::invalid_argument("continuous plant: non-finite entries");
    }
}

void DiscretePlant::validate() const {
    if (!g.is_square() || g.empty()) {
        throw DimensionError("discrete plant: G must be square and non-empty");
    }
    if (h.rows() != g.rows() || h.cols() == 0) {
        throw DimensionError("discrete plant: H must have " + std::to_string(g.rows()) + " rows");
    }
    if (c.cols() != g.rows() || c.rows() == 0) {
        throw DimensionError("discrete plant: C must have " + std::to_string(g.rows()) + " columns");
    }
    if (!(sample_time > 0.0) || !std::isfinite(sample_time)) {
        throw std::invalid_argument("discrete plant: sample time must be positive");
    }
    if (!g.all_finite() || !h.all_finite() || !c.all_finite()) {
        throw std::invalid_argument("discrete plant: non-finite entries");
    }
}

DiscretePlant discretize_zoh(const ContinuousPlant& plant, double h) {
    plant.validate();
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("discretize_zoh: sample time must be positive, got " + std::to_string(h));
    }
    const std::size_t n = plant.states();
    const std::size_t m = plant.inputs();
    Matrix augmented(n + m, n + m);
    augmented.set_block(0, 0, plant.a);
    augmented.set_block(0, n, plant.b);
    const Matrix e = expm(augmented, h);
    return DiscretePlant{e.block(0, 0, n, n), e.block(0, n, n, m), plant.c, h};
}

SwitchedClosedLoop closed_loop_phi(const DiscretePlant& d, const Matrix& k, double p_tx) {
    d.validate();
    const std::size_t n = d.states();
    if (k.rows() != d.inputs() || k.cols() != n) {
        throw DimensionError("closed_loop_phi: gain must be " + std::to_string(d.inputs()) + "x" +
                             std::to_string(n));
    }
    if (!(p_tx > 0.0 && p_tx < 1.0)) {
        throw std::invalid_argument("closed_loop_phi: transmission probability must lie in (0, 1)");
    }
    const Matrix minus_hk = -(d.h * k);

    SwitchedClosedLoop cl{Matrix(2 * n, 2 * n), Matrix(2 * n, 2 * n), p_tx};
    cl.phi1.set_block(0, 0, d.g);
    cl.phi1.set_block(0, n, minus_hk);
    cl.phi1.set_block(n, 0, d.g);
    cl.phi1.set_block(n, n, minus_hk);

    cl.phi2.set_block(0, 0, d.g);
    cl.phi2.set_block(0, n, minus_hk);
    cl.phi2.set_block(n, n, Matrix::identity(n));
    return cl;
}

ContinuousPlant reference_plant() {
    return ContinuousPlant{
        Matrix::from_rows({{0.0, 1.0}, {0.0, -0.1}}),
        Matrix::from_rows({{0.0}, {0.1}}),
        Matrix::from_rows({{1.0, 0.0}}),
    };
}

} // namespace ncs
