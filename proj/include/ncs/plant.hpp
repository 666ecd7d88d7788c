#pragma once

#include "ncs/linalg.hpp"

namespace ncs {

// x' = A x + B u, y = C x
struct ContinuousPlant {
    Matrix a;
    Matrix b;
    Matrix c;

    [[nodiscard]] std::size_t states() const { return a.rows(); }
    [[nodiscard]] std::size_t inputs() const { return b.cols(); }
    void validate() const;
};

// x(k+1) = G x(k) + H u(k), y(k) = C x(k), sampled every h seconds.
struct DiscretePlant {
    Matrix g;
    Matrix h;
    Matrix c;
    double sample_time = 0.0;

    [[nodiscard]] std::size_t states() const { return g.rows(); }
    [[nodiscard]] std::size_t inputs() const { return h.cols(); }
    void validate() const;
};

// The two modes of the packet-loss loop over the stacked state (x, x_bar).
// Mode 1 (measurement delivered): [[G, -HK], [G, -HK]].
// Mode 2 (measurement dropped, controller holds x_bar): [[G, -HK], [0, I]].
struct SwitchedClosedLoop {
    Matrix phi1;
    Matrix phi2;
    double p_tx = 0.0;

    [[nodiscard]] std::size_t dimension() const { return phi1.rows(); }
};

// Zero-order hold. G and H come from one exponential of the augmented
// generator [[A, B], [0, 0]] * h, which stays exact when A is singular.
[[nodiscard]] DiscretePlant discretize_zoh(const ContinuousPlant& plant, double h);

[[nodiscard]] SwitchedClosedLoop closed_loop_phi(const DiscretePlant& d, const Matrix& k, double p_tx);

// The double-integrator-with-drag plant used as the running example,
// x1' = x2, x2' = -0.1 x2 + 0.1 u, y = x1.
[[nodiscard]] ContinuousPlant reference_plant();

} // namespace ncs
