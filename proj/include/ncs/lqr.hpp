#pragma once

#include <vector>

#include "ncs/linalg.hpp"
#include "ncs/plant.hpp"

namespace ncs {

// Diagonal state weights and a scalar control weight (R = r * I).
struct LqrWeights {
    std::vector<double> q_diag;
    double r_value = 1.0;

    [[nodiscard]] Matrix q() const { return Matrix::diagonal(q_diag); }
    [[nodiscard]] Matrix r(std::size_t inputs) const { return Matrix::identity(inputs) * r_value; }
    void validate() const;
};

struct LqrDesign {
    LqrWeights weights;
    Matrix p;
    Matrix k;
    double nominal_spectral_radius = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

class DareError : public std::runtime_error {
public:
    DareError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

struct DareOptions {
    int max_iterations = 10000;
    double tolerance = 1e-12;
};

// Riccati fixed point P <- Q + G'PG - G'PH (R + H'PH)^-1 H'PG from P0 = Q.
// Throws DareError when the iteration cap is hit, R + H'PH stops being SPD,
// or the resulting gain does not make G - HK Schur stable.
[[nodiscard]] LqrDesign solve_dare(const DiscretePlant& d, const LqrWeights& w, const DareOptions& opts = {});

// K = (R + H'PH)^-1 H'PG
[[nodiscard]] Matrix lqr_gain(const Matrix& p, const DiscretePlant& d, const LqrWeights& w);

// ||P - (Q + G'PG - G'PH(R + H'PH)^-1 H'PG)||_F
[[nodiscard]] double riccati_residual(const Matrix& p, const DiscretePlant& d, const LqrWeights& w);

// Optimal infinite-horizon cost 1/2 x0' P x0.
[[nodiscard]] double nominal_cost(const Matrix& p, const Matrix& x0);

} // namespace ncs
