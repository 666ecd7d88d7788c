#pragma once

#include <optional>

#include "ncs/linalg.hpp"
#include "ncs/plant.hpp"

namespace ncs {

// Witness for exponential stability of the switched loop: a quadratic
// Lyapunov function V = z' P z with per-mode contraction scalars a1, a2.
//
//   P >= floor,   a1^-2 P - Phi1' P Phi1 >= 0,   a2^-2 P - Phi2' P Phi2 >= 0,
//   a1^p_tx * a2^(1 - p_tx) > 1.
struct StabilityCertificate {
    double a1 = 0.0;
    double a2 = 0.0;
    double p_tx = 0.0;
    Matrix p;
    double margin_p = 0.0;  // lambda_min(P) - positivity floor
    double margin1 = 0.0;   // lambda_min(a1^-2 P - Phi1' P Phi1)
    double margin2 = 0.0;   // lambda_min(a2^-2 P - Phi2' P Phi2)
    double decay_product = 0.0;
    double tol_lmi = 0.0;

    [[nodiscard]] bool lmi_feasible() const {
        return margin_p >= 0.0 && margin1 >= -tol_lmi && margin2 >= -tol_lmi;
    }
    [[nodiscard]] bool valid() const { return lmi_feasible() && decay_product > 1.0; }
};

// Certificates found by the search must have non-negative margins; an
// absolute slack lets marginal loops (rho = 1) through with a1 just above 1.
inline constexpr double kDefaultLmiTolerance = 0.0;

// 1e-6 times the mean eigenvalue of P, so the floor scales with P.
[[nodiscard]] double positivity_floor(const Matrix& p);

[[nodiscard]] double decay_product(double a1, double a2, double p_tx);

// Evaluates every margin on the exact residual matrices. This is the only
// place where validity is decided.
[[nodiscard]] StabilityCertificate verify_certificate(const SwitchedClosedLoop& cl, double a1, double a2,
                                                      const Matrix& p, double tol_lmi = kDefaultLmiTolerance);

struct LmiSearchResult {
    std::optional<Matrix> p;       // set only when the verifier accepted it
    double best_violation = 0.0;   // phi(P) at the best iterate, 0 when feasible
    int newton_steps = 0;

    [[nodiscard]] bool feasible() const { return p.has_value(); }
};

inline constexpr int kDefaultLmiBudget = 150;

// Searches for P with trace(P) = dim(P) maximizing the common margin t of
// the three matrix inequalities, using a log-barrier path-following method.
// phi(P) is the largest eigenvalue among the three violation matrices
// (floor - P, Phi1'P Phi1 - a1^-2 P, Phi2'P Phi2 - a2^-2 P), i.e. -t.
//
// The search is one-sided: an empty result means "not found within
// `budget` Newton steps", not a proof of infeasibility.
[[nodiscard]] LmiSearchResult search_lyapunov_matrix(const SwitchedClosedLoop& cl, double a1, double a2,
                                                     int budget = kDefaultLmiBudget,
                                                     double tol_lmi = kDefaultLmiTolerance);

[[nodiscard]] std::optional<Matrix> find_feasible_p(const SwitchedClosedLoop& cl, double a1, double a2,
                                                    int budget = kDefaultLmiBudget);

// Smallest phi(P) reached by the search; 0 when a feasible P was found.
[[nodiscard]] double degree_of_infeasibility(const SwitchedClosedLoop& cl, double a1, double a2,
                                             int budget = kDefaultLmiBudget);

} // namespace ncs
