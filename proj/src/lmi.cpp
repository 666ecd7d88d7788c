#include "ncs/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace ncs {

namespace {

constexpr double kFloorFraction = 1e-6;

// Flat row-major square buffers; N is at most ~10 here so the search works
// on raw vectors instead of Matrix temporaries.
using Buffer = std::vector<double>;

Buffer to_buffer(const Matrix& m) { return Buffer(m.data().begin(), m.data().end()); }

// In-place Cholesky of an N x N buffer. Returns false on a non-positive
// pivot; on success `log_det` receives log det.
bool cholesky_in_place(Buffer& a, std::size_t n, double& log_det) {
    log_det = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= a[j * n + k] * a[j * n + k];
        }
        if (!(d > 0.0)) {
            return false;
        }
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        log_det += 2.0 * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / ljj;
        }
    }
    return true;
}

// Inverse from a lower Cholesky factor held in the lower triangle of `l`.
Buffer inverse_from_cholesky(const Buffer& l, std::size_t n) {
    Buffer inv(n * n, 0.0);
    Buffer col(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(col.begin(), col.end(), 0.0);
        col[c] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = col[i];
            for (std::size_t k = 0; k < i; ++k) {
                s -= l[i * n + k] * col[k];
            }
            col[i] = s / l[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = col[i];
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= l[k * n + i] * col[k];
            }
            col[i] = s / l[i * n + i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            inv[i * n + c] = col[i];
        }
    }
    return inv;
}

// One inequality F(x, t) = C + sum_k x_k A_k - t I >= 0 (the t term only
// when `relaxed`).
struct LmiBlock {
    Buffer constant;
    std::vector<Buffer> coefficients;
    bool relaxed = true;
};

// Traceless symmetric basis: E_ii - E_{N-1,N-1} for i < N-1, then E_ij + E_ji.
std::vector<Matrix> traceless_basis(std::size_t n) {
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Matrix b(n, n);
        b(i, i) = 1.0;
        b(n - 1, n - 1) = -1.0;
        basis.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Matrix b(n, n);
            b(i, j) = 1.0;
            b(j, i) = 1.0;
            basis.push_back(std::move(b));
        }
    }
    return basis;
}

// Maximizes t subject to
//   P - floor I >= 0                    (hard)
//   a1^-2 P - Phi1' P Phi1 >= t I
//   a2^-2 P - Phi2' P Phi2 >= t I
// over trace(P) = N, by minimizing weight * (-t) - sum log det F_i along an
// increasing weight schedule. Keeping P >= floor hard makes the optimal
// violation -t* non-decreasing in a1 and a2.
class BarrierSearch {
public:
    BarrierSearch(const SwitchedClosedLoop& cl, double a1, double a2)
        : n_(cl.dimension()), basis_(traceless_basis(n_)), dim_(basis_.size() + 1) {
        const Matrix identity = Matrix::identity(n_);
        const Matrix phi1_t = cl.phi1.transpose();
        const Matrix phi2_t = cl.phi2.transpose();
        const double s1 = 1.0 / (a1 * a1);
        const double s2 = 1.0 / (a2 * a2);

        auto positivity = [&](const Matrix& x) { return x; };
        auto mode1 = [&](const Matrix& x) { return s1 * x - phi1_t * x * cl.phi1; };
        auto mode2 = [&](const Matrix& x) { return s2 * x - phi2_t * x * cl.phi2; };

        blocks_.push_back(make_block(positivity, identity - kFloorFraction * identity, false));
        blocks_.push_back(make_block(mode1, mode1(identity), true));
        blocks_.push_back(make_block(mode2, mode2(identity), true));

        const std::size_t nn = n_ * n_;
        work_f_.resize(nn);
        work_inv_.resize(nn);
        work_w_.assign(dim_, Buffer(nn));
        work_trial_.resize(dim_);
        grad_.resize(dim_);
        hess_.resize(dim_ * dim_);
    }

    LmiSearchResult run(const SwitchedClosedLoop& cl, double a1, double a2, int budget, double tol_lmi) {
        // y = (x_1..x_d, t); P = I + sum x_k B_k keeps trace(P) = N.
        Buffer y(dim_, 0.0);
        double start_margin = std::numeric_limits<double>::infinity();
        for (const auto& blk : blocks_) {
            if (blk.relaxed) {
                start_margin = std::min(start_margin, min_eigenvalue(Matrix(n_, n_, blk.constant)));
            }
        }
        y.back() = start_margin - 1.0;

        const double m = static_cast<double>(blocks_.size() * n_);
        double weight = 1.0;
        LmiSearchResult result;

        while (result.newton_steps < budget) {
            if (!derivatives(y, weight)) {
                break;
            }
            const Buffer step = newton_direction();
            double decrement = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                decrement -= grad_[k] * step[k];
            }
            ++result.newton_steps;

            if (decrement <= 2e-8) {
                const double t = y.back();
                const double gap = m / weight;
                if (t + gap < 0.0 && gap <= 1e-3 * std::abs(t)) {
                    break;
                }
                if (gap < 1e-12) {
                    break;
                }
                weight *= 10.0;
                continue;
            }

            if (!line_search(y, step, decrement, weight)) {
                break;
            }
            if (y.back() > 0.0) {
                StabilityCertificate cert = verify_certificate(cl, a1, a2, lyapunov_matrix(y), tol_lmi);
                if (cert.lmi_feasible()) {
                    result.p = std::move(cert.p);
                    result.best_violation = 0.0;
                    return result;
                }
            }
        }

        const StabilityCertificate cert = verify_certificate(cl, a1, a2, lyapunov_matrix(y), tol_lmi);
        if (cert.lmi_feasible()) {
            result.p = cert.p;
            result.best_violation = 0.0;
            return result;
        }
        const double phi = -std::min({cert.margin_p, cert.margin1, cert.margin2});
        result.best_violation = std::max(phi, std::numeric_limits<double>::min());
        return result;
    }

private:
    template <typename Map>
    LmiBlock make_block(Map map, const Matrix& constant, bool relaxed) {
        LmiBlock blk{to_buffer(symmetrize(constant)), {}, relaxed};
        for (const auto& b : basis_) {
            blk.coefficients.push_back(to_buffer(symmetrize(map(b))));
        }
        return blk;
    }

    Matrix lyapunov_matrix(const Buffer& y) const {
        Matrix p = Matrix::identity(n_);
        for (std::size_t k = 0; k + 1 < dim_; ++k) {
            p += y[k] * basis_[k];
        }
        return symmetrize(p);
    }

    void assemble(const LmiBlock& blk, const Buffer& y, Buffer& f) const {
        f = blk.constant;
        for (std::size_t k = 0; k + 1 < dim_; ++k) {
            const double xk = y[k];
            if (xk == 0.0) {
                continue;
            }
            const Buffer& a = blk.coefficients[k];
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] += xk * a[i];
            }
        }
        if (blk.relaxed) {
            for (std::size_t i = 0; i < n_; ++i) {
                f[i * n_ + i] -= y.back();
            }
        }
    }

    // -weight * t - sum log det F_i, or +inf outside the domain.
    double barrier(const Buffer& y, double weight) {
        double value = -weight * y.back();
        for (const auto& blk : blocks_) {
            assemble(blk, y, work_f_);
            double log_det = 0.0;
            if (!cholesky_in_place(work_f_, n_, log_det)) {
                return std::numeric_limits<double>::infinity();
            }
            value -= log_det;
        }
        return value;
    }

    bool derivatives(const Buffer& y, double weight) {
        std::fill(grad_.begin(), grad_.end(), 0.0);
        std::fill(hess_.begin(), hess_.end(), 0.0);
        grad_.back() = -weight;
        for (const auto& blk : blocks_) {
            assemble(blk, y, work_f_);
            double log_det = 0.0;
            if (!cholesky_in_place(work_f_, n_, log_det)) {
                return false;
            }
            work_inv_ = inverse_from_cholesky(work_f_, n_);
            const Buffer& inv = work_inv_;
            // W_k = F^-1 A_k; the t coordinate has A_t = -I.
            for (std::size_t k = 0; k + 1 < dim_; ++k) {
                const Buffer& a = blk.coefficients[k];
                Buffer& wk = work_w_[k];
                for (std::size_t i = 0; i < n_; ++i) {
                    for (std::size_t j = 0; j < n_; ++j) {
                        double s = 0.0;
                        for (std::size_t l = 0; l < n_; ++l) {
                            s += inv[i * n_ + l] * a[l * n_ + j];
                        }
                        wk[i * n_ + j] = s;
                    }
                }
            }
            const std::size_t active = blk.relaxed ? dim_ : dim_ - 1;
            if (blk.relaxed) {
                for (std::size_t i = 0; i < inv.size(); ++i) {
                    work_w_.back()[i] = -inv[i];
                }
            }
            for (std::size_t k = 0; k < active; ++k) {
                const Buffer& wk = work_w_[k];
                double tr = 0.0;
                for (std::size_t i = 0; i < n_; ++i) {
                    tr += wk[i * n_ + i];
                }
                grad_[k] -= tr;
                for (std::size_t l = k; l < active; ++l) {
                    const Buffer& wl = work_w_[l];
                    double s = 0.0;
                    for (std::size_t i = 0; i < n_; ++i) {
                        for (std::size_t j = 0; j < n_; ++j) {
                            s += wk[i * n_ + j] * wl[j * n_ + i];
                        }
                    }
                    hess_[k * dim_ + l] += s;
                }
            }
        }
        for (std::size_t k = 0; k < dim_; ++k) {
            for (std::size_t l = 0; l < k; ++l) {
                hess_[k * dim_ + l] = hess_[l * dim_ + k];
            }
        }
        return true;
    }

    Buffer newton_direction() const {
        Matrix h(dim_, dim_, hess_);
        Matrix rhs(dim_, 1);
        for (std::size_t k = 0; k < dim_; ++k) {
            rhs(k, 0) = -grad_[k];
        }
        Matrix step;
        try {
            step = solve_spd(h, rhs);
        } catch (const NotSpdError&) {
            const double ridge = 1e-12 * std::max(1.0, h.trace());
            step = solve_spd(h + ridge * Matrix::identity(dim_), rhs);
        }
        return Buffer(step.data().begin(), step.data().end());
    }

    bool line_search(Buffer& y, const Buffer& step, double decrement, double weight) {
        const double f0 = barrier(y, weight);
        double alpha = 1.0;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t k = 0; k < dim_; ++k) {
                work_trial_[k] = y[k] + alpha * step[k];
            }
            const double f1 = barrier(work_trial_, weight);
            if (f1 <= f0 - 0.25 * alpha * decrement) {
                y = work_trial_;
                return true;
            }
            alpha *= 0.5;
        }
        return false;
    }

    std::size_t n_;
    std::vector<Matrix> basis_;
    std::size_t dim_;
    std::vector<LmiBlock> blocks_;

    Buffer work_f_;
    Buffer work_inv_;
    std::vector<Buffer> work_w_;
    Buffer work_trial_;
    Buffer grad_;
    Buffer hess_;
};

void require_compatible(const SwitchedClosedLoop& cl, const Matrix& p) {
    if (!cl.phi1.is_square() || cl.phi1.rows() != cl.phi2.rows() || cl.phi2.cols() != cl.phi1.cols()) {
        throw DimensionError("switched closed loop: mode matrices must be square and equal-sized");
    }
    if (p.rows() != cl.dimension() || p.cols() != cl.dimension()) {
        throw DimensionError("certificate matrix must be " + std::to_string(cl.dimension()) + "x" +
                             std::to_string(cl.dimension()));
    }
}

} // namespace

double positivity_floor(const Matrix& p) { return kFloorFraction * p.trace() / static_cast<double>(p.rows()); }

double decay_product(double a1, double a2, double p_tx) {
    return std::pow(a1, p_tx) * std::pow(a2, 1.0 - p_tx);
}

StabilityCertificate verify_certificate(const SwitchedClosedLoop& cl, double a1, double a2, const Matrix& p,
                                        double tol_lmi) {
    require_compatible(cl, p);
    if (!(a1 > 0.0) || !(a2 > 0.0)) {
        throw std::invalid_argument("verify_certificate: a1 and a2 must be positive");
    }
    StabilityCertificate cert;
    cert.a1 = a1;
    cert.a2 = a2;
    cert.p_tx = cl.p_tx;
    cert.p = symmetrize(p);
    cert.tol_lmi = tol_lmi;
    cert.margin_p = min_eigenvalue(cert.p) - positivity_floor(cert.p);
    cert.margin1 = min_eigenvalue(symmetrize(cert.p * (1.0 / (a1 * a1)) - cl.phi1.transpose() * cert.p * cl.phi1));
    cert.margin2 = min_eigenvalue(symmetrize(cert.p * (1.0 / (a2 * a2)) - cl.phi2.transpose() * cert.p * cl.phi2));
    cert.decay_product = decay_product(a1, a2, cl.p_tx);
    return cert;
}

LmiSearchResult search_lyapunov_matrix(const SwitchedClosedLoop& cl, double a1, double a2, int budget,
                                       double tol_lmi) {
    require_compatible(cl, Matrix::identity(cl.dimension()));
    if (!(a1 > 0.0) || !(a2 > 0.0)) {
        throw std::invalid_argument("search_lyapunov_matrix: a1 and a2 must be positive");
    }
    BarrierSearch search(cl, a1, a2);
    return search.run(cl, a1, a2, budget, tol_lmi);
}

std::optional<Matrix> find_feasible_p(const SwitchedClosedLoop& cl, double a1, double a2, int budget) {
    return search_lyapunov_matrix(cl, a1, a2, budget).p;
}

double degree_of_infeasibility(const SwitchedClosedLoop& cl, double a1, double a2, int budget) {
    return search_lyapunov_matrix(cl, a1, a2, budget).best_violation;
}

} // namespace ncs
