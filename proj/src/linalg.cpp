#include "ncs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace ncs {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

void require_square(const Matrix& a, const char* what) {
    if (!a.is_square()) {
        throw DimensionError(std::string(what) + ": matrix must be square, got " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()));
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                             std::to_string(data_.size()));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::column(std::span<const double> entries) {
    return Matrix(entries.size(), 1, std::vector<double>(entries.begin(), entries.end()));
}

Matrix Matrix::row(std::span<const double> entries) {
    return Matrix(1, entries.size(), std::vector<double>(entries.begin(), entries.end()));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(nr * nc);
    for (const auto& r : rows) {
        if (r.size() != nc) {
            throw DimensionError("Matrix::from_rows: ragged rows");
        }
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(nr, nc, std::move(data));
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw DimensionError("Matrix::block: out of range");
    }
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            b(i, j) = (*this)(r0 + i, c0 + j);
        }
    }
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
        throw DimensionError("Matrix::set_block: out of range");
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            (*this)(r0 + i, c0 + j) = b(i, j);
        }
    }
}

double Matrix::trace() const {
    require_square(*this, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        s += (*this)(i, i);
    }
    return s;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& o) {
    require_same_shape(*this, o, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    require_same_shape(*this, o, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("operator*: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) {
        s += v * v;
    }
    return std::sqrt(s);
}

double norm1(const Matrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            s += std::abs(m(i, j));
        }
        best = std::max(best, s);
    }
    return best;
}

double norm2(const Matrix& m) {
    if (m.empty()) {
        return 0.0;
    }
    const Matrix gram = symmetrize(m.transpose() * m);
    return std::sqrt(std::max(0.0, max_eigenvalue(gram)));
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

Matrix symmetrize(const Matrix& m) {
    require_square(m, "symmetrize");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    }
    return s;
}

double relative_asymmetry(const Matrix& m) {
    require_square(m, "relative_asymmetry");
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
        }
    }
    return worst / std::max(1.0, max_abs(m));
}

double quadratic_form(const Matrix& m, const Matrix& x) {
    if (x.cols() != 1 || !m.is_square() || m.rows() != x.rows()) {
        throw DimensionError("quadratic_form: expected square M and conformable column x");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s += x(i, 0) * m(i, j) * x(j, 0);
        }
    }
    return s;
}

SymEig sym_eig(const Matrix& m) {
    require_square(m, "sym_eig");
    if (relative_asymmetry(m) > 1e-12) {
        throw std::invalid_argument("sym_eig: matrix is not symmetric (relative asymmetry " +
                                    std::to_string(relative_asymmetry(m)) + ")");
    }
    const std::size_t n = m.rows();
    Matrix a = symmetrize(m);
    Matrix v = Matrix::identity(n);
    const double threshold = 1e-14 * frobenius_norm(a);

    auto off_diagonal = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    s += a(i, j) * a(i, j);
                }
            }
        }
        return std::sqrt(s);
    };

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEig out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double min_eigenvalue(const Matrix& m) {
    const auto e = sym_eig(m);
    return e.values.empty() ? 0.0 : e.values.front();
}

double max_eigenvalue(const Matrix& m) {
    const auto e = sym_eig(m);
    return e.values.empty() ? 0.0 : e.values.back();
}

Matrix expm(const Matrix& a, double t) {
    require_square(a, "expm");
    if (!(t >= 0.0)) {
        throw std::invalid_argument("expm: time must be non-negative");
    }
    const std::size_t n = a.rows();
    Matrix x = a * t;
    const double norm = norm1(x);
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        x *= std::ldexp(1.0, -squarings);
    }

    constexpr int q = 6;
    double c = 1.0;
    Matrix numer = Matrix::identity(n);
    Matrix denom = Matrix::identity(n);
    Matrix power = Matrix::identity(n);
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = power * x;
        numer += c * power;
        denom += ((k % 2 == 0) ? c : -c) * power;
    }
    Matrix r = solve(denom, numer);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    return r;
}

Matrix cholesky(const Matrix& a) {
    require_square(a, "cholesky");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            throw NotSpdError("cholesky: matrix is not SPD (pivot " + std::to_string(j) + " = " +
                              std::to_string(d) + ")");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / ljj;
        }
    }
    return l;
}

bool is_positive_definite(const Matrix& a) {
    try {
        (void)cholesky(a);
        return true;
    } catch (const NotSpdError&) {
        return false;
    }
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("solve_spd: right-hand side has wrong row count");
    }
    const Matrix l = cholesky(a);
    const std::size_t n = a.rows();
    Matrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) {
                s -= l(i, k) * x(k, c);
            }
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= l(k, i) * x(k, c);
            }
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

Matrix solve(const Matrix& a, const Matrix& b) {
    require_square(a, "solve");
    if (a.rows() != b.rows()) {
        throw DimensionError("solve: right-hand side has wrong row count");
    }
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) {
                pivot = i;
            }
        }
        if (lu(pivot, k) == 0.0) {
            throw std::runtime_error("solve: matrix is singular");
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(pivot, j));
            }
            for (std::size_t j = 0; j < x.cols(); ++j) {
                std::swap(x(k, j), x(pivot, j));
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
            for (std::size_t j = 0; j < x.cols(); ++j) {
                x(i, j) -= f * x(k, j);
            }
        }
    }
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= lu(i, k) * x(k, c);
            }
            x(i, c) = s / lu(i, i);
        }
    }
    return x;
}

double spectral_radius_estimate(const Matrix& a) {
    require_square(a, "spectral_radius_estimate");
    if (!a.all_finite()) {
        return std::numeric_limits<double>::infinity();
    }
    // x holds A^(2^m) / exp(log_scale).
    Matrix x = a;
    double log_scale = 0.0;
    double estimate = norm2(x);
    for (int m = 1; m <= 12; ++m) {
        // max_abs cannot overflow where the Frobenius norm would.
        const double f = max_abs(x);
        if (f == 0.0) {
            return 0.0;
        }
        x *= 1.0 / f;
        log_scale += std::log(f);
        x = x * x;
        log_scale *= 2.0;
        if (!x.all_finite()) {
            return std::numeric_limits<double>::infinity();
        }
        const double nx = norm2(x);
        if (nx == 0.0) {
            return 0.0;
        }
        const double next = std::exp((std::log(nx) + log_scale) / std::ldexp(1.0, m));
        if (!std::isfinite(next)) {
            return std::numeric_limits<double>::infinity();
        }
        const bool settled = std::abs(next - estimate) < 1e-4;
        estimate = next;
        if (settled) {
            break;
        }
    }
    return estimate;
}

std::string to_string(const Matrix& m, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision);
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " [");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            os << (j == 0 ? "" : ", ") << m(i, j);
        }
        os << (i + 1 == m.rows() ? "]" : "],");
    }
    os << ']';
    return os.str();
}

} // namespace ncs
