#pragma once

// Small dense real linear algebra. Everything in this project is at most a
// few tens of rows, so matrices are plain row-major heap buffers.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncs {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotSpdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(std::span<const double> entries);
    static Matrix column(std::span<const double> entries);
    static Matrix row(std::span<const double> entries);
    // Nested braces, one list per row.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    [[nodiscard]] double trace() const;
    [[nodiscard]] bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

[[nodiscard]] double frobenius_norm(const Matrix& m);
[[nodiscard]] double norm1(const Matrix& m);
// Largest singular value.
[[nodiscard]] double norm2(const Matrix& m);
[[nodiscard]] double max_abs(const Matrix& m);
[[nodiscard]] Matrix symmetrize(const Matrix& m);
// Largest |m - m^T| entry relative to max(1, max|m|).
[[nodiscard]] double relative_asymmetry(const Matrix& m);
// x^T M y for column vectors.
[[nodiscard]] double quadratic_form(const Matrix& m, const Matrix& x);

// Symmetric eigendecomposition. Eigenvalues ascending; eigenvector k is
// column k of `vectors`.
struct SymEig {
    std::vector<double> values;
    Matrix vectors;
};

// Cyclic Jacobi. Throws DimensionError for non-square input and
// std::invalid_argument when the relative asymmetry exceeds 1e-12.
[[nodiscard]] SymEig sym_eig(const Matrix& m);
[[nodiscard]] double min_eigenvalue(const Matrix& m);
[[nodiscard]] double max_eigenvalue(const Matrix& m);

// e^{A t} by Pade(6,6) with scaling and squaring.
[[nodiscard]] Matrix expm(const Matrix& a, double t = 1.0);

// Cholesky factor L (lower) with A = L L^T; throws NotSpdError on a
// non-positive pivot.
[[nodiscard]] Matrix cholesky(const Matrix& a);
// Returns false instead of throwing.
[[nodiscard]] bool is_positive_definite(const Matrix& a);
[[nodiscard]] Matrix solve_spd(const Matrix& a, const Matrix& b);
// General square solve by LU with partial pivoting.
[[nodiscard]] Matrix solve(const Matrix& a, const Matrix& b);

// rho(A) estimated as ||A^(2^m)||_2^(1/2^m). The estimate is an upper bound
// that tightens with m; iteration stops when successive values differ by
// less than 1e-4 or m reaches 12. Divergent input reports +infinity.
[[nodiscard]] double spectral_radius_estimate(const Matrix& a);

[[nodiscard]] std::string to_string(const Matrix& m, int precision = 6);

} // namespace ncs
