#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ncs/linalg.hpp"
#include "oracles.hpp"

using namespace ncs;

TEST_CASE("sym_eig: identity and diagonal") {
    const auto e = sym_eig(Matrix::identity(4));
    for (double v : e.values) {
        CHECK(v == doctest::Approx(1.0));
    }
    const std::vector<double> d{3.0, 1.0, 2.0};
    const auto e2 = sym_eig(Matrix::diagonal(d));
    CHECK(e2.values[0] == doctest::Approx(1.0));
    CHECK(e2.values[1] == doctest::Approx(2.0));
    CHECK(e2.values[2] == doctest::Approx(3.0));
}

TEST_CASE("sym_eig: printed Lyapunov matrix of the second design") {
    const auto e = sym_eig(oracle::lyapunov(oracle::kRegPsoGa));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(e.values[i] - oracle::kRegPsoGa.eig[i]) < 1e-3);
    }
}

TEST_CASE("sym_eig: rejects non-square and asymmetric input") {
    CHECK_THROWS_AS((void)sym_eig(Matrix(2, 3)), DimensionError);
    CHECK_THROWS_AS((void)sym_eig(Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), std::invalid_argument);
}

TEST_CASE("sym_eig: reconstruction and orthonormality over random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        const Matrix m = oracle::random_symmetric(rng, n, 3.0);
        const auto e = sym_eig(m);
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(e.values[i - 1] <= e.values[i]);
        }
        const Matrix lambda = Matrix::diagonal(e.values);
        const Matrix rebuilt = e.vectors * lambda * e.vectors.transpose();
        CHECK(frobenius_norm(m - rebuilt) <= 1e-10 * (1.0 + frobenius_norm(m)));
        CHECK(frobenius_norm(e.vectors.transpose() * e.vectors - Matrix::identity(n)) <= 1e-10);
    }
}

TEST_CASE("min_eigenvalue: examples and shift property") {
    CHECK(min_eigenvalue(Matrix::identity(3)) == doctest::Approx(1.0));
    const std::vector<double> d{-1.0, 5.0};
    CHECK(min_eigenvalue(Matrix::diagonal(d)) == doctest::Approx(-1.0));
    CHECK(std::abs(min_eigenvalue(oracle::lyapunov(oracle::kGaGa)) - 1.9366) < 1e-3);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> shift(-4.0, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix m = oracle::random_symmetric(rng, 5);
        const double c = shift(rng);
        CHECK(std::abs(min_eigenvalue(m + c * Matrix::identity(5)) - (min_eigenvalue(m) + c)) <= 1e-10);
    }
}

TEST_CASE("expm: closed forms") {
    CHECK(expm(Matrix(3, 3)) == Matrix::identity(3));
    const Matrix e = expm(Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}), 1.0);
    CHECK(e(0, 0) == doctest::Approx(1.0));
    CHECK(e(0, 1) == doctest::Approx(1.0));
    CHECK(e(1, 0) == doctest::Approx(0.0));
    CHECK(e(1, 1) == doctest::Approx(1.0));

    const auto z = oracle::reference_zoh(0.3);
    const Matrix g = expm(Matrix::from_rows({{0.0, 1.0}, {0.0, -0.1}}), 0.3);
    CHECK(std::abs(g(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(g(0, 1) - z.g12) < 1e-12);
    CHECK(std::abs(g(1, 0)) < 1e-12);
    CHECK(std::abs(g(1, 1) - z.g22) < 1e-12);
    CHECK(std::abs(g(0, 1) - 0.295545) < 1e-6);
    CHECK(std::abs(g(1, 1) - 0.970446) < 1e-6);

    // Rotation generator: e^{[[0,-w],[w,0]] t} is a rotation by w t.
    const Matrix r = expm(Matrix::from_rows({{0.0, -2.0}, {2.0, 0.0}}), 0.7);
    CHECK(std::abs(r(0, 0) - std::cos(1.4)) < 1e-12);
    CHECK(std::abs(r(1, 0) - std::sin(1.4)) < 1e-12);
    CHECK_THROWS_AS((void)expm(Matrix(2, 3)), DimensionError);
}

TEST_CASE("expm: semigroup property") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix a = oracle::random_matrix(rng, 3, 3);
        a *= 2.0 / norm2(a);
        const double t1 = t(rng);
        const double t2 = t(rng);
        CHECK(frobenius_norm(expm(a, t1 + t2) - expm(a, t1) * expm(a, t2)) <= 1e-9);
    }
}

TEST_CASE("solve_spd: examples, round trip and rejection") {
    const Matrix b = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(solve_spd(Matrix::identity(2), b) == b);
    const std::vector<double> d{2.0, 4.0};
    const Matrix x = solve_spd(Matrix::diagonal(d), Matrix::from_rows({{2.0}, {8.0}}));
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 0) == doctest::Approx(2.0));

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        const Matrix a = oracle::random_spd(rng, n);
        const Matrix known = oracle::random_matrix(rng, n, 2);
        const Matrix rhs = a * known;
        const Matrix got = solve_spd(a, rhs);
        CHECK(frobenius_norm(a * got - rhs) <= 1e-10 * (1.0 + frobenius_norm(rhs)));
    }

    const std::vector<double> indefinite{1.0, -1.0};
    CHECK_THROWS_AS((void)solve_spd(Matrix::diagonal(indefinite), Matrix(2, 1, 1.0)), NotSpdError);
    CHECK_FALSE(is_positive_definite(Matrix::diagonal(indefinite)));
    CHECK(is_positive_definite(Matrix::identity(3)));
}

TEST_CASE("solve: general square system") {
    const Matrix a = Matrix::from_rows({{0.0, 2.0}, {1.0, 1.0}});
    const Matrix x = solve(a, Matrix::from_rows({{4.0}, {3.0}}));
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("spectral_radius_estimate") {
    const std::vector<double> d{0.5, 0.25};
    CHECK(std::abs(spectral_radius_estimate(Matrix::diagonal(d)) - 0.5) < 1e-3);
    CHECK(std::abs(spectral_radius_estimate(Matrix::from_rows({{0.0, -1.0}, {1.0, 0.0}})) - 1.0) < 1e-3);
    CHECK(spectral_radius_estimate(Matrix(3, 3)) == 0.0);
    const std::vector<double> big{1e200, 1.0};
    CHECK(spectral_radius_estimate(Matrix::diagonal(big)) >= 1.0);

    // G - HK for the second published gain, against characteristic roots.
    const auto dp = oracle::reference_discrete();
    const Matrix cl = dp.g - dp.h * oracle::gain(oracle::kRegPsoGa);
    const double exact = oracle::spectral_radius_2x2(cl(0, 0), cl(0, 1), cl(1, 0), cl(1, 1));
    const double est = spectral_radius_estimate(cl);
    CHECK(exact < 1.0);
    CHECK(est < 1.0);
    CHECK(std::abs(est - exact) < 1e-2);
}

TEST_CASE("matrix plumbing") {
    Matrix m = Matrix::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
    CHECK(m.transpose()(2, 1) == 6.0);
    CHECK(m.block(0, 1, 2, 2) == Matrix::from_rows({{2.0, 3.0}, {5.0, 6.0}}));
    Matrix big(3, 3);
    big.set_block(1, 1, Matrix::identity(2));
    CHECK(big.trace() == 2.0);
    CHECK_THROWS_AS(m + Matrix(3, 2), DimensionError);
    CHECK_THROWS_AS(m * m, DimensionError);
    CHECK(quadratic_form(Matrix::identity(2), Matrix::from_rows({{3.0}, {4.0}})) == 25.0);
    CHECK(norm2(Matrix::from_rows({{3.0, 0.0}, {0.0, -5.0}})) == doctest::Approx(5.0));
    CHECK(relative_asymmetry(symmetrize(m.block(0, 0, 2, 2))) == 0.0);
}
