#include "doctest.h"

#include <random>

#include "dephaser/errors.hpp"
#include "dephaser/matrix.hpp"
#include "test_support.hpp"

using namespace dephaser;
using test_support::to_matrix;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
    std::vector<double> d(v);
    return ComplexMatrix::diagonal(std::span<const double>(d));
}

}  // namespace

TEST_CASE("matmul") {
    const auto m = ComplexMatrix::from_rows({{{1, 2}, {3, -1}}, {{0, 1}, {-2, 0}}});
    CHECK(matmul(ComplexMatrix::identity(2), m) == m);
    CHECK(matmul(diag({1, -1}), diag({1, -1})) == ComplexMatrix::identity(2));
    // product of diagonals is the elementwise product
    CHECK(matmul(diag({1, 0, 0, -1}), diag({1, 0, 0, -1})) == diag({1, 0, 0, 1}));
    CHECK_THROWS_AS(matmul(ComplexMatrix(2), ComplexMatrix(3)), DimensionError);
}

TEST_CASE("matmul matches naive product on random matrices") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u}) {
        const auto a = oracle::random_matrix(rng, n);
        const auto b = oracle::random_matrix(rng, n);
        CHECK(test_support::max_diff(oracle::mul(a, b), matmul(to_matrix(a), to_matrix(b))) <
              1e-13 * static_cast<double>(n));
    }
}

TEST_CASE("dagger") {
    const auto herm = ComplexMatrix::from_rows({{{2, 0}, {1, -1}}, {{1, 1}, {-3, 0}}});
    CHECK(dagger(herm) == herm);
    CHECK(dagger(ComplexMatrix::from_rows({{0, 1}, {0, 0}})) ==
          ComplexMatrix::from_rows({{0, 0}, {1, 0}}));
    const std::vector<cplx> d{{0, 1}, {1, 0}};
    const std::vector<cplx> dc{{0, -1}, {1, 0}};
    CHECK(dagger(ComplexMatrix::diagonal(std::span<const cplx>(d))) ==
          ComplexMatrix::diagonal(std::span<const cplx>(dc)));
}

TEST_CASE("commutator") {
    std::mt19937_64 rng(11);
    const auto m = to_matrix(oracle::random_matrix(rng, 4));
    CHECK(max_abs_diff(commutator(m, m), ComplexMatrix(4)) == 0.0);
    CHECK(max_abs_diff(commutator(ComplexMatrix::identity(4), m), ComplexMatrix(4)) == 0.0);

    const double e1 = 1.7, e2 = -0.4;
    const auto rho = to_matrix(oracle::random_hermitian(rng, 2));
    const auto c = commutator(diag({e1, e2}), rho);
    CHECK(std::abs(c(0, 1) - (e1 - e2) * rho(0, 1)) < 1e-15);
    CHECK_THROWS_AS(commutator(ComplexMatrix(2), ComplexMatrix(4)), DimensionError);
}

TEST_CASE("kron") {
    const auto i2 = ComplexMatrix::identity(2);
    CHECK(kron(diag({1, 0}), i2) == diag({1, 1, 0, 0}));
    CHECK(kron(i2, diag({1, 0})) == diag({1, 0, 1, 0}));
    CHECK(kron(i2, i2) == ComplexMatrix::identity(4));

    std::mt19937_64 rng(3);
    const auto a = oracle::random_matrix(rng, 2);
    const auto b = oracle::random_matrix(rng, 3);
    CHECK(test_support::max_diff(oracle::kron(a, b), kron(to_matrix(a), to_matrix(b))) == 0.0);
}

TEST_CASE("is_diagonal") {
    CHECK(is_diagonal(diag({1, 0, 0, -1})).diagonal);
    const auto x = is_diagonal(ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK_FALSE(x.diagonal);
    CHECK(x.worst.i == 0);
    CHECK(x.worst.j == 1);
    CHECK(x.worst.magnitude == 1.0);

    auto near = ComplexMatrix::identity(2);
    near(0, 1) = 1e-12;
    near(1, 0) = 1e-12;
    CHECK(is_diagonal(near).diagonal);
    CHECK(is_diagonal(ComplexMatrix::identity(1)).diagonal);
}

TEST_CASE("reductions") {
    CHECK(trace(ComplexMatrix::identity(4)) == cplx(4.0));
    std::mt19937_64 rng(5);
    const auto m = to_matrix(oracle::random_matrix(rng, 3));
    CHECK(frobenius_distance(m, m) == 0.0);
    CHECK(max_abs_diff(diag({1, 0}), diag({0, 0})) == 1.0);
    CHECK_THROWS_AS(max_abs_diff(ComplexMatrix(2), ComplexMatrix(3)), DimensionError);
    CHECK_THROWS_AS(frobenius_distance(ComplexMatrix(2), ComplexMatrix(3)), DimensionError);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(ComplexMatrix(0), DimensionError);
    CHECK_THROWS_AS(ComplexMatrix(2, std::vector<cplx>(3)), DimensionError);
    CHECK_THROWS_AS(ComplexMatrix::hermitian(2, {1, {0, 1}, {0, 1}, 1}), ValidationError);
    CHECK_NOTHROW(ComplexMatrix::hermitian(2, {1, {0, 1}, {0, -1}, 1}));
}

TEST_CASE("properties on random inputs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto m = to_matrix(oracle::random_matrix(rng, n));
        CHECK(dagger(dagger(m)) == m);

        const auto h = to_matrix(oracle::random_hermitian(rng, n));
        const auto rho = to_matrix(oracle::random_hermitian(rng, n));
        CHECK(std::abs(trace(commutator(h, rho))) < 1e-10);

        std::vector<cplx> v(n);
        for (auto& x : v) x = cplx(static_cast<double>(rng() % 7), -1.0);
        CHECK(is_diagonal(ComplexMatrix::diagonal(std::span<const cplx>(v))).diagonal);

        const auto a = to_matrix(oracle::random_matrix(rng, 2));
        const auto b = to_matrix(oracle::random_matrix(rng, 1 + trial % 3));
        const auto c = to_matrix(oracle::random_matrix(rng, 2));
        CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-10);
    }
}

TEST_CASE("positive semidefinite check") {
    CHECK(is_positive_semidefinite(diag({1, 0}), 1e-8));
    CHECK_FALSE(is_positive_semidefinite(diag({1, -1e-6}), 1e-8));
    CHECK(is_positive_semidefinite(ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}), 1e-8));
}
