#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dephaser/errors.hpp"
#include "dephaser/lindblad.hpp"
#include "dephaser/presets.hpp"
#include "dephaser/register.hpp"
#include "test_support.hpp"

using namespace dephaser;
using test_support::to_matrix;
using test_support::to_oracle;

namespace {

ComplexMatrix diag(std::vector<double> v) {
    return ComplexMatrix::diagonal(std::span<const double>(v));
}

const cplx kI{0.0, 1.0};

std::vector<DiagonalChannel> random_channels(std::mt19937_64& rng, std::size_t dim,
                                             std::size_t count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<DiagonalChannel> out;
    for (std::size_t m = 0; m < count; ++m) {
        std::vector<cplx> lam(dim);
        for (auto& l : lam) l = cplx(u(rng), u(rng));
        out.emplace_back(0.1 + std::abs(u(rng)), std::move(lam));
    }
    return out;
}

}  // namespace

TEST_CASE("dissipator_apply examples") {
    std::mt19937_64 rng(1);
    const auto rho = to_matrix(oracle::random_hermitian(rng, 4));
    const std::vector<Channel> ident{Channel(1.3, ComplexMatrix::identity(4))};
    CHECK(max_abs_diff(dissipator_apply(ident, rho), ComplexMatrix(4)) < 1e-15);

    // single qubit, A = |u><u|, rho = |+><+|
    const std::vector<Channel> up{Channel(1.0, diag({1, 0}))};
    const auto plus = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
    const auto d = dissipator_apply(up, plus);
    const auto expected = oracle::dissipator({{1.0, to_oracle(diag({1, 0}))}}, to_oracle(plus));
    CHECK(std::abs(expected[0][1] - (-0.25)) < 1e-15);
    CHECK(std::abs(d(0, 1) - (-0.25)) < 1e-15);
    CHECK(std::abs(d(1, 0) - (-0.25)) < 1e-15);
    CHECK(std::abs(d(0, 0)) < 1e-15);
    CHECK(std::abs(d(1, 1)) < 1e-15);

    // collective up/down operator on phi+: element (uu, dd) decays at 2 * 1/2
    const std::vector<Channel> updown{Channel(1.0, diag({1, 0, 0, -1}))};
    const auto phi = density_from_pure(bell_state(Bell::phi_plus));
    CHECK(std::abs(dissipator_apply(updown, phi)(0, 3) - (-1.0)) < 1e-15);

    CHECK_THROWS_AS(dissipator_apply(updown, ComplexMatrix(2)), DimensionError);
}

TEST_CASE("rhs examples") {
    std::mt19937_64 rng(2);
    const auto rho = to_matrix(oracle::random_hermitian(rng, 2));
    CHECK(max_abs_diff(rhs(ComplexMatrix(2), {}, rho), ComplexMatrix(2)) == 0.0);

    const double e1 = 0.8, e2 = -1.1;
    const auto out = rhs(diag({e1, e2}), {}, rho);
    CHECK(std::abs(out(0, 1) - (-kI * (e1 - e2) * rho(0, 1))) < 1e-15);

    const std::vector<Channel> updown{Channel(1.0, diag({1, 0, 0, -1}))};
    const auto rho4 = to_matrix(oracle::random_hermitian(rng, 4));
    CHECK(max_abs_diff(rhs(ComplexMatrix(4), updown, rho4), dissipator_apply(updown, rho4)) == 0.0);
}

TEST_CASE("rhs against the naive definition, and the precomputed form against rhs") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto h = oracle::random_hermitian(rng, n);
        std::vector<oracle::Op> ops;
        std::vector<Channel> channels;
        for (int m = 0; m < 1 + trial % 3; ++m) {
            const double g = 0.2 + 0.3 * m;
            const auto a = oracle::random_matrix(rng, n);
            ops.push_back({g, a});
            channels.emplace_back(g, to_matrix(a));
        }
        const auto rho = oracle::random_hermitian(rng, n);
        const auto expected = oracle::master_rhs(h, ops, rho);
        const auto got = rhs(to_matrix(h), channels, to_matrix(rho));
        CHECK(test_support::max_diff(expected, got) < 1e-12);

        const MasterEquation eq(to_matrix(h), channels);
        CHECK(max_abs_diff(eq.evaluate(to_matrix(rho)), got) < 1e-12);
    }
}

TEST_CASE("trace preservation and hermiticity of rhs for general channels") {
    std::mt19937_64 rng(4);
    const Tolerances tol;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 7;
        std::vector<Channel> channels;
        for (int m = 0; m < 3; ++m) channels.emplace_back(0.5, to_matrix(oracle::random_matrix(rng, n)));
        const auto h = to_matrix(oracle::random_hermitian(rng, n));
        const auto rho = to_matrix(oracle::random_hermitian(rng, n));
        const auto out = rhs(h, channels, rho);
        CHECK(std::abs(trace(out)) < tol.atol_zero);
        CHECK(hermiticity_defect(out) < tol.atol_herm);
    }
}

TEST_CASE("analytic_rates examples") {
    const std::vector<DiagonalChannel> updown{DiagonalChannel(1.0, {1.0, 0.0, 0.0, -1.0})};
    const auto t = analytic_rates(HamiltonianSpec::zero(4), updown);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t.gamma(i, i) == 0.0);
        CHECK(t.delta(i, i) == 0.0);
        CHECK(t.omega(i, i) == 0.0);
    }
    CHECK(t.gamma(0, 3) == 2.0);  // (uu, dd)
    CHECK(t.gamma(1, 2) == 0.0);  // (ud, du)
    CHECK(t.gamma(3, 1) == 0.5);  // (dd, ud)

    const std::vector<DiagonalChannel> complex{DiagonalChannel(1.0, {kI, 1.0})};
    const auto c = analytic_rates(HamiltonianSpec::zero(2), complex);
    CHECK(c.delta(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.gamma(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.delta(1, 0) == -c.delta(0, 1));

    const auto energies = analytic_rates(HamiltonianSpec{{0.0, 2.5}}, complex);
    CHECK(energies.omega(0, 1) == doctest::Approx(2.5 + 1.0));
    CHECK(energies.omega(1, 0) == -energies.omega(0, 1));

    CHECK_THROWS_AS(analytic_rates(HamiltonianSpec::zero(2), updown), DimensionError);
}

TEST_CASE("rate table invariants on random channels") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = std::size_t{1} << (1 + trial % 5);
        const auto channels = random_channels(rng, dim, 1 + trial % 4);
        std::vector<double> e(dim);
        for (auto& x : e) x = static_cast<double>(rng() % 100) / 10.0;
        const auto t = analytic_rates(HamiltonianSpec{e}, channels);
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(t.gamma(i, i) == 0.0);
            CHECK(t.delta(i, i) == 0.0);
            CHECK(t.omega(i, i) == 0.0);
            for (std::size_t j = 0; j < dim; ++j) {
                REQUIRE(t.gamma(i, j) >= 0.0);
                REQUIRE(t.gamma(i, j) == t.gamma(j, i));
                REQUIRE(t.delta(i, j) == -t.delta(j, i));
                REQUIRE(t.omega(i, j) == -t.omega(j, i));
                REQUIRE(std::abs(t.gamma(i, j) - decay_rate(channels, i, j)) <=
                        1e-13 * (1.0 + t.gamma(i, j)));
            }
        }
    }
}

TEST_CASE("real eigenvalues give zero frequency shift") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<DiagonalChannel> channels;
    for (int m = 0; m < 3; ++m) {
        std::vector<cplx> lam(8);
        for (auto& l : lam) l = u(rng);
        channels.emplace_back(0.7, std::move(lam));
    }
    const auto t = analytic_rates(HamiltonianSpec::zero(8), channels);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) CHECK(t.delta(i, j) == 0.0);
}

TEST_CASE("coherence_closed_form") {
    RateTable zero(2);
    CHECK(coherence_closed_form(zero, 0.5, 0, 1, 0.0) == cplx(0.5));

    const std::vector<DiagonalChannel> two{DiagonalChannel(1.0, {1.0, -1.0})};
    const auto t = analytic_rates(HamiltonianSpec::zero(2), two);
    REQUIRE(t.gamma(0, 1) == 2.0);
    CHECK(std::abs(coherence_closed_form(t, 0.5, 0, 1, 1.0) - 0.06766764161830635) < 1e-15);

    const auto rot = analytic_rates(HamiltonianSpec{{0.0, std::numbers::pi}}, {});
    CHECK(std::abs(coherence_closed_form(rot, 0.5, 0, 1, 1.0) - (-0.5)) < 1e-15);
    CHECK_THROWS_AS(coherence_closed_form(rot, 0.5, 0, 1, -1.0), ValidationError);
}

TEST_CASE("dissipator_element_closed_form examples") {
    const std::vector<DiagonalChannel> updown{DiagonalChannel(1.0, {1.0, 0.0, 0.0, -1.0})};
    CHECK(dissipator_element_closed_form(updown, 2, 2, 0.3) == cplx(0.0));
    CHECK(dissipator_element_closed_form(updown, 0, 3, 1.0) == cplx(-2.0));
    const std::vector<DiagonalChannel> complex{DiagonalChannel(1.0, {kI, 1.0})};
    CHECK(std::abs(dissipator_element_closed_form(complex, 0, 1, 1.0) - cplx(-1.0, 1.0)) < 1e-15);
}

TEST_CASE("elementwise closed form agrees with the full dissipator") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = std::size_t{1} << (1 + trial % 4);
        const auto channels = random_channels(rng, dim, 1 + trial % 4);
        std::vector<oracle::Op> ops;
        for (const auto& ch : channels) ops.push_back({ch.gamma, to_oracle(ch.to_channel().op)});
        const auto rho = oracle::random_hermitian(rng, dim);
        const auto brute = oracle::dissipator(ops, rho);
        const auto table = analytic_rates(HamiltonianSpec::zero(dim), channels);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                const cplx closed = dissipator_element_closed_form(channels, i, j, rho[i][j]);
                const cplx rates = (kI * table.delta(i, j) - table.gamma(i, j)) * rho[i][j];
                const double scale = 1e-9 * (1.0 + std::abs(brute[i][j]));
                REQUIRE(std::abs(brute[i][j] - closed) < scale);
                REQUIRE(std::abs(closed - rates) < scale);
            }
    }
}

TEST_CASE("diagonal channel conversion") {
    const Channel diag_ch(0.5, diag({1, 2}));
    const auto d = DiagonalChannel::from_channel(diag_ch);
    REQUIRE(d);
    CHECK(d->eigenvalues == std::vector<cplx>{1.0, 2.0});
    CHECK(d->to_channel().op == diag_ch.op);
    CHECK_FALSE(DiagonalChannel::from_channel(Channel(1.0, ComplexMatrix::from_rows({{0, 1}, {1, 0}}))));
    CHECK_THROWS_AS(Channel(0.0, ComplexMatrix(2)), ValidationError);
    CHECK_THROWS_AS(DiagonalChannel(-1.0, {1.0}), ValidationError);
}
