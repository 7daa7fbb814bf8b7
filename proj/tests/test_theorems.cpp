#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dephaser/dynamics.hpp"
#include "dephaser/errors.hpp"
#include "dephaser/presets.hpp"
#include "dephaser/theorems.hpp"
#include "test_support.hpp"

using namespace dephaser;

namespace {

ComplexMatrix diag(std::vector<double> v) {
    return ComplexMatrix::diagonal(std::span<const double>(v));
}

RateTable preset_rates(const std::string& name, std::size_t n, std::vector<double> rates) {
    const auto model = build_preset({name, n, std::move(rates), {}});
    return analytic_rates(model.hamiltonian, diagonal_channels(model.channels));
}

std::vector<DiagonalChannel> preset_diag(const std::string& name, std::size_t n,
                                         std::vector<double> rates) {
    return diagonal_channels(build_preset({name, n, std::move(rates), {}}).channels);
}

}  // namespace

TEST_CASE("population preservation: diagonal presets pass") {
    const auto model = build_preset({"collective_updown", 2, {1.0}, {}});
    const auto report = check_population_preserving(diag({0.1, 0.2, 0.3, 0.4}), model.channels);
    CHECK(report.verdict);
    CHECK_FALSE(report.structural_witness);
    CHECK_FALSE(report.leakage_witness);
}

TEST_CASE("population preservation: off-diagonal Lindblad operator leaks") {
    const std::vector<Channel> flip{Channel(1.0, ComplexMatrix::from_rows({{0, 1}, {1, 0}}))};
    const auto report = check_population_preserving(ComplexMatrix(2), flip);
    CHECK_FALSE(report.verdict);
    REQUIRE(report.structural_witness);
    CHECK(report.structural_witness->op == "A[0]");
    CHECK(report.structural_witness->magnitude == 1.0);
    REQUIRE(report.leakage_witness);
    CHECK(report.leakage_witness->rate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(leakage_rate(flip, 0) == 1.0);
}

TEST_CASE("population preservation: off-diagonal Hamiltonian") {
    auto h = ComplexMatrix(2);
    h(0, 1) = 0.3;
    h(1, 0) = 0.3;
    const auto report = check_population_preserving(h, {});
    CHECK_FALSE(report.verdict);
    REQUIRE(report.structural_witness);
    CHECK(report.structural_witness->op == "H");
    REQUIRE(report.leakage_witness);
    CHECK(report.leakage_witness->rate == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("leakage witness equals the column-weight formula and the full rhs") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t dim = 2 + trial % 6;
        std::vector<Channel> channels;
        for (int m = 0; m < 2; ++m)
            channels.emplace_back(0.3 + 0.2 * m, test_support::to_matrix(oracle::random_matrix(rng, dim)));
        const auto h = test_support::to_matrix(oracle::random_hermitian(rng, dim));
        const auto report = check_population_preserving(h, channels);
        REQUIRE_FALSE(report.verdict);
        REQUIRE(report.leakage_witness);
        const std::size_t j = report.leakage_witness->state;
        CHECK(report.leakage_witness->rate ==
              doctest::Approx(leakage_rate(channels, j)).epsilon(1e-12));
        ComplexMatrix probe(dim);
        probe(j, j) = 1.0;
        CHECK(-rhs(h, channels, probe)(j, j).real() ==
              doctest::Approx(report.leakage_witness->rate).epsilon(1e-12));
        for (std::size_t k = 0; k < dim; ++k)
            CHECK(leakage_rate(channels, k) <= report.leakage_witness->rate * (1 + 1e-12));
    }
}

TEST_CASE("converse detection of single injected entries") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = std::size_t{1} << (1 + trial % 3);
        auto model = build_preset({"local_dephasing_n", static_cast<std::size_t>(1 + trial % 3),
                                   std::vector<double>(1 + trial % 3, 0.8), {}});
        ComplexMatrix h = diag(std::vector<double>(dim, 0.0));
        const std::size_t i = rng() % dim;
        const std::size_t j = (i + 1 + rng() % (dim - 1)) % dim;
        const cplx value = std::polar(1e-3, static_cast<double>(rng() % 628) / 100.0);
        if (trial % 2 == 0) {
            h(i, j) = value;
            h(j, i) = std::conj(value);
        } else {
            model.channels[rng() % model.channels.size()].op(i, j) = value;
        }
        const auto report = check_population_preserving(h, model.channels);
        REQUIRE_FALSE(report.verdict);
        REQUIRE(report.leakage_witness);
        CHECK(report.leakage_witness->rate > 0.0);
    }
}

TEST_CASE("forward direction: diagonal dynamics keeps populations") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const std::size_t dim = std::size_t{1} << n;
        std::vector<Channel> channels;
        for (int m = 0; m < 2; ++m) {
            std::vector<cplx> lam(dim);
            for (auto& l : lam) l = cplx(u(rng), u(rng));
            channels.push_back(DiagonalChannel(0.5, lam).to_channel());
        }
        std::vector<double> e(dim);
        for (auto& x : e) x = u(rng);
        const auto h = diag(e);
        REQUIRE(check_population_preserving(h, channels).verdict);
        std::vector<cplx> amps(dim);
        double norm = 0.0;
        for (auto& a : amps) {
            a = cplx(u(rng), u(rng));
            norm += std::norm(a);
        }
        for (auto& a : amps) a /= std::sqrt(norm);
        const auto traj = evolve(h, channels, density_from_pure(StateVector(n, amps)), 1.0,
                                 min_stable_steps(h, channels, 1.0), {});
        CHECK(traj.max_population_drift() < 1e-8);
    }
}

TEST_CASE("chain_bound examples") {
    // constant real eigenvalues along a path: everything vanishes
    const std::vector<DiagonalChannel> flat{DiagonalChannel(1.0, {2.0, 2.0, 2.0, 2.0})};
    const auto flat_rates = analytic_rates(HamiltonianSpec::zero(4), flat);
    const auto r0 = chain_bound(flat_rates, ghz_chain(2));
    CHECK(r0.lhs == 0.0);
    CHECK(r0.rhs == 0.0);
    CHECK(r0.tight);

    const auto ex2 = chain_bound(preset_rates("collective_updown", 2, {1.0}), ghz_chain(2));
    CHECK(ex2.link_rates == std::vector<double>{0.5, 0.5});
    CHECK(ex2.n == 2);
    CHECK(ex2.rhs == 2.0);
    CHECK(ex2.lhs == 2.0);
    CHECK(ex2.tight);

    const auto ex3 = chain_bound(preset_rates("split_updown", 2, {1.0}), ghz_chain(2));
    CHECK(ex3.link_rates == std::vector<double>{0.5, 0.5});
    CHECK(ex3.rhs == 2.0);
    CHECK(ex3.lhs == 1.0);
    CHECK_FALSE(ex3.tight);
    CHECK(ex3.margin == 1.0);

    const std::vector<std::size_t> bad{0, 9};
    CHECK_THROWS_AS(chain_bound(flat_rates, bad), ValidationError);
    CHECK_THROWS_AS(chain_bound(flat_rates, std::vector<std::size_t>{}), ValidationError);
}

TEST_CASE("equality_condition examples") {
    const auto chain = ghz_chain(2);
    CHECK(equality_condition(preset_diag("collective_updown", 2, {1.0}), chain));
    CHECK_FALSE(equality_condition(preset_diag("split_updown", 2, {1.0}), chain));
    CHECK(equality_condition(preset_diag("split_updown", 2, {1.0}), std::vector<std::size_t>{3, 1}));
}

TEST_CASE("ghz_bound examples") {
    const auto ex1 = ghz_bound(preset_rates("local_projectors", 2, {1.0, 1.0}), 2);
    CHECK(ex1.lhs == 1.0);
    CHECK(ex1.lhs == ex1.rhs / 2);
    CHECK_FALSE(ex1.tight);

    CHECK(ghz_bound(preset_rates("collective_updown", 2, {1.0}), 2).tight);

    for (std::size_t n = 1; n <= 8; ++n) {
        const double gamma = 0.6;
        const auto r = ghz_bound(preset_rates("collective_linear_n", n, {gamma}), n);
        double links = 0.0;
        for (double l : r.link_rates) links += l;
        const double nn = static_cast<double>(n);
        CHECK(r.lhs == doctest::Approx(nn * nn * links / nn).epsilon(1e-14));
        CHECK(r.lhs == doctest::Approx(0.5 * gamma * nn * nn).epsilon(1e-14));
        CHECK(r.tight);
    }
    CHECK_THROWS_AS(ghz_bound(preset_rates("collective_updown", 2, {1.0}), 3), DimensionError);
}

TEST_CASE("factor-n: independent local dephasing") {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto r = ghz_bound(preset_rates("local_dephasing_n", n, std::vector<double>(n, 0.9)), n);
        double links = 0.0;
        for (double l : r.link_rates) links += l;
        CHECK(std::abs(r.lhs - links) <= 1e-12 * links);
        CHECK(std::abs(r.lhs - r.rhs / static_cast<double>(n)) <= 1e-12 * r.rhs);
    }
}

TEST_CASE("chain bound from eigenvalues matches the table route") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DiagonalChannel> ch;
    for (int m = 0; m < 3; ++m) {
        std::vector<cplx> lam(16);
        for (auto& l : lam) l = cplx(u(rng), u(rng));
        ch.emplace_back(u(rng) + 0.1, lam);
    }
    const auto table = analytic_rates(HamiltonianSpec::zero(16), ch);
    const std::vector<std::size_t> path{3, 9, 9, 0, 15, 4};
    const auto a = chain_bound(table, path);
    const auto b = chain_bound(ch, path);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-13));
    CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-13));
    CHECK(a.tight == b.tight);
}

TEST_CASE("min over hamming paths is no larger than the ascending path") {
    const auto ch = preset_diag("split_updown", 2, {1.0});
    const auto table = analytic_rates(HamiltonianSpec::zero(4), ch);
    const auto from = BasisState::parse("dd");
    const auto to = BasisState::parse("uu");
    const auto best = min_hamming_path_bound(ch, from, to);
    REQUIRE(best);
    CHECK(best->report.rhs <= chain_bound(table, hamming_path(from, to)).rhs);
    CHECK(best->path.states().front() == from);
    CHECK(best->path.states().back() == to);
    CHECK_FALSE(min_hamming_path_bound(preset_diag("collective_linear_n", 10, {1.0}),
                                       BasisState(10, 0), BasisState(10, 1023)));
}

TEST_CASE("random chain-bound checks") {
    ChainBoundConfig cfg;
    cfg.n_qubits = 3;
    cfg.trials = 1000;
    const auto s = verify_chain_bound_random(cfg);
    CHECK(s.trials == 1000);
    CHECK(s.bound_violations == 0);
    CHECK(s.disagreements == 0);
    CHECK(s.worst_relative_margin >= -1e-9);
    CHECK(s.equal_step_trials > 0);
    CHECK(s.spin_flip_trials > 0);
    CHECK_NOTHROW(require_chain_bound(s));

    ChainBoundConfig all_equal = cfg;
    all_equal.equal_steps_fraction = 1.0;
    all_equal.trials = 200;
    const auto eq = verify_chain_bound_random(all_equal);
    CHECK(eq.tight == 200);
    CHECK(eq.equality == 200);

    ChainBoundConfig single = cfg;
    single.max_channels = 1;
    single.trials = 300;
    CHECK(verify_chain_bound_random(single).ok());

    // same seed reproduces the same counts
    const auto again = verify_chain_bound_random(cfg);
    CHECK(again.tight == s.tight);
    CHECK(again.worst_relative_margin == s.worst_relative_margin);
}

TEST_CASE("single-channel real eigenvalues on random paths") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<cplx> lam(32);
        for (auto& l : lam) l = u(rng);
        const std::vector<DiagonalChannel> ch{DiagonalChannel(0.4, lam)};
        std::vector<std::size_t> path(2 + rng() % 9);
        for (auto& p : path) p = rng() % 32;
        const auto r = chain_bound(ch, path);
        CHECK(r.margin >= -1e-9 * r.rhs);
        CHECK(r.tight == equality_condition(ch, path));
    }
}

TEST_CASE("require_chain_bound raises on a failing summary") {
    ChainBoundSummary bad;
    bad.bound_violations = 1;
    bad.first_failing_seed = 42;
    CHECK_THROWS_AS(require_chain_bound(bad), TheoremViolation);
}
