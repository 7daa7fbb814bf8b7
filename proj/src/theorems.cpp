#include "dephaser/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dephaser/errors.hpp"

namespace dephaser {
namespace {

constexpr cplx kI{0.0, 1.0};

// (d/dt rho)_ii of the master equation, evaluated elementwise in O(M d^2).
double population_derivative(const ComplexMatrix& h, std::span<const Channel> channels,
                             const ComplexMatrix& rho, std::size_t i) {
    const std::size_t d = rho.dim();
    cplx comm = 0.0;
    for (std::size_t k = 0; k < d; ++k) comm += h(i, k) * rho(k, i) - rho(i, k) * h(k, i);
    cplx total = -kI * comm;
    for (const auto& ch : channels) {
        const ComplexMatrix& a = ch.op;
        cplx sandwich = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            if (a(i, k) == 0.0) continue;
            for (std::size_t l = 0; l < d; ++l) sandwich += a(i, k) * rho(k, l) * std::conj(a(i, l));
        }
        // (A^+A rho)_ii + (rho A^+A)_ii
        cplx anti = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            cplx ada_ik = 0.0;
            cplx ada_ki = 0.0;
            for (std::size_t l = 0; l < d; ++l) {
                ada_ik += std::conj(a(l, i)) * a(l, k);
                ada_ki += std::conj(a(l, k)) * a(l, i);
            }
            anti += ada_ik * rho(k, i) + rho(i, k) * ada_ki;
        }
        total += 0.5 * ch.gamma * (2.0 * sandwich - anti);
    }
    return total.real();
}

BoundReport evaluate_chain(std::span<const std::size_t> path, const Tolerances& tol,
                           auto&& gamma_of) {
    if (path.empty()) throw ValidationError("chain bound needs at least one basis state");
    BoundReport report;
    report.n = path.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double link = gamma_of(path[k - 1], path[k]);
        report.link_rates.push_back(link);
        sum += link;
    }
    report.lhs = gamma_of(path.front(), path.back());
    report.rhs = static_cast<double>(report.n) * sum;
    report.margin = report.rhs - report.lhs;
    report.tight = report.margin <= std::max(tol.rtol_rate * report.rhs, kTightnessFloor);
    return report;
}

bool violates(const BoundReport& r, const Tolerances& tol) {
    return r.margin < -std::max(tol.rtol_rate * r.rhs, kTightnessFloor);
}

BoundReport checked(BoundReport r, const Tolerances& tol) {
    if (violates(r, tol)) {
        throw TheoremViolation("chain bound violated: lhs " + std::to_string(r.lhs) +
                               " exceeds rhs " + std::to_string(r.rhs));
    }
    return r;
}

}  // namespace

double leakage_rate(std::span<const Channel> channels, std::size_t j) {
    double rate = 0.0;
    for (const auto& ch : channels) {
        if (j >= ch.op.dim()) throw DimensionError("basis index out of range");
        double col = 0.0;
        for (std::size_t k = 0; k < ch.op.dim(); ++k)
            if (k != j) col += std::norm(ch.op(k, j));
        rate += ch.gamma * col;
    }
    return rate;
}

PreservationReport check_population_preserving(const ComplexMatrix& h,
                                               std::span<const Channel> channels,
                                               const Tolerances& tol) {
    for (const auto& ch : channels) {
        if (ch.op.dim() != h.dim()) {
            throw DimensionError("Lindblad operator dim does not match Hamiltonian dim");
        }
    }
    const std::size_t dim = h.dim();
    PreservationReport report;

    // Structural decision: first failing channel by largest violation, else H.
    std::optional<StructuralWitness> channel_witness;
    for (std::size_t m = 0; m < channels.size(); ++m) {
        const auto check = is_diagonal(channels[m].op, tol);
        if (!check && (!channel_witness || check.worst.magnitude > channel_witness->magnitude)) {
            channel_witness = StructuralWitness{"A[" + std::to_string(m) + "]", check.worst.i,
                                                check.worst.j, check.worst.magnitude};
        }
    }
    const auto h_check = is_diagonal(h, tol);
    if (!channel_witness && h_check) return report;
    report.verdict = false;

    if (channel_witness) {
        report.structural_witness = channel_witness;
        // Probe rho = |j><j| for every j; population leaks at the rate of the
        // off-diagonal column weight.
        LeakageWitness best;
        for (std::size_t j = 0; j < dim; ++j) {
            ComplexMatrix probe(dim);
            probe(j, j) = 1.0;
            const double rate = -population_derivative(h, channels, probe, j);
            if (std::abs(rate) > std::abs(best.rate)) best = {j, std::abs(rate)};
        }
        report.leakage_witness = best;
        return report;
    }

    report.structural_witness =
        StructuralWitness{"H", h_check.worst.i, h_check.worst.j, h_check.worst.magnitude};
    const std::size_t i = h_check.worst.i;
    const std::size_t j = h_check.worst.j;
    LeakageWitness best{i, 0.0};
    for (const double phi : {0.0, std::numbers::pi / 2.0}) {
        const cplx phase = std::polar(1.0, phi);
        ComplexMatrix probe(dim);
        probe(i, i) = 0.5;
        probe(j, j) = 0.5;
        probe(i, j) = 0.5 * std::conj(phase);
        probe(j, i) = 0.5 * phase;
        const double rate = std::abs(population_derivative(h, channels, probe, i));
        if (rate > best.rate) best.rate = rate;
    }
    report.leakage_witness = best;
    return report;
}

BoundReport chain_bound(const RateTable& rates, std::span<const std::size_t> path,
                        const Tolerances& tol) {
    for (std::size_t p : path) {
        if (p >= rates.dim()) throw ValidationError("path index out of range of the rate table");
    }
    return checked(evaluate_chain(path, tol,
                                  [&](std::size_t a, std::size_t b) { return rates.gamma(a, b); }),
                   tol);
}

BoundReport chain_bound(const RateTable& rates, const SpinFlipPath& path, const Tolerances& tol) {
    const auto idx = path.indices();
    return chain_bound(rates, idx, tol);
}

BoundReport chain_bound(std::span<const DiagonalChannel> channels,
                        std::span<const std::size_t> path, const Tolerances& tol) {
    return checked(evaluate_chain(path, tol,
                                  [&](std::size_t a, std::size_t b) {
                                      return decay_rate(channels, a, b);
                                  }),
                   tol);
}

bool equality_condition(std::span<const DiagonalChannel> channels,
                        std::span<const std::size_t> path, const Tolerances& tol) {
    if (path.size() < 3) return true;
    for (const auto& ch : channels) {
        const auto& lam = ch.eigenvalues;
        for (std::size_t p : path) {
            if (p >= lam.size()) throw ValidationError("path index out of range of the channel");
        }
        const cplx first = lam[path[0]] - lam[path[1]];
        for (std::size_t k = 2; k < path.size(); ++k) {
            const cplx step = lam[path[k - 1]] - lam[path[k]];
            if (std::abs(step - first) > tol.atol_zero) return false;
        }
    }
    return true;
}

bool equality_condition(std::span<const DiagonalChannel> channels, const SpinFlipPath& path,
                        const Tolerances& tol) {
    const auto idx = path.indices();
    return equality_condition(channels, idx, tol);
}

BoundReport ghz_bound(const RateTable& rates, std::size_t n_qubits, const Tolerances& tol) {
    if (rates.dim() != register_dim(n_qubits)) {
        throw DimensionError("rate table does not cover a " + std::to_string(n_qubits) +
                             "-qubit register");
    }
    return chain_bound(rates, ghz_chain(n_qubits), tol);
}

std::optional<MinPathBound> min_hamming_path_bound(std::span<const DiagonalChannel> channels,
                                                   const BasisState& from, const BasisState& to,
                                                   const Tolerances& tol,
                                                   std::size_t max_distance) {
    if (from.qubits() != to.qubits()) throw DimensionError("endpoints have different qubit counts");
    std::vector<std::size_t> order;
    for (std::size_t q = 1; q <= from.qubits(); ++q)
        if (from.spin(q) != to.spin(q)) order.push_back(q);
    if (order.size() > max_distance) return std::nullopt;

    std::optional<MinPathBound> best;
    do {
        std::vector<BasisState> states{from};
        for (std::size_t q : order) states.push_back(states.back().flipped(q));
        SpinFlipPath path(std::move(states));
        const auto idx = path.indices();
        BoundReport report = chain_bound(channels, idx, tol);
        if (!best || report.rhs < best->report.rhs) best = MinPathBound{std::move(path), report};
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    // splitmix64 over (seed, trial) so neighbouring trials are decorrelated.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ChainBoundSummary verify_chain_bound_random(const ChainBoundConfig& config, const Tolerances& tol) {
    const std::size_t dim = register_dim(config.n_qubits);
    if (config.max_channels == 0) throw ValidationError("need at least one channel per trial");
    if (config.max_path_length == 0) throw ValidationError("path length must be >= 1");

    ChainBoundSummary summary;
    bool first = true;
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = trial_seed(config.seed, trial);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick_state(0, dim - 1);
        std::uniform_int_distribution<std::size_t> pick_qubit(1, config.n_qubits);

        const std::size_t n_channels =
            std::uniform_int_distribution<std::size_t>(1, config.max_channels)(rng);
        const bool equal_steps = unit(rng) < config.equal_steps_fraction;
        // Equal-step instances need distinct states so the progression is consistent.
        const std::size_t length_cap =
            equal_steps ? std::min(config.max_path_length, dim - 1) : config.max_path_length;
        const std::size_t length = std::uniform_int_distribution<std::size_t>(1, length_cap)(rng);
        const bool spin_flip = !equal_steps && unit(rng) < 0.5;

        std::vector<std::size_t> path;
        if (equal_steps) {
            std::vector<std::size_t> all(dim);
            for (std::size_t k = 0; k < dim; ++k) all[k] = k;
            std::shuffle(all.begin(), all.end(), rng);
            path.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(length + 1));
        } else if (spin_flip) {
            BasisState current(config.n_qubits, pick_state(rng));
            path.push_back(current.index());
            for (std::size_t k = 0; k < length; ++k) {
                current = current.flipped(pick_qubit(rng));
                path.push_back(current.index());
            }
        } else {
            for (std::size_t k = 0; k <= length; ++k) path.push_back(pick_state(rng));
        }

        std::vector<DiagonalChannel> channels;
        channels.reserve(n_channels);
        for (std::size_t m = 0; m < n_channels; ++m) {
            // gamma in (0, 1]
            const double gamma = 1.0 - unit(rng);
            std::vector<cplx> lam(dim);
            for (auto& l : lam) l = cplx(unit(rng), unit(rng));
            if (equal_steps) {
                const cplx step(2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0);
                const cplx start = lam[path.front()];
                for (std::size_t k = 0; k < path.size(); ++k)
                    lam[path[k]] = start - static_cast<double>(k) * step;
            }
            channels.emplace_back(gamma, std::move(lam));
        }

        const BoundReport report = evaluate_chain(
            path, tol, [&](std::size_t a, std::size_t b) { return decay_rate(channels, a, b); });
        const bool eq = equality_condition(channels, path, tol);

        ++summary.trials;
        if (equal_steps) ++summary.equal_step_trials;
        if (spin_flip) ++summary.spin_flip_trials;
        if (report.tight) ++summary.tight;
        if (eq) ++summary.equality;
        const bool violation = violates(report, tol);
        const bool disagreement = report.tight != eq;
        if (violation) ++summary.bound_violations;
        if (disagreement) ++summary.disagreements;
        if ((violation || disagreement) && !summary.first_failing_seed) {
            summary.first_failing_seed = seed;
        }
        const double relative = report.margin / std::max(report.rhs, kTightnessFloor);
        if (first || relative < summary.worst_relative_margin) {
            summary.worst_relative_margin = relative;
            first = false;
        }
    }
    return summary;
}

void require_chain_bound(const ChainBoundSummary& summary) {
    if (summary.ok()) return;
    throw TheoremViolation("chain bound check failed: " +
                           std::to_string(summary.bound_violations) + " violations, " +
                           std::to_string(summary.disagreements) +
                           " tightness disagreements; first failing trial seed " +
                           std::to_string(summary.first_failing_seed.value_or(0)));
}

}  // namespace dephaser
