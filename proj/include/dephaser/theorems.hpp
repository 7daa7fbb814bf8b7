#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dephaser/lindblad.hpp"
#include "dephaser/register.hpp"
#include "dephaser/tolerances.hpp"

namespace dephaser {

// Absolute tightness slack used when the chain bound's right-hand side is zero.
inline constexpr double kTightnessFloor = 1e-12;

struct StructuralWitness {
    std::string op;  // "H" or "A[m]" (0-based channel index)
    std::size_t i = 0;
    std::size_t j = 0;
    double magnitude = 0.0;
};

struct LeakageWitness {
    std::size_t state = 0;  // basis index whose population moves
    double rate = 0.0;      // |d rho_jj / dt| at the probe state
};

struct PreservationReport {
    bool verdict = true;
    std::optional<StructuralWitness> structural_witness;
    std::optional<LeakageWitness> leakage_witness;
};

// Decides by diagonality of H and every A. On failure, probes the dynamics:
// a failing channel is probed with rho = |j><j|, a failing H with
// (|i> + e^{i phi}|j>)/sqrt(2), phi in {0, pi/2}.
PreservationReport check_population_preserving(const ComplexMatrix& h,
                                               std::span<const Channel> channels,
                                               const Tolerances& tol = {});

// sum_m gamma_m sum_{k != j} |A_kj|^2
double leakage_rate(std::span<const Channel> channels, std::size_t j);

struct BoundReport {
    double lhs = 0.0;  // Gamma between the path endpoints
    std::vector<double> link_rates;
    std::size_t n = 0;  // number of links
    double rhs = 0.0;   // n * sum(link_rates)
    bool tight = false;
    double margin = 0.0;  // rhs - lhs
};

// Evaluates Gamma_{p0,pn} <= n sum_k Gamma_{p(k-1),p(k)} along any sequence of
// basis indices (length >= 2). Throws TheoremViolation if the inequality fails
// beyond rtol_rate.
BoundReport chain_bound(const RateTable& rates, std::span<const std::size_t> path,
                        const Tolerances& tol = {});
BoundReport chain_bound(const RateTable& rates, const SpinFlipPath& path,
                        const Tolerances& tol = {});
// Same bound evaluated from channel eigenvalues without a full rate table.
BoundReport chain_bound(std::span<const DiagonalChannel> channels,
                        std::span<const std::size_t> path, const Tolerances& tol = {});

// True iff for every channel the steps lam_{p(k-1)} - lam_{p(k)} are equal for all k.
bool equality_condition(std::span<const DiagonalChannel> channels,
                        std::span<const std::size_t> path, const Tolerances& tol = {});
bool equality_condition(std::span<const DiagonalChannel> channels, const SpinFlipPath& path,
                        const Tolerances& tol = {});

// chain_bound along ghz_chain(n): lhs is Gamma_GHZ, links are the single-qubit rates.
BoundReport ghz_bound(const RateTable& rates, std::size_t n_qubits, const Tolerances& tol = {});

struct MinPathBound {
    SpinFlipPath path;
    BoundReport report;
};

// Smallest rhs over all orderings of the differing qubits between two basis
// states. Returns nullopt when the Hamming distance exceeds max_distance.
std::optional<MinPathBound> min_hamming_path_bound(std::span<const DiagonalChannel> channels,
                                                   const BasisState& from, const BasisState& to,
                                                   const Tolerances& tol = {},
                                                   std::size_t max_distance = 8);

struct ChainBoundConfig {
    std::size_t n_qubits = 3;
    std::size_t max_channels = 4;
    std::size_t max_path_length = 10;
    std::size_t trials = 1000;
    std::uint64_t seed = 20260101;
    // Fraction of trials whose channels get equal eigenvalue steps along the path.
    double equal_steps_fraction = 0.1;
};

struct ChainBoundSummary {
    std::size_t trials = 0;
    std::size_t bound_violations = 0;
    std::size_t tight = 0;
    std::size_t equality = 0;
    std::size_t disagreements = 0;  // tight != equality_condition
    std::size_t equal_step_trials = 0;
    std::size_t spin_flip_trials = 0;
    double worst_relative_margin = 0.0;  // min over trials of margin / max(rhs, floor)
    std::optional<std::uint64_t> first_failing_seed;

    bool ok() const noexcept { return bound_violations == 0 && disagreements == 0; }
};

// Seed for trial k of a run; reproduces a single failing instance.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

// Random diagonal channels (complex eigenvalues in the unit square, gamma in
// (0,1]) and random paths. Returns the summary; call ok() or use
// require_chain_bound to turn violations into TheoremViolation.
ChainBoundSummary verify_chain_bound_random(const ChainBoundConfig& config, const Tolerances& tol = {});
void require_chain_bound(const ChainBoundSummary& summary);

}  // namespace dephaser
