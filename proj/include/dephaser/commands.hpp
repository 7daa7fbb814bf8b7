#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dephaser/dynamics.hpp"
#include "dephaser/scenario.hpp"
#include "dephaser/theorems.hpp"
#include "dephaser/tolerances.hpp"

namespace dephaser {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTheoremViolation = 3;

// Fits must match analytic rates within max(kFitAbsTol, kFitRelTol * Gamma).
inline constexpr double kFitAbsTol = 1e-3;
inline constexpr double kFitRelTol = 1e-3;

struct OutputFile {
    std::string name;
    std::string content;
};

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::vector<OutputFile> files;
};

nlohmann::json to_json(const PreservationReport& r, std::size_t n_qubits);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const ChainBoundSummary& s);
nlohmann::json rate_table_json(const RateTable& t, std::size_t n_qubits);
// Columns i,j,gamma,delta,omega with bitstring labels, 12 significant digits.
std::string rate_table_csv(const RateTable& t, std::size_t n_qubits);

// Analytic rates; refuses non-diagonal scenarios with the preservation report.
CommandResult cmd_rates(const Scenario& scenario, const Tolerances& tol = {});

// Integrates, writes the trajectory and fits every tracked pair; diagonal
// scenarios also get analytic-vs-fitted comparisons.
CommandResult cmd_evolve(const Scenario& scenario, const Tolerances& tol = {});

struct BoundTarget {
    bool ghz = false;
    std::optional<std::pair<BasisState, BasisState>> pair;
};
// Parses "uud,ddd".
std::pair<BasisState, BasisState> parse_pair(const std::string& text);

CommandResult cmd_bound(const Scenario& scenario, const BoundTarget& target,
                        const Tolerances& tol = {});

struct VerifyOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 20260101;
    std::size_t n_qubits = 4;  // chain-bound register; oracle suites use 1..min(n, 4)
    // Probability that an off-diagonal mutant is built; tests raise it to 1.
    double mutant_fraction = 0.5;
};

struct ClosedFormSummary {
    std::size_t instances = 0;
    std::size_t elements = 0;
    double max_relative_error = 0.0;
    std::optional<std::uint64_t> first_failing_seed;
    bool ok() const noexcept { return !first_failing_seed; }
};

struct PreservationSummary {
    std::size_t diagonal_instances = 0;
    std::size_t diagonal_confirmed = 0;  // verdict true and zero population derivative
    std::size_t mutants = 0;
    std::size_t mutants_detected = 0;  // verdict false with nonzero leakage
    double max_population_derivative = 0.0;
    std::optional<std::uint64_t> first_failing_seed;
    bool ok() const noexcept { return !first_failing_seed; }
};

// Relative error threshold for the elementwise dissipator comparison.
inline constexpr double kOracleRelTol = 1e-9;

ClosedFormSummary verify_closed_form_random(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_qubits = 4, std::size_t max_channels = 4);
PreservationSummary verify_preservation_random(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_qubits = 3, double mutant_fraction = 0.5,
                                       const Tolerances& tol = {});

CommandResult cmd_verify(const VerifyOptions& options, const Tolerances& tol = {});
CommandResult cmd_presets();

// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dephaser
