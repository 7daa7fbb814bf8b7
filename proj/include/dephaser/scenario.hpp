#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dephaser/lindblad.hpp"
#include "dephaser/register.hpp"
#include "dephaser/tolerances.hpp"

namespace dephaser {

// One channel entry of a scenario file. `op` is either a preset name, which
// may expand to several channels, or an explicit matrix.
struct ChannelSpec {
    std::vector<double> gamma;
    std::variant<std::string, ComplexMatrix> op;

    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

// No Hamiltonian, diagonal energies, or an explicit Hermitian matrix.
using HamiltonianInput = std::variant<std::monostate, std::vector<double>, ComplexMatrix>;
// Preset name ("ghz", "psi_plus", ..., or a bitstring like "udd") or amplitudes.
using InitialStateInput = std::variant<std::string, std::vector<cplx>>;

struct Scenario {
    std::size_t n_qubits = 1;
    HamiltonianInput hamiltonian;
    std::vector<ChannelSpec> channels;
    InitialStateInput initial_state = std::string("ghz");
    double t_max = 1.0;
    std::optional<std::size_t> steps;  // defaults to the fewest stable steps
    std::vector<std::pair<BasisState, BasisState>> track;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Runtime objects built from a scenario.
struct ResolvedScenario {
    std::size_t n_qubits = 0;
    ComplexMatrix hamiltonian{1};
    std::vector<Channel> channels;
    DensityMatrix rho0 = DensityMatrix::trusted(ComplexMatrix(1));
    std::vector<std::pair<std::size_t, std::size_t>> track;
    double t_max = 1.0;
    std::size_t steps = 1;
};

// Complex numbers travel as [re, im] pairs.
nlohmann::json complex_to_json(cplx v);
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

// Throws ValidationError with a field path on malformed input.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& s);

// Builds H, channels, initial state and tracked indices; checks dims.
ResolvedScenario resolve(const Scenario& s, const Tolerances& tol = {});

}  // namespace dephaser
