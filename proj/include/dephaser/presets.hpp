#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dephaser/lindblad.hpp"

namespace dephaser {

// Stable names, usable in scenario files:
//   local_projectors     2 qubits, rates (g1, g2): |u><u| on qubit 1 and on qubit 2
//   collective_updown    2 qubits, rate g: |uu><uu| - |dd><dd|
//   split_updown         2 qubits, rate g: |uu><uu| and |dd><dd|, both at g
//   local_dephasing_n    n qubits, n rates: |u><u| on qubit k
//   collective_linear_n  n qubits, rate g: eigenvalue = number of up spins
struct PresetSpec {
    std::string name;
    std::size_t n_qubits = 2;
    std::vector<double> rates;
    // Optional diagonal energies (hbar = 1); H = 0 when empty.
    std::vector<double> energies;
};

struct PresetModel {
    HamiltonianSpec hamiltonian;
    std::vector<Channel> channels;
};

const std::vector<std::string>& preset_names();
// Number of rates the preset takes for an n-qubit register.
std::size_t preset_arity(std::string_view name, std::size_t n_qubits);

// Throws ValidationError for an unknown name, wrong qubit count or rate count.
PresetModel build_preset(const PresetSpec& spec);

// Diagonal views of channels known to be diagonal (presets, validated scenarios).
std::vector<DiagonalChannel> diagonal_channels(const std::vector<Channel>& channels,
                                               const Tolerances& tol = {});

}  // namespace dephaser
