#include "dephaser/presets.hpp"

#include <algorithm>

#include "dephaser/errors.hpp"
#include "dephaser/register.hpp"

namespace dephaser {
namespace {

ComplexMatrix up_projector() {
    ComplexMatrix p(2);
    p(0, 0) = 1.0;
    return p;
}

// |u><u| on qubit `qubit` (1-based), identity elsewhere.
ComplexMatrix local_up_projector(std::size_t n_qubits, std::size_t qubit) {
    ComplexMatrix op = qubit == 1 ? up_projector() : ComplexMatrix::identity(2);
    for (std::size_t q = 2; q <= n_qubits; ++q) {
        op = kron(op, q == qubit ? up_projector() : ComplexMatrix::identity(2));
    }
    return op;
}

ComplexMatrix basis_projector(std::size_t dim, std::size_t index) {
    ComplexMatrix p(dim);
    p(index, index) = 1.0;
    return p;
}

void require_qubits(const PresetSpec& spec, std::size_t expected) {
    if (spec.n_qubits != expected) {
        throw ValidationError("preset " + spec.name + " needs " + std::to_string(expected) +
                              " qubits, got " + std::to_string(spec.n_qubits));
    }
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"local_projectors", "collective_updown",
                                                "split_updown", "local_dephasing_n",
                                                "collective_linear_n"};
    return names;
}

std::size_t preset_arity(std::string_view name, std::size_t n_qubits) {
    if (name == "local_projectors") return 2;
    if (name == "collective_updown" || name == "split_updown" || name == "collective_linear_n")
        return 1;
    if (name == "local_dephasing_n") return n_qubits;
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

PresetModel build_preset(const PresetSpec& spec) {
    const std::size_t arity = preset_arity(spec.name, spec.n_qubits);
    if (spec.rates.size() != arity) {
        throw ValidationError("preset " + spec.name + " takes " + std::to_string(arity) +
                              " rate(s), got " + std::to_string(spec.rates.size()));
    }
    const std::size_t dim = register_dim(spec.n_qubits);
    PresetModel model{HamiltonianSpec::zero(dim), {}};
    if (!spec.energies.empty()) {
        if (spec.energies.size() != dim) {
            throw ValidationError("preset energies need " + std::to_string(dim) + " entries");
        }
        model.hamiltonian.energies = spec.energies;
    }
    auto& out = model.channels;

    if (spec.name == "local_projectors") {
        require_qubits(spec, 2);
        out.emplace_back(spec.rates[0], local_up_projector(2, 1));
        out.emplace_back(spec.rates[1], local_up_projector(2, 2));
    } else if (spec.name == "collective_updown") {
        require_qubits(spec, 2);
        out.emplace_back(spec.rates[0], basis_projector(4, 0) - basis_projector(4, 3));
    } else if (spec.name == "split_updown") {
        require_qubits(spec, 2);
        out.emplace_back(spec.rates[0], basis_projector(4, 0));
        out.emplace_back(spec.rates[0], basis_projector(4, 3));
    } else if (spec.name == "local_dephasing_n") {
        for (std::size_t k = 1; k <= spec.n_qubits; ++k)
            out.emplace_back(spec.rates[k - 1], local_up_projector(spec.n_qubits, k));
    } else if (spec.name == "collective_linear_n") {
        std::vector<double> ups(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const BasisState s(spec.n_qubits, i);
            const auto spins = s.spins();
            ups[i] = static_cast<double>(std::count(spins.begin(), spins.end(), Spin::up));
        }
        out.emplace_back(spec.rates[0], ComplexMatrix::diagonal(std::span<const double>(ups)));
    }
    return model;
}

std::vector<DiagonalChannel> diagonal_channels(const std::vector<Channel>& channels,
                                               const Tolerances& tol) {
    std::vector<DiagonalChannel> out;
    out.reserve(channels.size());
    for (std::size_t m = 0; m < channels.size(); ++m) {
        auto diag = DiagonalChannel::from_channel(channels[m], tol);
        if (!diag) {
            throw ValidationError("channel " + std::to_string(m) + " is not diagonal");
        }
        out.push_back(std::move(*diag));
    }
    return out;
}

}  // namespace dephaser
