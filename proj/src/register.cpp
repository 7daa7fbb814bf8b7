#include "dephaser/register.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <string>

#include "dephaser/errors.hpp"

namespace dephaser {

std::size_t register_dim(std::size_t n_qubits) {
    if (n_qubits == 0) throw ValidationError("register needs at least one qubit");
    if (n_qubits > kMaxAnalyticQubits) {
        throw ValidationError("register of " + std::to_string(n_qubits) +
                              " qubits exceeds the limit of " +
                              std::to_string(kMaxAnalyticQubits));
    }
    return std::size_t{1} << n_qubits;
}

BasisState::BasisState(std::size_t n_qubits, std::size_t index) : n_(n_qubits), index_(index) {
    if (index >= register_dim(n_qubits)) {
        throw ValidationError("basis index " + std::to_string(index) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    }
}

BasisState::BasisState(std::span<const Spin> spins) : n_(spins.size()), index_(0) {
    register_dim(n_);
    for (Spin s : spins) index_ = (index_ << 1) | static_cast<std::size_t>(s);
}

BasisState BasisState::parse(std::string_view label) {
    std::vector<Spin> spins;
    for (char c : label) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == 'u') {
            spins.push_back(Spin::up);
        } else if (c == 'd') {
            spins.push_back(Spin::down);
        } else {
            throw ValidationError("invalid basis label '" + std::string(label) +
                                  "': expected only 'u' and 'd'");
        }
    }
    if (spins.empty()) throw ValidationError("empty basis label");
    return BasisState(spins);
}

Spin BasisState::spin(std::size_t qubit) const {
    if (qubit == 0 || qubit > n_) throw ValidationError("qubit number out of range");
    return static_cast<Spin>((index_ >> (n_ - qubit)) & 1u);
}

std::vector<Spin> BasisState::spins() const {
    std::vector<Spin> out(n_);
    for (std::size_t q = 1; q <= n_; ++q) out[q - 1] = spin(q);
    return out;
}

BasisState BasisState::flipped(std::size_t qubit) const {
    if (qubit == 0 || qubit > n_) throw ValidationError("qubit number out of range");
    return BasisState(n_, index_ ^ (std::size_t{1} << (n_ - qubit)));
}

std::string BasisState::label() const {
    std::string out(n_, 'u');
    for (std::size_t q = 1; q <= n_; ++q)
        if (spin(q) == Spin::down) out[q - 1] = 'd';
    return out;
}

std::size_t hamming_distance(const BasisState& a, const BasisState& b) {
    if (a.qubits() != b.qubits()) throw DimensionError("basis states have different qubit counts");
    return static_cast<std::size_t>(std::popcount(a.index() ^ b.index()));
}

StateVector::StateVector(std::size_t n_qubits, std::vector<cplx> amplitudes, const Tolerances& tol)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != register_dim(n_qubits)) {
        throw DimensionError("state of " + std::to_string(n_qubits) + " qubits needs " +
                             std::to_string(register_dim(n_qubits)) + " amplitudes");
    }
    double norm = 0.0;
    for (const cplx& a : amps_) norm += std::norm(a);
    if (std::abs(norm - 1.0) > tol.rtol_rate) {
        throw ValidationError("state vector is not normalized (norm^2 = " + std::to_string(norm) +
                              ")");
    }
}

StateVector StateVector::basis(const BasisState& state) {
    std::vector<cplx> amps(register_dim(state.qubits()));
    amps[state.index()] = 1.0;
    return StateVector(state.qubits(), std::move(amps));
}

cplx inner_product(const StateVector& bra, const StateVector& ket) {
    if (bra.qubits() != ket.qubits()) throw DimensionError("inner product of different registers");
    cplx sum = 0.0;
    for (std::size_t k = 0; k < bra.amplitudes().size(); ++k) sum += std::conj(bra[k]) * ket[k];
    return sum;
}

DensityMatrix DensityMatrix::validated(ComplexMatrix m, const Tolerances& tol) {
    if (!std::has_single_bit(m.dim())) {
        throw DimensionError("density matrix dimension must be a power of two");
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol.atol_herm) {
        throw ValidationError("density matrix is not Hermitian (defect " +
                              std::to_string(defect) + ")");
    }
    const cplx tr = trace(m);
    if (std::abs(tr - 1.0) > tol.rtol_rate) {
        throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
    }
    if (!is_positive_semidefinite(m, 1e-8)) {
        throw ValidationError("density matrix has an eigenvalue below -1e-8");
    }
    return DensityMatrix(std::move(m));
}

SpinFlipPath::SpinFlipPath(std::vector<BasisState> states) : states_(std::move(states)) {
    if (states_.empty()) throw ValidationError("spin-flip path needs at least one state");
    for (std::size_t k = 1; k < states_.size(); ++k) {
        if (hamming_distance(states_[k - 1], states_[k]) != 1) {
            throw ValidationError("states " + states_[k - 1].label() + " and " +
                                  states_[k].label() + " do not differ by a single flip");
        }
    }
}

std::vector<std::size_t> SpinFlipPath::indices() const {
    std::vector<std::size_t> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.index());
    return out;
}

StateVector ghz_state(std::size_t n_qubits) {
    const std::size_t dim = register_dim(n_qubits);
    std::vector<cplx> amps(dim);
    amps.front() = M_SQRT1_2;
    amps.back() += M_SQRT1_2;
    return StateVector(n_qubits, std::move(amps));
}

StateVector bell_state(Bell which) {
    std::vector<cplx> amps(4);
    switch (which) {
        case Bell::psi_plus:
            amps[1] = M_SQRT1_2;
            amps[2] = M_SQRT1_2;
            break;
        case Bell::psi_minus:
            amps[1] = M_SQRT1_2;
            amps[2] = -M_SQRT1_2;
            break;
        case Bell::phi_plus:
            amps[0] = M_SQRT1_2;
            amps[3] = M_SQRT1_2;
            break;
        case Bell::phi_minus:
            amps[0] = M_SQRT1_2;
            amps[3] = -M_SQRT1_2;
            break;
    }
    return StateVector(2, std::move(amps));
}

SpinFlipPath ghz_chain(std::size_t n_qubits) {
    const std::size_t dim = register_dim(n_qubits);
    std::vector<BasisState> states;
    states.reserve(n_qubits + 1);
    for (std::size_t k = 0; k <= n_qubits; ++k) {
        // first k qubits up (0 bits), remaining n-k down (1 bits)
        states.emplace_back(n_qubits, (dim >> k) - 1);
    }
    return SpinFlipPath(std::move(states));
}

SpinFlipPath hamming_path(const BasisState& from, const BasisState& to) {
    if (from.qubits() != to.qubits()) {
        throw DimensionError("hamming_path endpoints have different qubit counts");
    }
    std::vector<BasisState> states{from};
    BasisState current = from;
    for (std::size_t q = 1; q <= from.qubits(); ++q) {
        if (current.spin(q) != to.spin(q)) {
            current = current.flipped(q);
            states.push_back(current);
        }
    }
    return SpinFlipPath(std::move(states));
}

DensityMatrix density_from_pure(const StateVector& psi) {
    const std::size_t dim = psi.amplitudes().size();
    ComplexMatrix rho(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix::trusted(std::move(rho));
}

}  // namespace dephaser
