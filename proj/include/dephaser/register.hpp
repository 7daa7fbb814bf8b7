#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dephaser/matrix.hpp"
#include "dephaser/tolerances.hpp"

namespace dephaser {

// Largest register for dense analytic work (rate tables, bounds).
inline constexpr std::size_t kMaxAnalyticQubits = 10;
// Largest register for density-matrix integration.
inline constexpr std::size_t kMaxDynamicQubits = 6;

enum class Spin : unsigned char { up = 0, down = 1 };

// Product basis state of an n-qubit register. Qubit 1 is the most significant
// bit of the index, with up -> 0 and down -> 1.
class BasisState {
public:
    BasisState(std::size_t n_qubits, std::size_t index);
    BasisState(std::span<const Spin> spins);

    // Parses "udd"-style labels; whitespace is ignored.
    static BasisState parse(std::string_view label);

    std::size_t qubits() const noexcept { return n_; }
    std::size_t index() const noexcept { return index_; }
    // qubit is 1-based, leftmost = 1.
    Spin spin(std::size_t qubit) const;
    std::vector<Spin> spins() const;
    BasisState flipped(std::size_t qubit) const;
    std::string label() const;

    friend bool operator==(const BasisState&, const BasisState&) = default;

private:
    std::size_t n_;
    std::size_t index_;
};

std::size_t hamming_distance(const BasisState& a, const BasisState& b);

class StateVector {
public:
    // Rejects amplitude counts that are not 2^n and norms off by more than rtol.
    StateVector(std::size_t n_qubits, std::vector<cplx> amplitudes, const Tolerances& tol = {});

    static StateVector basis(const BasisState& state);

    std::size_t qubits() const noexcept { return n_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    const cplx& operator[](std::size_t k) const { return amps_[k]; }

private:
    std::size_t n_;
    std::vector<cplx> amps_;
};

cplx inner_product(const StateVector& bra, const StateVector& ket);

class DensityMatrix {
public:
    // Checks Hermiticity, unit trace and eigenvalues >= -1e-8.
    static DensityMatrix validated(ComplexMatrix m, const Tolerances& tol = {});
    // Skips validation; for values produced by trusted numerical paths.
    static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.dim(); }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    operator const ComplexMatrix&() const noexcept { return m_; }

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

// Sequence of basis states where consecutive entries differ by one spin flip.
class SpinFlipPath {
public:
    explicit SpinFlipPath(std::vector<BasisState> states);

    const std::vector<BasisState>& states() const noexcept { return states_; }
    // Number of flips, i.e. states().size() - 1.
    std::size_t length() const noexcept { return states_.size() - 1; }
    std::vector<std::size_t> indices() const;

private:
    std::vector<BasisState> states_;
};

enum class Bell { psi_plus, psi_minus, phi_plus, phi_minus };

// (|u...u> + |d...d>)/sqrt(2)
StateVector ghz_state(std::size_t n_qubits);
StateVector bell_state(Bell which);
// p_k has the first k qubits up and the rest down, k = 0..n.
SpinFlipPath ghz_chain(std::size_t n_qubits);
// Flips the differing qubits of from -> to in ascending qubit order.
SpinFlipPath hamming_path(const BasisState& from, const BasisState& to);
DensityMatrix density_from_pure(const StateVector& psi);

std::size_t register_dim(std::size_t n_qubits);

}  // namespace dephaser
