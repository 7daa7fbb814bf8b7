#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dephaser/matrix.hpp"
#include "dephaser/tolerances.hpp"

namespace dephaser {

// Rate gamma (1/time) paired with a Lindblad operator A.
struct Channel {
    double gamma;
    ComplexMatrix op;

    Channel(double gamma, ComplexMatrix op);
};

// Channel whose operator is diagonal in the preferred basis, stored by its
// eigenvalues.
struct DiagonalChannel {
    double gamma;
    std::vector<cplx> eigenvalues;

    DiagonalChannel(double gamma, std::vector<cplx> eigenvalues);

    // nullopt when the operator fails is_diagonal.
    static std::optional<DiagonalChannel> from_channel(const Channel& ch,
                                                       const Tolerances& tol = {});
    Channel to_channel() const;
};

// Diagonal Hamiltonian energies, hbar = 1.
struct HamiltonianSpec {
    std::vector<double> energies;

    static HamiltonianSpec zero(std::size_t dim) { return {std::vector<double>(dim, 0.0)}; }
    ComplexMatrix matrix() const;
};

// Pairwise phase-damping coefficients over the basis:
//   gamma(i,j): decay rate, delta(i,j): dissipative frequency shift,
//   omega(i,j) = E_j - E_i + delta(i,j).
class RateTable {
public:
    explicit RateTable(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    double gamma(std::size_t i, std::size_t j) const { return gamma_[i * dim_ + j]; }
    double delta(std::size_t i, std::size_t j) const { return delta_[i * dim_ + j]; }
    double omega(std::size_t i, std::size_t j) const { return omega_[i * dim_ + j]; }

    std::span<double> gamma_row(std::size_t i) { return {gamma_.data() + i * dim_, dim_}; }
    std::span<double> delta_row(std::size_t i) { return {delta_.data() + i * dim_, dim_}; }
    std::span<double> omega_row(std::size_t i) { return {omega_.data() + i * dim_, dim_}; }

private:
    std::size_t dim_;
    std::vector<double> gamma_;
    std::vector<double> delta_;
    std::vector<double> omega_;
};

// sum_m gamma_m/2 (2 A rho A^+ - A^+A rho - rho A^+A)
ComplexMatrix dissipator_apply(std::span<const Channel> channels, const ComplexMatrix& rho);

// -i[H, rho] + D(rho), hbar = 1.
ComplexMatrix rhs(const ComplexMatrix& h, std::span<const Channel> channels,
                  const ComplexMatrix& rho);

RateTable analytic_rates(const HamiltonianSpec& h, std::span<const DiagonalChannel> channels);

// Gamma_ij from eigenvalues directly, without building the full table.
double decay_rate(std::span<const DiagonalChannel> channels, std::size_t i, std::size_t j);

// rho_ij(0) * exp((i*omega_ij - Gamma_ij) t)
cplx coherence_closed_form(const RateTable& rates, cplx rho0_ij, std::size_t i, std::size_t j,
                           double t);

// Element (i,j) of D(rho) for diagonal channels:
//   sum_m gamma_m/2 (2 lam_i conj(lam_j) - |lam_i|^2 - |lam_j|^2) rho_ij
cplx dissipator_element_closed_form(std::span<const DiagonalChannel> channels, std::size_t i,
                                    std::size_t j, cplx rho_ij);

// Precomputed form of the master equation for repeated evaluation:
//   d rho/dt = -i (K rho - rho K^+) + sum_m gamma_m A_m rho A_m^+
// with K = H - (i/2) sum_m gamma_m A_m^+ A_m.
class MasterEquation {
public:
    MasterEquation(const ComplexMatrix& h, std::span<const Channel> channels);

    std::size_t dim() const noexcept { return k_.dim(); }
    // Writes d rho/dt into out; scratch is reused between calls.
    void evaluate(const ComplexMatrix& rho, ComplexMatrix& out) const;
    ComplexMatrix evaluate(const ComplexMatrix& rho) const;

private:
    ComplexMatrix k_;
    ComplexMatrix k_dag_;
    std::vector<double> gammas_;
    std::vector<ComplexMatrix> ops_;
    std::vector<ComplexMatrix> ops_dag_;
    mutable ComplexMatrix scratch_a_;
    mutable ComplexMatrix scratch_b_;
};

}  // namespace dephaser
