#include "dephaser/lindblad.hpp"

#include <cmath>
#include <string>

#include "dephaser/errors.hpp"
#include "dephaser/kernels.hpp"

namespace dephaser {
namespace {

constexpr cplx kI{0.0, 1.0};

void require_rate(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ValidationError("channel rate must be positive and finite, got " +
                              std::to_string(gamma));
    }
}

void require_channel_dims(std::span<const Channel> channels, std::size_t dim) {
    for (const auto& ch : channels) {
        if (ch.op.dim() != dim) {
            throw DimensionError("Lindblad operator of dim " + std::to_string(ch.op.dim()) +
                                 " does not match state dim " + std::to_string(dim));
        }
    }
}

std::size_t common_eigen_count(std::span<const DiagonalChannel> channels, std::size_t expected) {
    for (const auto& ch : channels) {
        if (ch.eigenvalues.size() != expected) {
            throw DimensionError("channel has " + std::to_string(ch.eigenvalues.size()) +
                                 " eigenvalues, expected " + std::to_string(expected));
        }
    }
    return expected;
}

}  // namespace

Channel::Channel(double gamma_, ComplexMatrix op_) : gamma(gamma_), op(std::move(op_)) {
    require_rate(gamma);
}

DiagonalChannel::DiagonalChannel(double gamma_, std::vector<cplx> eigenvalues_)
    : gamma(gamma_), eigenvalues(std::move(eigenvalues_)) {
    require_rate(gamma);
    if (eigenvalues.empty()) throw DimensionError("diagonal channel needs eigenvalues");
}

std::optional<DiagonalChannel> DiagonalChannel::from_channel(const Channel& ch,
                                                             const Tolerances& tol) {
    if (!is_diagonal(ch.op, tol)) return std::nullopt;
    return DiagonalChannel(ch.gamma, ch.op.diagonal_entries());
}

Channel DiagonalChannel::to_channel() const {
    return Channel(gamma, ComplexMatrix::diagonal(std::span<const cplx>(eigenvalues)));
}

ComplexMatrix HamiltonianSpec::matrix() const {
    return ComplexMatrix::diagonal(std::span<const double>(energies));
}

RateTable::RateTable(std::size_t dim)
    : dim_(dim), gamma_(dim * dim, 0.0), delta_(dim * dim, 0.0), omega_(dim * dim, 0.0) {}

ComplexMatrix dissipator_apply(std::span<const Channel> channels, const ComplexMatrix& rho) {
    require_channel_dims(channels, rho.dim());
    ComplexMatrix out(rho.dim());
    for (const auto& ch : channels) {
        const ComplexMatrix a_dag = dagger(ch.op);
        const ComplexMatrix ada = matmul(a_dag, ch.op);
        ComplexMatrix term = 2.0 * matmul(matmul(ch.op, rho), a_dag);
        term -= matmul(ada, rho);
        term -= matmul(rho, ada);
        term *= 0.5 * ch.gamma;
        out += term;
    }
    return out;
}

ComplexMatrix rhs(const ComplexMatrix& h, std::span<const Channel> channels,
                  const ComplexMatrix& rho) {
    ComplexMatrix out = -kI * commutator(h, rho);
    out += dissipator_apply(channels, rho);
    return out;
}

RateTable analytic_rates(const HamiltonianSpec& h, std::span<const DiagonalChannel> channels) {
    const std::size_t dim = h.energies.size();
    if (dim == 0) throw DimensionError("Hamiltonian spec has no energies");
    common_eigen_count(channels, dim);

    RateTable table(dim);
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < dim; ++i) {
        auto g = table.gamma_row(i);
        auto d = table.delta_row(i);
        for (const auto& ch : channels) {
            k.rate_row(dim, ch.gamma, ch.eigenvalues[i], ch.eigenvalues.data(), g.data(),
                       d.data());
        }
        // The diagonal is zero by definition; pin it against rounding in delta.
        g[i] = 0.0;
        d[i] = 0.0;
    }
    // Symmetrize so the stored table honours Gamma_ij == Gamma_ji and
    // Delta_ij == -Delta_ji bit-for-bit regardless of kernel rounding.
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            auto gi = table.gamma_row(i);
            auto gj = table.gamma_row(j);
            gj[i] = gi[j];
            auto di = table.delta_row(i);
            auto dj = table.delta_row(j);
            dj[i] = 0.0 - di[j];  // no negative zeros in reports
        }
    for (std::size_t i = 0; i < dim; ++i) {
        auto w = table.omega_row(i);
        for (std::size_t j = 0; j < dim; ++j) {
            w[j] = (h.energies[j] - h.energies[i]) + table.delta(i, j);
        }
        w[i] = 0.0;
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) table.omega_row(j)[i] = 0.0 - table.omega(i, j);
    return table;
}

double decay_rate(std::span<const DiagonalChannel> channels, std::size_t i, std::size_t j) {
    double sum = 0.0;
    for (const auto& ch : channels) {
        if (i >= ch.eigenvalues.size() || j >= ch.eigenvalues.size()) {
            throw DimensionError("basis index out of range for channel eigenvalues");
        }
        sum += 0.5 * ch.gamma * std::norm(ch.eigenvalues[i] - ch.eigenvalues[j]);
    }
    return sum;
}

cplx coherence_closed_form(const RateTable& rates, cplx rho0_ij, std::size_t i, std::size_t j,
                           double t) {
    if (i >= rates.dim() || j >= rates.dim()) throw DimensionError("rate table index out of range");
    if (t < 0.0) throw ValidationError("closed-form coherence needs t >= 0");
    return rho0_ij * std::exp(cplx(-rates.gamma(i, j), rates.omega(i, j)) * t);
}

cplx dissipator_element_closed_form(std::span<const DiagonalChannel> channels, std::size_t i,
                                    std::size_t j, cplx rho_ij) {
    cplx factor = 0.0;
    for (const auto& ch : channels) {
        if (i >= ch.eigenvalues.size() || j >= ch.eigenvalues.size()) {
            throw DimensionError("basis index out of range for channel eigenvalues");
        }
        const cplx li = ch.eigenvalues[i];
        const cplx lj = ch.eigenvalues[j];
        factor += 0.5 * ch.gamma * (2.0 * li * std::conj(lj) - std::norm(li) - std::norm(lj));
    }
    return factor * rho_ij;
}

MasterEquation::MasterEquation(const ComplexMatrix& h, std::span<const Channel> channels)
    : k_(h), k_dag_(h.dim()), scratch_a_(h.dim()), scratch_b_(h.dim()) {
    require_channel_dims(channels, h.dim());
    gammas_.reserve(channels.size());
    for (const auto& ch : channels) {
        ComplexMatrix a_dag = dagger(ch.op);
        ComplexMatrix ada = matmul(a_dag, ch.op);
        ada *= cplx(0.0, -0.5 * ch.gamma);
        k_ += ada;
        gammas_.push_back(ch.gamma);
        ops_.push_back(ch.op);
        ops_dag_.push_back(std::move(a_dag));
    }
    k_dag_ = dagger(k_);
}

void MasterEquation::evaluate(const ComplexMatrix& rho, ComplexMatrix& out) const {
    if (rho.dim() != dim() || out.dim() != dim()) {
        throw DimensionError("master equation evaluated on a state of the wrong dimension");
    }
    const auto& k = kernels::active();
    const std::size_t n = dim();
    const std::size_t len = n * n;
    k.cgemm(n, k_.data(), rho.data(), scratch_a_.data());
    k.cgemm(n, rho.data(), k_dag_.data(), scratch_b_.data());
    for (std::size_t e = 0; e < len; ++e) {
        out.data()[e] = -kI * (scratch_a_.data()[e] - scratch_b_.data()[e]);
    }
    for (std::size_t m = 0; m < ops_.size(); ++m) {
        k.cgemm(n, ops_[m].data(), rho.data(), scratch_a_.data());
        k.cgemm(n, scratch_a_.data(), ops_dag_[m].data(), scratch_b_.data());
        k.caxpy(len, gammas_[m], scratch_b_.data(), out.data());
    }
}

ComplexMatrix MasterEquation::evaluate(const ComplexMatrix& rho) const {
    ComplexMatrix out(dim());
    evaluate(rho, out);
    return out;
}

}  // namespace dephaser
