#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dephaser/tolerances.hpp"

namespace dephaser {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    // dim x dim zero matrix; dim must be >= 1.
    explicit ComplexMatrix(std::size_t dim);
    // Takes ownership of dim*dim row-major entries.
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const cplx> values);
    static ComplexMatrix diagonal(std::span<const double> values);
    // Row-major nested initializer, convenient for small literals in tests.
    static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);
    // Same as the entries constructor, but rejects non-Hermitian input.
    static ComplexMatrix hermitian(std::size_t dim, std::vector<cplx> entries,
                                   const Tolerances& tol = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return data_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    std::span<cplx> entries() noexcept { return data_; }
    std::span<const cplx> entries() const noexcept { return data_; }
    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }

    std::vector<cplx> diagonal_entries() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scale);

    // Exact elementwise equality.
    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scale, ComplexMatrix a);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
// h*rho - rho*h
ComplexMatrix commutator(const ComplexMatrix& h, const ComplexMatrix& rho);
// Left factor is the most significant digit of the composite index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

cplx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// max |a_ij - conj(a_ji)|
double hermiticity_defect(const ComplexMatrix& a);
// (a + a^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& a);

struct OffDiagonalWitness {
    std::size_t i = 0;
    std::size_t j = 0;
    double magnitude = 0.0;
};

struct DiagonalityCheck {
    bool diagonal = true;
    // Largest off-diagonal entry; meaningful for any dim >= 2.
    OffDiagonalWitness worst;

    explicit operator bool() const noexcept { return diagonal; }
};

DiagonalityCheck is_diagonal(const ComplexMatrix& a, const Tolerances& tol = {});

// True when a + slack*I admits a Cholesky factorization, i.e. the smallest
// eigenvalue of the Hermitian part is >= -slack (up to rounding).
bool is_positive_semidefinite(const ComplexMatrix& a, double slack);

}  // namespace dephaser
