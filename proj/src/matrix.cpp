#include "dephaser/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dephaser/errors.hpp"
#include "dephaser/kernels.hpp"

namespace dephaser {
namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(op) + ": dimension mismatch (" +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw DimensionError("matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw DimensionError("matrix dimension must be >= 1");
    if (data_.size() != dim * dim) {
        throw DimensionError("matrix of dim " + std::to_string(dim) + " needs " +
                             std::to_string(dim * dim) + " entries, got " +
                             std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
    const std::size_t dim = rows.size();
    std::vector<cplx> entries;
    entries.reserve(dim * dim);
    for (const auto& row : rows) {
        if (row.size() != dim) throw DimensionError("matrix rows must form a square");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(dim, std::move(entries));
}

ComplexMatrix ComplexMatrix::hermitian(std::size_t dim, std::vector<cplx> entries,
                                       const Tolerances& tol) {
    ComplexMatrix m(dim, std::move(entries));
    const double defect = hermiticity_defect(m);
    if (defect > tol.atol_herm) {
        throw ValidationError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    return m;
}

std::vector<cplx> ComplexMatrix::diagonal_entries() const {
    std::vector<cplx> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = (*this)(i, i);
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_dim(*this, other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_dim(*this, other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
    for (auto& v : data_) v *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "matmul");
    ComplexMatrix c(a.dim());
    kernels::active().cgemm(a.dim(), a.data(), b.data(), c.data());
    return c;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& h, const ComplexMatrix& rho) {
    require_same_dim(h, rho, "commutator");
    return matmul(h, rho) - matmul(rho, h);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const cplx s = a(i, j);
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = s * b(k, l);
        }
    return out;
}

cplx trace(const ComplexMatrix& a) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += a(i, i);
    return sum;
}

double frobenius_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (const cplx& v : a.entries()) sum += std::norm(v);
    return std::sqrt(sum);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "frobenius_distance");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += std::norm(a.entries()[k] - b.entries()[k]);
    return std::sqrt(sum);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
    return worst;
}

double hermiticity_defect(const ComplexMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return out;
}

DiagonalityCheck is_diagonal(const ComplexMatrix& a, const Tolerances& tol) {
    DiagonalityCheck result;
    if (a.dim() > 1) result.worst = {0, 1, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i == j) continue;
            const double mag = std::abs(a(i, j));
            if (mag > result.worst.magnitude) result.worst = {i, j, mag};
        }
    result.diagonal = result.worst.magnitude <= tol.atol_zero;
    return result;
}

bool is_positive_semidefinite(const ComplexMatrix& a, double slack) {
    // Cholesky of the Hermitian part shifted by slack*I; lower factor in place.
    ComplexMatrix l = hermitian_part(a);
    const std::size_t n = l.dim();
    for (std::size_t i = 0; i < n; ++i) l(i, i) += slack;
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = l(j, j).real();
        for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
        if (!(pivot > 0.0)) return false;
        const double root = std::sqrt(pivot);
        l(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx sum = l(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * std::conj(l(j, k));
            l(i, j) = sum / root;
        }
    }
    return true;
}

}  // namespace dephaser
