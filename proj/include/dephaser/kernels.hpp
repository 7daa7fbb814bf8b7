#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops behind the dense algebra, the integrator and the
// rate tables. Each kernel has a scalar reference implementation and, where
// the build and CPU allow it, an AVX2+FMA variant. The active table is picked
// once at first use; DEPHASER_SIMD=scalar forces the reference path.

namespace dephaser::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    // c = a * b for n x n row-major matrices; c must not alias a or b.
    void (*cgemm)(std::size_t n, const cplx* a, const cplx* b, cplx* c);

    // y[k] += alpha * x[k]
    void (*caxpy)(std::size_t len, cplx alpha, const cplx* x, cplx* y);

    // For one diagonal channel and fixed row i:
    //   gamma_row[j] += rate/2 * |lam_i - lam[j]|^2
    //   delta_row[j] += rate * Im(lam_i * conj(lam[j]))
    void (*rate_row)(std::size_t len, double rate, cplx lam_i, const cplx* lam,
                     double* gamma_row, double* delta_row);
};

const KernelTable& scalar();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2();

// Selected implementation.
const KernelTable& active();

}  // namespace dephaser::kernels
