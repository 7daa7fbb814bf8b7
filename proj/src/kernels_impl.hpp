#pragma once

#include "dephaser/kernels.hpp"

namespace dephaser::kernels::detail {

void cgemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void caxpy_scalar(std::size_t len, cplx alpha, const cplx* x, cplx* y);
void rate_row_scalar(std::size_t len, double rate, cplx lam_i, const cplx* lam,
                     double* gamma_row, double* delta_row);

#if defined(DEPHASER_HAVE_AVX2)
void cgemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void caxpy_avx2(std::size_t len, cplx alpha, const cplx* x, cplx* y);
void rate_row_avx2(std::size_t len, double rate, cplx lam_i, const cplx* lam,
                   double* gamma_row, double* delta_row);
#endif

}  // namespace dephaser::kernels::detail
