#include "kernels_impl.hpp"

namespace dephaser::kernels::detail {

void cgemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx s = a[i * n + k];
            const cplx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                // Written out to avoid the NaN/Inf recovery path of operator*.
                const double re = s.real() * brow[j].real() - s.imag() * brow[j].imag();
                const double im = s.real() * brow[j].imag() + s.imag() * brow[j].real();
                crow[j] += cplx(re, im);
            }
        }
    }
}

void caxpy_scalar(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
    for (std::size_t k = 0; k < len; ++k) {
        const double re = alpha.real() * x[k].real() - alpha.imag() * x[k].imag();
        const double im = alpha.real() * x[k].imag() + alpha.imag() * x[k].real();
        y[k] += cplx(re, im);
    }
}

void rate_row_scalar(std::size_t len, double rate, cplx lam_i, const cplx* lam,
                     double* gamma_row, double* delta_row) {
    const double half = 0.5 * rate;
    for (std::size_t j = 0; j < len; ++j) {
        const double dr = lam_i.real() - lam[j].real();
        const double di = lam_i.imag() - lam[j].imag();
        gamma_row[j] += half * (dr * dr + di * di);
        delta_row[j] += rate * (lam_i.imag() * lam[j].real() - lam_i.real() * lam[j].imag());
    }
}

}  // namespace dephaser::kernels::detail
