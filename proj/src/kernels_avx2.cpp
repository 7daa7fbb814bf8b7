// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace dephaser::kernels::detail {
namespace {

// s * v for a broadcast complex scalar s = (sr, si) and v holding two
// interleaved complex numbers [r0, i0, r1, i1].
inline __m256d cmul_broadcast(__m256d sr, __m256d si, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);  // [i0, r0, i1, r1]
    return _mm256_fmaddsub_pd(sr, v, _mm256_mul_pd(si, swapped));
}

}  // namespace

void cgemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    const std::size_t pairs = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx s = a[i * n + k];
            const __m256d sr = _mm256_set1_pd(s.real());
            const __m256d si = _mm256_set1_pd(s.imag());
            const double* brow = reinterpret_cast<const double*>(b + k * n);
            for (std::size_t p = 0; p < pairs; ++p) {
                const __m256d v = _mm256_loadu_pd(brow + 4 * p);
                const __m256d acc = _mm256_loadu_pd(crow + 4 * p);
                _mm256_storeu_pd(crow + 4 * p, _mm256_add_pd(acc, cmul_broadcast(sr, si, v)));
            }
            if (n % 2 != 0) {
                const std::size_t j = n - 1;
                const double br = brow[2 * j];
                const double bi = brow[2 * j + 1];
                crow[2 * j] += s.real() * br - s.imag() * bi;
                crow[2 * j + 1] += s.real() * bi + s.imag() * br;
            }
        }
    }
}

void caxpy_avx2(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t pairs = len / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        const __m256d v = _mm256_loadu_pd(xd + 4 * p);
        const __m256d acc = _mm256_loadu_pd(yd + 4 * p);
        _mm256_storeu_pd(yd + 4 * p, _mm256_add_pd(acc, cmul_broadcast(ar, ai, v)));
    }
    if (len % 2 != 0) {
        caxpy_scalar(1, alpha, x + len - 1, y + len - 1);
    }
}

void rate_row_avx2(std::size_t len, double rate, cplx lam_i, const cplx* lam,
                   double* gamma_row, double* delta_row) {
    const __m256d half = _mm256_set1_pd(0.5 * rate);
    const __m256d full = _mm256_set1_pd(rate);
    const __m256d li = _mm256_setr_pd(lam_i.real(), lam_i.imag(), lam_i.real(), lam_i.imag());
    // Im(lam_i * conj(lam_j)) = im_i * re_j - re_i * im_j
    const __m256d cross =
        _mm256_setr_pd(lam_i.imag(), -lam_i.real(), lam_i.imag(), -lam_i.real());
    const double* ld = reinterpret_cast<const double*>(lam);
    const std::size_t quads = len / 4;
    for (std::size_t q = 0; q < quads; ++q) {
        const __m256d v01 = _mm256_loadu_pd(ld + 8 * q);
        const __m256d v23 = _mm256_loadu_pd(ld + 8 * q + 4);
        const __m256d d01 = _mm256_sub_pd(li, v01);
        const __m256d d23 = _mm256_sub_pd(li, v23);
        // hadd interleaves as [s0, s2, s1, s3]; restore order with a lane permute.
        __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(d01, d01), _mm256_mul_pd(d23, d23));
        sq = _mm256_permute4x64_pd(sq, 0b11011000);
        __m256d im = _mm256_hadd_pd(_mm256_mul_pd(cross, v01), _mm256_mul_pd(cross, v23));
        im = _mm256_permute4x64_pd(im, 0b11011000);
        double* g = gamma_row + 4 * q;
        double* d = delta_row + 4 * q;
        _mm256_storeu_pd(g, _mm256_fmadd_pd(half, sq, _mm256_loadu_pd(g)));
        _mm256_storeu_pd(d, _mm256_fmadd_pd(full, im, _mm256_loadu_pd(d)));
    }
    const std::size_t done = 4 * quads;
    if (done < len) {
        rate_row_scalar(len - done, rate, lam_i, lam + done, gamma_row + done, delta_row + done);
    }
}

}  // namespace dephaser::kernels::detail
