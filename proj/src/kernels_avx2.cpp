// Copyright 2026 The fisherlens authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and is only entered through the dispatch table after a
// runtime cpuid check. exp/log cores follow the classic Cephes rational
// approximations (~1-2 ulp over the ranges used here).

#include "kernels_table.hpp"

#if defined(FISHERLENS_WITH_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace fisherlens::kernels::detail {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

inline double reduce_add_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

// ---------------------------------------------------------------------------
// exp core: e^x = 1 + 2x P(x^2) / (Q(x^2) - x P(x^2)), x reduced mod ln2
// ---------------------------------------------------------------------------
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    __m256d z = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent field
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    n64 = _mm256_slli_epi64(n64, 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(n64));

    // range clamp: underflow to 0, overflow to inf
    const __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(-708.396418532264106224), _CMP_LT_OQ);
    const __m256d over = _mm256_cmp_pd(x, _mm256_set1_pd(709.782712893383996843), _CMP_GT_OQ);
    e = _mm256_andnot_pd(under, e);
    e = _mm256_blendv_pd(e, _mm256_set1_pd(HUGE_VAL), over);
    return e;
}

// ---------------------------------------------------------------------------
// log core: x = m * 2^e with m in [sqrt(1/2), sqrt(2)); Cephes rational fit
// in t = m - 1. Caller guarantees x > 0 and normal.
// ---------------------------------------------------------------------------
inline __m256d log_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);

    __m256i bits = _mm256_castpd_si256(x);
    __m256i expo = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                    _mm256_set1_epi64x(0x7ff));
    // biased exponent (0..2047) to double via the 2^52 trick
    __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    __m256d eb = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(expo, magic)),
                               _mm256_castsi256_pd(magic));
    __m256d e = _mm256_sub_pd(eb, _mm256_set1_pd(1022.0));

    __m256i mant = _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL));
    mant = _mm256_or_si256(mant, _mm256_set1_epi64x(0x3fe0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant); // [0.5, 1)

    const __m256d sqrt_half = _mm256_set1_pd(0.70710678118654752440);
    __m256d below = _mm256_cmp_pd(m, sqrt_half, _CMP_LT_OQ);
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), below);
    e = _mm256_sub_pd(e, _mm256_and_pd(below, one));

    __m256d t = _mm256_sub_pd(m, one);
    __m256d z = _mm256_mul_pd(t, t);

    __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(7.70838733755885391666e0));

    __m256d q = _mm256_add_pd(t, _mm256_set1_pd(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(t, z), _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), y);
    __m256d res = _mm256_add_pd(t, y);
    res = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), res);
    return res;
}

// ---------------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------------

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = reduce_add_pd(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = reduce_add_pd(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void vexp_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void axpby_avx2(double a, const double* x, double b, const double* y,
                double* out, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
        r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), r);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_avx2(double a, const double* x, double* out, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = a * x[i];
}

void abs2_avx2(const double* re, const double* im, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_loadu_pd(re + i);
        __m256d m = _mm256_loadu_pd(im + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
    }
    for (; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

void gaussian_amplitude_avx2(double* out, std::size_t n, double x0, double dx,
                             double center, double sigma) {
    const double norm = std::pow(kTwoPi * sigma * sigma, -0.25);
    const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
    const double base = x0 - center;
    const __m256d basev = _mm256_set1_pd(base);
    const __m256d dxv = _mm256_set1_pd(dx);
    const __m256d normv = _mm256_set1_pd(norm);
    const __m256d minv4s2 = _mm256_set1_pd(-inv4s2);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(basev, _mm256_mul_pd(idx, dxv));
        __m256d arg = _mm256_mul_pd(_mm256_mul_pd(t, t), minv4s2);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(normv, exp_pd(arg)));
        idx = _mm256_add_pd(idx, four);
    }
    for (; i < n; ++i) {
        const double t = base + static_cast<double>(i) * dx;
        out[i] = norm * std::exp(-(t * t) * inv4s2);
    }
}

double loglik_sum_avx2(const double* xs, std::size_t n, double s, double sigma,
                       double w1, double w2, double wc) {
    const double c = 0.5 * s;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const double pref = 1.0 / std::sqrt(kTwoPi * sigma * sigma);

    const __m256d cv = _mm256_set1_pd(c);
    const __m256d minv2s2 = _mm256_set1_pd(-inv2s2);
    const __m256d w1v = _mm256_set1_pd(w1);
    const __m256d w2v = _mm256_set1_pd(w2);
    const __m256d wcv = _mm256_set1_pd(wc);
    const __m256d prefv = _mm256_set1_pd(pref);
    const __m256d floorv = _mm256_set1_pd(1e-300);

    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d t1 = _mm256_sub_pd(x, cv);
        __m256d t2 = _mm256_add_pd(x, cv);
        __m256d g1 = exp_pd(_mm256_mul_pd(_mm256_mul_pd(t1, t1), minv2s2));
        __m256d g2 = exp_pd(_mm256_mul_pd(_mm256_mul_pd(t2, t2), minv2s2));
        __m256d g0 = _mm256_sqrt_pd(_mm256_mul_pd(g1, g2));
        __m256d p = _mm256_mul_pd(w1v, g1);
        p = _mm256_fmadd_pd(w2v, g2, p);
        p = _mm256_fmadd_pd(wcv, g0, p);
        p = _mm256_mul_pd(prefv, p);
        p = _mm256_max_pd(p, floorv);
        acc = _mm256_add_pd(acc, log_pd(p));
    }
    double total = reduce_add_pd(acc);
    for (; i < n; ++i) {
        const double x = xs[i];
        const double t1 = x - c;
        const double t2 = x + c;
        const double g1 = std::exp(-(t1 * t1) * inv2s2);
        const double g2 = std::exp(-(t2 * t2) * inv2s2);
        const double p = pref * (w1 * g1 + w2 * g2 + wc * std::sqrt(g1 * g2));
        total += std::log(std::max(p, 1e-300));
    }
    return total;
}

double cfi_sum_avx2(const double* p0, const double* pp, const double* pm,
                    std::size_t n, double inv_two_h, double floor_val) {
    const __m256d invv = _mm256_set1_pd(inv_two_h);
    const __m256d floorv = _mm256_set1_pd(floor_val);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_loadu_pd(p0 + i);
        __m256d d = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(pp + i),
                                                _mm256_loadu_pd(pm + i)), invv);
        __m256d term = _mm256_div_pd(_mm256_mul_pd(d, d), p);
        __m256d mask = _mm256_cmp_pd(p, floorv, _CMP_GT_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(term, mask));
    }
    double total = reduce_add_pd(acc);
    for (; i < n; ++i) {
        if (p0[i] > floor_val) {
            const double d = (pp[i] - pm[i]) * inv_two_h;
            total += d * d / p0[i];
        }
    }
    return total;
}

constexpr KernelTable kAvx2Table = {
    sum_avx2,    dot_avx2,   vexp_avx2,
    axpby_avx2,  scale_avx2, abs2_avx2,
    gaussian_amplitude_avx2, loglik_sum_avx2, cfi_sum_avx2,
};

} // namespace

const KernelTable* avx2_kernel_table() { return &kAvx2Table; }

} // namespace fisherlens::kernels::detail

#endif // FISHERLENS_WITH_AVX2
