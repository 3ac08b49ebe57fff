#include "chc/kernels.hpp"

#ifdef CHC_BUILD_AVX2

#include <immintrin.h>

#include <cmath>

// AVX2 variants of the atom-cloud kernels. Transcendentals use the classic
// Cephes rational approximations (the same ones behind most SIMD math
// libraries); accuracy is checked against the scalar path in the kernel
// equivalence tests.

namespace chc::kernels::avx2 {
namespace {

inline __m256d vset(double x) { return _mm256_set1_pd(x); }

// int64 lanes (small, nonnegative) -> double lanes
inline __m256d small_i64_to_pd(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)),
                         vset(4503599627370496.0));
}

// ln for positive finite inputs (Cephes log.c)
inline __m256d v_log(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i expo = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                          _mm256_set1_epi64x(0x7ff));
    __m256d e = _mm256_sub_pd(small_i64_to_pd(expo), vset(1022.0));
    const __m256i mant_bits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
        _mm256_set1_epi64x(0x3fe0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant_bits);  // in [0.5, 1)

    const __m256d below = _mm256_cmp_pd(m, vset(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(below, vset(1.0)));
    m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(below, m)), vset(1.0));

    const __m256d z = _mm256_mul_pd(m, m);
    __m256d p = vset(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, m, vset(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, m, vset(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, m, vset(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, m, vset(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, m, vset(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(m, vset(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, m, vset(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, m, vset(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, m, vset(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, m, vset(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(m, _mm256_mul_pd(z, _mm256_div_pd(p, q)));
    y = _mm256_fnmadd_pd(e, vset(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(vset(0.5), z, y);
    y = _mm256_add_pd(y, m);
    return _mm256_fmadd_pd(e, vset(0.693359375), y);
}

// e^x for |x| within the double range (Cephes exp.c)
inline __m256d v_exp(__m256d x) {
    x = _mm256_max_pd(vset(-708.0), _mm256_min_pd(vset(708.0), x));

    const __m256d n = _mm256_round_pd(
        _mm256_fmadd_pd(x, vset(1.44269504088896340736), vset(0.5)),
        _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, vset(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, vset(1.42860682030941723212e-6), r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = vset(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, rr, vset(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, rr, vset(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = vset(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, rr, vset(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, rr, vset(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, rr, vset(2.00000000000000000005e0));
    __m256d y = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    y = _mm256_fmadd_pd(vset(2.0), y, vset(1.0));

    // scale by 2^n
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i pow2 =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(y, _mm256_castsi256_pd(pow2));
}

// acosh(sqrt(c2)) for c2 >= 1: log(c + sqrt(c2 - 1)), c = sqrt(c2)
inline __m256d v_acosh_sqrt(__m256d c2) {
    c2 = _mm256_max_pd(c2, vset(1.0));
    const __m256d c = _mm256_sqrt_pd(c2);
    const __m256d root = _mm256_sqrt_pd(_mm256_sub_pd(c2, vset(1.0)));
    return v_log(_mm256_add_pd(c, root));
}

}  // namespace

void batch_cosh2(const cplx* x, int dim, const AtomArray& atoms, double* out) {
    // fold the signature sign into the fixed argument
    double xr[16], xi[16];
    for (int j = 0; j < dim; ++j) {
        const double sign = j == 0 ? -1.0 : 1.0;
        xr[j] = sign * x[j].real();
        xi[j] = sign * x[j].imag();
    }
    std::size_t i = 0;
    for (; i + 4 <= atoms.count; i += 4) {
        __m256d sre = _mm256_setzero_pd();
        __m256d sim = _mm256_setzero_pd();
        for (int j = 0; j < dim; ++j) {
            const __m256d yr = _mm256_loadu_pd(atoms.re_plane(j) + i);
            const __m256d yi = _mm256_loadu_pd(atoms.im_plane(j) + i);
            const __m256d vxr = vset(xr[j]);
            const __m256d vxi = vset(xi[j]);
            sre = _mm256_fmadd_pd(vxr, yr, sre);
            sre = _mm256_fmadd_pd(vxi, yi, sre);
            sim = _mm256_fmadd_pd(vxi, yr, sim);
            sim = _mm256_fnmadd_pd(vxr, yi, sim);
        }
        _mm256_storeu_pd(out + i,
                         _mm256_fmadd_pd(sre, sre, _mm256_mul_pd(sim, sim)));
    }
    if (i < atoms.count) {
        // scalar tail on the same folded data
        for (; i < atoms.count; ++i) {
            double sre = 0.0, sim = 0.0;
            for (int j = 0; j < dim; ++j) {
                const double yr = atoms.re_plane(j)[i], yi = atoms.im_plane(j)[i];
                sre += xr[j] * yr + xi[j] * yi;
                sim += xi[j] * yr - xr[j] * yi;
            }
            out[i] = sre * sre + sim * sim;
        }
    }
}

void batch_dist(const double* cosh2, std::size_t count, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4)
        _mm256_storeu_pd(out + i, v_acosh_sqrt(_mm256_loadu_pd(cosh2 + i)));
    for (; i < count; ++i) out[i] = std::acosh(std::sqrt(std::max(1.0, cosh2[i])));
}

double weight_sum(const double* cosh2, std::size_t count, double s) {
    __m256d acc = _mm256_setzero_pd();
    const __m256d ms = vset(-s);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d d = v_acosh_sqrt(_mm256_loadu_pd(cosh2 + i));
        acc = _mm256_add_pd(acc, v_exp(_mm256_mul_pd(ms, d)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < count; ++i)
        total += std::exp(-s * std::acosh(std::sqrt(std::max(1.0, cosh2[i]))));
    return total;
}

double exp_sum(const double* d, std::size_t count, double s) {
    __m256d acc = _mm256_setzero_pd();
    const __m256d ms = vset(-s);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4)
        acc = _mm256_add_pd(acc, v_exp(_mm256_mul_pd(ms, _mm256_loadu_pd(d + i))));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < count; ++i) total += std::exp(-s * d[i]);
    return total;
}

}  // namespace chc::kernels::avx2

#endif  // CHC_BUILD_AVX2
