#include "plap/kernels.hpp"

#include "plap/core.hpp"

#include <cfloat>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define PLAP_HAVE_X86 1
#endif

namespace plap::kernels {

#ifdef PLAP_HAVE_X86

namespace {

#define PLAP_AVX2 __attribute__((target("avx2,fma")))

constexpr double kLn2Hi = 6.93147180369123816490e-01;  // low 21 mantissa bits clear
constexpr double kLn2Lo = 1.90821492927058770002e-10;

/// Natural log of positive normal finite lanes. m in [sqrt(1/2), sqrt(2)),
/// log m = 2 atanh((m-1)/(m+1)) by its odd series.
PLAP_AVX2 inline __m256d vlog(__m256d x)
{
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    const __m256i expo = _mm256_srli_epi64(bits, 52);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(expo, magic_bits)), _mm256_set1_pd(4503599627370496.0));
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d f2 = _mm256_mul_pd(f, f);
    __m256d poly = _mm256_set1_pd(1.0 / 23.0);
    for (int k = 10; k >= 0; --k) {
        poly = _mm256_fmadd_pd(poly, f2, _mm256_set1_pd(1.0 / (2.0 * k + 1.0)));
    }
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(f, f), poly);
    return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), logm));
}

/// exp for |x| <= 700: Cody-Waite reduction to |r| <= ln2/2, Taylor to
/// degree 13, then scaling by 2^n through the exponent field.
PLAP_AVX2 inline __m256d vexp(__m256d x)
{
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);
    static constexpr double inv_fact[14] = {1.0,
                                            1.0,
                                            1.0 / 2.0,
                                            1.0 / 6.0,
                                            1.0 / 24.0,
                                            1.0 / 120.0,
                                            1.0 / 720.0,
                                            1.0 / 5040.0,
                                            1.0 / 40320.0,
                                            1.0 / 362880.0,
                                            1.0 / 3628800.0,
                                            1.0 / 39916800.0,
                                            1.0 / 479001600.0,
                                            1.0 / 6227020800.0};
    __m256d poly = _mm256_set1_pd(inv_fact[13]);
    for (int k = 12; k >= 0; --k) {
        poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(inv_fact[k]));
    }
    const __m256d biased = _mm256_add_pd(n, _mm256_set1_pd(4503599627370496.0 + 1023.0));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_castpd_si256(biased), 52));
    return _mm256_mul_pd(poly, scale);
}

PLAP_AVX2 void run(const ElementBatch& b, const double* u, double delta2, double p, ElementResult& out)
{
    const std::size_t n = b.size();
    const std::size_t vec_end = n - n % 4;
    const __m256d vdelta2 = _mm256_set1_pd(delta2);
    const __m256d half_exp = _mm256_set1_pd(0.5 * (p - 2.0));
    const __m256d vp = _mm256_set1_pd(p);
    const __m256d vpm2 = _mm256_set1_pd(p - 2.0);
    const __m256d lo = _mm256_set1_pd(DBL_MIN);
    const __m256d hi = _mm256_set1_pd(DBL_MAX);
    const __m256d arg_max = _mm256_set1_pd(700.0);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));

    for (std::size_t e = 0; e < vec_end; e += 4) {
        const __m128i j0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.i0.data() + e));
        const __m128i j1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.i1.data() + e));
        const __m128i j2 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.i2.data() + e));
        const __m256d u0 = _mm256_i32gather_pd(u, j0, 8);
        const __m256d u1 = _mm256_i32gather_pd(u, j1, 8);
        const __m256d u2 = _mm256_i32gather_pd(u, j2, 8);
        // Plain multiply/add in the scalar order so gradients match bit for bit.
        const __m256d gx = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(u0, _mm256_loadu_pd(b.bx0.data() + e)),
                                                       _mm256_mul_pd(u1, _mm256_loadu_pd(b.bx1.data() + e))),
                                         _mm256_mul_pd(u2, _mm256_loadu_pd(b.bx2.data() + e)));
        const __m256d gy = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(u0, _mm256_loadu_pd(b.by0.data() + e)),
                                                       _mm256_mul_pd(u1, _mm256_loadu_pd(b.by1.data() + e))),
                                         _mm256_mul_pd(u2, _mm256_loadu_pd(b.by2.data() + e)));
        const __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy)), vdelta2);
        const __m256d ok_range = _mm256_and_pd(_mm256_cmp_pd(s, lo, _CMP_GE_OQ), _mm256_cmp_pd(s, hi, _CMP_LE_OQ));
        const __m256d safe_s = _mm256_blendv_pd(_mm256_set1_pd(1.0), s, ok_range);
        const __m256d arg = _mm256_mul_pd(half_exp, vlog(safe_s));
        const __m256d ok_arg = _mm256_cmp_pd(_mm256_and_pd(arg, abs_mask), arg_max, _CMP_LE_OQ);
        const __m256d pw = vexp(_mm256_and_pd(arg, ok_arg));
        const __m256d c1 = _mm256_mul_pd(_mm256_loadu_pd(b.area.data() + e), pw);
        _mm256_storeu_pd(out.gx.data() + e, gx);
        _mm256_storeu_pd(out.gy.data() + e, gy);
        _mm256_storeu_pd(out.coef1.data() + e, c1);
        _mm256_storeu_pd(out.coef2.data() + e, _mm256_div_pd(_mm256_mul_pd(vpm2, c1), s));
        _mm256_storeu_pd(out.energy.data() + e, _mm256_div_pd(_mm256_mul_pd(c1, s), vp));
        const int good = _mm256_movemask_pd(_mm256_and_pd(ok_range, ok_arg));
        if (good != 0xF) {
            for (int lane = 0; lane < 4; ++lane) {
                if ((good & (1 << lane)) == 0) {
                    detail::element_scalar(b, e + static_cast<std::size_t>(lane), u, delta2, p, out);
                }
            }
        }
    }
    for (std::size_t e = vec_end; e < n; ++e) {
        detail::element_scalar(b, e, u, delta2, p, out);
    }
}

}  // namespace

void evaluate_avx2(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out)
{
    require(avx2_available(), ErrorKind::Validation, "AVX2 kernels requested on a CPU without AVX2/FMA");
    out.resize(batch.size());
    run(batch, u, delta2, p, out);
}

#else

void evaluate_avx2(const ElementBatch&, const double*, double, double, ElementResult&)
{
    fail(ErrorKind::Validation, "AVX2 kernels are not built for this architecture");
}

#endif

}  // namespace plap::kernels
