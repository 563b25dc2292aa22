// AVX2/FMA variant of the exposure kernel. Compiled with -mavx2 -mfma and only
// called after a runtime CPU check.

#include "pusurv/kernels/exposure.hpp"

#include "neumaier.hpp"

#include <immintrin.h>

#include <cstdint>
#include <vector>

namespace pusurv::kernels::detail {

namespace {

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

// 2^k for integral k in [-1022, 1023].
inline __m256d pow2i(__m256d k) {
    const __m128i k32 = _mm256_cvtpd_epi32(k);
    __m256i k64 = _mm256_cvtepi32_epi64(k32);
    k64 = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
    return _mm256_castsi256_pd(_mm256_slli_epi64(k64, 52));
}

// Cephes-style exp: range reduction by ln 2 and a (3,3) Pade form.
inline __m256d exp_pd(__m256d x) {
    const __m256d hi = splat(709.782712893383973096);
    const __m256d lo = splat(-708.396418532264106224);
    const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
    const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, splat(1.4426950408889634073599)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, splat(6.93145751953125e-1), xc);
    r = _mm256_fnmadd_pd(n, splat(1.42860682030941723212e-6), r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(splat(1.26177193074810590878e-4), rr, splat(3.02994407707441961300e-2));
    px = _mm256_fmadd_pd(px, rr, splat(9.99999999999999999910e-1));
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(splat(3.00198505138664455042e-6), rr, splat(2.52448340349684104192e-3));
    qx = _mm256_fmadd_pd(qx, rr, splat(2.27265548208155028766e-1));
    qx = _mm256_fmadd_pd(qx, rr, splat(2.00000000000000000009e0));
    __m256d y = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    y = _mm256_fmadd_pd(splat(2.0), y, splat(1.0));

    const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, splat(0.5)));
    const __m256d n2 = _mm256_sub_pd(n, n1);
    y = _mm256_mul_pd(_mm256_mul_pd(y, pow2i(n1)), pow2i(n2));

    y = _mm256_blendv_pd(y, splat(__builtin_inf()), over);
    y = _mm256_blendv_pd(y, _mm256_setzero_pd(), under);
    return _mm256_blendv_pd(y, x, nan);
}

// Cephes-style log for positive normal x.
inline __m256d log_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    const __m256d magic = splat(4503599627370496.0);  // 2^52
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, splat(1022.0));
    const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                              _mm256_set1_epi64x(0x3fe0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant_bits);  // [0.5, 1)

    const __m256d small = _mm256_cmp_pd(m, splat(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(small, splat(1.0)));
    m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), splat(1.0));

    const __m256d z = _mm256_mul_pd(m, m);
    __m256d p = _mm256_fmadd_pd(splat(1.01875663804580931796e-4), m, splat(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, m, splat(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, m, splat(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, m, splat(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, m, splat(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(m, splat(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, m, splat(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, m, splat(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, m, splat(7.11544750618225001890e1));
    q = _mm256_fmadd_pd(q, m, splat(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, p), q));
    y = _mm256_fnmadd_pd(e, splat(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(splat(0.5), z, y);
    __m256d out = _mm256_add_pd(m, y);
    return _mm256_fmadd_pd(e, splat(0.693359375), out);
}

// log(1 + e) for e in [0, 1].
inline __m256d log1p_unit_pd(__m256d e) {
    const __m256d one = splat(1.0);
    const __m256d u = _mm256_add_pd(one, e);
    const __m256d correction = _mm256_div_pd(_mm256_sub_pd(e, _mm256_sub_pd(u, one)), u);
    return _mm256_add_pd(log_pd(u), correction);
}

struct VecNeumaier {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    void add(__m256d v) {
        const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        const __m256d t = _mm256_add_pd(sum, v);
        const __m256d sum_bigger =
            _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask), _mm256_and_pd(v, abs_mask), _CMP_GE_OQ);
        const __m256d c1 = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
        const __m256d c2 = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(c2, c1, sum_bigger));
        sum = t;
    }

    double reduce() const {
        alignas(32) double s[4];
        alignas(32) double c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        Neumaier acc;
        for (double v : s) acc.add(v);
        for (double v : c) acc.add(v);
        return acc.result();
    }
};

struct Lane {
    __m256d v;
};

}  // namespace

void exposure_avx2(const ExposureProblem& pr, const double* theta, Want want, double* out) {
    const std::size_t n = pr.n;
    const std::size_t p = pr.p;
    std::vector<VecNeumaier> acc(output_size(p));
    std::vector<Lane> xk(p);
    std::vector<Lane> th(p);
    for (std::size_t k = 0; k < p; ++k) th[k].v = splat(theta[k]);

    const __m256d one = splat(1.0);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    auto block = [&](__m256d nu, __m256d a, __m256d b, __m256d w) {
        __m256d eta = _mm256_setzero_pd();
        for (std::size_t k = 0; k < p; ++k) eta = _mm256_fmadd_pd(xk[k].v, th[k].v, eta);

        const __m256d d = _mm256_sub_pd(eta, nu);
        const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), _mm256_and_pd(d, abs_mask)));
        const __m256d log_sum = _mm256_add_pd(_mm256_max_pd(eta, nu), log1p_unit_pd(e));
        const __m256d inv = _mm256_div_pd(one, _mm256_add_pd(one, e));
        const __m256d ahead = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_GE_OQ);
        const __m256d share = _mm256_blendv_pd(_mm256_mul_pd(e, inv), inv, ahead);
        const __m256d share_var = _mm256_mul_pd(_mm256_mul_pd(e, inv), inv);
        const __m256d exposure =
            _mm256_and_pd(_mm256_mul_pd(exp_pd(eta), w), _mm256_cmp_pd(w, _mm256_setzero_pd(), _CMP_NEQ_OQ));

        const __m256d term = _mm256_sub_pd(_mm256_fmadd_pd(a, log_sum, _mm256_mul_pd(b, eta)), exposure);
        acc[0].add(term);
        if (want == Want::Value) return;
        const __m256d score = _mm256_sub_pd(_mm256_fmadd_pd(a, share, b), exposure);
        for (std::size_t k = 0; k < p; ++k) acc[1 + k].add(_mm256_mul_pd(xk[k].v, score));
        if (want != Want::Information) return;
        const __m256d info = _mm256_fnmadd_pd(a, share_var, exposure);
        std::size_t slot = 1 + p;
        for (std::size_t k = 0; k < p; ++k) {
            const __m256d xk_h = _mm256_mul_pd(xk[k].v, info);
            for (std::size_t l = k; l < p; ++l) acc[slot++].add(_mm256_mul_pd(xk_h, xk[l].v));
        }
    };

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t k = 0; k < p; ++k) xk[k].v = _mm256_loadu_pd(&pr.x[k * n + i]);
        block(_mm256_loadu_pd(&pr.nu[i]), _mm256_loadu_pd(&pr.a[i]), _mm256_loadu_pd(&pr.b[i]),
              _mm256_loadu_pd(&pr.w[i]));
    }
    if (i < n) {
        // Zero padding contributes exactly nothing: a = b = w = 0.
        alignas(32) double buf[5][4] = {};
        const std::size_t rem = n - i;
        for (std::size_t k = 0; k < p; ++k) {
            alignas(32) double col[4] = {};
            for (std::size_t j = 0; j < rem; ++j) col[j] = pr.x[k * n + i + j];
            xk[k].v = _mm256_load_pd(col);
        }
        for (std::size_t j = 0; j < rem; ++j) {
            buf[0][j] = pr.nu[i + j];
            buf[1][j] = pr.a[i + j];
            buf[2][j] = pr.b[i + j];
            buf[3][j] = pr.w[i + j];
        }
        block(_mm256_load_pd(buf[0]), _mm256_load_pd(buf[1]), _mm256_load_pd(buf[2]), _mm256_load_pd(buf[3]));
    }
    for (std::size_t j = 0; j < acc.size(); ++j) out[j] = acc[j].reduce();
}

}  // namespace pusurv::kernels::detail
