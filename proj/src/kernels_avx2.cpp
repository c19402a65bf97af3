// AVX2 kernel variants. Same table structure as the scalar reference; the
// s-inner loops vectorize two complexes (or four doubles) at a time. Row
// offsets between adjacent t differ by exactly two entries, so the shifted
// reads stay plain unaligned loads.

#if defined(CONFFLOW_HAVE_AVX2)

#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

namespace confflow::kernels {
namespace {

inline __m256d cmul(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline __m256d conj2(__m256d a) {
    const __m256d mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    return _mm256_xor_pd(a, mask);
}

inline cplx reduce_cplx(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double buf[2];
    _mm_store_pd(buf, s);
    return {buf[0], buf[1]};
}

inline double reduce_pd(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_hadd_pd(s, s));
}

inline const double* dp(const cplx* p) {
    return reinterpret_cast<const double*>(p);
}
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

void interaction_sum_avx2(const cplx* a, std::size_t n, cplx* out) {
    if (n == 0) return;
    auto& ws = workspace();
    ws.cu.resize(table_size(n));
    ws.cx.resize(table_size(n));
    cplx* u = ws.cu.data();
    cplx* x = ws.cx.data();

    for (std::size_t tp1 = n; tp1-- > 0;) {
        const std::size_t t = tp1;
        cplx* row = u + row_offset(t, n);
        const cplx* prev = u + row_offset(t + 1, n);
        const std::size_t len = n - t;
        row[0] = a[t] * a[t];
        if (len > 1) row[1] = 2.0 * a[t] * a[t + 1];
        __m256d bt2 = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(a + t));
        bt2 = _mm256_add_pd(bt2, bt2);
        std::size_t i = 2;
        for (; i + 1 < len; i += 2) {
            __m256d pv = _mm256_loadu_pd(dp(prev + i - 2));
            __m256d av = _mm256_loadu_pd(dp(a + t + i));
            _mm256_storeu_pd(dp(row + i), _mm256_add_pd(pv, cmul(bt2, av)));
        }
        for (; i < len; ++i) row[i] = prev[i - 2] + 2.0 * a[t] * a[t + i];
    }
    for (std::size_t t = 0; t < n; ++t) {
        cplx* row = x + row_offset(t, n);
        const cplx* prev = x + row_offset(t - 1, n);
        const cplx* urow = u + row_offset(t, n);
        const std::size_t len = n - t;
        if (t == 0) {
            for (std::size_t i = 0; i + 1 < len; ++i) row[i] = urow[i];
        } else {
            std::size_t i = 0;
            for (; i + 2 < len; i += 2) {
                __m256d pv = _mm256_loadu_pd(dp(prev + i + 2));
                __m256d uv = _mm256_loadu_pd(dp(urow + i));
                _mm256_storeu_pd(dp(row + i), _mm256_add_pd(pv, uv));
            }
            for (; i + 1 < len; ++i) row[i] = prev[i + 2] + urow[i];
        }
        row[len - 1] = static_cast<double>(t + 1) * urow[len - 1];
    }

    for (std::size_t i = 0; i < n; ++i) out[i] = cplx(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const cplx* row = x + row_offset(t, n);
        const std::size_t len = n - t;
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 1 < len; i += 2) {
            __m256d av = _mm256_loadu_pd(dp(a + t + i));
            __m256d rv = _mm256_loadu_pd(dp(row + i));
            acc = _mm256_add_pd(acc, cmul(conj2(av), rv));
        }
        cplx acc1 = reduce_cplx(acc);
        for (; i < len; ++i) acc1 += std::conj(a[t + i]) * row[i];
        out[t] += acc1;

        const cplx ct = std::conj(a[t]);
        __m256d ctv = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&ct));
        i = 1;
        for (; i + 1 < len; i += 2) {
            __m256d rv = _mm256_loadu_pd(dp(row + i));
            __m256d ov = _mm256_loadu_pd(dp(out + t + i));
            _mm256_storeu_pd(dp(out + t + i), _mm256_add_pd(ov, cmul(ctv, rv)));
        }
        for (; i < len; ++i) out[t + i] += ct * row[i];
    }
}

void interaction_sum_real_avx2(const double* a, std::size_t n, double* out) {
    if (n == 0) return;
    auto& ws = workspace();
    ws.ru.resize(table_size(n));
    ws.rx.resize(table_size(n));
    double* u = ws.ru.data();
    double* x = ws.rx.data();

    for (std::size_t tp1 = n; tp1-- > 0;) {
        const std::size_t t = tp1;
        double* row = u + row_offset(t, n);
        const double* prev = u + row_offset(t + 1, n);
        const std::size_t len = n - t;
        row[0] = a[t] * a[t];
        if (len > 1) row[1] = 2.0 * a[t] * a[t + 1];
        __m256d at2 = _mm256_set1_pd(2.0 * a[t]);
        std::size_t i = 2;
        for (; i + 3 < len; i += 4) {
            __m256d pv = _mm256_loadu_pd(prev + i - 2);
            __m256d av = _mm256_loadu_pd(a + t + i);
            _mm256_storeu_pd(row + i, _mm256_fmadd_pd(at2, av, pv));
        }
        for (; i < len; ++i) row[i] = prev[i - 2] + 2.0 * a[t] * a[t + i];
    }
    for (std::size_t t = 0; t < n; ++t) {
        double* row = x + row_offset(t, n);
        const double* prev = x + row_offset(t - 1, n);
        const double* urow = u + row_offset(t, n);
        const std::size_t len = n - t;
        if (t == 0) {
            for (std::size_t i = 0; i + 1 < len; ++i) row[i] = urow[i];
        } else {
            std::size_t i = 0;
            for (; i + 4 < len; i += 4) {
                __m256d pv = _mm256_loadu_pd(prev + i + 2);
                __m256d uv = _mm256_loadu_pd(urow + i);
                _mm256_storeu_pd(row + i, _mm256_add_pd(pv, uv));
            }
            for (; i + 1 < len; ++i) row[i] = prev[i + 2] + urow[i];
        }
        row[len - 1] = static_cast<double>(t + 1) * urow[len - 1];
    }

    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double* row = x + row_offset(t, n);
        const std::size_t len = n - t;
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 3 < len; i += 4) {
            __m256d av = _mm256_loadu_pd(a + t + i);
            __m256d rv = _mm256_loadu_pd(row + i);
            acc = _mm256_fmadd_pd(av, rv, acc);
        }
        double acc1 = reduce_pd(acc);
        for (; i < len; ++i) acc1 += a[t + i] * row[i];
        out[t] += acc1;

        __m256d atv = _mm256_set1_pd(a[t]);
        i = 1;
        for (; i + 3 < len; i += 4) {
            __m256d rv = _mm256_loadu_pd(row + i);
            __m256d ov = _mm256_loadu_pd(out + t + i);
            _mm256_storeu_pd(out + t + i, _mm256_fmadd_pd(atv, rv, ov));
        }
        for (; i < len; ++i) out[t + i] += a[t] * row[i];
    }
}

double weighted_mod2_sum_avx2(const cplx* a, std::size_t n, int power) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        const double w0 = static_cast<double>(i + 1);
        const double w1 = static_cast<double>(i + 2);
        __m256d w = power == 1 ? _mm256_set_pd(w1, w1, w0, w0)
                               : _mm256_set_pd(w1 * w1, w1 * w1, w0 * w0, w0 * w0);
        __m256d v = _mm256_loadu_pd(dp(a + i));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), w, acc);
    }
    double s = reduce_pd(acc);
    for (; i < n; ++i) {
        const double w = static_cast<double>(i + 1);
        s += (power == 1 ? w : w * w) * std::norm(a[i]);
    }
    return s;
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d av = _mm256_loadu_pd(dp(a + i));
        __m256d bv = _mm256_loadu_pd(dp(b + i));
        acc = _mm256_add_pd(acc, cmul(conj2(av), bv));
    }
    cplx s = reduce_cplx(acc);
    for (; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void scaled_add_avx2(cplx* out, const cplx* a, double h, const cplx* b,
                     std::size_t n) {
    __m256d hv = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d av = _mm256_loadu_pd(dp(a + i));
        __m256d bv = _mm256_loadu_pd(dp(b + i));
        _mm256_storeu_pd(dp(out + i), _mm256_fmadd_pd(hv, bv, av));
    }
    for (; i < n; ++i) out[i] = a[i] + h * b[i];
}

void rk4_combine_avx2(cplx* y, double h, const cplx* k1, const cplx* k2,
                      const cplx* k3, const cplx* k4, std::size_t n) {
    const double w = h / 6.0;
    __m256d wv = _mm256_set1_pd(w);
    __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d s = _mm256_loadu_pd(dp(k1 + i));
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(dp(k2 + i)), s);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(dp(k3 + i)), s);
        s = _mm256_add_pd(s, _mm256_loadu_pd(dp(k4 + i)));
        __m256d yv = _mm256_loadu_pd(dp(y + i));
        _mm256_storeu_pd(dp(y + i), _mm256_fmadd_pd(wv, s, yv));
    }
    for (; i < n; ++i)
        y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

const KernelTable avx2_table = {
    interaction_sum_avx2, interaction_sum_real_avx2,
    weighted_mod2_sum_avx2, dot_conj_avx2,
    scaled_add_avx2, rk4_combine_avx2,
};

}  // namespace confflow::kernels

#endif  // CONFFLOW_HAVE_AVX2
