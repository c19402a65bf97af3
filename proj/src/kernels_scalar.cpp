// Scalar reference kernels. These are the readable ground truth the SIMD
// variants are tested against; keep them free of manual unrolling.

#include <cassert>
#include <cstddef>

#include "kernels_impl.hpp"

namespace confflow::kernels {
namespace {

// Builds the capped prefix tables U and X for amplitudes a (real or complex).
//
// U_t[s] = sum_{k : min(k,s-k) >= t} a_k a_{s-k}            (suffix sums)
// X_t[s] = sum_k (min(t, k, s-k)+1) a_k a_{s-k}             (capped weights)
//
// Rows are indexed i = s - 2t. The recurrences run along t so each row is
// built from the previous one:
//   U_t[i] = U_{t+1}[i-2] + (i==0 ? 1 : 2) * a_t * a_{t+i}
//   X_t[i] = X_{t-1}[i+2] + U_t[i]          for i < N-t-1
//   X_t[N-t-1] = (t+1) * U_t[N-t-1]         (saturated boundary)
template <typename T>
void build_tables(const T* a, std::size_t n, T* u, T* x) {
    for (std::size_t tp1 = n; tp1-- > 0;) {
        const std::size_t t = tp1;
        T* row = u + row_offset(t, n);
        const T* prev = u + row_offset(t + 1, n);
        const std::size_t len = n - t;
        row[0] = a[t] * a[t];
        if (len > 1) row[1] = 2.0 * a[t] * a[t + 1];
        for (std::size_t i = 2; i < len; ++i)
            row[i] = prev[i - 2] + 2.0 * a[t] * a[t + i];
    }
    for (std::size_t t = 0; t < n; ++t) {
        T* row = x + row_offset(t, n);
        const T* prev = x + row_offset(t - 1, n);
        const T* urow = u + row_offset(t, n);
        const std::size_t len = n - t;
        if (t == 0) {
            for (std::size_t i = 0; i + 1 < len; ++i) row[i] = urow[i];
        } else {
            for (std::size_t i = 0; i + 1 < len; ++i)
                row[i] = prev[i + 2] + urow[i];
        }
        row[len - 1] = static_cast<double>(t + 1) * urow[len - 1];
    }
}

void interaction_sum_scalar(const cplx* a, std::size_t n, cplx* out) {
    if (n == 0) return;
    auto& ws = workspace();
    ws.cu.resize(table_size(n));
    ws.cx.resize(table_size(n));
    build_tables(a, n, ws.cu.data(), ws.cx.data());
    for (std::size_t i = 0; i < n; ++i) out[i] = cplx(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const cplx* row = ws.cx.data() + row_offset(t, n);
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < n - t; ++i) acc += std::conj(a[t + i]) * row[i];
        out[t] += acc;
        const cplx ct = std::conj(a[t]);
        for (std::size_t i = 1; i < n - t; ++i) out[t + i] += ct * row[i];
    }
}

void interaction_sum_real_scalar(const double* a, std::size_t n, double* out) {
    if (n == 0) return;
    auto& ws = workspace();
    ws.ru.resize(table_size(n));
    ws.rx.resize(table_size(n));
    build_tables(a, n, ws.ru.data(), ws.rx.data());
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double* row = ws.rx.data() + row_offset(t, n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n - t; ++i) acc += a[t + i] * row[i];
        out[t] += acc;
        const double at = a[t];
        for (std::size_t i = 1; i < n - t; ++i) out[t + i] += at * row[i];
    }
}

double weighted_mod2_sum_scalar(const cplx* a, std::size_t n, int power) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = static_cast<double>(i + 1);
        const double m2 = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
        acc += (power == 1 ? w : w * w) * m2;
    }
    return acc;
}

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

void scaled_add_scalar(cplx* out, const cplx* a, double h, const cplx* b,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + h * b[i];
}

void rk4_combine_scalar(cplx* y, double h, const cplx* k1, const cplx* k2,
                        const cplx* k3, const cplx* k4, std::size_t n) {
    const double w = h / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

const KernelTable scalar_table = {
    interaction_sum_scalar, interaction_sum_real_scalar,
    weighted_mod2_sum_scalar, dot_conj_scalar,
    scaled_add_scalar, rk4_combine_scalar,
};

void contraction_matrices(std::span<const double> a, double* Ma, double* Mb) {
    const std::size_t n = a.size();
    if (n == 0) return;
    auto& ws = workspace();
    ws.ru.resize(table_size(n));
    ws.rx.resize(table_size(n));
    build_tables(a.data(), n, ws.ru.data(), ws.rx.data());

    // Mb[n][m] = X_{min(n,m)}[n+m] read straight off the capped table.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            const double v = ws.rx[row_offset(c, n) + (r - c)];
            Mb[r * n + c] = v;
            Mb[c * n + r] = v;
        }

    // Ma[n][m] = 2 sum_j (min(min(n,m), j)+1) a_j a_{j+|n-m|}: the same
    // capped-prefix structure over the diagonal correlations a_j a_{j+d}.
    // Y_d[c] = sum_j (min(c,j)+1) a_j a_{j+d}, built per diagonal d.
    std::vector<double>& y = ws.ru;  // reuse scratch, N doubles suffice
    y.resize(n);
    std::vector<double>& suf = ws.rx;
    suf.resize(n + 1);
    for (std::size_t d = 0; d < n; ++d) {
        const std::size_t jmax = n - d;  // j in [0, jmax)
        suf[jmax] = 0.0;
        for (std::size_t j = jmax; j-- > 0;) suf[j] = suf[j + 1] + a[j] * a[j + d];
        double acc = 0.0;
        for (std::size_t c = 0; c < jmax; ++c) {
            acc += suf[c];
            y[c] = acc;  // Y_d[c], valid for c <= jmax-1 = min(n,m) range
        }
        for (std::size_t c = jmax; c < n; ++c) y[c] = acc;
        for (std::size_t m = 0; m + d < n; ++m) {
            const double v = 2.0 * y[m];
            Ma[(m + d) * n + m] = v;
            Ma[m * n + (m + d)] = v;
        }
    }
}

}  // namespace confflow::kernels
