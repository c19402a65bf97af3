#pragma once
// Private kernel plumbing: the dispatch table shared by the scalar and AVX2
// translation units, and the workspace for the prefix tables.
//
// Table layout used by both interaction-sum variants: for each t in [0,N)
// a row over s in [2t, t+N-1] stored at offset off(t) = t*N - t*(t-1)/2 with
// local index i = s - 2t (row length N-t). Row t of X holds
//   X_t[i] = sum_k (min(t, k, s-k)+1) a_k a_{s-k},  s = 2t+i,
// i.e. the interaction pair-sum capped at level t, from which
//   F_n = sum_j conj(a_j) X_{min(n,j)}[|n-j|].

#include <complex>
#include <cstddef>
#include <vector>

#include "confflow/kernels.hpp"

namespace confflow::kernels {

struct KernelTable {
    void (*interaction_sum)(const cplx*, std::size_t, cplx*);
    void (*interaction_sum_real)(const double*, std::size_t, double*);
    double (*weighted_mod2_sum)(const cplx*, std::size_t, int);
    cplx (*dot_conj)(const cplx*, const cplx*, std::size_t);
    void (*scaled_add)(cplx*, const cplx*, double, const cplx*, std::size_t);
    void (*rk4_combine)(cplx*, double, const cplx*, const cplx*, const cplx*,
                        const cplx*, std::size_t);
};

extern const KernelTable scalar_table;
#if defined(CONFFLOW_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

// Per-thread scratch for the U/X prefix tables (N*(N+1)/2 entries each).
struct Workspace {
    std::vector<cplx> cu, cx;
    std::vector<double> ru, rx;
};
Workspace& workspace();

inline std::size_t table_size(std::size_t n) { return n * (n + 1) / 2; }
inline std::size_t row_offset(std::size_t t, std::size_t n) {
    return t * n - t * (t - 1) / 2;
}

}  // namespace confflow::kernels
