// Runtime backend selection and the public kernel entry points.

#include "confflow/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace confflow::kernels {

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

namespace {

bool avx2_available() {
#if defined(CONFFLOW_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend default_backend() {
    if (const char* env = std::getenv("CONFFLOW_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

struct Dispatch {
    Backend backend;
    const KernelTable* table;
    Dispatch() { set(default_backend()); }
    void set(Backend b) {
        backend = b;
#if defined(CONFFLOW_HAVE_AVX2)
        table = (b == Backend::avx2) ? &avx2_table : &scalar_table;
#else
        table = &scalar_table;
#endif
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw std::runtime_error("avx2 backend unavailable on this CPU");
    dispatch().set(b);
}

void reset_backend() { dispatch().set(default_backend()); }

void interaction_sum(std::span<const cplx> a, std::span<cplx> out) {
    dispatch().table->interaction_sum(a.data(), a.size(), out.data());
}

void interaction_sum_real(std::span<const double> a, std::span<double> out) {
    dispatch().table->interaction_sum_real(a.data(), a.size(), out.data());
}

double weighted_mod2_sum(std::span<const cplx> a, int power) {
    return dispatch().table->weighted_mod2_sum(a.data(), a.size(), power);
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
    return dispatch().table->dot_conj(a.data(), b.data(), a.size());
}

void scaled_add(std::span<cplx> out, std::span<const cplx> a, double h,
                std::span<const cplx> b) {
    dispatch().table->scaled_add(out.data(), a.data(), h, b.data(), a.size());
}

void rk4_combine(std::span<cplx> y, double h, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4) {
    dispatch().table->rk4_combine(y.data(), h, k1.data(), k2.data(), k3.data(),
                                  k4.data(), y.size());
}

}  // namespace confflow::kernels
