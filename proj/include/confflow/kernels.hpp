#pragma once
// Arithmetic kernels behind the flow evaluation. Every dispatched entry has a
// scalar reference implementation and an AVX2 variant selected at runtime;
// the two are equivalence-tested against each other and against brute-force
// oracles in the test suite.
//
// The central object is the interaction sum
//   F_n = sum_{j,k} S(n,j,k,l) conj(a_j) a_k a_l,   l = n+j-k,
// with S(n,j,k,l) = min(n,j,k,l)+1 and every index restricted to [0,N).
// Writing S as a sum of indicator cutoffs turns the triple sum into capped
// prefix tables over the pair sums a_k a_{s-k}, which evaluates F in O(N^2).

#include <complex>
#include <span>

namespace confflow::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// Backend currently driving the dispatched kernels.
Backend active_backend();
const char* backend_name(Backend b);

// Force a backend (tests use this to compare variants). Throws
// std::runtime_error if the requested backend is unsupported on this CPU.
void force_backend(Backend b);

// Reset to the default choice: AVX2 when the CPU supports it, unless the
// environment variable CONFFLOW_SIMD={scalar,avx2} overrides.
void reset_backend();

// out_n = sum_{j,k} (min(n,j,k,n+j-k)+1) conj(a_j) a_k a_{n+j-k}.
void interaction_sum(std::span<const cplx> a, std::span<cplx> out);

// Same contraction for a real amplitude vector.
void interaction_sum_real(std::span<const double> a, std::span<double> out);

// sum_n (n+1)^power |a_n|^2 for power in {1,2}.
double weighted_mod2_sum(std::span<const cplx> a, int power);

// sum_n conj(a_n) b_n.
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);

// out = a + h*b (elementwise, h real).
void scaled_add(std::span<cplx> out, std::span<const cplx> a, double h,
                std::span<const cplx> b);

// y += (h/6) * (k1 + 2 k2 + 2 k3 + k4), the classical RK4 combination.
void rk4_combine(std::span<cplx> y, double h, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4);

// Dense symmetric contraction matrices of the cubic form around a real
// profile A (row-major, stride = N):
//   Ma[n*N+m] = 2 sum_j S(n,j,m,n+j-m) A_j A_{n+j-m}
//   Mb[n*N+m] =   sum_k S(n,m,k,n+m-k) A_k A_{n+m-k}
// These are the two building blocks of the second-variation operators and of
// the stationary-system Jacobian; built in O(N^2) from the same prefix
// tables as the interaction sum. Not dispatched (cold path).
void contraction_matrices(std::span<const double> a, double* Ma, double* Mb);

}  // namespace confflow::kernels
