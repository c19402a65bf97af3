#pragma once
// Exact interaction coefficients, the truncated flow right-hand side,
// conserved quantities, and the symmetry-group actions.
//
// The flow for the complex amplitudes alpha_n reads
//   i (n+1) d(alpha_n)/dt = sum_{j,k} S(n,j,k,l) conj(alpha_j) alpha_k alpha_l,
// with l = n+j-k and S(n,j,k,l) = min(n,j,k,l)+1. All sums are truncated to
// indices in [0,N); terms referencing indices >= N are dropped.

#include <span>
#include <vector>

#include "confflow/types.hpp"

namespace confflow {

// S(n,j,k,l) = min(n,j,k,l)+1. Total on nonnegative indices; callers keep
// l = n+j-k.
inline int interaction_coeff(int n, int j, int k, int l) {
    int m = n < j ? n : j;
    if (k < m) m = k;
    if (l < m) m = l;
    return m + 1;
}

// Interaction sums F_n = sum_{j,k} S conj(a_j) a_k a_{n+j-k}.
std::vector<cplx> interaction_sums(const AmplitudeState& state);

// d(alpha_n)/dt = -i F_n / (n+1).
std::vector<cplx> flow_rhs(const AmplitudeState& state);

// H, Q, E, Z of the state. H is real by the pairing symmetry of S; the
// imaginary residue of the quadruple sum is discarded.
ConservedSet conserved(const AmplitudeState& state);

// alpha_n -> c alpha_n. Callers account for the time dilation by
// (lambda, omega) -> (c^2 lambda, c^2 omega).
AmplitudeState apply_scaling(const AmplitudeState& state, double c);
// alpha_n -> e^{i theta} alpha_n.
AmplitudeState apply_global_phase(const AmplitudeState& state, double theta);
// alpha_n -> e^{i n phi} alpha_n.
AmplitudeState apply_local_phase(const AmplitudeState& state, double phi);

// [D alpha]_n = n alpha_{n-1} - (n+2) alpha_{n+1}, truncated.
std::vector<cplx> apply_D(const AmplitudeState& state);

struct ExpDOptions {
    double max_s = 2.0;       // configured bound on |s|
    double tail_tol = 1e-10;  // relative to max |alpha_n|
    double step_factor = 0.1; // ds <= step_factor / N
};

// Integrates d(alpha)/ds = D alpha with classical 4th-order steps.
// Throws TailOverflow when the top entry exceeds the tail tolerance, i.e.
// the truncation cannot represent e^{sD} alpha.
AmplitudeState apply_expD(const AmplitudeState& state, double s,
                          const ExpDOptions& opt = {});

// max |alpha_n| (0 for the empty state).
double max_abs(const AmplitudeState& state);

}  // namespace confflow
