#pragma once
// Second-variation operators L+- at a stationary state, dense symmetric
// eigensolution, inertia counts, the 2x2 D-matrix of conserved-quantity
// derivatives along a branch, and the constrained negative index
//   n_c(L+) = n(L+) - p(D) - z(D).

#include <array>
#include <functional>
#include <vector>

#include "confflow/linalg.hpp"
#include "confflow/types.hpp"

namespace confflow {

// Frequency normalization a branch is continued under.
enum class Normalization { lambda_one, lambda_minus_omega_one };

inline double lambda_of_omega(Normalization norm, double omega) {
    return norm == Normalization::lambda_one ? 1.0 : 1.0 + omega;
}

struct HessianPair {
    Matrix L_plus;
    Matrix L_minus;
};

// (L+- a)_n = sum_{j,k} S [2 A_j A_{n+j-k} a_k +- A_k A_{n+j-k} a_j]
//             - (n+1)(lambda - n omega) a_n.
HessianPair assemble_hessians(const StationaryState& state);

// Direct evaluation of (L+- a) by the triple sum; the assembled matrices are
// checked against this on random vectors.
std::vector<double> hessian_apply(const StationaryState& state,
                                  const std::vector<double>& a, int sign);

struct EigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns match values; empty if not requested
};

// Householder tridiagonalization followed by implicit-shift QL on the
// reduced form. Dense, full accuracy, N <= 512.
EigenResult sym_eigs(const Matrix& m, bool want_vectors = false);

struct Inertia {
    int n = 0;  // negative
    int z = 0;  // |eig| < zero_tol
    int p = 0;  // positive
};

Inertia inertia(const std::vector<double>& eigs, double zero_tol);

using BranchFunction = std::function<StationaryState(double omega)>;

// D-matrix by centered finite differences of Q and Q-E along the normalized
// branch omega -> state.
std::array<std::array<double, 2>, 2> d_matrix(const BranchFunction& branch_fn,
                                              double omega, double h,
                                              Normalization norm);

enum class Classification {
    constrained_minimizer,
    constrained_maximizer,
    saddle,
    indeterminate,
};

const char* classification_name(Classification c);

struct SpectralOptions {
    // Zero classification: |eig| < zero_tol_rel * max(1, ||L||_inf). Gauge
    // kernels of converged states sit at the 1e-12 * ||L|| level while the
    // smallest genuine branch eigenvalues reach ~1e-7 near bifurcation
    // points, so the split lives at 1e-11.
    double zero_tol_rel = 1e-11;
    double d_h = 1e-3;  // finite-difference step in omega
    Normalization normalization = Normalization::lambda_one;
};

struct SpectralReport {
    std::vector<double> eigs_plus;
    std::vector<double> eigs_minus;
    int n_plus = 0, z_plus = 0, p_plus = 0;
    int n_minus = 0, z_minus = 0, p_minus = 0;
    std::array<std::array<double, 2>, 2> D{{{0, 0}, {0, 0}}};
    int p_D = 0, z_D = 0;
    int n_constrained = -1;  // -1 when the index formula does not apply
    Classification classification = Classification::indeterminate;
    double zero_tol_plus = 0.0, zero_tol_minus = 0.0;
};

// Full spectral/variational report at a converged stationary state. The
// state must already satisfy the normalization in opts; branch_fn must
// return converged states at nearby omega under the same normalization.
SpectralReport spectral_report(const StationaryState& state,
                               const BranchFunction& branch_fn,
                               const SpectralOptions& opts = {});

}  // namespace confflow
