#pragma once
// Closed-form stationary families and the residual of the stationary system
//   R_n(A) = sum_{j,k} S(n,j,k,n+j-k) A_j A_k A_{n+j-k} - (n+1)(lambda - n omega) A_n.

#include <vector>

#include "confflow/types.hpp"

namespace confflow {

inline constexpr int kDefaultTruncation = 64;
inline constexpr double kTailTol = 1e-10;

enum class PairSign { plus, minus };

// Largest admissible p for the pair family: 1 - 14 p^2 + p^4 > 0.
inline constexpr double kPairPMax = 0.26794919243112270647;  // 2 - sqrt(3)

// A_n = c delta_{n,mode}, lambda = mode*omega + c^2.
StationaryState single_mode(int mode, double c, double omega,
                            int N = kDefaultTruncation);

// A_n = c p^n, lambda = c^2/(1-p^2)^2, omega = 0. The choice c = 1-p^2
// normalizes lambda = 1.
StationaryState ground_state(double p, double c, int N = kDefaultTruncation);

// A_n = c p^{n-1} ((1-p^2) n - 2 p^2), lambda = c^2/(1-p^2)^2, omega = 0.
StationaryState twisted_state(double p, double c, int N = kDefaultTruncation);

// A_n = (beta + gamma n) p^n with
//   gamma = c (1-p^2),  beta = -c (1 + 5p^2 +- sqrt(1-14p^2+p^4)) / 2,
//   omega = c^2 (1+p^2 +- sqrt(1-14p^2+p^4)) / (12 (1-p^2)),
//   lambda = c^2 ((3-4p^2)/(1-p^2) +- (3+4p^2) sqrt(1-14p^2+p^4)/(1-p^2)^2) / 6.
// Exists for p in (0, 2-sqrt(3)); satisfies Q = (6/7)(lambda+omega), E = 6 omega.
StationaryState pair_state(double p, double c, PairSign sign,
                           int N = kDefaultTruncation);

// Degree-one Blaschke state: A_0 = -p, A_{n>=1} = (1-p^2) p^{n-1},
// lambda = 1, omega = 0.
StationaryState blaschke_state(double p, int N = kDefaultTruncation);

// Odd-support geometric state: A_n = c p^{n-1} for odd n, 0 for even n,
// lambda = c^2/(1-p^4)^2, omega = 0.
StationaryState alternating_state(double p, double c, int N = kDefaultTruncation);

// Residual vector of the stationary system at the given state.
std::vector<double> stationary_residual(const StationaryState& state);

// max_n |R_n|.
double residual_norm(const StationaryState& state);

// sum_n (n+1)(n+2) A_n A_{n+1}; must vanish for stationary states with
// omega != 0 (Z is conserved, so it cannot rotate).
double z_constraint(const StationaryState& state);

// Rescales a stationary state by c: (A, lambda, omega) -> (cA, c^2 lambda,
// c^2 omega). Used to move between normalizations.
StationaryState rescale(const StationaryState& state, double c);

}  // namespace confflow
