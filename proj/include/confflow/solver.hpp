#pragma once
// Newton refinement and amplitude-pin continuation of stationary states,
// bifurcation catalogs for both base modes, normal-form branch predictors,
// the two-parameter family at the second mode, and the half-wavelength map.

#include <span>
#include <vector>

#include "confflow/families.hpp"
#include "confflow/spectral.hpp"
#include "confflow/types.hpp"

namespace confflow {

enum class BaseMode { lowest, second };
enum class BranchId { i, ii, iii, unique };

struct BifurcationPoint {
    int m = 0;
    double omega = 0.0;
    bool double_point = false;
    int partner = -1;  // index m of the coinciding bifurcation, if any
};

// Lowest mode: omega_m = (m-1)/(m(m+1)); the only double point is
// omega_2 = omega_3 = 1/6.
std::vector<BifurcationPoint> bifurcation_points_lowest(int m_max);
// Second mode: omega_1 = 0, omega_2 = 2/3, omega_m = (m-3)/(m^2-1) for
// m >= 3; double points omega_1 = omega_3 = 0, omega_4 = omega_11 = 1/15,
// omega_5 = omega_7 = 1/12.
std::vector<BifurcationPoint> bifurcation_points_second(int m_max);

struct ScanCrossing {
    double omega = 0.0;
    int multiplicity = 0;
};

// Zero crossings of the eigenvalues of the linearization L(omega) at the
// base single-mode state, located by inertia changes over a grid plus
// bisection.
std::vector<ScanCrossing> linearization_scan(double omega_lo, double omega_hi,
                                             BaseMode mode, int N,
                                             int grid = 512);

// One linear amplitude constraint sum_i c_i A_i = value, satisfied exactly
// by eliminating the coordinate with the largest coefficient.
struct PinConstraint {
    std::vector<std::pair<int, double>> coeffs;
    double value = 0.0;
};

inline PinConstraint pin_index(int n, double value) {
    return PinConstraint{{{n, 1.0}}, value};
}

struct NewtonOptions {
    std::vector<PinConstraint> pins;
    bool omega_free = true;
    Normalization normalization = Normalization::lambda_one;
    double tol = 1e-12;      // absolute on ||R||_inf, times the state scale
    double lsq_tol = 1e-10;  // convergence bound for overdetermined systems
    int max_iter = 50;
    double max_cond = 1e14;
};

struct NewtonInfo {
    int iterations = 0;
    double residual_norm = 0.0;
    bool least_squares = false;
};

// Solves the stationary system with pinned amplitudes; omega is an unknown
// when omega_free (lambda always follows the normalization). Square systems
// go through LU with a conditioning probe, consistent-overdetermined ones
// through QR least squares. Damped steps (halving on residual increase).
StationaryState newton_refine(const StationaryState& guess,
                              const NewtonOptions& opts,
                              NewtonInfo* info = nullptr);

// Re-converges a state at a prescribed omega (all amplitudes free). This is
// the branch-following primitive behind the D-matrix finite differences.
StationaryState refine_at_omega(const StationaryState& seed, double omega,
                                Normalization norm,
                                const NewtonOptions& opts = {});

struct BranchSpec {
    BaseMode base_mode = BaseMode::lowest;
    int bif_index = 1;  // m in the bifurcation catalog
    BranchId branch_id = BranchId::unique;
    int N = 64;
};

struct BranchSample {
    double epsilon = 0.0;
    double mu = 0.0;     // secondary amplitude readout; 0 when unused
    double Omega = 0.0;  // omega - omega_m
    StationaryState state;
    double residual_norm = 0.0;
};

struct Branch {
    BranchSpec spec;
    double omega_star = 0.0;
    std::vector<BranchSample> samples;
};

// omega_m of the branch's bifurcation point. Throws UnknownBranch for an
// invalid (mode, m, id) combination.
double branch_omega_star(const BranchSpec& spec);

// Normal-form initial guess at parameter eps: base eigenmode + eps * kernel
// direction (+ the predicted secondary amplitude on (iii) branches), with
// omega preset from the leading normal-form coefficients.
StationaryState branch_predictor(const BranchSpec& spec, double eps);

// Pin constraint and pinned value that parameterize the branch at eps.
PinConstraint branch_pin(const BranchSpec& spec, double eps);

// Predictor--corrector continuation over the pin schedule.
Branch continue_branch(const BranchSpec& spec, std::span<const double> eps_schedule);

// Branch function omega -> converged normalized state, seeded from the
// nearest continuation sample.
BranchFunction make_branch_fn(const Branch& branch);

// Exact pair family as a branch function under the given normalization
// (upper sign: bifurcates from the lowest double point; lower sign: from the
// second mode at omega_2 = 2/3).
BranchFunction pair_branch_fn(PairSign sign, Normalization norm, int N = 64);

// Member of the two-parameter family of stationary states at the second
// eigenmode with lambda = 1, omega = 0, pinned by (A_0 - A_2)/2 = eps and
// A_3 = mu. Solved as a consistent-overdetermined least-squares Newton.
StationaryState two_param_family_second(double eps, double mu, int N = 64,
                                        NewtonInfo* info = nullptr);

// (A~)_{2m+1} = A_m, even entries zero; lambda~ = lambda + omega/2,
// omega~ = omega/2. Requires out_N >= 2 * truncation.
StationaryState half_wavelength_map(const StationaryState& state, int out_N);

}  // namespace confflow
