#pragma once
// Time integration of the truncated flow, conservation audits, and the
// empirical orbital-stability probe.

#include <cstdint>
#include <vector>

#include "confflow/types.hpp"

namespace confflow {

struct Trajectory {
    std::vector<double> times;
    std::vector<AmplitudeState> states;
    std::vector<ConservedSet> conserved;
};

struct IntegrateOptions {
    int snapshot_stride = 10;   // record every k-th step (plus the endpoint)
    double blowup_norm = 1e6;   // ||alpha||_inf guard
};

// Classical fixed-step RK4 on d(alpha_n)/dt = -i F_n(alpha)/(n+1).
// Snapshots (with conserved quantities) are recorded at the stride and at
// t = T. Throws BlowUp when the amplitude guard trips.
Trajectory integrate(const AmplitudeState& initial, double T, double dt,
                     const IntegrateOptions& opt = {});

struct Drift {
    double H = 0.0, Q = 0.0, E = 0.0, absZ = 0.0;
};

// Max deviation of each conserved quantity from its initial value.
Drift conservation_drift(const Trajectory& traj);

// min over (theta, phi) of || alpha - e^{i(theta + n phi)} A ||_2, by a
// 64x64 grid followed by coordinate-descent refinement.
double gauge_distance(const AmplitudeState& state, const StationaryState& reference);

struct StabilityProbeReport {
    double noise_amplitude = 0.0;
    double horizon = 0.0;
    double max_gauge_distance = 0.0;
    Drift drift;
    std::uint64_t seed = 0;
};

struct ProbeOptions {
    double dt = 1e-2;
    int snapshot_stride = 10;
};

// Perturbs the stationary state with per-mode complex Gaussian noise scaled
// to ||xi||_2 = noise, integrates to T, and records the maximal
// gauge-minimized distance from the orbit plus conservation drifts.
StabilityProbeReport stability_probe(const StationaryState& reference,
                                     double noise, double T, std::uint64_t seed,
                                     const ProbeOptions& opt = {});

}  // namespace confflow
