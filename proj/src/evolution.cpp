#include "confflow/evolution.hpp"

#include <cmath>
#include <random>

#include "confflow/core.hpp"
#include "confflow/kernels.hpp"

namespace confflow {

namespace {

// d(alpha_n)/dt = -i F_n / (n+1) written into k.
void rhs_into(const std::vector<cplx>& a, std::vector<cplx>& f,
              std::vector<cplx>& k) {
    kernels::interaction_sum(a, f);
    for (size_t n = 0; n < a.size(); ++n)
        k[n] = cplx(0.0, -1.0 / static_cast<double>(n + 1)) * f[n];
}

double inf_norm(const std::vector<cplx>& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Trajectory integrate(const AmplitudeState& initial, double T, double dt,
                     const IntegrateOptions& opt) {
    require(dt > 0.0, "integrate: dt > 0");
    require(T >= 0.0, "integrate: T >= 0");
    for (const auto& v : initial.alpha)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                "integrate: non-finite amplitude");
    const int n = initial.truncation();

    Trajectory traj;
    auto record = [&](double t, const AmplitudeState& s) {
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.conserved.push_back(conserved(s));
    };

    AmplitudeState cur = initial;
    record(0.0, cur);

    const long long steps = std::llround(T / dt);
    const bool exact_grid = std::abs(steps * dt - T) <= 1e-12 * std::max(1.0, T);
    const long long full = exact_grid ? steps : static_cast<long long>(T / dt);

    std::vector<cplx> f(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto step_rk4 = [&](double h) {
        rhs_into(cur.alpha, f, k1);
        kernels::scaled_add(tmp, cur.alpha, 0.5 * h, k1);
        rhs_into(tmp, f, k2);
        kernels::scaled_add(tmp, cur.alpha, 0.5 * h, k2);
        rhs_into(tmp, f, k3);
        kernels::scaled_add(tmp, cur.alpha, h, k3);
        rhs_into(tmp, f, k4);
        kernels::rk4_combine(cur.alpha, h, k1, k2, k3, k4);
    };

    for (long long i = 1; i <= full; ++i) {
        step_rk4(dt);
        if (inf_norm(cur.alpha) > opt.blowup_norm)
            throw BlowUp("integrate: amplitude guard tripped");
        if (i % opt.snapshot_stride == 0 && !(exact_grid && i == full))
            record(i * dt, cur);
    }
    double t = full * dt;
    if (!exact_grid && T - t > 1e-14 * std::max(1.0, T)) {
        step_rk4(T - t);
        t = T;
    }
    record(t, cur);
    return traj;
}

Drift conservation_drift(const Trajectory& traj) {
    require(!traj.conserved.empty(), "conservation_drift: empty trajectory");
    const ConservedSet& c0 = traj.conserved.front();
    Drift d;
    for (const auto& c : traj.conserved) {
        d.H = std::max(d.H, std::abs(c.H - c0.H));
        d.Q = std::max(d.Q, std::abs(c.Q - c0.Q));
        d.E = std::max(d.E, std::abs(c.E - c0.E));
        d.absZ = std::max(d.absZ, std::abs(std::abs(c.Z) - std::abs(c0.Z)));
    }
    return d;
}

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

struct GaugeObjective {
    const AmplitudeState& state;
    const StationaryState& ref;
    double base;  // ||alpha||^2 + ||A||^2

    // h(phi) and its first two phi-derivatives, h = sum conj(alpha_n) A_n e^{i n phi}
    void overlap(double phi, cplx& h, cplx& h1, cplx& h2) const {
        h = h1 = h2 = cplx(0.0, 0.0);
        const cplx rot = std::polar(1.0, phi);
        cplx ph(1.0, 0.0);
        for (int n = 0; n < state.truncation(); ++n) {
            const cplx c = std::conj(state.alpha[static_cast<size_t>(n)]) *
                           ref.A[static_cast<size_t>(n)] * ph;
            h += c;
            h1 += cplx(0.0, static_cast<double>(n)) * c;
            h2 -= static_cast<double>(n) * static_cast<double>(n) * c;
            ph *= rot;
        }
    }

    cplx overlap(double phi) const {
        cplx h, h1, h2;
        overlap(phi, h, h1, h2);
        return h;
    }

    // distance evaluated as an explicit difference norm (no cancellation)
    double distance(double theta, double phi) const {
        const cplx g = std::polar(1.0, theta);
        const cplx rot = std::polar(1.0, phi);
        cplx ph = g;
        double acc = 0.0;
        for (int n = 0; n < state.truncation(); ++n) {
            acc += std::norm(state.alpha[static_cast<size_t>(n)] -
                             ph * ref.A[static_cast<size_t>(n)]);
            ph *= rot;
        }
        return std::sqrt(acc);
    }
};

}  // namespace

double gauge_distance(const AmplitudeState& state, const StationaryState& reference) {
    require(state.truncation() == reference.truncation(),
            "gauge_distance: truncation mismatch");
    double base = 0.0;
    for (const auto& v : state.alpha) base += std::norm(v);
    for (double v : reference.A) base += v * v;
    GaugeObjective obj{state, reference, base};

    // coarse 64x64 grid on dist^2 = base - 2 Re(e^{i theta} h(phi))
    double best = INFINITY, best_phi = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double phi = kTwoPi * i / 64.0;
        const cplx h = obj.overlap(phi);
        for (int j = 0; j < 64; ++j) {
            const double theta = kTwoPi * j / 64.0;
            const double d2 = base - 2.0 * (std::polar(1.0, theta) * h).real();
            if (d2 < best) {
                best = d2;
                best_phi = phi;
            }
        }
    }

    // Coordinate descent: the theta coordinate has the closed-form minimizer
    // theta = -arg h(phi); the phi coordinate is polished by a guarded
    // Newton step on d|h|^2/dphi (falls back to a shrinking bracket when the
    // curvature has the wrong sign). The final distance is evaluated as an
    // explicit difference norm, so pure gauge motions reach rounding level.
    double delta = kTwoPi / 64.0;
    cplx h, h1, h2;
    obj.overlap(best_phi, h, h1, h2);
    double prev_obj = base - 2.0 * std::abs(h);
    for (int round = 0; round < 20; ++round) {
        const double g = (std::conj(h) * h1).real();       // (1/2) d|h|^2/dphi
        const double gp = std::norm(h1) + (std::conj(h) * h2).real();
        double cand;
        if (gp < 0.0 && std::abs(g / gp) < delta) {
            cand = best_phi - g / gp;
        } else {
            const double dplus = base - 2.0 * std::abs(obj.overlap(best_phi + delta));
            const double dminus = base - 2.0 * std::abs(obj.overlap(best_phi - delta));
            cand = (dplus < dminus) ? best_phi + delta : best_phi - delta;
        }
        cplx hc, hc1, hc2;
        obj.overlap(cand, hc, hc1, hc2);
        if (base - 2.0 * std::abs(hc) <= prev_obj) {
            best_phi = cand;
            h = hc;
            h1 = hc1;
            h2 = hc2;
        }
        delta = std::max(0.5 * delta, 1e-9);
        const double cur = base - 2.0 * std::abs(h);
        if (prev_obj - cur < 1e-12 && round > 2) break;
        prev_obj = std::min(prev_obj, cur);
    }
    const double theta = (std::abs(h) > 0.0) ? -std::arg(h) : 0.0;
    return obj.distance(theta, best_phi);
}

StabilityProbeReport stability_probe(const StationaryState& reference,
                                     double noise, double T, std::uint64_t seed,
                                     const ProbeOptions& opt) {
    require(noise >= 0.0 && noise <= 1e-2, "stability_probe: noise in [0, 1e-2]");
    const int n = reference.truncation();
    AmplitudeState a0 = reference.amplitudes();
    if (noise > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<cplx> xi(static_cast<size_t>(n));
        double norm2 = 0.0;
        for (auto& v : xi) {
            v = cplx(gauss(rng), gauss(rng));
            norm2 += std::norm(v);
        }
        const double f = noise / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) a0.alpha[static_cast<size_t>(i)] += f * xi[static_cast<size_t>(i)];
    }

    IntegrateOptions iopt;
    iopt.snapshot_stride = opt.snapshot_stride;
    Trajectory traj = integrate(a0, T, opt.dt, iopt);

    StabilityProbeReport rep;
    rep.noise_amplitude = noise;
    rep.horizon = T;
    rep.seed = seed;
    rep.drift = conservation_drift(traj);
    for (const auto& s : traj.states)
        rep.max_gauge_distance = std::max(rep.max_gauge_distance,
                                          gauge_distance(s, reference));
    return rep;
}

}  // namespace confflow
