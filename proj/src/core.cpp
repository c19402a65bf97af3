#include "confflow/core.hpp"

#include <cmath>

#include "confflow/kernels.hpp"

namespace confflow {

std::vector<cplx> interaction_sums(const AmplitudeState& state) {
    std::vector<cplx> out(state.alpha.size());
    kernels::interaction_sum(state.alpha, out);
    return out;
}

std::vector<cplx> flow_rhs(const AmplitudeState& state) {
    std::vector<cplx> f = interaction_sums(state);
    for (size_t n = 0; n < f.size(); ++n)
        f[n] *= cplx(0.0, -1.0 / static_cast<double>(n + 1));
    return f;
}

ConservedSet conserved(const AmplitudeState& state) {
    ConservedSet c;
    const auto& a = state.alpha;
    c.Q = kernels::weighted_mod2_sum(a, 1);
    c.E = kernels::weighted_mod2_sum(a, 2);
    std::vector<cplx> f(a.size());
    kernels::interaction_sum(a, f);
    c.H = kernels::dot_conj(a, f).real();
    cplx z(0.0, 0.0);
    for (size_t n = 0; n + 1 < a.size(); ++n) {
        const double w = static_cast<double>((n + 1) * (n + 2));
        z += w * std::conj(a[n + 1]) * a[n];
    }
    c.Z = z;
    return c;
}

AmplitudeState apply_scaling(const AmplitudeState& state, double c) {
    AmplitudeState out = state;
    for (auto& v : out.alpha) v *= c;
    return out;
}

AmplitudeState apply_global_phase(const AmplitudeState& state, double theta) {
    AmplitudeState out = state;
    const cplx ph = std::polar(1.0, theta);
    for (auto& v : out.alpha) v *= ph;
    return out;
}

AmplitudeState apply_local_phase(const AmplitudeState& state, double phi) {
    AmplitudeState out = state;
    for (size_t n = 0; n < out.alpha.size(); ++n)
        out.alpha[n] *= std::polar(1.0, phi * static_cast<double>(n));
    return out;
}

std::vector<cplx> apply_D(const AmplitudeState& state) {
    const auto& a = state.alpha;
    const int n = state.truncation();
    std::vector<cplx> out(a.size(), cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
        cplx v(0.0, 0.0);
        if (i >= 1) v += static_cast<double>(i) * a[i - 1];
        if (i + 1 < n) v -= static_cast<double>(i + 2) * a[i + 1];
        out[i] = v;
    }
    return out;
}

double max_abs(const AmplitudeState& state) {
    double m = 0.0;
    for (const auto& v : state.alpha) m = std::max(m, std::abs(v));
    return m;
}

AmplitudeState apply_expD(const AmplitudeState& state, double s,
                          const ExpDOptions& opt) {
    const int n = state.truncation();
    if (std::abs(s) > opt.max_s)
        throw DomainError("apply_expD: |s| exceeds configured bound");
    if (n == 0 || s == 0.0) return state;

    const double ds_max = opt.step_factor / static_cast<double>(n);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(s) / ds_max)));
    const double ds = s / static_cast<double>(steps);

    AmplitudeState cur = state;
    AmplitudeState tmp(n);
    auto deriv = [&](const AmplitudeState& st) { return apply_D(st); };
    for (int step = 0; step < steps; ++step) {
        std::vector<cplx> k1 = deriv(cur);
        kernels::scaled_add(tmp.alpha, cur.alpha, 0.5 * ds, k1);
        std::vector<cplx> k2 = deriv(tmp);
        kernels::scaled_add(tmp.alpha, cur.alpha, 0.5 * ds, k2);
        std::vector<cplx> k3 = deriv(tmp);
        kernels::scaled_add(tmp.alpha, cur.alpha, ds, k3);
        std::vector<cplx> k4 = deriv(tmp);
        kernels::rk4_combine(cur.alpha, ds, k1, k2, k3, k4);

        const double peak = max_abs(cur);
        if (peak > 0.0 && std::abs(cur.alpha[n - 1]) > opt.tail_tol * peak)
            throw TailOverflow("apply_expD: truncation too small for e^{sD}");
    }
    return cur;
}

}  // namespace confflow
