#include "confflow/families.hpp"

#include <cmath>

#include "confflow/kernels.hpp"

namespace confflow {
namespace {

bool tail_exceeds(const std::vector<double>& a) {
    double peak = 0.0;
    for (double v : a) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return false;
    return std::abs(a.back()) > kTailTol * peak;
}

StationaryState finish(std::vector<double> a, double lambda, double omega) {
    StationaryState s(std::move(a), lambda, omega);
    s.tail_warning = tail_exceeds(s.A);
    return s;
}

}  // namespace

StationaryState single_mode(int mode, double c, double omega, int N) {
    require(N >= 1, "single_mode: N >= 1");
    if (mode < 0 || mode >= N)
        throw IndexOutOfRange("single_mode: mode outside [0, N)");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    a[static_cast<size_t>(mode)] = c;
    return finish(std::move(a), mode * omega + c * c, omega);
}

StationaryState ground_state(double p, double c, int N) {
    require(p >= 0.0 && p < 1.0, "ground_state: p in [0,1)");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    double pn = 1.0;
    for (int n = 0; n < N; ++n, pn *= p) a[static_cast<size_t>(n)] = c * pn;
    const double q = 1.0 - p * p;
    return finish(std::move(a), c * c / (q * q), 0.0);
}

StationaryState twisted_state(double p, double c, int N) {
    require(p > 0.0 && p < 1.0, "twisted_state: p in (0,1)");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    const double q = 1.0 - p * p;
    double pn1 = 1.0 / p;  // p^{n-1}
    for (int n = 0; n < N; ++n, pn1 *= p)
        a[static_cast<size_t>(n)] = c * pn1 * (q * n - 2.0 * p * p);
    return finish(std::move(a), c * c / (q * q), 0.0);
}

StationaryState pair_state(double p, double c, PairSign sign, int N) {
    require(p > 0.0 && p < 1.0, "pair_state: p in (0,1)");
    require(c != 0.0, "pair_state: c != 0");
    const double disc = 1.0 - 14.0 * p * p + p * p * p * p;
    if (disc <= 0.0)
        throw DomainError("pair_state: 1 - 14 p^2 + p^4 <= 0 (p beyond 2 - sqrt(3))");
    const double root = std::sqrt(disc);
    const double s = (sign == PairSign::plus) ? 1.0 : -1.0;
    const double q = 1.0 - p * p;

    const double gamma = c * q;
    const double beta = -0.5 * c * (1.0 + 5.0 * p * p + s * root);
    const double omega = c * c / 12.0 * (1.0 + p * p + s * root) / q;
    const double lambda =
        c * c / 6.0 * ((3.0 - 4.0 * p * p) / q + s * (3.0 + 4.0 * p * p) * root / (q * q));

    std::vector<double> a(static_cast<size_t>(N), 0.0);
    double pn = 1.0;
    for (int n = 0; n < N; ++n, pn *= p)
        a[static_cast<size_t>(n)] = (beta + gamma * n) * pn;
    return finish(std::move(a), lambda, omega);
}

StationaryState blaschke_state(double p, int N) {
    require(p > 0.0 && p < 1.0, "blaschke_state: p in (0,1)");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    a[0] = -p;
    const double q = 1.0 - p * p;
    double pn1 = 1.0;  // p^{n-1}
    for (int n = 1; n < N; ++n, pn1 *= p) a[static_cast<size_t>(n)] = q * pn1;
    return finish(std::move(a), 1.0, 0.0);
}

StationaryState alternating_state(double p, double c, int N) {
    require(p > 0.0 && p < 1.0, "alternating_state: p in (0,1)");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    for (int n = 1; n < N; n += 2)
        a[static_cast<size_t>(n)] = c * std::pow(p, n - 1);
    const double q = 1.0 - p * p * p * p;
    return finish(std::move(a), c * c / (q * q), 0.0);
}

std::vector<double> stationary_residual(const StationaryState& state) {
    const int n = state.truncation();
    std::vector<double> r(static_cast<size_t>(n), 0.0);
    kernels::interaction_sum_real(state.A, r);
    for (int i = 0; i < n; ++i)
        r[static_cast<size_t>(i)] -=
            (i + 1) * (state.lambda - i * state.omega) * state.A[static_cast<size_t>(i)];
    return r;
}

double residual_norm(const StationaryState& state) {
    double m = 0.0;
    for (double v : stationary_residual(state)) m = std::max(m, std::abs(v));
    return m;
}

double z_constraint(const StationaryState& state) {
    double z = 0.0;
    for (int n = 0; n + 1 < state.truncation(); ++n)
        z += static_cast<double>((n + 1) * (n + 2)) * state.A[static_cast<size_t>(n)] *
             state.A[static_cast<size_t>(n + 1)];
    return z;
}

StationaryState rescale(const StationaryState& state, double c) {
    StationaryState out = state;
    for (auto& v : out.A) v *= c;
    out.lambda *= c * c;
    out.omega *= c * c;
    return out;
}

}  // namespace confflow
