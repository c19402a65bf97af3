#include "confflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "confflow/families.hpp"
#include "confflow/kernels.hpp"
#include "confflow/linalg.hpp"

namespace confflow {

std::vector<BifurcationPoint> bifurcation_points_lowest(int m_max) {
    require(m_max >= 1, "bifurcation_points_lowest: m_max >= 1");
    std::vector<BifurcationPoint> out;
    for (int m = 1; m <= m_max; ++m) {
        BifurcationPoint b;
        b.m = m;
        b.omega = static_cast<double>(m - 1) / (static_cast<double>(m) * (m + 1));
        if (m == 2 || m == 3) {
            b.double_point = true;
            b.partner = (m == 2) ? 3 : 2;
        }
        out.push_back(b);
    }
    return out;
}

std::vector<BifurcationPoint> bifurcation_points_second(int m_max) {
    require(m_max >= 1, "bifurcation_points_second: m_max >= 1");
    auto partner_of = [](int m) {
        switch (m) {
            case 1: return 3;
            case 3: return 1;
            case 4: return 11;
            case 11: return 4;
            case 5: return 7;
            case 7: return 5;
            default: return -1;
        }
    };
    std::vector<BifurcationPoint> out;
    for (int m = 1; m <= m_max; ++m) {
        BifurcationPoint b;
        b.m = m;
        if (m == 1)
            b.omega = 0.0;
        else if (m == 2)
            b.omega = 2.0 / 3.0;
        else
            b.omega = static_cast<double>(m - 3) /
                      (static_cast<double>(m) * m - 1.0);
        b.partner = partner_of(m);
        b.double_point = b.partner > 0;
        out.push_back(b);
    }
    return out;
}

namespace {

std::vector<double> linearization_eigs(BaseMode mode, double omega, int N) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(N));
    if (mode == BaseMode::lowest) {
        v.push_back(2.0);
        for (int n = 1; n < N; ++n)
            v.push_back(static_cast<double>(n) * (n + 1) * omega - n + 1);
    } else {
        const double tr = 2.0 + 2.0 * omega;
        const double det = omega * (2.0 - 3.0 * omega);
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        v.push_back(0.5 * (tr - disc));
        v.push_back(0.5 * (tr + disc));
        if (N > 1) v.push_back(4.0);
        for (int n = 3; n < N; ++n)
            v.push_back((static_cast<double>(n) * n - 1.0) * omega - n + 3);
    }
    return v;
}

int negative_count(BaseMode mode, double omega, int N) {
    int c = 0;
    for (double x : linearization_eigs(mode, omega, N))
        if (x < 0.0) ++c;
    return c;
}

}  // namespace

std::vector<ScanCrossing> linearization_scan(double omega_lo, double omega_hi,
                                             BaseMode mode, int N, int grid) {
    std::vector<ScanCrossing> out;
    if (!(omega_hi > omega_lo) || grid < 1) return out;
    // Zeros sitting exactly on a range endpoint would not flip the inertia
    // inside any cell; report them directly.
    for (double w : {omega_lo, omega_hi}) {
        int z = 0;
        for (double x : linearization_eigs(mode, w, N))
            if (std::abs(x) < 1e-12) ++z;
        if (z > 0) out.push_back({w, z});
    }
    const double h = (omega_hi - omega_lo) / grid;
    int prev = negative_count(mode, omega_lo, N);
    for (int i = 0; i < grid; ++i) {
        double a = omega_lo + i * h;
        double b = (i == grid - 1) ? omega_hi : omega_lo + (i + 1) * h;
        int nb = negative_count(mode, b, N);
        if (nb != prev) {
            int na = prev;
            double lo = a, hi = b;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (negative_count(mode, mid, N) != na)
                    hi = mid;
                else
                    lo = mid;
            }
            out.push_back({0.5 * (lo + hi), std::abs(nb - prev)});
        }
        prev = nb;
    }
    std::sort(out.begin(), out.end(),
              [](const ScanCrossing& x, const ScanCrossing& y) { return x.omega < y.omega; });
    return out;
}

// ---------------------------------------------------------------------------
// Newton refinement with exact linear amplitude pins.

namespace {

struct PinPlan {
    struct Elim {
        int pivot = -1;
        double pivot_coeff = 1.0;
        std::vector<std::pair<int, double>> others;
        double value = 0.0;
    };
    std::vector<Elim> elims;
    std::vector<int> free_idx;
    // substitution weights: free index -> list of (elim #, dA_pivot/dA_free)
    std::vector<std::vector<std::pair<int, double>>> weights;
};

PinPlan make_plan(int N, const std::vector<PinConstraint>& pins) {
    PinPlan plan;
    std::vector<bool> used(static_cast<size_t>(N), false);
    for (const auto& pin : pins) {
        require(!pin.coeffs.empty(), "pin without coefficients");
        PinPlan::Elim e;
        e.value = pin.value;
        double best = 0.0;
        for (auto [idx, c] : pin.coeffs) {
            if (idx < 0 || idx >= N)
                throw IndexOutOfRange("pin index outside truncation");
            require(!used[static_cast<size_t>(idx)],
                    "pins must touch disjoint amplitude sets");
            if (std::abs(c) > std::abs(best)) {
                best = c;
                e.pivot = idx;
            }
        }
        require(best != 0.0, "pin with all-zero coefficients");
        e.pivot_coeff = best;
        for (auto [idx, c] : pin.coeffs) {
            used[static_cast<size_t>(idx)] = true;
            if (idx != e.pivot) e.others.push_back({idx, c});
        }
        plan.elims.push_back(std::move(e));
    }
    std::vector<bool> pivot(static_cast<size_t>(N), false);
    for (const auto& e : plan.elims) pivot[static_cast<size_t>(e.pivot)] = true;
    plan.weights.assign(static_cast<size_t>(N), {});
    for (int n = 0; n < N; ++n)
        if (!pivot[static_cast<size_t>(n)]) plan.free_idx.push_back(n);
    for (size_t ei = 0; ei < plan.elims.size(); ++ei)
        for (auto [idx, c] : plan.elims[ei].others)
            plan.weights[static_cast<size_t>(idx)].push_back(
                {static_cast<int>(ei), -c / plan.elims[ei].pivot_coeff});
    return plan;
}

void apply_pins(std::vector<double>& a, const PinPlan& plan) {
    for (const auto& e : plan.elims) {
        double acc = e.value;
        for (auto [idx, c] : e.others) acc -= c * a[static_cast<size_t>(idx)];
        a[static_cast<size_t>(e.pivot)] = acc / e.pivot_coeff;
    }
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> residual_vec(const std::vector<double>& a, double lambda,
                                 double omega) {
    std::vector<double> r(a.size(), 0.0);
    kernels::interaction_sum_real(a, r);
    for (size_t n = 0; n < a.size(); ++n)
        r[n] -= static_cast<double>(n + 1) *
                (lambda - static_cast<double>(n) * omega) * a[n];
    return r;
}

}  // namespace

StationaryState newton_refine(const StationaryState& guess,
                              const NewtonOptions& opts, NewtonInfo* info) {
    const int N = guess.truncation();
    require(N >= 1, "newton_refine: empty state");
    const PinPlan plan = make_plan(N, opts.pins);
    const int ncols =
        static_cast<int>(plan.free_idx.size()) + (opts.omega_free ? 1 : 0);
    require(ncols <= N, "newton_refine: underdetermined system");
    const bool lsq = ncols < N;
    const double tol = lsq ? opts.lsq_tol : opts.tol;

    std::vector<double> a = guess.A;
    double omega = guess.omega;
    apply_pins(a, plan);

    auto scale_of = [&](const std::vector<double>& av, double w) {
        const double amax = inf_norm(av);
        return std::max(1.0, std::abs(lambda_of_omega(opts.normalization, w))) *
               std::max(1.0, amax) * std::max(1.0, amax);
    };

    double lambda = lambda_of_omega(opts.normalization, omega);
    std::vector<double> r = residual_vec(a, lambda, omega);
    double rn = inf_norm(r);

    Matrix ma(N, N), mb(N, N);
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        if (rn <= tol * scale_of(a, omega)) break;

        kernels::contraction_matrices(a, ma.data.data(), mb.data.data());
        Matrix j(N, ncols);
        for (int col = 0; col < static_cast<int>(plan.free_idx.size()); ++col) {
            const int m = plan.free_idx[static_cast<size_t>(col)];
            for (int row = 0; row < N; ++row) {
                double v = ma(row, m) + mb(row, m);
                if (row == m)
                    v -= (row + 1) * (lambda - row * omega);
                for (auto [ei, w] : plan.weights[static_cast<size_t>(m)]) {
                    const int piv = plan.elims[static_cast<size_t>(ei)].pivot;
                    double vp = ma(row, piv) + mb(row, piv);
                    if (row == piv) vp -= (row + 1) * (lambda - row * omega);
                    v += w * vp;
                }
                j(row, col) = v;
            }
        }
        if (opts.omega_free) {
            const double dlam =
                opts.normalization == Normalization::lambda_one ? 0.0 : 1.0;
            for (int row = 0; row < N; ++row)
                j(row, ncols - 1) =
                    -(row + 1) * (dlam - row) * a[static_cast<size_t>(row)];
        }

        std::vector<double> rhs(r.size());
        for (size_t k = 0; k < r.size(); ++k) rhs[k] = -r[k];
        std::vector<double> delta;
        if (!lsq) {
            double ratio = 0.0;
            delta = lu_solve(j, rhs, &ratio);
            if (ratio > opts.max_cond)
                throw SingularJacobian("newton_refine: Jacobian condition estimate over limit");
        } else {
            delta = qr_least_squares(j, rhs);
        }

        double step = 1.0;
        bool accepted = false;
        std::vector<double> at;
        double wt = omega, lt = lambda, rt = rn;
        std::vector<double> resid_t;
        while (step >= 1e-10) {
            at = a;
            for (size_t k = 0; k < plan.free_idx.size(); ++k)
                at[static_cast<size_t>(plan.free_idx[k])] += step * delta[k];
            wt = opts.omega_free ? omega + step * delta[static_cast<size_t>(ncols - 1)]
                                 : omega;
            apply_pins(at, plan);
            lt = lambda_of_omega(opts.normalization, wt);
            resid_t = residual_vec(at, lt, wt);
            rt = inf_norm(resid_t);
            if (rt < rn || rt <= tol * scale_of(at, wt)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            throw NoConvergence("newton_refine: damped step stalled, residual " +
                                std::to_string(rn));
        a = std::move(at);
        omega = wt;
        lambda = lt;
        r = std::move(resid_t);
        rn = rt;
    }
    if (rn > tol * scale_of(a, omega))
        throw NoConvergence("newton_refine: iteration cap reached, residual " +
                            std::to_string(rn));
    if (info) {
        info->iterations = iter;
        info->residual_norm = rn;
        info->least_squares = lsq;
    }
    StationaryState out(std::move(a), lambda, omega);
    return out;
}

StationaryState refine_at_omega(const StationaryState& seed, double omega,
                                Normalization norm, const NewtonOptions& base) {
    NewtonOptions opts = base;
    opts.pins.clear();
    opts.omega_free = false;
    opts.normalization = norm;
    StationaryState guess = seed;
    guess.omega = omega;
    guess.lambda = lambda_of_omega(norm, omega);
    return newton_refine(guess, opts);
}

// ---------------------------------------------------------------------------
// Branch bookkeeping.

namespace {

struct BranchLayout {
    double omega_star = 0.0;
    Normalization norm = Normalization::lambda_one;
    int base_index = 0;   // the eigenmode carrying amplitude 1
    int pin_index = 0;    // amplitude parameterizing the branch
    double pin_scale = 1.0;  // pinned value = pin_scale * eps
    int mu_index = -1;    // secondary readout on (iii) branches
};

BranchLayout layout_of(const BranchSpec& spec) {
    BranchLayout lo;
    if (spec.base_mode == BaseMode::lowest) {
        lo.norm = Normalization::lambda_one;
        lo.base_index = 0;
        if (spec.branch_id == BranchId::unique) {
            if (spec.bif_index == 2 || spec.bif_index == 3)
                throw UnknownBranch("lowest double point needs branch id i/ii/iii");
            require(spec.bif_index >= 1, "bif_index >= 1");
            lo.omega_star = static_cast<double>(spec.bif_index - 1) /
                            (static_cast<double>(spec.bif_index) * (spec.bif_index + 1));
            lo.pin_index = spec.bif_index;
        } else {
            if (spec.bif_index != 2 && spec.bif_index != 3)
                throw UnknownBranch("branch ids i/ii/iii exist only at the double point");
            lo.omega_star = 1.0 / 6.0;
            lo.pin_index = (spec.branch_id == BranchId::i) ? 3 : 2;
            if (spec.branch_id == BranchId::iii) lo.mu_index = 3;
        }
    } else {
        lo.norm = Normalization::lambda_minus_omega_one;
        lo.base_index = 1;
        const int m = spec.bif_index;
        if (spec.branch_id == BranchId::unique) {
            if (m == 2) {
                lo.omega_star = 2.0 / 3.0;
                lo.pin_index = 0;
                lo.pin_scale = 3.0;
            } else if (m >= 6 && m != 7 && m != 11) {
                lo.omega_star = static_cast<double>(m - 3) /
                                (static_cast<double>(m) * m - 1.0);
                lo.pin_index = m;
            } else {
                throw UnknownBranch("no unique branch at this second-mode point");
            }
        } else if (m == 4 || m == 11) {
            if (spec.branch_id == BranchId::iii)
                throw UnknownBranch("omega_4 = omega_11 carries two branches only");
            lo.omega_star = 1.0 / 15.0;
            lo.pin_index = (spec.branch_id == BranchId::i) ? 11 : 4;
        } else if (m == 5 || m == 7) {
            lo.omega_star = 1.0 / 12.0;
            lo.pin_index = (spec.branch_id == BranchId::i) ? 7 : 5;
            if (spec.branch_id == BranchId::iii) lo.mu_index = 7;
        } else {
            throw UnknownBranch("branch ids i/ii/iii exist only at double points");
        }
    }
    if (lo.pin_index >= spec.N)
        throw IndexOutOfRange("branch pin index outside truncation");
    return lo;
}

}  // namespace

double branch_omega_star(const BranchSpec& spec) { return layout_of(spec).omega_star; }

PinConstraint branch_pin(const BranchSpec& spec, double eps) {
    const BranchLayout lo = layout_of(spec);
    return pin_index(lo.pin_index, lo.pin_scale * eps);
}

StationaryState branch_predictor(const BranchSpec& spec, double eps) {
    const BranchLayout lo = layout_of(spec);
    std::vector<double> a(static_cast<size_t>(spec.N), 0.0);
    a[static_cast<size_t>(lo.base_index)] = 1.0;
    double Omega = 0.0;

    if (spec.base_mode == BaseMode::lowest) {
        if (spec.branch_id == BranchId::unique) {
            a[static_cast<size_t>(lo.pin_index)] = eps;
        } else {
            // Normal-form seeds at the double point 1/6: quadratic and cubic
            // feedback of the kernel amplitudes (eps on e2, mu on e3).
            double e2 = 0.0, e3 = 0.0;
            if (spec.branch_id == BranchId::i) {
                e3 = eps;
                Omega = eps * eps / 12.0;
            } else if (spec.branch_id == BranchId::ii) {
                e2 = eps;
                Omega = 7.0 / 6.0 * eps * eps;
            } else {
                if (!(eps < 0.0))
                    throw UnknownBranch("branch iii exists for eps < 0 only");
                e2 = eps;
                e3 = 2.0 * std::pow(-eps, 1.5);
                Omega = 7.0 / 6.0 * eps * eps - 28.0 / 3.0 * eps * eps * eps;
            }
            a[2] = e2;
            a[3] = e3;
            a[0] += -e2 * e2 - e3 * e3;
            a[1] = -6.0 * e2 * e3 + 48.0 * e2 * e2 * e3;
            a[4] = -3.0 * e2 * e2 + 30.0 * e2 * e3 * e3;
            a[5] = -2.0 * e2 * e3;
            a[6] = -0.5 * e3 * e3 + 3.0 * e2 * e2 * e2;
        }
    } else {
        const int m = spec.bif_index;
        if (spec.branch_id == BranchId::unique) {
            if (m == 2) {
                a[0] = 3.0 * eps;
                a[2] = -eps;
                a[3] = 0.75 * eps * eps;
                Omega = -7.0 / 3.0 * eps * eps;
            } else {
                a[static_cast<size_t>(m)] = eps;
                if (m == 6) Omega = 9.0 / 70.0 * eps * eps;
            }
        } else if (m == 4 || m == 11) {
            a[static_cast<size_t>(lo.pin_index)] = eps;
            Omega = (spec.branch_id == BranchId::i) ? 7.0 / 255.0 * eps * eps
                                                    : 7.0 / 15.0 * eps * eps;
        } else {
            // Images of the lowest double point under the half-wavelength map:
            // frequencies halve, so do the normal-form coefficients.
            if (spec.branch_id == BranchId::i) {
                a[7] = eps;
                Omega = eps * eps / 24.0;
            } else if (spec.branch_id == BranchId::ii) {
                a[5] = eps;
                Omega = 7.0 / 12.0 * eps * eps;
            } else {
                if (!(eps < 0.0))
                    throw UnknownBranch("branch iii exists for eps < 0 only");
                a[5] = eps;
                a[7] = 2.0 * std::pow(-eps, 1.5);
                Omega = 7.0 / 12.0 * eps * eps - 14.0 / 3.0 * eps * eps * eps;
            }
        }
    }
    const double omega = lo.omega_star + Omega;
    return StationaryState(std::move(a), lambda_of_omega(lo.norm, omega), omega);
}

Branch continue_branch(const BranchSpec& spec, std::span<const double> eps_schedule) {
    const BranchLayout lo = layout_of(spec);
    Branch br;
    br.spec = spec;
    br.omega_star = lo.omega_star;

    NewtonOptions opts;
    opts.normalization = lo.norm;
    for (double eps : eps_schedule) {
        opts.pins = {branch_pin(spec, eps)};
        // Seed from the normal-form predictor; past the first sample, carry
        // over the correction between the previous converged state and its
        // own predictor. Re-seeding the kernel amplitudes from the normal
        // form keeps the iterate inside the basin of the intended root near
        // double points (raw-state seeds drift toward the basin boundary of
        // the neighboring branch as the pin moves).
        StationaryState guess = branch_predictor(spec, eps);
        if (!br.samples.empty()) {
            const auto& prev = br.samples.back();
            const StationaryState pred_prev = branch_predictor(spec, prev.epsilon);
            for (int n = 0; n < spec.N; ++n)
                guess.A[static_cast<size_t>(n)] +=
                    prev.state.A[static_cast<size_t>(n)] -
                    pred_prev.A[static_cast<size_t>(n)];
            guess.omega += prev.state.omega - pred_prev.omega;
            guess.lambda = lambda_of_omega(lo.norm, guess.omega);
        }
        NewtonInfo ni;
        StationaryState state;
        try {
            state = newton_refine(guess, opts, &ni);
        } catch (const NoConvergence& e) {
            std::ostringstream os;
            os << e.what() << " (at eps = " << eps << ")";
            throw NoConvergence(os.str());
        }
        BranchSample sample;
        sample.epsilon = eps;
        sample.mu = lo.mu_index >= 0 ? state.A[static_cast<size_t>(lo.mu_index)] : 0.0;
        sample.Omega = state.omega - lo.omega_star;
        sample.residual_norm = ni.residual_norm;
        sample.state = std::move(state);
        br.samples.push_back(std::move(sample));
    }
    return br;
}

BranchFunction make_branch_fn(const Branch& branch) {
    require(!branch.samples.empty(), "make_branch_fn: empty branch");
    auto samples = std::make_shared<std::vector<BranchSample>>(branch.samples);
    const Normalization norm = branch.spec.base_mode == BaseMode::lowest
                                   ? Normalization::lambda_one
                                   : Normalization::lambda_minus_omega_one;
    return [samples, norm](double omega) {
        const BranchSample* best = &samples->front();
        for (const auto& s : *samples)
            if (std::abs(s.state.omega - omega) < std::abs(best->state.omega - omega))
                best = &s;
        StationaryState out = refine_at_omega(best->state, omega, norm);
        // Guard against sliding back onto the bare eigenmode when omega is
        // probed past the bifurcation point: the off-base amplitudes of a
        // genuine branch point shrink smoothly, they do not collapse.
        int ibase = 0;
        for (int n = 1; n < best->state.truncation(); ++n)
            if (std::abs(best->state.A[static_cast<size_t>(n)]) >
                std::abs(best->state.A[static_cast<size_t>(ibase)]))
                ibase = n;
        double d_seed = 0.0, d_out = 0.0;
        for (int n = 0; n < out.truncation(); ++n) {
            if (n == ibase) continue;
            d_seed = std::max(d_seed, std::abs(best->state.A[static_cast<size_t>(n)]));
            d_out = std::max(d_out, std::abs(out.A[static_cast<size_t>(n)]));
        }
        if (d_out < 0.25 * d_seed)
            throw DomainError("branch function: omega is outside the branch");
        return out;
    };
}

BranchFunction pair_branch_fn(PairSign sign, Normalization norm, int N) {
    return [sign, norm, N](double omega) {
        auto normalized_omega = [&](double p) {
            const StationaryState s = pair_state(p, 1.0, sign, N);
            const double denom = norm == Normalization::lambda_one
                                     ? s.lambda
                                     : s.lambda - s.omega;
            return s.omega / denom;
        };
        double lo = 1e-9, hi = kPairPMax - 1e-12;
        double flo = normalized_omega(lo) - omega;
        double fhi = normalized_omega(hi) - omega;
        if (flo * fhi > 0.0)
            throw DomainError("pair_branch_fn: omega outside the family range");
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = normalized_omega(mid) - omega;
            if ((fm <= 0.0) == (flo <= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double p = 0.5 * (lo + hi);
        const StationaryState raw = pair_state(p, 1.0, sign, N);
        const double denom =
            norm == Normalization::lambda_one ? raw.lambda : raw.lambda - raw.omega;
        return rescale(raw, 1.0 / std::sqrt(denom));
    };
}

StationaryState two_param_family_second(double eps, double mu, int N,
                                        NewtonInfo* info) {
    require(std::abs(eps) <= 0.1 && std::abs(mu) <= 0.1,
            "two_param_family_second: |eps|, |mu| <= 0.1");
    require(N >= 8, "two_param_family_second: N >= 8");
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    a[0] = eps + eps * mu;
    a[1] = 1.0 - eps * eps - mu * mu;
    a[2] = -eps + eps * mu;
    a[3] = mu;
    a[4] = -2.0 * eps * mu;
    a[5] = mu * mu;
    a[6] = -3.0 * eps * mu * mu;
    StationaryState guess(std::move(a), 1.0, 0.0);

    NewtonOptions opts;
    opts.normalization = Normalization::lambda_one;
    opts.omega_free = false;
    opts.pins = {PinConstraint{{{0, 0.5}, {2, -0.5}}, eps}, pin_index(3, mu)};
    return newton_refine(guess, opts, info);
}

StationaryState half_wavelength_map(const StationaryState& state, int out_N) {
    if (out_N < 2 * state.truncation())
        throw TruncationTooSmall("half_wavelength_map: need out_N >= 2 * truncation");
    std::vector<double> a(static_cast<size_t>(out_N), 0.0);
    for (int m = 0; m < state.truncation(); ++m)
        a[static_cast<size_t>(2 * m + 1)] = state.A[static_cast<size_t>(m)];
    return StationaryState(std::move(a), state.lambda + 0.5 * state.omega,
                           0.5 * state.omega);
}

}  // namespace confflow
