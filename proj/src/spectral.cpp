#include "confflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confflow/core.hpp"
#include "confflow/kernels.hpp"

namespace confflow {

HessianPair assemble_hessians(const StationaryState& state) {
    const int n = state.truncation();
    Matrix ma(n, n), mb(n, n);
    kernels::contraction_matrices(state.A, ma.data.data(), mb.data.data());
    HessianPair h{Matrix(n, n), Matrix(n, n)};
    for (int i = 0; i < n; ++i) {
        const double freq = (i + 1) * (state.lambda - i * state.omega);
        for (int j = 0; j < n; ++j) {
            h.L_plus(i, j) = ma(i, j) + mb(i, j);
            h.L_minus(i, j) = ma(i, j) - mb(i, j);
        }
        h.L_plus(i, i) -= freq;
        h.L_minus(i, i) -= freq;
    }
    return h;
}

std::vector<double> hessian_apply(const StationaryState& state,
                                  const std::vector<double>& a, int sign) {
    const int n = state.truncation();
    const double s = sign >= 0 ? 1.0 : -1.0;
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int row = 0; row < n; ++row) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k <= row + j; ++k) {
                const int l = row + j - k;
                if (k >= n || l >= n) continue;
                const double S = interaction_coeff(row, j, k, l);
                acc += S * (2.0 * state.A[static_cast<size_t>(j)] *
                                state.A[static_cast<size_t>(l)] * a[static_cast<size_t>(k)] +
                            s * state.A[static_cast<size_t>(k)] *
                                state.A[static_cast<size_t>(l)] * a[static_cast<size_t>(j)]);
            }
        }
        acc -= (row + 1) * (state.lambda - row * state.omega) * a[static_cast<size_t>(row)];
        out[static_cast<size_t>(row)] = acc;
    }
    return out;
}

namespace {

double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

double pythag(double a, double b) {
    const double absa = std::abs(a), absb = std::abs(b);
    if (absa > absb) {
        const double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    if (absb == 0.0) return 0.0;
    const double r = absa / absb;
    return absb * std::sqrt(1.0 + r * r);
}

// Householder reduction to tridiagonal form; a is overwritten with the
// accumulated transform when vectors are requested.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                    bool want_vectors) {
    const int n = a.rows;
    d.assign(static_cast<size_t>(n), 0.0);
    e.assign(static_cast<size_t>(n), 0.0);
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[static_cast<size_t>(i)] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<size_t>(i)] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[static_cast<size_t>(j)] = g / h;
                    f += e[static_cast<size_t>(j)] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    g = e[static_cast<size_t>(j)] - hh * f;
                    e[static_cast<size_t>(j)] = g;
                    for (int k = 0; k <= j; ++k)
                        a(j, k) -= f * e[static_cast<size_t>(k)] + g * a(i, k);
                }
            }
        } else {
            e[static_cast<size_t>(i)] = a(i, l);
        }
        d[static_cast<size_t>(i)] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (want_vectors && d[static_cast<size_t>(i)] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[static_cast<size_t>(i)] = a(i, i);
        if (want_vectors) {
            a(i, i) = 1.0;
            for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL sweeps on the tridiagonal form; z (when non-null)
// accumulates the rotations into eigenvectors.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    for (int i = 1; i < n; ++i) e[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(i)];
    e[static_cast<size_t>(n - 1)] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[static_cast<size_t>(m)]) +
                                  std::abs(d[static_cast<size_t>(m + 1)]);
                if (std::abs(e[static_cast<size_t>(m)]) + dd == dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw EigNoConvergence("sym_eigs: QL iteration cap reached");
                double g = (d[static_cast<size_t>(l + 1)] - d[static_cast<size_t>(l)]) /
                           (2.0 * e[static_cast<size_t>(l)]);
                double r = pythag(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    e[static_cast<size_t>(l)] / (g + sign_like(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[static_cast<size_t>(i)];
                    const double b = c * e[static_cast<size_t>(i)];
                    r = pythag(f, g);
                    e[static_cast<size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i + 1)] -= p;
                        e[static_cast<size_t>(m)] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i + 1)] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i + 1)] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[static_cast<size_t>(l)] -= p;
                e[static_cast<size_t>(l)] = g;
                e[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

EigenResult sym_eigs(const Matrix& m, bool want_vectors) {
    require(m.rows == m.cols, "sym_eigs: square matrix required");
    EigenResult res;
    const int n = m.rows;
    if (n == 0) return res;
    Matrix a = m;
    std::vector<double> d, e;
    tridiagonalize(a, d, e, want_vectors);
    ql_implicit(d, e, want_vectors ? &a : nullptr);

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return d[static_cast<size_t>(x)] < d[static_cast<size_t>(y)];
    });
    res.values.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) res.values[static_cast<size_t>(i)] = d[static_cast<size_t>(order[static_cast<size_t>(i)])];
    if (want_vectors) {
        res.vectors = Matrix(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                res.vectors(i, j) = a(i, order[static_cast<size_t>(j)]);
    }
    return res;
}

Inertia inertia(const std::vector<double>& eigs, double zero_tol) {
    Inertia c;
    for (double v : eigs) {
        if (std::abs(v) < zero_tol)
            ++c.z;
        else if (v < 0.0)
            ++c.n;
        else
            ++c.p;
    }
    return c;
}

namespace {

double q_of(const StationaryState& s) {
    double acc = 0.0;
    for (int n = 0; n < s.truncation(); ++n)
        acc += (n + 1) * s.A[static_cast<size_t>(n)] * s.A[static_cast<size_t>(n)];
    return acc;
}

double e_of(const StationaryState& s) {
    double acc = 0.0;
    for (int n = 0; n < s.truncation(); ++n)
        acc += static_cast<double>(n + 1) * (n + 1) * s.A[static_cast<size_t>(n)] *
               s.A[static_cast<size_t>(n)];
    return acc;
}

}  // namespace

namespace {

std::array<std::array<double, 2>, 2> d_matrix_once(const BranchFunction& branch_fn,
                                                   double omega, double h,
                                                   Normalization norm);

}  // namespace

std::array<std::array<double, 2>, 2> d_matrix(const BranchFunction& branch_fn,
                                              double omega, double h,
                                              Normalization norm) {
    // Branches live on one side of their bifurcation point, where the
    // omega-window can be narrower than any fixed step; shrink until the
    // branch function accepts both probe points.
    for (int k = 0;; ++k) {
        try {
            return d_matrix_once(branch_fn, omega, h, norm);
        } catch (const DomainError&) {
            if (k == 8) throw;
            h /= 10.0;
        }
    }
}

namespace {

std::array<std::array<double, 2>, 2> d_matrix_once(const BranchFunction& branch_fn,
                                                   double omega, double h,
                                                   Normalization norm) {
    const StationaryState mid = branch_fn(omega);
    const StationaryState lo = branch_fn(omega - h);
    const StationaryState hi = branch_fn(omega + h);
    const double q0 = q_of(mid), e0 = e_of(mid);
    const double qp = (q_of(hi) - q_of(lo)) / (2.0 * h);
    const double ep = (e_of(hi) - e_of(lo)) / (2.0 * h);

    std::array<std::array<double, 2>, 2> d{};
    if (norm == Normalization::lambda_one) {
        d[0][0] = q0 - omega * qp;
        d[0][1] = qp;
        d[1][0] = (q0 - e0) - omega * (qp - ep);
        d[1][1] = qp - ep;
    } else {
        d[0][0] = q0 - omega * qp;
        d[0][1] = -q0 + (1.0 + omega) * qp;
        d[1][0] = (q0 - e0) - omega * (qp - ep);
        d[1][1] = -(q0 - e0) + (1.0 + omega) * (qp - ep);
    }
    return d;
}

}  // namespace

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::constrained_minimizer: return "constrained-minimizer";
        case Classification::constrained_maximizer: return "constrained-maximizer";
        case Classification::saddle: return "saddle";
        case Classification::indeterminate: return "indeterminate";
    }
    return "?";
}

SpectralReport spectral_report(const StationaryState& state,
                               const BranchFunction& branch_fn,
                               const SpectralOptions& opts) {
    SpectralReport rep;
    HessianPair h = assemble_hessians(state);
    EigenResult ep = sym_eigs(h.L_plus);
    EigenResult em = sym_eigs(h.L_minus);
    rep.eigs_plus = std::move(ep.values);
    rep.eigs_minus = std::move(em.values);
    rep.zero_tol_plus = opts.zero_tol_rel * std::max(1.0, h.L_plus.norm_inf());
    rep.zero_tol_minus = opts.zero_tol_rel * std::max(1.0, h.L_minus.norm_inf());
    const Inertia ip = inertia(rep.eigs_plus, rep.zero_tol_plus);
    const Inertia im = inertia(rep.eigs_minus, rep.zero_tol_minus);
    rep.n_plus = ip.n;
    rep.z_plus = ip.z;
    rep.p_plus = ip.p;
    rep.n_minus = im.n;
    rep.z_minus = im.z;
    rep.p_minus = im.p;

    rep.D = d_matrix(branch_fn, state.omega, opts.d_h, opts.normalization);
    const double tr = rep.D[0][0] + rep.D[1][1];
    const double det = rep.D[0][0] * rep.D[1][1] - rep.D[0][1] * rep.D[1][0];
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double dmax = std::max({std::abs(rep.D[0][0]), std::abs(rep.D[0][1]),
                                  std::abs(rep.D[1][0]), std::abs(rep.D[1][1])});
    const double dtol = 1e-8 * std::max(1.0, dmax);
    const double dg1 = 0.5 * (tr - disc), dg2 = 0.5 * (tr + disc);
    const Inertia id = inertia({dg1, dg2}, dtol);
    rep.p_D = id.p;
    rep.z_D = id.z;

    if (rep.z_plus > 0) {
        rep.classification = Classification::indeterminate;
        rep.n_constrained = -1;
        return rep;
    }
    rep.n_constrained = rep.n_plus - rep.p_D - rep.z_D;
    const int p_constrained = rep.p_plus - id.n - rep.z_D;
    if (rep.n_constrained == 0 && rep.n_minus == 0)
        rep.classification = Classification::constrained_minimizer;
    else if (p_constrained == 0 && rep.p_minus == 0)
        rep.classification = Classification::constrained_maximizer;
    else
        rep.classification = Classification::saddle;
    return rep;
}

}  // namespace confflow
