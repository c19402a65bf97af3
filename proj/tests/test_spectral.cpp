#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "confflow/families.hpp"
#include "confflow/solver.hpp"
#include "confflow/spectral.hpp"
#include "oracles.hpp"

using namespace confflow;

TEST_CASE("hessians at the lowest single mode are diagonal with known entries") {
    for (double omega : {0.0, 1.0 / 6.0, 0.15}) {
        auto s = single_mode(0, 1.0, omega, 16);
        s.lambda = 1.0;  // scaling normalization
        auto h = assemble_hessians(s);
        CHECK(h.L_plus.symmetry_defect() < 1e-13);
        CHECK(h.L_minus.symmetry_defect() < 1e-13);
        CHECK(h.L_plus(0, 0) == doctest::Approx(2.0));
        CHECK(h.L_minus(0, 0) == doctest::Approx(0.0));
        for (int n = 1; n < 16; ++n) {
            const double expect = n * (n + 1) * omega - n + 1;
            CHECK(h.L_plus(n, n) == doctest::Approx(expect).epsilon(1e-13));
            CHECK(h.L_minus(n, n) == doctest::Approx(expect).epsilon(1e-13));
            for (int m = 0; m < n; ++m) {
                CHECK(h.L_plus(n, m) == 0.0);
                CHECK(h.L_minus(n, m) == 0.0);
            }
        }
    }
}

TEST_CASE("hessians at the second single mode carry the (0,2) block") {
    const double omega = 0.1;
    auto s = single_mode(1, 1.0, omega, 12);
    auto h = assemble_hessians(s);
    CHECK(h.L_plus(0, 0) == doctest::Approx(1.0 - omega));
    CHECK(h.L_plus(2, 2) == doctest::Approx(1.0 + 3.0 * omega));
    CHECK(h.L_plus(0, 2) == doctest::Approx(1.0));
    CHECK(h.L_plus(2, 0) == doctest::Approx(1.0));
    CHECK(h.L_plus(1, 1) == doctest::Approx(4.0));
    CHECK(h.L_minus(1, 1) == doctest::Approx(0.0));
    CHECK(h.L_minus(0, 2) == doctest::Approx(-1.0));
    for (int n = 3; n < 12; ++n) {
        const double expect = (static_cast<double>(n) * n - 1.0) * omega - n + 3;
        CHECK(h.L_plus(n, n) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("assembled hessians match the matrix-free application") {
    auto s = pair_state(0.15, 1.0, PairSign::plus, 20);
    auto h = assemble_hessians(s);
    for (unsigned seed : {3u, 4u}) {
        auto a = oracle::random_real(20, seed);
        auto via_plus = mat_vec(h.L_plus, a);
        auto via_minus = mat_vec(h.L_minus, a);
        auto direct_plus = hessian_apply(s, a, +1);
        auto direct_minus = hessian_apply(s, a, -1);
        for (int n = 0; n < 20; ++n) {
            CHECK(via_plus[static_cast<size_t>(n)] ==
                  doctest::Approx(direct_plus[static_cast<size_t>(n)]).epsilon(1e-12));
            CHECK(via_minus[static_cast<size_t>(n)] ==
                  doctest::Approx(direct_minus[static_cast<size_t>(n)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("sym_eigs basics") {
    Matrix d(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    d(2, 2) = 3.0;
    auto r = sym_eigs(d);
    CHECK(r.values[0] == doctest::Approx(1.0));
    CHECK(r.values[1] == doctest::Approx(2.0));
    CHECK(r.values[2] == doctest::Approx(3.0));

    Matrix f(2, 2);
    f(0, 1) = f(1, 0) = 1.0;
    auto r2 = sym_eigs(f);
    CHECK(r2.values[0] == doctest::Approx(-1.0));
    CHECK(r2.values[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eigs matches the characteristic-polynomial oracle at 8x8") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
    auto got = sym_eigs(m);
    auto expect = oracle::charpoly_eigs(m);
    REQUIRE(expect.size() == 8);
    const double scale = m.norm_inf();
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(got.values[static_cast<size_t>(i)] -
                       expect[static_cast<size_t>(i)]) < 1e-10 * scale);
}

TEST_CASE("sym_eigs recovers a planted spectrum with orthonormal vectors") {
    const int n = 24;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> planted(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) planted[static_cast<size_t>(i)] = -3.0 + 0.37 * i;

    // Random orthogonal Q via Gram-Schmidt of a random matrix.
    Matrix q(n, n);
    for (auto& v : q.data) v = u(rng);
    for (int c = 0; c < n; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            double dot = 0.0;
            for (int r = 0; r < n; ++r) dot += q(r, c) * q(r, prev);
            for (int r = 0; r < n; ++r) q(r, c) -= dot * q(r, prev);
        }
        double norm = 0.0;
        for (int r = 0; r < n; ++r) norm += q(r, c) * q(r, c);
        norm = std::sqrt(norm);
        for (int r = 0; r < n; ++r) q(r, c) /= norm;
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += q(i, k) * planted[static_cast<size_t>(k)] * q(j, k);
            m(i, j) = acc;
        }

    auto r = sym_eigs(m, true);
    const double scale = m.norm_inf();
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(r.values[static_cast<size_t>(i)] -
                       planted[static_cast<size_t>(i)]) < 1e-11 * scale);
    // residual ||Mv - lambda v|| <= 1e-10 ||M||
    for (int c = 0; c < n; ++c) {
        std::vector<double> v(static_cast<size_t>(n));
        for (int rr = 0; rr < n; ++rr) v[static_cast<size_t>(rr)] = r.vectors(rr, c);
        auto mv = mat_vec(m, v);
        double res = 0.0;
        for (int rr = 0; rr < n; ++rr)
            res = std::max(res, std::abs(mv[static_cast<size_t>(rr)] -
                                         r.values[static_cast<size_t>(c)] *
                                             v[static_cast<size_t>(rr)]));
        CHECK(res < 1e-10 * scale);
    }
}

TEST_CASE("sym_eigs at the N = 512 size bound (Toeplitz closed form)") {
    // tridiagonal Toeplitz: eigenvalues a + 2b cos(k pi / (n+1))
    const int n = 512;
    const double a = 0.7, b = -1.3;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = a;
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = b;
    }
    auto r = sym_eigs(m);
    std::vector<double> expect;
    for (int k = 1; k <= n; ++k)
        expect.push_back(a + 2.0 * b * std::cos(k * M_PI / (n + 1.0)));
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(r.values[static_cast<size_t>(i)] -
                       expect[static_cast<size_t>(i)]) < 1e-12 * m.norm_inf());
}

TEST_CASE("inertia counting") {
    Inertia i = inertia({-2.0, -1e-12, 0.0, 3e-9, 0.5}, 1e-8);
    CHECK(i.n == 1);
    CHECK(i.z == 3);
    CHECK(i.p == 1);
}

TEST_CASE("single-mode inertias across the bifurcation catalog") {
    // omega_1 = 0: sigma(L+) = {2, 0, -1, -2, ...}
    {
        auto s = single_mode(0, 1.0, 0.0, 24);
        auto h = assemble_hessians(s);
        auto ep = sym_eigs(h.L_plus);
        CHECK(ep.values.back() == doctest::Approx(2.0));
        auto ip = inertia(ep.values, 1e-10);
        CHECK(ip.p == 1);
        CHECK(ip.z == 1);
        CHECK(ip.n == 22);
        auto im = inertia(sym_eigs(h.L_minus).values, 1e-10);
        CHECK(im.p == 0);
        CHECK(im.z == 2);
    }
    // omega_* = 1/6: L(omega) diagonal entries (n-2)(n-3)/6, double zero
    {
        auto s = single_mode(0, 1.0, 1.0 / 6.0, 24);
        auto h = assemble_hessians(s);
        for (int n = 1; n < 24; ++n)
            CHECK(h.L_plus(n, n) ==
                  doctest::Approx((n - 2.0) * (n - 3.0) / 6.0).epsilon(1e-13));
        auto ip = inertia(sym_eigs(h.L_plus).values, 1e-10);
        CHECK(ip.z == 2);
        CHECK(ip.n == 0);
        auto im = inertia(sym_eigs(h.L_minus).values, 1e-10);
        CHECK(im.z == 3);  // the extra zero at n = 0
        CHECK(im.n == 0);
    }
    // omega_m, m >= 4: L+ has m-2 negatives on 2 <= n <= m-1
    for (int m : {4, 6}) {
        const double omega_m = static_cast<double>(m - 1) / (m * (m + 1));
        auto s = single_mode(0, 1.0, omega_m, 24);
        auto h = assemble_hessians(s);
        auto ip = inertia(sym_eigs(h.L_plus).values, 1e-10);
        CHECK(ip.n == m - 2);
        CHECK(ip.z == 1);
    }
}

TEST_CASE("gauge kernel of L_minus at converged states") {
    for (const StationaryState& s :
         {ground_state(0.3, 1.0 - 0.09, 64), pair_state(0.2, 1.0, PairSign::plus, 64),
          twisted_state(0.25, 1.0 - 0.0625, 64)}) {
        auto h = assemble_hessians(s);
        const double scale = h.L_minus.norm_inf();
        std::vector<double> ga = s.A;                     // global phase direction
        std::vector<double> gl(static_cast<size_t>(s.truncation()));  // local phase
        double na = 0.0, nl = 0.0;
        for (int n = 0; n < s.truncation(); ++n) {
            gl[static_cast<size_t>(n)] = n * s.A[static_cast<size_t>(n)];
            na += ga[static_cast<size_t>(n)] * ga[static_cast<size_t>(n)];
            nl += gl[static_cast<size_t>(n)] * gl[static_cast<size_t>(n)];
        }
        auto la = mat_vec(h.L_minus, ga);
        auto ll = mat_vec(h.L_minus, gl);
        double ra = 0.0, rl = 0.0;
        for (double v : la) ra = std::max(ra, std::abs(v));
        for (double v : ll) rl = std::max(rl, std::abs(v));
        CHECK(ra <= 1e-9 * scale * std::sqrt(na));
        CHECK(rl <= 1e-9 * scale * std::sqrt(nl));
    }
}

TEST_CASE("quadratic form of K via finite differences with cubic remainder") {
    auto s = pair_state(0.12, 1.0, PairSign::plus, 32);
    auto h = assemble_hessians(s);
    auto a = oracle::random_real(32, 21, 0.3);
    auto b = oracle::random_real(32, 22, 0.3);
    double qa = 0.0, qb = 0.0;
    auto la = mat_vec(h.L_plus, a);
    auto lb = mat_vec(h.L_minus, b);
    for (int n = 0; n < 32; ++n) {
        qa += a[static_cast<size_t>(n)] * la[static_cast<size_t>(n)];
        qb += b[static_cast<size_t>(n)] * lb[static_cast<size_t>(n)];
    }
    std::vector<cplx> base(s.A.begin(), s.A.end());
    const double k0 = oracle::action_K(base, s.lambda, s.omega);
    auto remainder = [&](double t) {
        std::vector<cplx> pert = base;
        for (int n = 0; n < 32; ++n)
            pert[static_cast<size_t>(n)] +=
                t * cplx(a[static_cast<size_t>(n)], b[static_cast<size_t>(n)]);
        const double dk = oracle::action_K(pert, s.lambda, s.omega) - k0;
        return std::abs(dk - t * t * (qa + qb));
    };
    const double r3 = remainder(1e-3);
    const double r4 = remainder(1e-4);
    CHECK(r3 / (qa + qb + 1.0) < 1e-6);
    const double ratio = r3 / std::max(r4, 1e-300);
    CHECK(ratio > 300.0);   // cubic decay: ~1000x per decade
    CHECK(ratio < 3000.0);
}

TEST_CASE("d-matrix on the exact pair branch") {
    auto fn = pair_branch_fn(PairSign::plus, Normalization::lambda_one, 64);
    const StationaryState probe = fn(0.17);
    auto d = d_matrix(fn, probe.omega, 1e-3, Normalization::lambda_one);
    CHECK(std::abs(d[0][0] - 6.0 / 7.0) < 1e-2);
    CHECK(std::abs(d[0][1] - 6.0 / 7.0) < 1e-2);
    CHECK(std::abs(d[1][0] - 6.0 / 7.0) < 1e-2);
    CHECK(std::abs(d[1][1] + 36.0 / 7.0) < 1e-2);
}

TEST_CASE("d-matrix along the numeric double-point branch (i)") {
    std::vector<double> sched;
    for (int i = 0; i < 5; ++i) sched.push_back(0.01 + 0.01 * i);
    Branch br = continue_branch({BaseMode::lowest, 2, BranchId::i, 64}, sched);
    auto fn = make_branch_fn(br);
    auto d = d_matrix(fn, br.samples.back().state.omega, 1e-3,
                      Normalization::lambda_one);
    CHECK(std::abs(d[0][0] + 3.0) <= 0.3);
    CHECK(std::abs(d[0][1] - 24.0) <= 2.4);
    CHECK(std::abs(d[1][0] - 24.0) <= 2.4);
    CHECK(std::abs(d[1][1] + 144.0) <= 14.4);
}

TEST_CASE("d-matrix along the second-mode omega_6 branch") {
    // Leading entries: D11 = O(eps^2), off-diagonals 70/3, and
    // D22 -> 2 - (38/35)(2870/9 - 70/3) = -2870/9 + 70/3 from the branch
    // expansions Q0 = 2 + 3 eps^2, E0 = 4 + 41 eps^2, omega = 3/35 + (9/70) eps^2.
    std::vector<double> sched;
    for (int i = 0; i < 5; ++i) sched.push_back(0.005 + 0.00375 * i);
    Branch br = continue_branch({BaseMode::second, 6, BranchId::unique, 64}, sched);
    auto fn = make_branch_fn(br);
    auto d = d_matrix(fn, br.samples.back().state.omega, 1e-3,
                      Normalization::lambda_minus_omega_one);
    const double d22 = -2870.0 / 9.0 + 70.0 / 3.0;
    CHECK(std::abs(d[0][0]) <= 0.1);
    CHECK(std::abs(d[0][1] - 70.0 / 3.0) <= 0.1 * 70.0 / 3.0);
    CHECK(std::abs(d[1][0] - 70.0 / 3.0) <= 0.1 * 70.0 / 3.0);
    CHECK(std::abs(d[1][1] - d22) <= 0.1 * std::abs(d22));
    CHECK(d[0][0] * d[1][1] - d[0][1] * d[1][0] < 0.0);  // one +, one -
}

TEST_CASE("spectral report on the exact pair branch (figure-1 content)") {
    auto fn = pair_branch_fn(PairSign::plus, Normalization::lambda_one, 64);
    SpectralOptions opts;
    opts.normalization = Normalization::lambda_one;
    const StationaryState st = fn(0.17);
    auto rep = spectral_report(st, fn, opts);
    CHECK(rep.n_plus == 1);
    CHECK(rep.z_plus == 0);
    CHECK(rep.n_minus == 0);
    CHECK(rep.z_minus == 2);
    CHECK(rep.p_D == 1);
    CHECK(rep.z_D == 0);
    CHECK(rep.n_constrained == 0);
    CHECK(rep.classification == Classification::constrained_minimizer);
}
