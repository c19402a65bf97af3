#include "confflow/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace confflow {

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v) {
    std::vector<double> out(static_cast<size_t>(m.rows), 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        const double* row = m.data.data() + static_cast<size_t>(i) * m.cols;
        for (int j = 0; j < m.cols; ++j) acc += row[j] * v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> lu_solve(Matrix a, std::vector<double> b, double* diag_ratio) {
    const int n = a.rows;
    double dmax = 0.0, dmin = 0.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                piv = r;
            }
        if (best == 0.0) throw SingularJacobian("lu_solve: zero pivot");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
        }
        dmax = std::max(dmax, best);
        dmin = (col == 0) ? best : std::min(dmin, best);
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = f;
            for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    if (diag_ratio) *diag_ratio = (dmin > 0.0) ? dmax / dmin : INFINITY;
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = acc / a(i, i);
    }
    return x;
}

std::vector<double> qr_least_squares(Matrix a, std::vector<double> b) {
    const int m = a.rows, n = a.cols;
    require(m >= n, "qr_least_squares: rows >= cols");
    double rmax = 0.0;
    for (int col = 0; col < n; ++col) {
        double norm2 = 0.0;
        for (int r = col; r < m; ++r) norm2 += a(r, col) * a(r, col);
        const double alpha = (a(col, col) >= 0.0) ? -std::sqrt(norm2) : std::sqrt(norm2);
        if (alpha == 0.0) throw SingularJacobian("qr_least_squares: rank deficient");
        // Householder vector v = x - alpha e1, applied as I - 2 vv^T/|v|^2.
        std::vector<double> v(static_cast<size_t>(m - col), 0.0);
        v[0] = a(col, col) - alpha;
        for (int r = col + 1; r < m; ++r) v[static_cast<size_t>(r - col)] = a(r, col);
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 == 0.0) throw SingularJacobian("qr_least_squares: rank deficient");
        for (int j = col; j < n; ++j) {
            double dot = 0.0;
            for (int r = col; r < m; ++r)
                dot += v[static_cast<size_t>(r - col)] * a(r, j);
            const double f = 2.0 * dot / vnorm2;
            for (int r = col; r < m; ++r)
                a(r, j) -= f * v[static_cast<size_t>(r - col)];
        }
        double dot = 0.0;
        for (int r = col; r < m; ++r)
            dot += v[static_cast<size_t>(r - col)] * b[static_cast<size_t>(r)];
        const double f = 2.0 * dot / vnorm2;
        for (int r = col; r < m; ++r)
            b[static_cast<size_t>(r)] -= f * v[static_cast<size_t>(r - col)];
        rmax = std::max(rmax, std::abs(a(col, col)));
        if (std::abs(a(col, col)) < 1e-14 * std::max(1.0, rmax))
            throw SingularJacobian("qr_least_squares: near-singular R");
    }
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = acc / a(i, i);
    }
    return x;
}

}  // namespace confflow
