#pragma once
// Minimal dense real linear algebra: row-major Matrix, LU with partial
// pivoting, and Householder least squares. Sized for the desk-scale systems
// here (N <= 512); no blocking, no BLAS.

#include <cmath>
#include <vector>

#include "confflow/types.hpp"

namespace confflow {

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const {
        return data[static_cast<size_t>(i) * cols + j];
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double max_abs() const {
        double v = 0.0;
        for (double x : data) v = std::max(v, std::abs(x));
        return v;
    }

    // max row sum of |entries|
    double norm_inf() const {
        double best = 0.0;
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols; ++j) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double symmetry_defect() const {
        double d = 0.0;
        for (int i = 0; i < rows; ++i)
            for (int j = i + 1; j < cols; ++j)
                d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
        return d;
    }
};

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v);

// Solves the square system a x = b by LU with partial pivoting. diag_ratio,
// when given, receives max|U_ii| / min|U_ii| as a cheap conditioning probe.
// Throws SingularJacobian on an exactly singular pivot.
std::vector<double> lu_solve(Matrix a, std::vector<double> b,
                             double* diag_ratio = nullptr);

// Minimizes ||a x - b||_2 by Householder QR (rows >= cols). Throws
// SingularJacobian when a diagonal of R collapses relative to the largest.
std::vector<double> qr_least_squares(Matrix a, std::vector<double> b);

}  // namespace confflow
