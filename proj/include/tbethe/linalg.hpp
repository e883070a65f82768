#pragma once

// Dense complex linear algebra for small systems, generic over the scalar so
// the multiprecision paths can reuse it. Eigen handles the double-precision
// heavy lifting elsewhere; these routines top out around 30x30.

#include <cmath>
#include <vector>

#include "tbethe/errors.hpp"
#include "tbethe/precision.hpp"

namespace tbethe {

template <class C> using Mat = std::vector<std::vector<C>>;

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Returns false if a pivot falls below pivot_tol * max_initial_pivot.
template <class C>
bool lu_solve(Mat<C> a, std::vector<C> b, std::vector<C>& x, double pivot_tol = 1e-13) {
    const int n = int(b.size());
    double max_pivot = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) max_pivot = std::max(max_pivot, abs_as_double(a[i][j]));
    if (max_pivot == 0.0) return false;

    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = abs_as_double(a[col][col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = abs_as_double(a[r][col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < pivot_tol * max_pivot) return false;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
        }
        const C inv = C(1) / a[col][col];
        for (int r = col + 1; r < n; ++r) {
            const C f = a[r][col] * inv;
            if (f == C(0)) continue;
            for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, C(0));
    for (int r = n - 1; r >= 0; --r) {
        C acc = b[r];
        for (int j = r + 1; j < n; ++j) acc -= a[r][j] * x[j];
        x[r] = acc / a[r][r];
    }
    return true;
}

/// Least-squares solve of an m x n system (m >= n) by Householder QR.
/// Returns the residual norm of A x - b.
template <class C>
double lsq_solve(Mat<C> a, std::vector<C> b, std::vector<C>& x) {
    using std::sqrt;
    const int m = int(a.size());
    const int n = m ? int(a[0].size()) : 0;
    if (m < n) throw SpecError("lsq_solve: underdetermined system");

    auto col_norm = [&](int col, int from) {
        real_of<C> acc(0);
        for (int r = from; r < m; ++r) acc += norm(a[r][col]);
        return sqrt(acc);
    };

    for (int col = 0; col < n; ++col) {
        // Householder vector for column col, rows col..m-1
        real_of<C> alpha = col_norm(col, col);
        if (alpha == real_of<C>(0)) continue;
        C pivot = a[col][col];
        C phase = abs_as_double(pivot) > 0 ? pivot / C(abs(pivot)) : C(1);
        C v0 = pivot + phase * C(alpha);
        std::vector<C> v(m - col);
        v[0] = v0;
        for (int r = col + 1; r < m; ++r) v[r - col] = a[r][col];
        real_of<C> vnorm2(0);
        for (const auto& z : v) vnorm2 += norm(z);
        if (vnorm2 == real_of<C>(0)) continue;
        // apply I - 2 v v^H / |v|^2 to the remaining columns and to b
        for (int j = col; j < n; ++j) {
            C dot(0);
            for (int r = col; r < m; ++r) dot += conj(v[r - col]) * a[r][j];
            const C f = C(2) * dot / C(vnorm2);
            for (int r = col; r < m; ++r) a[r][j] -= f * v[r - col];
        }
        {
            C dot(0);
            for (int r = col; r < m; ++r) dot += conj(v[r - col]) * b[r];
            const C f = C(2) * dot / C(vnorm2);
            for (int r = col; r < m; ++r) b[r] -= f * v[r - col];
        }
    }

    x.assign(n, C(0));
    for (int r = n - 1; r >= 0; --r) {
        C acc = b[r];
        for (int j = r + 1; j < n; ++j) acc -= a[r][j] * x[j];
        if (a[r][r] == C(0)) throw NumericError("lsq_solve: rank-deficient system");
        x[r] = acc / a[r][r];
    }
    double resid = 0.0;
    for (int r = n; r < m; ++r) resid += abs_as_double(b[r]) * abs_as_double(b[r]);
    return std::sqrt(resid);
}

} // namespace tbethe
