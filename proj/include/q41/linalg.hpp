#pragma once
// Dense linear algebra over complex balls: LU decomposition with partial
// pivoting on the midpoint magnitude, plus determinant, linear solve and
// inverse built on top of it.  Matrices are row-major vectors of vectors.
// All operations propagate ball radii, so a returned ball bounds the exact
// result whenever every pivot ball excludes zero.

#include <q41/ball.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace q41 {

using BallMatrix = std::vector<std::vector<CBall>>;

namespace detail {

// midpoint |re| + |im| as a crude pivot score
inline double pivot_score(const CBall& z) {
    double a = z.to_double_re(), b = z.to_double_im();
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return a + b;
}

// in-place LU with row swaps; returns the permutation sign, throws if a
// pivot ball contains zero (matrix not provably invertible at this radius)
inline int lu_decompose(BallMatrix& A, std::vector<std::size_t>& perm) {
    const std::size_t n = A.size();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = c;
        double score = pivot_score(A[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            double s = pivot_score(A[r][c]);
            if (s > score) {
                score = s;
                best = r;
            }
        }
        if (best != c) {
            std::swap(A[best], A[c]);
            std::swap(perm[best], perm[c]);
            sign = -sign;
        }
        if (A[c][c].contains_zero())
            throw std::domain_error("lu_decompose: pivot ball contains zero");
        CBall ip = A[c][c].inv();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (A[r][c].contains_zero() && pivot_score(A[r][c]) == 0.0) continue;
            CBall f = A[r][c] * ip;
            A[r][c] = f;
            for (std::size_t k = c + 1; k < n; ++k) A[r][k] = A[r][k] - f * A[c][k];
        }
    }
    return sign;
}

} // namespace detail

inline CBall ball_det(BallMatrix A) {
    if (A.empty()) throw std::invalid_argument("ball_det: empty matrix");
    const std::size_t n = A.size();
    std::vector<std::size_t> perm;
    mpfr_prec_t p = A[0][0].prec();
    int sign = detail::lu_decompose(A, perm);
    CBall d = CBall::from(sign >= 0 ? 1L : -1L, p);
    for (std::size_t i = 0; i < n; ++i) d = d * A[i][i];
    return d;
}

// solve A x = b
inline std::vector<CBall> ball_solve(BallMatrix A, std::vector<CBall> b) {
    const std::size_t n = A.size();
    if (b.size() != n) throw std::invalid_argument("ball_solve: size mismatch");
    std::vector<std::size_t> perm;
    detail::lu_decompose(A, perm);
    std::vector<CBall> pb;
    pb.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pb.push_back(b[perm[i]]);
    // forward substitution (unit lower triangle)
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) pb[i] = pb[i] - A[i][j] * pb[j];
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) pb[ii] = pb[ii] - A[ii][j] * pb[j];
        pb[ii] = pb[ii] / A[ii][ii];
    }
    return pb;
}

inline BallMatrix ball_inverse(const BallMatrix& A) {
    const std::size_t n = A.size();
    mpfr_prec_t p = A[0][0].prec();
    BallMatrix inv(n, std::vector<CBall>(n, CBall::from(0L, p)));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<CBall> e(n, CBall::from(0L, p));
        e[c] = CBall::from(1L, p);
        std::vector<CBall> x = ball_solve(A, std::move(e));
        for (std::size_t r = 0; r < n; ++r) inv[r][c] = x[r];
    }
    return inv;
}

// matrix helpers used by the modular-cocycle assembly
inline BallMatrix ball_matmul(const BallMatrix& A, const BallMatrix& B) {
    const std::size_t n = A.size(), m = B[0].size(), k = B.size();
    mpfr_prec_t p = A[0][0].prec();
    BallMatrix C(n, std::vector<CBall>(m, CBall::from(0L, p)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t j = 0; j < m; ++j) C[i][j] = C[i][j] + A[i][t] * B[t][j];
    return C;
}

} // namespace q41
