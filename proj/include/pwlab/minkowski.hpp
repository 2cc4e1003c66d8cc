#pragma once

#include "pwlab/linalg.hpp"

namespace pwlab {

// ---------------------------------------------------------------------------
// Conventions for the Minkowski space V of dimension n+2, carried by every
// module. The basis is fixed globally in the order (p, e_1..e_n, q) with
// pairings (p,q) = (q,p) = 1, (e_i,e_j) = delta_ij and p, q null. These are
// coordinates 0, 1..n, n+1 of every (n+2)-sized object in the library.
// ---------------------------------------------------------------------------

struct MinkowskiFrame {
    int n;    // dimension of the Euclidean middle block
    Mat gram; // (n+2)x(n+2) pairing matrix in the fixed basis order

    explicit MinkowskiFrame(int n_dim);
    int dim() const { return n + 2; }
};

// Pairing matrix of the null-pair basis: antidiagonal 1 between the first and
// last coordinates, identity in the middle. It is symmetric, involutive
// (gram^2 = id) and has exactly one negative eigenvalue.
Mat witt_gram(int n);

// The skew endomorphism induced by a pair of vectors:
//   M z = (x, z) y - (y, z) x,
// i.e. M = y (gram x)^T - x (gram y)^T. Lies in the pairing's orthogonal
// algebra: gram M + M^T gram = 0.
Mat bivector_matrix(const Vec& x, const Vec& y, const MinkowskiFrame& frame);

// Residual of membership in the orthogonal algebra of `gram`:
// ||gram*m + m^T*gram||_F.
double so_residual(const Mat& m, const Mat& gram);

// Residual of membership in the similarity algebra (scalar + orthogonal):
// the orthogonal-algebra residual of m minus its trace-derived scalar part.
double co_residual(const Mat& m, const Mat& gram);

// An orthonormal-basis change for the null-pair gram matrix: columns
// (t, f_1..f_{n+1}) with t^T gram t = -1, f_i^T gram f_j = delta_ij and
// mixed pairings zero, so conv^T * gram * conv = diag(-1, 1, ..., 1).
Mat witt_to_orthonormal(int n);

} // namespace pwlab
