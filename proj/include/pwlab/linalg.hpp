#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pwlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Small dense kernels shared by every module. All functions are pure and
// thread-safe; matrices are tiny (dimension <= 64), so simplicity and
// reproducibility win over asymptotic speed everywhere in this file.
// ---------------------------------------------------------------------------

inline double frob(const Mat& m) { return m.norm(); }

// Matrix exponential by scaling-and-squaring with a fixed-order Taylor
// polynomial. The input is scaled until its norm is at most 1/2, where the
// order-16 truncation error is below 1e-19, then repeatedly squared.
// Throws validation_error for non-finite input or norms too large to scale.
Mat expm(const Mat& m);

struct SymEig {
    Vec values;  // ascending
    Mat vectors; // orthogonal, columns match `values`
};

// Symmetric eigendecomposition by cyclic Jacobi rotations, iterated until the
// off-diagonal norm falls below 1e-14 times the matrix norm. Deterministic:
// the sweep order and the tie-breaking in the final sort are fixed.
// `tol` bounds the accepted asymmetry of the input relative to its norm.
SymEig sym_eig(const Mat& s, double tol = 1e-10);

// One cluster of computed eigenvalues treated as a single spectral point.
struct SpectralCluster {
    std::complex<double> mean; // conjugation-symmetrized cluster mean
    int size = 0;              // number of eigenvalues in the cluster
};

struct SpectralClustering {
    std::vector<SpectralCluster> clusters; // conjugate pairs appear twice
    double radius = 0.0;                   // clustering radius actually used
};

// Cluster the computed spectrum of a real matrix. Eigenvalues within the
// clustering radius are merged (union-find); the radius is
// ||m||_F * max(100*tol, 1e-4), which absorbs the O(eps^(1/k)) splatter of
// defective eigenvalues up to Jordan blocks of moderate size. Clusters whose
// means are closer than three radii are reported as ambiguous via
// validation_error rather than silently merged or split.
SpectralClustering spectral_clusters(const Mat& m, double tol = 1e-9);

struct JCDecomposition {
    Mat s;   // semisimple part
    Mat nil; // nilpotent part; s + nil equals the input exactly
    SpectralClustering spectrum;
};

// Additive decomposition of a real square matrix into commuting semisimple
// and nilpotent parts. The semisimple part is found by Newton iteration on
// the square-free polynomial whose roots are the cluster means, starting from
// the input itself; every iterate is a polynomial in the input, so the two
// parts commute by construction. Residuals (commutation, nilpotency, moment
// matching) are checked before returning.
JCDecomposition jordan_chevalley(const Mat& m, double tol = 1e-9);

// Orthonormal basis of the (right) null space of `a`, as columns. Singular
// values at or below rel_tol times the largest are treated as zero.
Mat null_space(const Mat& a, double rel_tol = 1e-9);

// Orthonormal basis (columns) of the span of a set of matrices, each viewed
// as a vector. Removes linear dependence; used before solving linear systems
// whose unknowns are coefficients over a generating set.
std::vector<Mat> orthonormal_matrix_span(const std::vector<Mat>& gens,
                                         double rel_tol = 1e-12);

// Gram-Schmidt with respect to a (positive definite on the given subspace)
// bilinear form g. Columns of `basis` are orthonormalized in place order;
// throws invariant_error if the form degenerates on the subspace.
Mat orthonormalize_with_form(const Mat& basis, const Mat& g);

} // namespace pwlab
