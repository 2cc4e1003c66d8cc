#pragma once

#include "pwlab/linalg.hpp"
#include "pwlab/minkowski.hpp"
#include "pwlab/planewave.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwlab {

// Structure constants of a finite-dimensional real Lie algebra over a named
// basis: [x_i, x_j] = sum_k c[i][j][k] x_k.  Antisymmetry is maintained
// exactly by construction; the Jacobi residual is attached by finalize().
struct LieAlgebraData {
    std::vector<std::string> labels;
    int dim = 0;
    std::vector<double> c;
    double jacobi = 0.0;

    explicit LieAlgebraData(std::vector<std::string> names = {});

    double at(int i, int j, int k) const {
        return c[static_cast<std::size_t>((i * dim + j) * dim + k)];
    }
    // Sets c[i][j][k] and c[j][i][k] = -value together.
    void set(int i, int j, int k, double value);
    // Bilinear extension of the bracket to coefficient vectors.
    Vec bracket(const Vec& x, const Vec& y) const;
    // Recomputes and stores the Jacobi residual.
    void finalize();
};

// Max over basis triples of the Euclidean norm of the Jacobi cyclic sum.
double jacobi_residual(const LieAlgebraData& alg);

// Structure constants after the invertible change of basis y_i = sum_j S_ji x_j
// (columns of S are the new generators in old coordinates).
LieAlgebraData change_basis(const LieAlgebraData& alg, const Mat& s);

// Frobenius-orthonormal basis of the skew matrices commuting with both B
// (symmetric) and F (skew).
std::vector<Mat> centralizer_k(const Mat& b, const Mat& f);

// Symmetry algebra of a spec on the basis
//   (q, k_1..k_m, pwedge_e_1..pwedge_e_n, p, e_1..e_n)
// where k_* is the centralizer basis; lambda = 0 for kind a, 1 for kind b.
// Bracket table:
//   [q,p] = lambda p          [q, pwedge_e_i] = pwedge((lambda+F)e_i) - e_i
//   [q, e_i] = pwedge(B e_i) + F e_i          [q, k] = 0
//   [k, e_i] = K e_i          [k, pwedge_e_i] = pwedge(K e_i)
//   [k_a, k_b] = matrix commutator, expanded in the k-basis
//   [pwedge_e_i, e_j] = -delta_ij p; all remaining brackets vanish.
LieAlgebraData build_isom(const PlaneWaveSpec& spec);

// One-dimensional extension of build_isom by the grading element D
// (labelled first) with [D,p] = 2p, [D,q] = 0, [D,e_i] = e_i,
// [D,pwedge_e_i] = pwedge_e_i, [D,k] = 0.  Rejects conformally flat specs:
// for those the extension does not act effectively and is refused.
LieAlgebraData build_conf(const PlaneWaveSpec& spec);

// Derivation-style presentation of a symmetry algebra on (q, pwedge_E, p, E):
//   [q,p] = lambda p            [q, pwedge_X] = pwedge(K X) - X
//   [q,X] = pwedge(T X) + L X   [pwedge_Y, X] = -(Y,X) p
//   [X,Y] = omega(X,Y) p   with omega(X,Y) = (Omega X, Y).
// K and T are optional raw inputs; when absent they default to the values
// the Jacobi identity forces: K = lambda id - Omega - L^T and T = 0 (the
// latter requires Omega L + L^T Omega = lambda Omega).
struct DerivationData {
    double lambda = 0.0;
    Mat omega; // n x n skew
    Mat L;     // n x n
    Mat c0;    // n x n skew; may be 0 x 0 (treated as zero)
    std::optional<Mat> K;
    std::optional<Mat> T;

    int n() const { return static_cast<int>(L.rows()); }
};

// Shape/symmetry checks plus the Jacobi-forced bracket constraints; on
// violation the error names the failing Jacobi component.  c0 (when present)
// must be skew and commute with L and Omega.
void validate_derivation(const DerivationData& data, double tol = 1e-10);

// The algebra of the table above on basis (q, pwedge_e_1.., p, e_1..e_n),
// with K/T defaulted as documented.  Constraints are validated first.
LieAlgebraData derivation_algebra(const DerivationData& data, double tol = 1e-10);

struct NormalizedFrame {
    double lambda = 0.0; // 0 or 1
    double scale = 1.0;  // null-pair rescaling applied to reach that lambda
    Mat F;               // skew profile rotation
    Mat B;               // symmetric profile
    Mat phi;             // frame change e_i -> e_i + pwedge(phi e_i)
    double residual = 0.0; // worst input-constraint residual
};

// Normalizes the derivation presentation: rescales the null pair so lambda
// lands in {0,1}, then changes frame by phi = L^sym + omega/2, which removes
// omega and the symmetric part of L.  The surviving data is (F, B) with
//   F = L^skew - omega/2,
//   B = lambda L^sym + [L^skew, L^sym] - omega^2/4 - (L^sym)^2
//       + [L^sym, omega]/2 + T^sym,
// verified internally against direct bracket transport.
NormalizedFrame normalize_frame(const DerivationData& raw, double tol = 1e-10);

// Connection map of the homogeneous model attached to (lambda, omega, L):
// values in so(V) over the Witt frame with
//   map(p) = 0,
//   map(e_i) = -pwedge((omega + L + L^T) e_i)/2,
//   map(q) = lambda (q wedge p) + middle-block embed of (L^skew - omega/2).
struct NomizuMap {
    int n = 0;
    Mat lambda_p;
    std::vector<Mat> lambda_e;
    Mat lambda_q;
};

NomizuMap nomizu(double lambda, const Mat& omega, const Mat& l);

// Curvature of the connection at the base point, one so(V) value per pair of
// Witt basis directions (indices 0=p, 1..n=e_i, n+1=q):
//   R(X,Y) = -([map X, map Y] - map([X,Y]))
// with [X,Y] the algebra structure on V induced by (lambda, omega, L):
// [q,e_i] = L e_i, [e_i,e_j] = omega(e_i,e_j) p, [q,p] = lambda p.
struct NomizuCurvature {
    int d = 0;
    std::vector<Mat> values; // index i*d + j, antisymmetric in (i,j)

    const Mat& at(int i, int j) const {
        return values[static_cast<std::size_t>(i * d + j)];
    }
    // Residual of the claim that every value lies in span(pwedge_e_i).
    double span_residual(const MinkowskiFrame& frame) const;
};

NomizuCurvature nomizu_curvature(const NomizuMap& map, double lambda, const Mat& omega,
                                 const Mat& l);

// Solution space of phi: V -> span(g0) with phi(X)Y = phi(Y)X.  Each solution
// is returned as the list of images of the coordinate directions.
struct Prolongation {
    int dimension = 0;
    std::vector<std::vector<Mat>> basis; // basis[s][i] = phi_s(e_i)
};

Prolongation first_prolongation(const std::vector<Mat>& g0, const MinkowskiFrame& frame);

} // namespace pwlab
