#pragma once

#include "pwlab/linalg.hpp"
#include "pwlab/minkowski.hpp"

#include <string>

namespace pwlab {

// ---------------------------------------------------------------------------
// Classification of elements of the Lorentz algebra so(1, n+1) into the three
// conjugacy kinds, with an explicit basis change realizing the normal form.
// ---------------------------------------------------------------------------

struct ScalarPlusSkew {
    double mu;   // scalar part
    Mat skew;    // remainder, in the pairing's orthogonal algebra
    double residual; // verified orthogonal-algebra membership residual
};

// Split an element of the similarity algebra co(V) = R*id + so(V) into its
// scalar and skew parts. The scalar is tr(m)/(n+2); membership of the
// remainder in so(V) is verified against `tol`.
ScalarPlusSkew split_co(const Mat& m, const MinkowskiFrame& frame, double tol = 1e-10);

enum class CanonicalKind { Elliptic, Hyperbolic, Parabolic };

std::string to_string(CanonicalKind k);

// Result of classifying C in so(V).
//
// The `frame` columns are the new basis vectors in the original coordinates;
// canonical_matrix() reconstructs the element as frame * shape * frame^{-1}.
//
// Frame conventions per kind:
//  - Hyperbolic: null-pair frame (p, e_1..e_n, q); shape = a*(p^q) + c0 on
//    the middle n block, with a > 0 (the positive real spectral value).
//  - Parabolic:  null-pair frame; shape = p^e_1 + c0 on the middle block
//    rows/cols 2..n. The coefficient of p^e_1 is normalized to exactly 1:
//    rescaling p |-> t p, q |-> q/t is a pairing-preserving change that
//    rescales that coefficient freely, so only its sign class is meaningful,
//    and the scale is absorbed into the frame. `a` is reported as 1.
//  - Elliptic:   orthonormal frame (t, f_1..f_{n+1}) with
//    frame^T gram frame = diag(-1, 1..1); shape = c0 on the lower block and
//    a = 0. `witt_frame` additionally holds a null-pair frame built from
//    (f_1 +- t)/sqrt(2) for consumers of the other convention.
struct CanonicalForm {
    CanonicalKind kind;
    double a;
    Mat c0;          // residual skew block; size depends on the kind
    Mat frame;       // basis change, columns = new basis vectors
    Mat witt_frame;  // elliptic only: the same data in null-pair convention
    double residual; // ||frame * shape * frame^{-1} - C||_F / ||C||_F
    int n;           // Euclidean dimension of the ambient frame

    Mat canonical_matrix() const; // the shape matrix in the new basis
};

// Classify C in so(V) as elliptic / hyperbolic / parabolic and produce the
// realizing frame.
//
// Decision rule: take the commuting semisimple + nilpotent decomposition.
//  - a nonzero nilpotent part   -> parabolic,
//  - a nonzero real spectral pair -> hyperbolic,
//  - otherwise                   -> elliptic.
// Borderline magnitudes (nilpotent norm, real part) falling inside the
// guard bands are reported as validation errors rather than silently rounded;
// a simultaneous nilpotent part and real pair is impossible in so(1, n+1)
// and raises invariant_error. The zero matrix is elliptic with a = 0.
CanonicalForm classify(const Mat& c, const MinkowskiFrame& frame, double tol = 1e-9);

} // namespace pwlab
