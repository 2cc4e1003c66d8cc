#pragma once

#include "pwlab/liestruct.hpp"
#include "pwlab/planewave.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pwlab {

// Outcome of a decomposition decision on a symmetric profile matrix.  On a
// "yes" the witness factors are present and re-verified against the defining
// identities before being returned; on a "no" the certificate names the
// spectral obstruction.
struct DecisionWitness {
    bool yes = false;
    std::optional<Mat> A;      // symmetric factor (left-invariant decision)
    std::optional<Mat> C;      // skew factor (left-invariant) or symmetric
                               // square root (bi-invariant)
    std::string certificate;   // human-readable justification
};

// Decides whether B = -A^2 - C^2 is solvable with A symmetric, C skew and
// AC = 0 — the condition for the flat-rotation (F = 0) wave with profile B to
// carry a compatible group multiplication acting by isometries on itself.
// Decision rule: every positive eigenvalue of B must have even multiplicity
// (eigenvalues are clustered at relative radius 1e-8).  A is built from the
// nonpositive spectrum, C from paired positive eigenvectors, so the two images
// are orthogonal and AC vanishes by construction.
DecisionWitness cw_left_invariant(const Mat& b, double tol = 1e-9);

// Decides whether B = -C^2 with C symmetric: possible iff the largest
// eigenvalue of B is at most tol.  C is the principal square root of -B.
DecisionWitness cw_bi_invariant(const Mat& b, double tol = 1e-9);

// Profile data induced by a one-generator bracket L on the abelian wavefront:
// the compatibility condition is that the symmetric and skew parts of L
// anticommute.
struct BracketCheck {
    bool holds = false;     // anticommutator vanishes (relative 1e-10)
    double residual = 0.0;  // Frobenius norm of L^sk L^s + L^s L^sk
    Mat B;                  // induced profile [L^sk,L^s] - (L^sk)^2 - (L^s)^2
};

BracketCheck cw_lie_group_bracket_check(const Mat& l);

// Wave spec determined by group-type derivation data (lambda, omega, L, c0):
// K and T must be absent (the presentation carries no torsion profile), and
// the data must satisfy the bracket constraints with T = 0.  The result is
// the normalize_frame output repackaged: kind a when lambda = 0, kind b
// otherwise (after null-pair rescaling).
PlaneWaveSpec derivation_to_planewave(const DerivationData& data);

// Randomized search for the left-invariant decomposition, independent of the
// spectral rule in cw_left_invariant: seeded random (A, C) draws scored by
// ||B + A^2 + C^2||^2 + ||AC||^2, best candidates polished by damped
// Gauss-Newton.  Used as the cross-validation oracle for the decision rule.
struct SearchResult {
    bool found = false;
    Mat A;
    Mat C;
    double residual = 0.0; // best polished objective value (Frobenius scale)
};

SearchResult cw_search_decomposition(const Mat& b, std::uint64_t seed,
                                     int draws = 100000);

} // namespace pwlab
