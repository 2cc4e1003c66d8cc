#pragma once

#include "pwlab/linalg.hpp"

#include <string>
#include <vector>

namespace pwlab {

// The two metric families handled by this library, written in coordinates
// (v, x^1..x^n, u):
//
//   kind a:  g = 2 dv du + sum_i (dx^i)^2 + x^T T(u) x (du)^2,
//            T(u) = expm(uF) B expm(-uF)
//   kind b:  same shape with T(u) = expm(ln(u) F) B expm(-ln(u) F) / u^2,
//            defined on the half-space u > 0.
//
// F is skew (the rotation generator of the profile), B is symmetric (the
// profile at the base coordinate).
enum class PlaneWaveKind { a, b };

std::string to_string(PlaneWaveKind k);

struct PlaneWaveSpec {
    PlaneWaveKind kind = PlaneWaveKind::a;
    int n = 1;
    Mat F; // n x n skew
    Mat B; // n x n symmetric

    int dim() const { return n + 2; }

    // Throws validation_error when the shape or symmetry constraints fail.
    void validate() const;
};

struct SpacetimePoint {
    double v = 0.0;
    Vec x;
    double u = 0.0;
};

// Profile matrix T(u); throws validation_error outside the coordinate domain.
Mat wave_profile(const PlaneWaveSpec& spec, double u);

// Coordinate matrix of the metric at a point, index order (v, x^1..x^n, u).
Mat metric_at(const PlaneWaveSpec& spec, const SpacetimePoint& pt);

// Connection coefficients Gamma^l_{jk}, stored flat at ((l*d)+j)*d+k.
struct Christoffel {
    int dim = 0;
    std::vector<double> coeff;

    double at(int l, int j, int k) const {
        return coeff[static_cast<std::size_t>((l * dim + j) * dim + k)];
    }
    double& at(int l, int j, int k) {
        return coeff[static_cast<std::size_t>((l * dim + j) * dim + k)];
    }
};

// Central-difference connection from metric_at alone; serves as an
// implementation-independent numeric path.  h must lie in [1e-6, 1e-2].
Christoffel christoffel_fd(const PlaneWaveSpec& spec, const SpacetimePoint& pt,
                           double h = 1e-4);

// Curvature components R^l_{kij} in the commutator convention
//   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y],
//   R(d_i, d_j) d_k = R^l_{kij} d_l,
// stored flat at (((l*d)+k)*d+i)*d+j.
struct Curvature4 {
    int dim = 0;
    std::vector<double> comp;

    double at(int l, int k, int i, int j) const {
        return comp[static_cast<std::size_t>(((l * dim + k) * dim + i) * dim + j)];
    }
    double& at(int l, int k, int i, int j) {
        return comp[static_cast<std::size_t>(((l * dim + k) * dim + i) * dim + j)];
    }
    double max_abs() const;
};

// Curvature of the family in closed form.  The whole tensor is generated by
// the profile: R(d_{x^i}, d_u) d_u = -T(u) d_{x^i} (plus the components forced
// by the symmetries); it depends on u alone.
struct CurvatureMap {
    double u = 0.0;
    Mat profile; // T(u), symmetric
    Curvature4 r;
};

CurvatureMap curvature_closed(const PlaneWaveSpec& spec, double u);

// Curvature assembled from finite-difference connection coefficients; with
// richardson=true a second evaluation at h/2 extrapolates the leading error.
Curvature4 curvature_fd(const PlaneWaveSpec& spec, const SpacetimePoint& pt,
                        double h = 1e-4, bool richardson = false);

// Conformal curvature in closed form: same shape with the traceless profile
// T - (tr T / n) id.  Requires total dimension n + 2 >= 4.
CurvatureMap weyl_closed(const PlaneWaveSpec& spec, double u);

// True iff B is a multiple of the identity (the conformal curvature vanishes
// identically exactly in that case; conjugation by expm(uF) preserves scalar
// matrices, so the base profile decides).
bool is_conformally_flat(const PlaneWaveSpec& spec, double tol = 1e-9);

struct ParallelismReport {
    // max over X in {d_v, d_{x^1}.. d_{x^n}} of the covariant derivative of
    // the curvature along X, largest component at the evaluation point.
    double wavefront_residual = 0.0;
    // Same quantity along d_u; generally nonzero, reported as a control so a
    // vanishing wavefront residual is demonstrably not a trivial zero.
    double u_residual = 0.0;
};

// Checks the defining property of the family: the curvature is parallel in
// every direction tangent to the wave front.
ParallelismReport planewave_condition_check(const PlaneWaveSpec& spec,
                                            const SpacetimePoint& pt, double h = 1e-4);

struct ConversionResult {
    PlaneWaveSpec a_spec;
    // The coordinate map below pulls the input metric back to
    // conformal_factor * (metric of a_spec).
    std::string conformal_factor;
};

// Rewrites a kind-b spec as a conformally related kind-a spec with profile
// B + (1/4) id and the same F.  The realizing coordinate map and its
// differential are exposed for verification:
//   (v, x, u) |-> (v - |x|^2/4, exp(u/2) x, exp(u)),
// under which the kind-b metric pulls back to exp(u) times the kind-a metric.
ConversionResult convert_b_to_a(const PlaneWaveSpec& spec);
SpacetimePoint conversion_map(const SpacetimePoint& a_side_pt);
Mat conversion_jacobian(const SpacetimePoint& a_side_pt);

// Pullback of the metric under (v, x, u) |-> (lambda^2 v, lambda x, u) at pt;
// equals lambda^2 * metric_at(spec, pt) in closed form.
Mat homothety_pullback(const PlaneWaveSpec& spec, double lambda, const SpacetimePoint& pt);

} // namespace pwlab
