#include "pwlab/planewave.hpp"

#include "pwlab/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwlab {

namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << v;
    return os.str();
}

void check_point(const PlaneWaveSpec& spec, const SpacetimePoint& pt) {
    if (pt.x.size() != spec.n) {
        throw validation_error("point: transverse coordinate count " +
                               std::to_string(pt.x.size()) + " does not match n = " +
                               std::to_string(spec.n));
    }
    if (!std::isfinite(pt.v) || !std::isfinite(pt.u) || !pt.x.allFinite()) {
        throw validation_error("point: coordinates must be finite");
    }
    if (spec.kind == PlaneWaveKind::b && pt.u <= 0.0) {
        throw validation_error("point: kind-b metrics live on u > 0, got u = " +
                               std::to_string(pt.u));
    }
}

void check_step(double h) {
    if (!(h >= 1e-6 && h <= 1e-2)) {
        throw validation_error("step size h must lie in [1e-6, 1e-2]");
    }
}

void check_stencil(const PlaneWaveSpec& spec, const SpacetimePoint& pt, double h) {
    if (spec.kind == PlaneWaveKind::b && pt.u <= 2.0 * h) {
        throw validation_error("stencil leaves the kind-b domain: u = " +
                               std::to_string(pt.u) + " with step " + std::to_string(h) +
                               "; need u > 2h");
    }
}

SpacetimePoint shifted(const SpacetimePoint& pt, int coord, double delta, int n) {
    SpacetimePoint out = pt;
    if (coord == 0) {
        out.v += delta;
    } else if (coord <= n) {
        out.x(coord - 1) += delta;
    } else {
        out.u += delta;
    }
    return out;
}

} // namespace

std::string to_string(PlaneWaveKind k) {
    return k == PlaneWaveKind::a ? "a" : "b";
}

void PlaneWaveSpec::validate() const {
    if (n < 1) throw validation_error("spec: n must be at least 1");
    if (F.rows() != n || F.cols() != n || B.rows() != n || B.cols() != n) {
        throw validation_error("spec: F and B must be n x n");
    }
    if (!F.allFinite() || !B.allFinite()) {
        throw validation_error("spec: F and B must have finite entries");
    }
    const double f_skew = frob((F + F.transpose()).eval());
    if (f_skew >= 1e-12 * (1.0 + frob(F))) {
        throw validation_error("spec: F must be skew-symmetric; symmetry residual |F + F^T| = " +
                               sci(f_skew) + " exceeds 1e-12 * (1 + |F|)");
    }
    const double b_sym = frob((B - B.transpose()).eval());
    if (b_sym >= 1e-12 * (1.0 + frob(B))) {
        throw validation_error("spec: B must be symmetric; symmetry residual |B - B^T| = " +
                               sci(b_sym) + " exceeds 1e-12 * (1 + |B|)");
    }
}

Mat wave_profile(const PlaneWaveSpec& spec, double u) {
    spec.validate();
    double theta = u, s = 1.0;
    if (spec.kind == PlaneWaveKind::b) {
        if (u <= 0.0) {
            throw validation_error("wave_profile: kind-b profile needs u > 0, got u = " +
                                   std::to_string(u));
        }
        theta = std::log(u);
        s = 1.0 / (u * u);
    }
    const Mat rot = expm((theta * spec.F).eval());
    const Mat rot_inv = expm((-theta * spec.F).eval());
    return s * rot * spec.B * rot_inv;
}

Mat metric_at(const PlaneWaveSpec& spec, const SpacetimePoint& pt) {
    spec.validate();
    check_point(spec, pt);
    const int d = spec.dim();
    Mat g = Mat::Zero(d, d);
    g(0, d - 1) = 1.0;
    g(d - 1, 0) = 1.0;
    g.block(1, 1, spec.n, spec.n) = Mat::Identity(spec.n, spec.n);
    const Mat t = wave_profile(spec, pt.u);
    g(d - 1, d - 1) = pt.x.dot(t * pt.x);
    return g;
}

Christoffel christoffel_fd(const PlaneWaveSpec& spec, const SpacetimePoint& pt, double h) {
    spec.validate();
    check_point(spec, pt);
    check_step(h);
    check_stencil(spec, pt, h);
    const int d = spec.dim();

    std::vector<Mat> dg(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
        const Mat plus = metric_at(spec, shifted(pt, m, +h, spec.n));
        const Mat minus = metric_at(spec, shifted(pt, m, -h, spec.n));
        dg[static_cast<std::size_t>(m)] = (plus - minus) / (2.0 * h);
    }

    const Mat g = metric_at(spec, pt);
    const Mat ginv = Eigen::PartialPivLU<Mat>(g).solve(Mat::Identity(d, d));

    Christoffel out;
    out.dim = d;
    out.coeff.assign(static_cast<std::size_t>(d * d * d), 0.0);
    for (int l = 0; l < d; ++l) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                double sum = 0.0;
                for (int m = 0; m < d; ++m) {
                    sum += ginv(l, m) * (dg[static_cast<std::size_t>(j)](m, k) +
                                         dg[static_cast<std::size_t>(k)](m, j) -
                                         dg[static_cast<std::size_t>(m)](j, k));
                }
                out.at(l, j, k) = 0.5 * sum;
            }
        }
    }
    return out;
}

double Curvature4::max_abs() const {
    double m = 0.0;
    for (double c : comp) m = std::max(m, std::abs(c));
    return m;
}

CurvatureMap curvature_closed(const PlaneWaveSpec& spec, double u) {
    spec.validate();
    CurvatureMap out;
    out.u = u;
    out.profile = wave_profile(spec, u);
    const int d = spec.dim();
    out.r.dim = d;
    out.r.comp.assign(static_cast<std::size_t>(d * d * d * d), 0.0);
    // Nonzero components generated by the profile, in the commutator
    // convention (see the header):
    //   R^{x_k}_{u x_i u} = -T_{ki}     R^v_{x_j x_i u} = T_{ji}
    // plus the images under antisymmetry in the last index pair.
    const int uidx = d - 1;
    for (int i = 0; i < spec.n; ++i) {
        for (int k = 0; k < spec.n; ++k) {
            const double tki = out.profile(k, i);
            out.r.at(k + 1, uidx, i + 1, uidx) = -tki;
            out.r.at(k + 1, uidx, uidx, i + 1) = tki;
            out.r.at(0, i + 1, k + 1, uidx) = tki;
            out.r.at(0, i + 1, uidx, k + 1) = -tki;
        }
    }
    return out;
}

namespace {

Curvature4 curvature_fd_single(const PlaneWaveSpec& spec, const SpacetimePoint& pt, double h) {
    const int d = spec.dim();
    const Christoffel gamma = christoffel_fd(spec, pt, h);
    std::vector<Christoffel> dgamma(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
        const Christoffel plus = christoffel_fd(spec, shifted(pt, m, +h, spec.n), h);
        const Christoffel minus = christoffel_fd(spec, shifted(pt, m, -h, spec.n), h);
        Christoffel diff;
        diff.dim = d;
        diff.coeff.resize(plus.coeff.size());
        for (std::size_t idx = 0; idx < plus.coeff.size(); ++idx) {
            diff.coeff[idx] = (plus.coeff[idx] - minus.coeff[idx]) / (2.0 * h);
        }
        dgamma[static_cast<std::size_t>(m)] = std::move(diff);
    }

    Curvature4 out;
    out.dim = d;
    out.comp.assign(static_cast<std::size_t>(d * d * d * d), 0.0);
    for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    double val = dgamma[static_cast<std::size_t>(i)].at(l, j, k) -
                                 dgamma[static_cast<std::size_t>(j)].at(l, i, k);
                    for (int m = 0; m < d; ++m) {
                        val += gamma.at(l, i, m) * gamma.at(m, j, k) -
                               gamma.at(l, j, m) * gamma.at(m, i, k);
                    }
                    out.at(l, k, i, j) = val;
                }
            }
        }
    }
    return out;
}

} // namespace

Curvature4 curvature_fd(const PlaneWaveSpec& spec, const SpacetimePoint& pt, double h,
                        bool richardson) {
    spec.validate();
    check_point(spec, pt);
    check_step(h);
    // The nested stencil reaches u +- 2h.
    check_stencil(spec, pt, 2.0 * h);
    Curvature4 coarse = curvature_fd_single(spec, pt, h);
    if (!richardson) return coarse;
    const Curvature4 fine = curvature_fd_single(spec, pt, h / 2.0);
    Curvature4 out = fine;
    for (std::size_t idx = 0; idx < out.comp.size(); ++idx) {
        out.comp[idx] = (4.0 * fine.comp[idx] - coarse.comp[idx]) / 3.0;
    }
    return out;
}

CurvatureMap weyl_closed(const PlaneWaveSpec& spec, double u) {
    spec.validate();
    if (spec.n + 2 < 4) {
        throw validation_error("weyl_closed: conformal curvature needs total dimension >= 4");
    }
    CurvatureMap out = curvature_closed(spec, u);
    const Mat t = out.profile;
    const Mat t0 = t - (t.trace() / static_cast<double>(spec.n)) *
                           Mat::Identity(spec.n, spec.n);
    out.profile = t0;
    const int d = spec.dim();
    const int uidx = d - 1;
    std::fill(out.r.comp.begin(), out.r.comp.end(), 0.0);
    for (int i = 0; i < spec.n; ++i) {
        for (int k = 0; k < spec.n; ++k) {
            const double tki = t0(k, i);
            out.r.at(k + 1, uidx, i + 1, uidx) = -tki;
            out.r.at(k + 1, uidx, uidx, i + 1) = tki;
            out.r.at(0, i + 1, k + 1, uidx) = tki;
            out.r.at(0, i + 1, uidx, k + 1) = -tki;
        }
    }
    return out;
}

bool is_conformally_flat(const PlaneWaveSpec& spec, double tol) {
    spec.validate();
    const Mat scalar_part = (spec.B.trace() / static_cast<double>(spec.n)) *
                            Mat::Identity(spec.n, spec.n);
    return frob((spec.B - scalar_part).eval()) <= tol * (1.0 + frob(spec.B));
}

ParallelismReport planewave_condition_check(const PlaneWaveSpec& spec,
                                            const SpacetimePoint& pt, double h) {
    spec.validate();
    check_point(spec, pt);
    check_step(h);
    if (h > 1e-3) {
        throw validation_error("planewave_condition_check: step must be <= 1e-3 so the "
                               "widened stencils below stay in range");
    }
    // Everything here is assembled from metric samples alone, so the check is
    // independent of the closed-form curvature path.  The coordinate
    // derivative term differences extrapolated finite-difference curvature
    // tensors at shifted points; since each such tensor carries rounding
    // scatter ~eps/h_in^2, the inner step is widened 10x and the outer
    // directional step 100x to keep the quotient's noise floor well under the
    // signal scale.
    const double h_in = 10.0 * h;
    const double h_out = 100.0 * h;
    // Outer shift plus the 2*h_in-deep stencil inside curvature_fd; the guard
    // checks twice its argument.
    check_stencil(spec, pt, 0.5 * (h_out + 2.0 * h_in));
    const int d = spec.dim();
    const Christoffel gamma = christoffel_fd(spec, pt, h);
    const Curvature4 r = curvature_fd(spec, pt, h_in, true);

    ParallelismReport rep;
    for (int m = 0; m < d; ++m) {
        const Curvature4 r_plus = curvature_fd(spec, shifted(pt, m, h_out, spec.n), h_in, true);
        const Curvature4 r_minus =
            curvature_fd(spec, shifted(pt, m, -h_out, spec.n), h_in, true);
        double worst = 0.0;
        for (int l = 0; l < d; ++l) {
            for (int k = 0; k < d; ++k) {
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) {
                        double val =
                            (r_plus.at(l, k, i, j) - r_minus.at(l, k, i, j)) / (2.0 * h_out);
                        for (int a = 0; a < d; ++a) {
                            val += gamma.at(l, m, a) * r.at(a, k, i, j);
                            val -= gamma.at(a, m, k) * r.at(l, a, i, j);
                            val -= gamma.at(a, m, i) * r.at(l, k, a, j);
                            val -= gamma.at(a, m, j) * r.at(l, k, i, a);
                        }
                        worst = std::max(worst, std::abs(val));
                    }
                }
            }
        }
        if (m == d - 1) {
            rep.u_residual = worst;
        } else {
            rep.wavefront_residual = std::max(rep.wavefront_residual, worst);
        }
    }
    return rep;
}

ConversionResult convert_b_to_a(const PlaneWaveSpec& spec) {
    spec.validate();
    if (spec.kind != PlaneWaveKind::b) {
        throw validation_error("convert_b_to_a: input must be kind b");
    }
    ConversionResult out;
    out.a_spec.kind = PlaneWaveKind::a;
    out.a_spec.n = spec.n;
    out.a_spec.F = spec.F;
    out.a_spec.B = spec.B + 0.25 * Mat::Identity(spec.n, spec.n);
    out.conformal_factor = "exp(u)";
    return out;
}

SpacetimePoint conversion_map(const SpacetimePoint& pt) {
    SpacetimePoint out;
    out.v = pt.v - 0.25 * pt.x.squaredNorm();
    out.x = std::exp(pt.u / 2.0) * pt.x;
    out.u = std::exp(pt.u);
    return out;
}

Mat conversion_jacobian(const SpacetimePoint& pt) {
    const int n = static_cast<int>(pt.x.size());
    const int d = n + 2;
    Mat j = Mat::Zero(d, d);
    j(0, 0) = 1.0;
    const double half_exp = std::exp(pt.u / 2.0);
    for (int i = 0; i < n; ++i) {
        j(0, i + 1) = -0.5 * pt.x(i);
        j(i + 1, i + 1) = half_exp;
        j(i + 1, d - 1) = 0.5 * half_exp * pt.x(i);
    }
    j(d - 1, d - 1) = std::exp(pt.u);
    return j;
}

Mat homothety_pullback(const PlaneWaveSpec& spec, double lambda, const SpacetimePoint& pt) {
    spec.validate();
    check_point(spec, pt);
    if (lambda == 0.0 || !std::isfinite(lambda)) {
        throw validation_error("homothety_pullback: lambda must be nonzero and finite");
    }
    const int d = spec.dim();
    SpacetimePoint image;
    image.v = lambda * lambda * pt.v;
    image.x = lambda * pt.x;
    image.u = pt.u;
    Vec diag(d);
    diag(0) = lambda * lambda;
    for (int i = 0; i < spec.n; ++i) diag(i + 1) = lambda;
    diag(d - 1) = 1.0;
    const Mat j = diag.asDiagonal();
    return j.transpose() * metric_at(spec, image) * j;
}

} // namespace pwlab
