#include "pwlab/lorentz.hpp"

#include "pwlab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwlab {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

// Columns of `cols` that span the pairing-orthogonal complement of the span
// of `sub`'s columns: solutions v of sub^T * gram * v = 0.
Mat form_orthocomplement(const Mat& sub, const Mat& gram) {
    return null_space((sub.transpose() * gram).eval(), 1e-10);
}

} // namespace

ScalarPlusSkew split_co(const Mat& m, const MinkowskiFrame& frame, double tol) {
    const int d = frame.dim();
    if (m.rows() != d || m.cols() != d) {
        throw validation_error("split_co: matrix size does not match the frame");
    }
    ScalarPlusSkew out;
    out.mu = m.trace() / static_cast<double>(d);
    out.skew = m - out.mu * Mat::Identity(d, d);
    out.residual = so_residual(out.skew, frame.gram);
    if (out.residual > tol * (1.0 + frob(m))) {
        throw validation_error("split_co: matrix is not scalar + skew; residual " +
                               fmt(out.residual) + " exceeds " + fmt(tol * (1.0 + frob(m))));
    }
    return out;
}

std::string to_string(CanonicalKind k) {
    switch (k) {
        case CanonicalKind::Elliptic: return "elliptic";
        case CanonicalKind::Hyperbolic: return "hyperbolic";
        case CanonicalKind::Parabolic: return "parabolic";
    }
    return "?";
}

Mat CanonicalForm::canonical_matrix() const {
    const int d = n + 2;
    Mat shape = Mat::Zero(d, d);
    switch (kind) {
        case CanonicalKind::Elliptic:
            // Orthonormal convention: zero first row/column, c0 in the rest.
            shape.block(1, 1, n + 1, n + 1) = c0;
            break;
        case CanonicalKind::Hyperbolic:
            // a * (p^q) acts as p -> -a p, q -> +a q.
            shape(0, 0) = -a;
            shape(d - 1, d - 1) = a;
            shape.block(1, 1, n, n) = c0;
            break;
        case CanonicalKind::Parabolic:
            // p^e_1 sends q -> e_1 and e_1 -> -p; coefficient normalized to 1.
            shape(1, d - 1) = a;
            shape(0, 1) = -a;
            if (n >= 1) shape.block(2, 2, n - 1, n - 1) = c0;
            break;
    }
    return shape;
}

namespace {

CanonicalForm finish(CanonicalForm cf, const Mat& c, const Mat& gram) {
    const int d = cf.n + 2;
    const double scale = std::max(frob(c), 1e-300);
    const Mat shape = cf.canonical_matrix();
    Eigen::PartialPivLU<Mat> lu(cf.frame);
    const Mat rec = cf.frame * shape * lu.solve(Mat::Identity(d, d));
    cf.residual = frob(rec - c) / scale;
    if (cf.residual > 1e-8) {
        throw invariant_error("classify: canonical-form reconstruction residual " +
                              fmt(cf.residual) + " for kind " + to_string(cf.kind));
    }
    // The frame must realize the claimed pairing convention.
    Mat expected = gram;
    if (cf.kind == CanonicalKind::Elliptic) {
        expected = Mat::Identity(d, d);
        expected(0, 0) = -1.0;
    }
    const double frame_res = frob(cf.frame.transpose() * gram * cf.frame - expected);
    if (frame_res > 1e-7 * (1.0 + frob(cf.frame) * frob(cf.frame))) {
        throw invariant_error("classify: frame does not realize its pairing convention; residual " +
                              fmt(frame_res));
    }
    return cf;
}

CanonicalForm classify_elliptic(const Mat& c, const MinkowskiFrame& mf, const Mat& /*s*/) {
    const int n = mf.n, d = n + 2;
    const Mat& g = mf.gram;
    CanonicalForm cf;
    cf.kind = CanonicalKind::Elliptic;
    cf.a = 0.0;
    cf.n = n;

    // Invariant kernel: rotation planes are pairing-definite, and only one
    // negative direction exists, so the timelike direction sits in ker C.
    const double scale = std::max(frob(c), 1e-300);
    Mat u0 = null_space(c / scale, 1e-7);
    if (u0.cols() == 0) {
        throw invariant_error("classify: elliptic element with empty kernel");
    }
    const Mat g0 = u0.transpose() * g * u0;
    SymEig eg = sym_eig(g0, 1e-9);
    int negatives = 0;
    for (Eigen::Index i = 0; i < eg.values.size(); ++i)
        if (eg.values(i) < 0.0) ++negatives;
    if (negatives != 1) {
        throw invariant_error("classify: elliptic kernel carries " + std::to_string(negatives) +
                              " negative directions, expected exactly one");
    }
    Vec t = u0 * eg.vectors.col(0);
    t /= std::sqrt(-t.dot(g * t));

    std::vector<Vec> spacelike;
    for (Eigen::Index i = 1; i < eg.values.size(); ++i) {
        Vec f = u0 * eg.vectors.col(i);
        f /= std::sqrt(f.dot(g * f));
        spacelike.push_back(f);
    }

    // Complement of the kernel: pairing-positive, invariant under C.
    const Mat u1 = form_orthocomplement(u0, g);
    if (u1.cols() > 0) {
        const Mat u1o = orthonormalize_with_form(u1, g);
        for (Eigen::Index i = 0; i < u1o.cols(); ++i) spacelike.push_back(u1o.col(i));
    }
    if (static_cast<int>(spacelike.size()) != n + 1) {
        throw invariant_error("classify: elliptic frame has wrong spacelike count");
    }

    Mat frame(d, d);
    frame.col(0) = t;
    for (int i = 0; i < n + 1; ++i) frame.col(i + 1) = spacelike[static_cast<std::size_t>(i)];
    cf.frame = frame;

    Eigen::PartialPivLU<Mat> lu(frame);
    const Mat c_new = lu.solve(c * frame);
    cf.c0 = c_new.block(1, 1, n + 1, n + 1);
    cf.c0 = ((cf.c0 - cf.c0.transpose()) / 2.0).eval(); // exact skewness of the report

    // Null-pair convention for downstream consumers of the other basis.
    Mat wf(d, d);
    const double r = 1.0 / std::sqrt(2.0);
    wf.col(0) = r * (frame.col(1) + t);
    for (int i = 0; i < n; ++i) wf.col(i + 1) = frame.col(i + 2);
    wf.col(d - 1) = r * (frame.col(1) - t);
    cf.witt_frame = wf;
    return cf;
}

CanonicalForm classify_hyperbolic(const Mat& c, const MinkowskiFrame& mf, double a_pos) {
    const int n = mf.n, d = n + 2;
    const Mat& g = mf.gram;
    CanonicalForm cf;
    cf.kind = CanonicalKind::Hyperbolic;
    cf.n = n;
    cf.a = a_pos;

    Eigen::EigenSolver<Mat> es(c);
    if (es.info() != Eigen::Success) throw invariant_error("classify: eigensolver failed");
    const CVec lam = es.eigenvalues();

    auto real_eigvec = [&](double target) {
        Eigen::Index best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            const double dist = std::abs(lam(i) - std::complex<double>(target, 0.0));
            if (dist < bd) {
                bd = dist;
                best = i;
            }
        }
        Vec v = es.eigenvectors().col(best).real();
        const double im = es.eigenvectors().col(best).imag().norm();
        if (im > 1e-6 * v.norm()) {
            throw invariant_error("classify: real eigenvector has large imaginary part");
        }
        return static_cast<Vec>(v / v.norm());
    };

    // Eigenvectors of the real pair are the two null directions.
    Vec p_hat = real_eigvec(-a_pos);
    Vec q_raw = real_eigvec(+a_pos);
    const double pairing = p_hat.dot(g * q_raw);
    if (std::abs(pairing) < 1e-10) {
        throw invariant_error("classify: null eigenvectors do not pair");
    }
    Vec q_hat = q_raw / pairing;

    // Clean residual non-nullity, then re-normalize the pairing.
    p_hat -= 0.5 * p_hat.dot(g * p_hat) * q_hat;
    q_hat -= 0.5 * q_hat.dot(g * q_hat) * p_hat;
    q_hat /= p_hat.dot(g * q_hat);

    Mat pq(d, 2);
    pq.col(0) = p_hat;
    pq.col(1) = q_hat;
    const Mat e_raw = form_orthocomplement(pq, g);
    if (e_raw.cols() != n) {
        throw invariant_error("classify: hyperbolic middle block has wrong dimension");
    }
    const Mat e_on = orthonormalize_with_form(e_raw, g);

    Mat frame(d, d);
    frame.col(0) = p_hat;
    frame.block(0, 1, d, n) = e_on;
    frame.col(d - 1) = q_hat;
    cf.frame = frame;

    Eigen::PartialPivLU<Mat> lu(frame);
    const Mat c_new = lu.solve(c * frame);
    cf.c0 = c_new.block(1, 1, n, n);
    cf.c0 = ((cf.c0 - cf.c0.transpose()) / 2.0).eval();
    cf.witt_frame = frame;
    return cf;
}

CanonicalForm classify_parabolic(const Mat& c, const MinkowskiFrame& mf,
                                 const JCDecomposition& jc) {
    const int n = mf.n, d = n + 2;
    const Mat& g = mf.gram;
    CanonicalForm cf;
    cf.kind = CanonicalKind::Parabolic;
    cf.n = n;
    cf.a = 1.0; // pairing-preserving rescalings absorb the coefficient

    const Mat& s = jc.s;
    const Mat& nil = jc.nil;
    const double nscale = std::max(frob(nil), 1e-300);

    // The null pair and the first spacelike direction live inside ker(s).
    const double sscale = frob(s);
    Mat u0;
    if (sscale < 1e-12 * std::max(1.0, frob(c))) {
        u0 = Mat::Identity(d, d);
    } else {
        u0 = null_space(s / sscale, 1e-7);
    }
    if (u0.cols() < 3) {
        throw invariant_error("classify: parabolic kernel too small");
    }
    const Mat gk = u0.transpose() * g * u0;          // pairing on ker(s)
    const Mat nk = u0.transpose() * nil * u0;        // nilpotent action on ker(s)

    // nil^2 has rank one; its image is the distinguished null direction and
    // applying nil to its row space produces the first spacelike direction.
    const Mat n2 = nk * nk;
    if (frob(n2) < 1e-10 * nscale * nscale / std::max(1.0, frob(c))) {
        throw invariant_error("classify: parabolic element with nil^2 = 0 is outside the "
                              "expected normal form family");
    }
    Eigen::JacobiSVD<Mat> svd2(n2, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec w = svd2.matrixV().col(0);
    Vec f = nk * w;
    const double fnorm2 = f.dot(gk * f);
    if (fnorm2 <= 1e-12) {
        throw invariant_error("classify: parabolic spacelike direction degenerates");
    }
    Vec e1 = f / std::sqrt(fnorm2);
    Vec p_hat = -(nk * e1); // normalizes the nilpotent coefficient to one

    // Extra kernel directions of the nilpotent action (beyond the null
    // direction): spacelike vectors commuting with the whole picture.
    const Mat nil_ker = null_space(nk / std::max(frob(nk), 1e-300), 1e-7);
    const Mat gk_ker = nil_ker.transpose() * gk * nil_ker;
    SymEig ek = sym_eig(((gk_ker + gk_ker.transpose()) / 2.0).eval(), 1e-8);
    std::vector<Vec> m_dirs;
    for (Eigen::Index i = 0; i < ek.values.size(); ++i) {
        if (ek.values(i) > 1e-7) {
            Vec mvec = nil_ker * ek.vectors.col(i);
            mvec /= std::sqrt(mvec.dot(gk * mvec));
            m_dirs.push_back(mvec);
        }
    }

    // Remaining null direction: pair with p_hat, then strip the components
    // along e1 and the kernel spacelike directions, then remove self-pairing.
    Eigen::FullPivLU<Mat> gk_lu(gk);
    Vec q_hat = gk_lu.solve(p_hat);
    const double pairing = p_hat.dot(gk * q_hat);
    if (std::abs(pairing) < 1e-12) {
        throw invariant_error("classify: parabolic null directions do not pair");
    }
    q_hat /= pairing;
    q_hat -= q_hat.dot(gk * e1) * e1;
    for (const Vec& mv : m_dirs) q_hat -= q_hat.dot(gk * mv) * mv;
    q_hat -= 0.5 * q_hat.dot(gk * q_hat) * p_hat;
    q_hat /= p_hat.dot(gk * q_hat);

    // Lift everything back to ambient coordinates.
    Vec P = u0 * p_hat, E1 = u0 * e1, Q = u0 * q_hat;
    std::vector<Vec> mid;
    mid.push_back(E1);
    for (const Vec& mv : m_dirs) mid.push_back(u0 * mv);

    // Complement: the pairing-orthogonal complement of ker(s), invariant and
    // positive; it carries the semisimple rotation block.
    const Mat u1 = form_orthocomplement(u0, g);
    if (u1.cols() > 0) {
        const Mat u1o = orthonormalize_with_form(u1, g);
        for (Eigen::Index i = 0; i < u1o.cols(); ++i) mid.push_back(u1o.col(i));
    }
    if (static_cast<int>(mid.size()) != n) {
        throw invariant_error("classify: parabolic frame has wrong middle dimension");
    }

    Mat frame(d, d);
    frame.col(0) = P;
    for (int i = 0; i < n; ++i) frame.col(i + 1) = mid[static_cast<std::size_t>(i)];
    frame.col(d - 1) = Q;
    cf.frame = frame;

    Eigen::PartialPivLU<Mat> lu(frame);
    const Mat c_new = lu.solve(c * frame);
    if (n >= 1) {
        cf.c0 = c_new.block(2, 2, n - 1, n - 1);
        cf.c0 = ((cf.c0 - cf.c0.transpose()) / 2.0).eval();
    } else {
        cf.c0 = Mat::Zero(0, 0);
    }
    cf.witt_frame = frame;
    return cf;
}

} // namespace

CanonicalForm classify(const Mat& c, const MinkowskiFrame& mf, double tol) {
    const int d = mf.dim();
    if (c.rows() != d || c.cols() != d) {
        throw validation_error("classify: matrix size does not match the frame");
    }
    const double member = so_residual(c, mf.gram);
    if (member > std::max(tol, 1e-8) * (1.0 + frob(c))) {
        throw validation_error("classify: matrix is not in the orthogonal algebra; residual " +
                               fmt(member));
    }

    const double scale = frob(c);
    if (scale < 1e-13) {
        // Degenerate but consistent: the zero element is elliptic.
        CanonicalForm cf;
        cf.kind = CanonicalKind::Elliptic;
        cf.a = 0.0;
        cf.n = mf.n;
        cf.c0 = Mat::Zero(mf.n + 1, mf.n + 1);
        cf.frame = witt_to_orthonormal(mf.n);
        Mat wf(d, d);
        const double r = 1.0 / std::sqrt(2.0);
        wf.col(0) = r * (cf.frame.col(1) + cf.frame.col(0));
        for (int i = 0; i < mf.n; ++i) wf.col(i + 1) = cf.frame.col(i + 2);
        wf.col(d - 1) = r * (cf.frame.col(1) - cf.frame.col(0));
        cf.witt_frame = wf;
        cf.residual = 0.0;
        return cf;
    }

    const JCDecomposition jc = jordan_chevalley(c, tol);

    const double nil_ratio = frob(jc.nil) / scale;
    if (nil_ratio > 1e-8 && nil_ratio < 1e-3) {
        throw validation_error("classify: nilpotent part at " + fmt(nil_ratio) +
                               " of the element norm is inside the ambiguity band "
                               "(1e-8, 1e-3); reported, not guessed");
    }
    const bool parabolic = nil_ratio >= 1e-3;

    double a_real = 0.0;
    for (const auto& cl : jc.spectrum.clusters) {
        if (cl.mean.imag() == 0.0) a_real = std::max(a_real, std::abs(cl.mean.real()));
    }
    const double real_ratio = a_real / scale;
    const double band_lo = std::max(tol, 1e-8);
    if (!parabolic && real_ratio > band_lo && real_ratio < 1e-6) {
        throw validation_error("classify: real spectral part at " + fmt(real_ratio) +
                               " of the element norm is inside the ambiguity band (" +
                               fmt(band_lo) + ", 1e-6); reported, not guessed");
    }
    const bool hyperbolic = real_ratio >= 1e-6;

    if (parabolic && hyperbolic) {
        throw invariant_error("classify: simultaneous nilpotent part and real spectral pair; "
                              "the kinds are mutually exclusive in this algebra");
    }

    CanonicalForm cf;
    if (parabolic) {
        cf = classify_parabolic(c, mf, jc);
    } else if (hyperbolic) {
        cf = classify_hyperbolic(c, mf, a_real);
    } else {
        cf = classify_elliptic(c, mf, jc.s);
    }
    return finish(cf, c, mf.gram);
}

} // namespace pwlab
