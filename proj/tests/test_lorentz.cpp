#include "doctest.h"

#include "pwlab/errors.hpp"
#include "pwlab/linalg.hpp"
#include "pwlab/lorentz.hpp"
#include "pwlab/minkowski.hpp"
#include "pwlab/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace pwlab;

namespace {

Vec unit(int d, int i) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    return v;
}

// Independent, slow classification oracle built directly on eigenvalue
// structure.  Raw eigenvalues of defective blocks scatter on a circle of
// radius around the cube root of machine precision, so the eigenvalues are
// grouped first; cluster means average that scatter away.  A cluster mean on
// the real axis away from zero means a boost-type element; otherwise a
// defective cluster (geometric multiplicity below the algebraic count) means
// a shear-type element; otherwise the element is a rotation type.
CanonicalKind oracle_kind(const Mat& c) {
    const double scale = std::max(frob(c), 1e-300);
    Eigen::EigenSolver<Mat> es(c);
    REQUIRE(es.info() == Eigen::Success);
    const CVec lam = es.eigenvalues();
    std::vector<std::complex<double>> centers;
    std::vector<int> counts;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        bool merged = false;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (std::abs(lam(i) - centers[j]) < 1e-4 * scale) {
                centers[j] = (centers[j] * static_cast<double>(counts[j]) + lam(i)) /
                             static_cast<double>(counts[j] + 1);
                ++counts[j];
                merged = true;
                break;
            }
        }
        if (!merged) {
            centers.push_back(lam(i));
            counts.push_back(1);
        }
    }
    for (const auto& mean : centers) {
        if (std::abs(mean.real()) > 1e-6 * scale && std::abs(mean.imag()) < 1e-6 * scale) {
            return CanonicalKind::Hyperbolic;
        }
    }
    const int d = static_cast<int>(c.rows());
    for (std::size_t j = 0; j < centers.size(); ++j) {
        CMat shifted = c.cast<std::complex<double>>() - centers[j] * CMat::Identity(d, d);
        Eigen::JacobiSVD<CMat> svd(shifted);
        int geo = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) < 1e-6 * scale) ++geo;
        }
        if (geo < counts[j]) return CanonicalKind::Parabolic;
    }
    return CanonicalKind::Elliptic;
}

Mat random_so_element(Rng& rng, const MinkowskiFrame& f) {
    const int d = f.dim();
    Mat c = Mat::Zero(d, d);
    for (int k = 0; k < 4; ++k) {
        c += bivector_matrix(rng.vector(d, -1.0, 1.0), rng.vector(d, -1.0, 1.0), f);
    }
    return c;
}

Mat random_conjugator(Rng& rng, const MinkowskiFrame& f, double size) {
    Mat gen = random_so_element(rng, f);
    gen *= size / std::max(frob(gen), 1e-12);
    return expm(gen);
}

} // namespace

TEST_CASE("split_co extracts scale and skew parts") {
    MinkowskiFrame f(2);
    const int d = f.dim();
    const Mat pq = bivector_matrix(unit(d, 0), unit(d, d - 1), f);
    // Identity minus the null-pair bivector: scale one, skew part minus it.
    const Mat m = Mat::Identity(d, d) - pq;
    const ScalarPlusSkew sp = split_co(m, f);
    CHECK(sp.mu == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frob(sp.skew + pq) <= 1e-14);
    CHECK(sp.residual <= 1e-14);
}

TEST_CASE("split_co rejects matrices outside scale + skew") {
    MinkowskiFrame f(2);
    Mat m = Mat::Zero(f.dim(), f.dim());
    m(1, 1) = 1.0; // symmetric traceless-ish perturbation, not in the algebra
    CHECK_THROWS_AS(split_co(m, f), validation_error);
}

TEST_CASE("classify identifies the null-pair boost generator") {
    MinkowskiFrame f(2);
    const int d = f.dim();
    const Mat c = 1.7 * bivector_matrix(unit(d, 0), unit(d, d - 1), f);
    const CanonicalForm cf = classify(c, f);
    CHECK(cf.kind == CanonicalKind::Hyperbolic);
    CHECK(cf.a == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(frob(cf.c0) <= 1e-10);
    CHECK(cf.residual <= 1e-8);
}

TEST_CASE("classify identifies a null-spacelike shear generator") {
    MinkowskiFrame f(2);
    const int d = f.dim();
    const Mat c = 2.5 * bivector_matrix(unit(d, 0), unit(d, 1), f);
    const CanonicalForm cf = classify(c, f);
    CHECK(cf.kind == CanonicalKind::Parabolic);
    // Coefficient is normalized away by rescaling the null frame vectors.
    CHECK(cf.a == doctest::Approx(1.0));
    CHECK(cf.residual <= 1e-8);
}

TEST_CASE("classify identifies a spacelike rotation generator") {
    MinkowskiFrame f(2);
    const int d = f.dim();
    const Mat c = 0.9 * bivector_matrix(unit(d, 1), unit(d, 2), f);
    const CanonicalForm cf = classify(c, f);
    CHECK(cf.kind == CanonicalKind::Elliptic);
    CHECK(cf.a == 0.0);
    CHECK(cf.residual <= 1e-8);
    // The rotation block survives with the same invariant angle scale.
    Eigen::EigenSolver<Mat> es(cf.c0);
    double maxim = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        maxim = std::max(maxim, std::abs(es.eigenvalues()(i).imag()));
    }
    CHECK(maxim == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("classify of the zero matrix is the degenerate rotation type") {
    MinkowskiFrame f(3);
    const CanonicalForm cf = classify(Mat::Zero(f.dim(), f.dim()), f);
    CHECK(cf.kind == CanonicalKind::Elliptic);
    CHECK(cf.a == 0.0);
    CHECK(frob(cf.c0) == 0.0);
}

TEST_CASE("classify rejects a matrix outside the algebra") {
    MinkowskiFrame f(2);
    CHECK_THROWS_AS(classify(Mat::Identity(f.dim(), f.dim()), f), validation_error);
}

TEST_CASE("classify agrees with the eigenstructure oracle on random elements") {
    for (int n : {2, 3}) {
        MinkowskiFrame f(n);
        Rng rng(1000 + n);
        int counted[3] = {0, 0, 0};
        for (int trial = 0; trial < 60; ++trial) {
            const Mat c = random_so_element(rng, f);
            const CanonicalKind expected = oracle_kind(c);
            CanonicalForm cf;
            try {
                cf = classify(c, f);
            } catch (const validation_error&) {
                continue; // ambiguous bands are allowed to refuse
            }
            CHECK(cf.kind == expected);
            CHECK(cf.residual <= 1e-8);
            ++counted[static_cast<int>(cf.kind)];
        }
        // Random continuous draws must hit the generic types.
        CHECK(counted[static_cast<int>(CanonicalKind::Elliptic)] +
                  counted[static_cast<int>(CanonicalKind::Hyperbolic)] >
              20);
    }
}

TEST_CASE("classify agrees with the oracle on conjugated canonical shapes") {
    MinkowskiFrame f(3);
    const int d = f.dim();
    Rng rng(55);
    std::vector<std::pair<Mat, CanonicalKind>> shapes;
    shapes.push_back({1.3 * bivector_matrix(unit(d, 0), unit(d, d - 1), f) +
                          0.7 * bivector_matrix(unit(d, 1), unit(d, 2), f),
                      CanonicalKind::Hyperbolic});
    shapes.push_back({bivector_matrix(unit(d, 0), unit(d, 1), f) +
                          0.4 * bivector_matrix(unit(d, 2), unit(d, 3), f),
                      CanonicalKind::Parabolic});
    shapes.push_back({0.6 * bivector_matrix(unit(d, 1), unit(d, 2), f), CanonicalKind::Elliptic});
    for (const auto& [shape, kind] : shapes) {
        for (int trial = 0; trial < 8; ++trial) {
            const Mat g = random_conjugator(rng, f, 1.2);
            const Mat c = g * shape * g.inverse();
            CHECK(oracle_kind(c) == kind);
            const CanonicalForm cf = classify(c, f);
            CHECK(cf.kind == kind);
            CHECK(cf.residual <= 1e-8);
        }
    }
}

TEST_CASE("classify recovers the boost weight under conjugation") {
    MinkowskiFrame f(3);
    const int d = f.dim();
    Rng rng(77);
    const Mat shape = 2.2 * bivector_matrix(unit(d, 0), unit(d, d - 1), f) +
                      1.1 * bivector_matrix(unit(d, 1), unit(d, 2), f);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat g = random_conjugator(rng, f, 1.4);
        const CanonicalForm cf = classify((g * shape * g.inverse()).eval(), f);
        CHECK(cf.kind == CanonicalKind::Hyperbolic);
        CHECK(cf.a == doctest::Approx(2.2).epsilon(1e-8));
    }
}

TEST_CASE("classify keeps rotation weights bounded by the element norm") {
    MinkowskiFrame f(2);
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        Mat c = random_so_element(rng, f);
        CanonicalForm cf;
        try {
            cf = classify(c, f);
        } catch (const validation_error&) {
            continue;
        }
        // The canonical data lives on the same scale as the input.
        CHECK(std::abs(cf.a) <= 10.0 * (1.0 + frob(c)));
        CHECK(frob(cf.c0) <= 10.0 * (1.0 + frob(c)));
    }
}

TEST_CASE("classify frame columns satisfy the claimed pairing") {
    MinkowskiFrame f(3);
    const int d = f.dim();
    Rng rng(404);
    for (int trial = 0; trial < 12; ++trial) {
        const Mat c = random_so_element(rng, f);
        CanonicalForm cf;
        try {
            cf = classify(c, f);
        } catch (const validation_error&) {
            continue;
        }
        const Mat wg = cf.witt_frame.transpose() * f.gram * cf.witt_frame;
        CHECK(frob(wg - witt_gram(f.n)) <= 1e-7);
    }
}
