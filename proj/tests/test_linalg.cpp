#include "doctest.h"

#include "pwlab/errors.hpp"
#include "pwlab/linalg.hpp"
#include "pwlab/rng.hpp"

#include <cmath>
#include <complex>

using namespace pwlab;

namespace {

// Reference exponential: plain Taylor series on a heavily downscaled matrix,
// then repeated squaring.  Slow and simple on purpose — an independent check
// for the production implementation.
Mat expm_reference(const Mat& m) {
    const int d = static_cast<int>(m.rows());
    int squarings = 0;
    Mat a = m;
    while (a.cwiseAbs().rowwise().sum().maxCoeff() > 1.0 / 64.0) {
        a /= 2.0;
        ++squarings;
    }
    Mat result = Mat::Identity(d, d);
    Mat term = Mat::Identity(d, d);
    for (int k = 1; k <= 200; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = (result * result).eval();
    return result;
}

} // namespace

TEST_CASE("expm matches the series reference on random matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = rng.uniform_int(1, 6);
        const Mat m = rng.matrix(d, d, -2.0, 2.0);
        const Mat got = expm(m);
        const Mat ref = expm_reference(m);
        CHECK(frob(got - ref) <= 1e-11 * (1.0 + frob(ref)));
    }
}

TEST_CASE("expm of zero is the identity") {
    CHECK(frob(expm(Mat::Zero(4, 4)) - Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("expm(m) * expm(-m) is the identity") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = rng.uniform_int(2, 5);
        const Mat m = rng.matrix(d, d, -1.5, 1.5);
        const Mat prod = expm(m) * expm(-m);
        CHECK(frob(prod - Mat::Identity(d, d)) <= 1e-12 * (1.0 + frob(expm(m))));
    }
}

TEST_CASE("expm turns commuting sums into products") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = rng.uniform_int(2, 5);
        const Mat a = rng.matrix(d, d, -1.0, 1.0);
        // p(a) commutes with a.
        const Mat b = 0.3 * a * a - 0.7 * a + 0.2 * Mat::Identity(d, d);
        const Mat lhs = expm(a + b);
        const Mat rhs = expm(a) * expm(b);
        CHECK(frob(lhs - rhs) <= 1e-10 * (1.0 + frob(lhs)));
    }
}

TEST_CASE("expm of a rotation generator gives the rotation matrix") {
    Mat j(2, 2);
    j << 0.0, -1.0, 1.0, 0.0;
    const double th = 0.83;
    Mat expected(2, 2);
    expected << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    CHECK(frob(expm((th * j).eval()) - expected) <= 1e-14);
}

TEST_CASE("sym_eig reconstructs the input and orders eigenvalues") {
    Rng rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        const int d = rng.uniform_int(1, 7);
        const Mat s = rng.symmetric(d, -3.0, 3.0);
        const SymEig eig = sym_eig(s);
        const Mat rec = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
        CHECK(frob(rec - s) <= 1e-12 * (1.0 + frob(s)));
        CHECK(frob(eig.vectors.transpose() * eig.vectors - Mat::Identity(d, d)) <= 1e-12);
        for (Eigen::Index i = 0; i + 1 < eig.values.size(); ++i) {
            CHECK(eig.values(i) <= eig.values(i + 1));
        }
    }
}

TEST_CASE("sym_eig rejects an asymmetric input") {
    Mat m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(sym_eig(m), validation_error);
}

TEST_CASE("spectral_clusters finds conjugate pairs and multiplicities") {
    Mat rot = Mat::Zero(4, 4);
    rot(0, 1) = -2.0;
    rot(1, 0) = 2.0;
    rot(2, 3) = -2.0;
    rot(3, 2) = 2.0;
    const SpectralClustering sc = spectral_clusters(rot);
    REQUIRE(sc.clusters.size() == 2);
    double seen_pos = 0.0, seen_neg = 0.0;
    for (const auto& c : sc.clusters) {
        CHECK(c.size == 2);
        CHECK(c.mean.real() == doctest::Approx(0.0).epsilon(1e-12));
        if (c.mean.imag() > 0) seen_pos = c.mean.imag();
        if (c.mean.imag() < 0) seen_neg = c.mean.imag();
    }
    CHECK(seen_pos == doctest::Approx(2.0));
    CHECK(seen_neg == doctest::Approx(-2.0));
}

TEST_CASE("spectral_clusters snaps near-real means to the real axis") {
    Mat m(3, 3);
    m << 1.0, 1e-12, 0.0,
         0.0, 1.0, 0.0,
         0.0, 0.0, -2.0;
    const SpectralClustering sc = spectral_clusters(m);
    for (const auto& c : sc.clusters) CHECK(c.mean.imag() == 0.0);
}

TEST_CASE("jordan_chevalley splits a single nilpotent block") {
    // Two-by-two block with equal diagonal and one off-diagonal entry.
    Mat m(2, 2);
    m << 2.0, 1.0,
         0.0, 2.0;
    const JCDecomposition jc = jordan_chevalley(m);
    Mat s_expected = 2.0 * Mat::Identity(2, 2);
    CHECK(frob(jc.s - s_expected) <= 1e-9);
    CHECK(frob(jc.nil - (m - s_expected)) <= 1e-9);
}

TEST_CASE("jordan_chevalley is exact on diagonalizable input") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = rng.uniform_int(2, 6);
        Vec diag = rng.vector(d, -3.0, 3.0);
        // Spread eigenvalues so no accidental clustering occurs.
        for (int i = 0; i < d; ++i) diag(i) += 10.0 * i;
        const Mat g = rng.matrix(d, d, -1.0, 1.0) + 5.0 * Mat::Identity(d, d);
        const Mat m = g * diag.asDiagonal() * g.inverse();
        const JCDecomposition jc = jordan_chevalley(m);
        CHECK(frob(jc.nil) <= 1e-8 * (1.0 + frob(m)));
        CHECK(frob(jc.s - m) <= 1e-8 * (1.0 + frob(m)));
    }
}

TEST_CASE("jordan_chevalley handles a strictly upper triangular matrix") {
    Mat m = Mat::Zero(4, 4);
    m(0, 1) = 1.0;
    m(1, 2) = -2.0;
    m(2, 3) = 0.5;
    m(0, 3) = 3.0;
    const JCDecomposition jc = jordan_chevalley(m);
    CHECK(frob(jc.s) <= 1e-10);
    CHECK(frob(jc.nil - m) <= 1e-10);
}

TEST_CASE("jordan_chevalley parts commute and sum to the input") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = rng.uniform_int(2, 5);
        Mat m = rng.matrix(d, d, -2.0, 2.0);
        // Mix in a defective-looking block some of the time.
        if (trial % 2 == 0) {
            m.setZero();
            for (int i = 0; i + 1 < d; ++i) m(i, i + 1) = 1.0;
            m += rng.uniform(0.5, 1.5) * Mat::Identity(d, d);
        }
        const JCDecomposition jc = jordan_chevalley(m);
        CHECK(frob(jc.s + jc.nil - m) <= 1e-9 * (1.0 + frob(m)));
        CHECK(frob(jc.s * jc.nil - jc.nil * jc.s) <= 1e-8 * (1.0 + frob(m) * frob(m)));
        Mat npow = jc.nil;
        for (int k = 1; k < d; ++k) npow = (npow * jc.nil).eval();
        CHECK(frob(npow) <= 1e-8 * std::pow(1.0 + frob(m), d));
    }
}

TEST_CASE("null_space returns an orthonormal kernel basis") {
    Mat m(2, 3);
    m << 1.0, 0.0, 1.0,
         0.0, 1.0, -1.0;
    const Mat k = null_space(m);
    REQUIRE(k.cols() == 1);
    CHECK(frob(m * k) <= 1e-12);
    CHECK(std::abs(k.col(0).norm() - 1.0) <= 1e-12);

    CHECK(null_space(Mat::Identity(3, 3)).cols() == 0);
    CHECK(null_space(Mat::Zero(3, 3)).cols() == 3);
}

TEST_CASE("orthonormal_matrix_span drops dependent generators") {
    Mat a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, -1.0;
    b << 0.0, 1.0, 1.0, 0.0;
    const std::vector<Mat> gens = {a, b, (2.0 * a - 3.0 * b).eval()};
    const std::vector<Mat> basis = orthonormal_matrix_span(gens);
    REQUIRE(basis.size() == 2);
    for (const Mat& e : basis) CHECK(std::abs(frob(e) - 1.0) <= 1e-12);
    // The span is preserved: each generator projects onto the basis exactly.
    for (const Mat& g : gens) {
        Mat proj = Mat::Zero(2, 2);
        for (const Mat& e : basis) proj += (g.array() * e.array()).sum() * e;
        CHECK(frob(proj - g) <= 1e-12 * (1.0 + frob(g)));
    }
}

TEST_CASE("orthonormalize_with_form produces a form-orthonormal set") {
    Rng rng(42);
    const int d = 5;
    Mat g = rng.symmetric(d, -0.2, 0.2) + 2.0 * Mat::Identity(d, d);
    const Mat basis = rng.matrix(d, 3, -1.0, 1.0);
    const Mat q = orthonormalize_with_form(basis, g);
    const Mat gramm = q.transpose() * g * q;
    CHECK(frob(gramm - Mat::Identity(3, 3)) <= 1e-10);
}

