#include "pwlab/minkowski.hpp"

#include "pwlab/errors.hpp"

#include <cmath>

namespace pwlab {

Mat witt_gram(int n) {
    if (n < 0) throw validation_error("witt_gram: negative dimension");
    const int d = n + 2;
    Mat g = Mat::Zero(d, d);
    g(0, d - 1) = 1.0;
    g(d - 1, 0) = 1.0;
    for (int i = 1; i <= n; ++i) g(i, i) = 1.0;
    return g;
}

MinkowskiFrame::MinkowskiFrame(int n_dim) : n(n_dim), gram(witt_gram(n_dim)) {}

Mat bivector_matrix(const Vec& x, const Vec& y, const MinkowskiFrame& frame) {
    const int d = frame.dim();
    if (x.size() != d || y.size() != d) {
        throw validation_error("bivector_matrix: vectors must have length n+2");
    }
    return y * (frame.gram * x).transpose() - x * (frame.gram * y).transpose();
}

double so_residual(const Mat& m, const Mat& gram) {
    return frob(gram * m + m.transpose() * gram);
}

double co_residual(const Mat& m, const Mat& gram) {
    const double mu = m.trace() / static_cast<double>(m.rows());
    const Mat skew = m - mu * Mat::Identity(m.rows(), m.cols());
    return so_residual(skew, gram);
}

Mat witt_to_orthonormal(int n) {
    const int d = n + 2;
    const double r = 1.0 / std::sqrt(2.0);
    Mat conv = Mat::Zero(d, d);
    // Timelike direction t = (p - q)/sqrt(2), first spacelike f_1 = (p + q)/sqrt(2).
    conv(0, 0) = r;
    conv(d - 1, 0) = -r;
    conv(0, 1) = r;
    conv(d - 1, 1) = r;
    for (int i = 1; i <= n; ++i) conv(i, i + 1) = 1.0;
    return conv;
}

} // namespace pwlab
