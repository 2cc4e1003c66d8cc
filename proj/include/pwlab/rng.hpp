#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace pwlab {

// Deterministic random source. All randomness in the library and CLI flows
// through this class so that a seed fully determines every draw, bit for bit,
// across platforms. std::uniform_real_distribution is avoided on purpose: its
// output is implementation-defined, which would break byte-identical reports.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [a, b), using the top 53 bits of the generator.
    double uniform(double a, double b) {
        const double u01 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u01;
    }

    // Uniform integer in [lo, hi], inclusive. Uses rejection sampling so the
    // result is unbiased and reproducible.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return lo + static_cast<int>(x % span);
    }

    Eigen::MatrixXd matrix(int rows, int cols, double a, double b) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = uniform(a, b);
        return m;
    }

    Eigen::VectorXd vector(int n, double a, double b) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(a, b);
        return v;
    }

    Eigen::MatrixXd symmetric(int n, double a, double b) {
        Eigen::MatrixXd m = matrix(n, n, a, b);
        return ((m + m.transpose()) / 2.0).eval();
    }

    Eigen::MatrixXd skew(int n, double a, double b) {
        Eigen::MatrixXd m = matrix(n, n, a, b);
        return ((m - m.transpose()) / 2.0).eval();
    }

private:
    std::mt19937_64 gen_;
};

} // namespace pwlab
