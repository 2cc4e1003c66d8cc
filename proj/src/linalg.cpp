#include "pwlab/linalg.hpp"

#include "pwlab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace pwlab {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

} // namespace

Mat expm(const Mat& m) {
    if (m.rows() != m.cols()) throw validation_error("expm: matrix must be square");
    if (!all_finite(m)) throw validation_error("expm: non-finite entries");
    const Eigen::Index d = m.rows();

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    }
    if (squarings > 100) {
        throw validation_error("expm: norm " + fmt(norm1) +
                               " too large; the scaled result would overflow");
    }

    const Mat a = m / std::ldexp(1.0, squarings);

    // Horner evaluation of the order-16 Taylor polynomial of exp at a.
    constexpr int order = 16;
    Mat result = Mat::Identity(d, d);
    for (int k = order; k >= 1; --k) {
        result = Mat::Identity(d, d) + (a * result) / static_cast<double>(k);
    }
    for (int k = 0; k < squarings; ++k) result = (result * result).eval();

    if (!all_finite(result)) throw invariant_error("expm: overflow while squaring");
    return result;
}

SymEig sym_eig(const Mat& s, double tol) {
    if (s.rows() != s.cols()) throw validation_error("sym_eig: matrix must be square");
    if (!all_finite(s)) throw validation_error("sym_eig: non-finite entries");
    const double asym = frob(s - s.transpose());
    if (asym > tol * (1.0 + frob(s))) {
        throw validation_error("sym_eig: asymmetry residual " + fmt(asym) +
                               " exceeds tolerance " + fmt(tol * (1.0 + frob(s))));
    }
    const Eigen::Index d = s.rows();
    Mat a = (s + s.transpose()) / 2.0;
    Mat q = Mat::Identity(d, d);

    const double target = 1e-14 * std::max(frob(a), 1e-300);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < d; ++p)
            for (Eigen::Index r = p + 1; r < d; ++r) off += a(p, r) * a(p, r);
        off = std::sqrt(2.0 * off);
        if (off < target) break;

        for (Eigen::Index p = 0; p < d; ++p) {
            for (Eigen::Index r = p + 1; r < d; ++r) {
                const double apq = a(p, r);
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (a(r, r) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                // Apply the rotation on both sides and accumulate into q.
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, r);
                    a(k, p) = c * akp - sn * akq;
                    a(k, r) = sn * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(r, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(r, k) = sn * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < d; ++k) {
                    const double qkp = q(k, p), qkq = q(k, r);
                    q(k, p) = c * qkp - sn * qkq;
                    q(k, r) = sn * qkp + c * qkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i) < a(j, j);
    });

    SymEig out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        out.values(k) = a(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = q.col(perm[static_cast<std::size_t>(k)]);
    }
    return out;
}

SpectralClustering spectral_clusters(const Mat& m, double tol) {
    if (m.rows() != m.cols()) throw validation_error("spectral_clusters: matrix must be square");
    if (!all_finite(m)) throw validation_error("spectral_clusters: non-finite entries");
    const Eigen::Index d = m.rows();
    const double scale = std::max(frob(m), 1e-300);

    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw invariant_error("spectral_clusters: eigenvalue iteration failed");
    }
    const CVec lam = es.eigenvalues();

    // The radius must exceed the splatter of computed eigenvalues at defective
    // points, which grows like eps^(1/k) for a size-k Jordan block.
    const double radius = scale * std::max(100.0 * tol, 1e-4);

    std::vector<int> parent(static_cast<std::size_t>(d));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    auto unite = [&](int i, int j) { parent[static_cast<std::size_t>(find(i))] = find(j); };

    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(lam(i) - lam(j)) <= radius) unite(i, j);

    std::vector<std::vector<int>> groups;
    std::vector<int> root_of(static_cast<std::size_t>(d), -1);
    for (int i = 0; i < d; ++i) {
        const int r = find(i);
        if (root_of[static_cast<std::size_t>(r)] < 0) {
            root_of[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(root_of[static_cast<std::size_t>(r)])].push_back(i);
    }

    SpectralClustering out;
    out.radius = radius;
    for (const auto& g : groups) {
        std::complex<double> mean{0.0, 0.0};
        double diameter = 0.0;
        for (int i : g) mean += lam(i);
        mean /= static_cast<double>(g.size());
        for (int i : g)
            for (int j : g) diameter = std::max(diameter, std::abs(lam(i) - lam(j)));
        if (diameter > 6.0 * radius) {
            throw validation_error("spectral_clusters: cluster of diameter " + fmt(diameter) +
                                   " chained through radius " + fmt(radius) +
                                   "; spectrum too smeared to decide");
        }
        // A cluster straddling the real axis represents a real spectral point.
        if (std::abs(mean.imag()) <= radius) mean = {mean.real(), 0.0};
        out.clusters.push_back({mean, static_cast<int>(g.size())});
    }

    // Symmetrize conjugate pairs so the cluster polynomial has real
    // coefficients: pair each cluster with positive imaginary mean to its
    // mirror and average.
    for (auto& c : out.clusters) {
        if (c.mean.imag() <= 0.0) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < out.clusters.size(); ++k) {
            const auto& o = out.clusters[k];
            if (o.mean.imag() >= 0.0) continue;
            const double dist = std::abs(o.mean - std::conj(c.mean));
            if (dist < best_d) {
                best_d = dist;
                best = static_cast<int>(k);
            }
        }
        if (best < 0 || best_d > 2.0 * radius) {
            throw invariant_error("spectral_clusters: complex cluster without a conjugate partner");
        }
        auto& o = out.clusters[static_cast<std::size_t>(best)];
        const std::complex<double> sym = (c.mean + std::conj(o.mean)) / 2.0;
        c.mean = sym;
        o.mean = std::conj(sym);
    }

    // Ambiguity: distinct cluster means too close to each other.
    for (std::size_t i = 0; i < out.clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < out.clusters.size(); ++j) {
            const double gap = std::abs(out.clusters[i].mean - out.clusters[j].mean);
            if (gap < 3.0 * radius) {
                throw validation_error(
                    "spectral_clusters: cluster means separated by " + fmt(gap) +
                    " with clustering radius " + fmt(radius) +
                    "; too close to distinguish, refusing to guess");
            }
        }
    }
    return out;
}

namespace {

// Real coefficients of the square-free polynomial with the cluster means as
// roots (one linear factor per real cluster, one quadratic per conjugate
// pair), lowest degree first.
std::vector<double> cluster_polynomial(const SpectralClustering& sc) {
    std::vector<double> p{1.0};
    auto mul = [&p](const std::vector<double>& f) {
        std::vector<double> r(p.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) r[i + j] += p[i] * f[j];
        p = std::move(r);
    };
    for (const auto& c : sc.clusters) {
        if (c.mean.imag() == 0.0) {
            mul({-c.mean.real(), 1.0});
        } else if (c.mean.imag() > 0.0) {
            mul({std::norm(c.mean), -2.0 * c.mean.real(), 1.0});
        }
    }
    return p;
}

Mat poly_eval(const std::vector<double>& p, const Mat& x) {
    const Eigen::Index d = x.rows();
    Mat r = Mat::Zero(d, d);
    for (std::size_t k = p.size(); k-- > 0;) {
        r = (x * r).eval();
        r.diagonal().array() += p[k];
    }
    return r;
}

std::vector<double> poly_derivative(const std::vector<double>& p) {
    std::vector<double> d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<double>(k) * p[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

} // namespace

JCDecomposition jordan_chevalley(const Mat& m, double tol) {
    if (m.rows() != m.cols()) throw validation_error("jordan_chevalley: matrix must be square");
    const Eigen::Index d = m.rows();
    const double scale = frob(m);

    JCDecomposition out;
    if (scale < 1e-300) {
        out.s = Mat::Zero(d, d);
        out.nil = Mat::Zero(d, d);
        out.spectrum.radius = 0.0;
        out.spectrum.clusters = {{std::complex<double>{0.0, 0.0}, static_cast<int>(d)}};
        return out;
    }

    out.spectrum = spectral_clusters(m, tol);

    // If every cluster is a single eigenvalue, the matrix is diagonalizable
    // within resolution and is its own semisimple part.
    const bool all_simple = std::all_of(out.spectrum.clusters.begin(), out.spectrum.clusters.end(),
                                        [](const SpectralCluster& c) { return c.size == 1; });
    if (all_simple) {
        out.s = m;
        out.nil = Mat::Zero(d, d);
        return out;
    }

    const std::vector<double> p = cluster_polynomial(out.spectrum);
    const std::vector<double> dp = poly_derivative(p);

    // Newton iteration toward the root of p nearest the input. Every iterate
    // is a polynomial in m, so the limit commutes with m automatically.
    Mat x = m;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
        const Mat px = poly_eval(p, x);
        const double pres = frob(px);
        const double ref = std::max(1.0, std::pow(std::max(1.0, frob(x)), static_cast<double>(p.size() - 1)));
        if (pres <= 1e-14 * ref) {
            converged = true;
            break;
        }
        const Mat dpx = poly_eval(dp, x);
        Eigen::PartialPivLU<Mat> lu(dpx);
        const Mat step = lu.solve(px);
        if (!step.allFinite()) {
            throw invariant_error("jordan_chevalley: Newton step is singular");
        }
        x -= step;
        if (frob(x) > 1e6 * std::max(1.0, scale)) {
            throw invariant_error("jordan_chevalley: Newton iteration diverged");
        }
        if (frob(step) <= 1e-16 * std::max(1.0, frob(x))) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        const double pres = frob(poly_eval(p, x));
        const double ref = std::max(1.0, std::pow(std::max(1.0, frob(x)), static_cast<double>(p.size() - 1)));
        if (pres > 1e-10 * ref) {
            throw invariant_error("jordan_chevalley: Newton iteration did not converge");
        }
    }

    out.s = x;
    out.nil = m - x;

    // Contract checks: commutation, nilpotency, and moment (trace) matching,
    // which together pin the characteristic polynomial of the semisimple part.
    const double comm = frob(out.s * m - m * out.s);
    if (comm > 1e-8 * std::max(1.0, scale * scale)) {
        throw invariant_error("jordan_chevalley: commutation residual " + fmt(comm));
    }
    Mat nk = out.nil;
    for (Eigen::Index k = 1; k < d && frob(nk) > 0.0; ++k) nk = (nk * out.nil).eval();
    const double nilres = frob(nk) / std::max(1.0, std::pow(std::max(1.0, scale), static_cast<double>(d)));
    if (nilres > 1e-9) {
        throw invariant_error("jordan_chevalley: nilpotency residual " + fmt(nilres));
    }
    Mat mk = Mat::Identity(d, d), sk = Mat::Identity(d, d);
    for (Eigen::Index k = 1; k <= d; ++k) {
        mk = (mk * m).eval();
        sk = (sk * out.s).eval();
        const double mm = mk.trace(), ms = sk.trace();
        if (std::abs(mm - ms) > 1e-6 * std::max(1.0, std::abs(mm))) {
            throw invariant_error("jordan_chevalley: moment mismatch at power " + std::to_string(k));
        }
    }
    return out;
}

Mat null_space(const Mat& a, double rel_tol) {
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double thresh = smax * rel_tol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rank;
    const Eigen::Index nullity = a.cols() - rank;
    return svd.matrixV().rightCols(nullity);
}

std::vector<Mat> orthonormal_matrix_span(const std::vector<Mat>& gens, double rel_tol) {
    if (gens.empty()) return {};
    const Eigen::Index r = gens.front().rows(), c = gens.front().cols();
    Mat stacked(static_cast<Eigen::Index>(gens.size()), r * c);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].rows() != r || gens[i].cols() != c) {
            throw validation_error("orthonormal_matrix_span: inconsistent shapes");
        }
        stacked.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Vec>(gens[i].data(), r * c).transpose();
    }
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::vector<Mat> basis;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > smax * rel_tol && sv(i) > 0.0) {
            Vec v = svd.matrixV().col(i);
            basis.push_back(Eigen::Map<const Mat>(v.data(), r, c));
        }
    }
    return basis;
}

Mat orthonormalize_with_form(const Mat& basis, const Mat& g) {
    Mat out = basis;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        // Two rounds of projection for numerical stability.
        for (int round = 0; round < 2; ++round) {
            for (Eigen::Index k = 0; k < j; ++k) {
                const double proj = out.col(k).dot(g * out.col(j));
                out.col(j) -= proj * out.col(k);
            }
        }
        const double nn = out.col(j).dot(g * out.col(j));
        if (nn <= 1e-12) {
            throw invariant_error("orthonormalize_with_form: form degenerates on subspace");
        }
        out.col(j) /= std::sqrt(nn);
    }
    return out;
}

} // namespace pwlab
