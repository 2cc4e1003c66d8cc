#include "pwlab/cw.hpp"

#include "pwlab/errors.hpp"
#include "pwlab/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace pwlab {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void require_symmetric(const Mat& b) {
    if (b.rows() != b.cols() || b.rows() < 1) {
        throw validation_error("profile matrix must be square and non-empty");
    }
    if (!b.allFinite()) {
        throw validation_error("profile matrix must have finite entries");
    }
    if (frob((b - b.transpose()).eval()) >= 1e-12 * (1.0 + frob(b))) {
        throw validation_error("profile matrix must be symmetric");
    }
}

struct EigenCluster {
    double mean = 0.0;
    std::vector<int> members; // column indices into the eigenvector matrix
};

// Group the ascending eigenvalues whenever the gap to the previous value is
// within the radius; near-degenerate values are treated as one spectral point.
std::vector<EigenCluster> cluster_spectrum(const Vec& values, double radius) {
    std::vector<EigenCluster> clusters;
    for (int i = 0; i < values.size(); ++i) {
        if (clusters.empty() ||
            values(i) - values(clusters.back().members.back()) > radius) {
            clusters.push_back({});
        }
        clusters.back().members.push_back(i);
    }
    for (EigenCluster& c : clusters) {
        double sum = 0.0;
        for (int i : c.members) sum += values(i);
        c.mean = sum / static_cast<double>(c.members.size());
    }
    return clusters;
}

void verify_witness(const Mat& b, const Mat& a, const Mat& c) {
    const double scale = 1.0 + frob(b);
    if (frob((b + a * a + c * c).eval()) > 1e-9 * scale) {
        throw invariant_error("decomposition witness fails to reconstruct the profile");
    }
    if (frob((a * c).eval()) > 1e-9 * scale) {
        throw invariant_error("decomposition witness violates image orthogonality");
    }
}

// ----- randomized search machinery -------------------------------------

struct Packing {
    int n = 0;
    int dim_a = 0; // n(n+1)/2 symmetric entries
    int dim_c = 0; // n(n-1)/2 skew entries

    explicit Packing(int nn)
        : n(nn), dim_a(nn * (nn + 1) / 2), dim_c(nn * (nn - 1) / 2) {}

    int size() const { return dim_a + dim_c; }

    void unpack(const Vec& theta, Mat& a, Mat& c) const {
        a.setZero(n, n);
        c.setZero(n, n);
        int k = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                a(i, j) = a(j, i) = theta(k++);
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                c(i, j) = theta(k);
                c(j, i) = -theta(k);
                ++k;
            }
        }
    }
};

Vec residual_vector(const Mat& b, const Packing& pack, const Vec& theta) {
    Mat a, c;
    pack.unpack(theta, a, c);
    const Mat gap = b + a * a + c * c;
    const Mat ortho = a * c;
    const int n = pack.n;
    Vec r(2 * n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            r(i * n + j) = gap(i, j);
            r(n * n + i * n + j) = ortho(i, j);
        }
    }
    return r;
}

// Damped Gauss-Newton on the stacked residual, finite-difference Jacobian.
double polish(const Mat& b, const Packing& pack, Vec& theta) {
    const int m = pack.size();
    Vec r = residual_vector(b, pack, theta);
    double obj = r.squaredNorm();
    double mu = 1e-3;
    const double target = 1e-24 * (1.0 + frob(b)) * (1.0 + frob(b));
    for (int iter = 0; iter < 80 && obj > target && mu < 1e12; ++iter) {
        Mat jac(r.size(), m);
        for (int j = 0; j < m; ++j) {
            const double h = 1e-6 * (1.0 + std::abs(theta(j)));
            Vec tp = theta, tm = theta;
            tp(j) += h;
            tm(j) -= h;
            jac.col(j) = (residual_vector(b, pack, tp) -
                          residual_vector(b, pack, tm)) /
                         (2.0 * h);
        }
        const Mat jtj = jac.transpose() * jac;
        const Vec jtr = jac.transpose() * r;
        bool accepted = false;
        for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
            const Mat damped = jtj + mu * Mat::Identity(m, m);
            const Vec step = damped.ldlt().solve(-jtr);
            const Vec trial = theta + step;
            const Vec rt = residual_vector(b, pack, trial);
            const double ot = rt.squaredNorm();
            if (ot < obj) {
                theta = trial;
                r = rt;
                obj = ot;
                mu = std::max(mu * 0.5, 1e-12);
                accepted = true;
            } else {
                mu *= 4.0;
            }
        }
        if (!accepted) break;
    }
    return obj;
}

} // namespace

DecisionWitness cw_left_invariant(const Mat& b, double tol) {
    require_symmetric(b);
    const int n = static_cast<int>(b.rows());
    const SymEig eig = sym_eig(b);
    const double radius = 1e-8 * (1.0 + frob(b));
    const double positive_cut = std::max(tol, radius);
    const std::vector<EigenCluster> clusters = cluster_spectrum(eig.values, radius);

    DecisionWitness out;
    for (const EigenCluster& c : clusters) {
        if (c.mean > positive_cut && c.members.size() % 2 != 0) {
            out.yes = false;
            out.certificate = "positive eigenvalue " + fmt(c.mean) +
                              " has odd multiplicity " +
                              std::to_string(c.members.size());
            return out;
        }
    }

    Mat a = Mat::Zero(n, n);
    Mat c = Mat::Zero(n, n);
    for (const EigenCluster& cl : clusters) {
        if (cl.mean > positive_cut) {
            const double w = std::sqrt(cl.mean);
            for (std::size_t s = 0; s + 1 < cl.members.size(); s += 2) {
                const Vec va = eig.vectors.col(cl.members[s]);
                const Vec vb = eig.vectors.col(cl.members[s + 1]);
                c += w * (va * vb.transpose() - vb * va.transpose());
            }
        } else {
            const double w = std::sqrt(std::max(0.0, -cl.mean));
            for (int idx : cl.members) {
                const Vec v = eig.vectors.col(idx);
                a += w * (v * v.transpose());
            }
        }
    }
    verify_witness(b, a, c);
    out.yes = true;
    out.A = a;
    out.C = c;
    out.certificate = "every positive eigenvalue has even multiplicity; "
                      "witness reconstructs the profile";
    return out;
}

DecisionWitness cw_bi_invariant(const Mat& b, double tol) {
    require_symmetric(b);
    const int n = static_cast<int>(b.rows());
    const SymEig eig = sym_eig(b);
    DecisionWitness out;
    const double top = eig.values(n - 1);
    if (top > tol) {
        out.yes = false;
        out.certificate =
            "largest eigenvalue " + fmt(top) + " is positive beyond tolerance " +
            fmt(tol);
        return out;
    }
    Mat c = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const Vec v = eig.vectors.col(i);
        c += std::sqrt(std::max(0.0, -eig.values(i))) * (v * v.transpose());
    }
    if (frob((b + c * c).eval()) > 1e-9 * (1.0 + frob(b))) {
        throw invariant_error("square-root witness fails to reconstruct the profile");
    }
    out.yes = true;
    out.C = c;
    out.certificate = "all eigenvalues nonpositive; symmetric square root attached";
    return out;
}

BracketCheck cw_lie_group_bracket_check(const Mat& l) {
    if (l.rows() != l.cols() || l.rows() < 1 || !l.allFinite()) {
        throw validation_error("bracket matrix must be square, non-empty and finite");
    }
    const Mat ls = 0.5 * (l + l.transpose());
    const Mat lsk = 0.5 * (l - l.transpose());
    BracketCheck out;
    out.residual = frob((lsk * ls + ls * lsk).eval());
    out.holds = out.residual <= 1e-10 * (1.0 + frob(l) * frob(l));
    out.B = (lsk * ls - ls * lsk) - lsk * lsk - ls * ls;
    return out;
}

PlaneWaveSpec derivation_to_planewave(const DerivationData& data) {
    if (data.K || data.T) {
        throw validation_error(
            "group-type derivation data carries only (lambda, omega, L, c0); "
            "K and T must be absent");
    }
    const NormalizedFrame nf = normalize_frame(data);
    PlaneWaveSpec spec;
    spec.kind = nf.lambda == 0.0 ? PlaneWaveKind::a : PlaneWaveKind::b;
    spec.n = data.n();
    spec.F = nf.F;
    spec.B = nf.B;
    spec.validate();
    return spec;
}

SearchResult cw_search_decomposition(const Mat& b, std::uint64_t seed, int draws) {
    require_symmetric(b);
    if (draws < 1) throw validation_error("draw count must be positive");
    const int n = static_cast<int>(b.rows());
    const Packing pack(n);
    const double span = std::sqrt(1.0 + frob(b));
    Rng rng(seed);

    // Keep the best few random draws, then polish each.
    constexpr int kKeep = 30;
    std::vector<std::pair<double, Vec>> best;
    best.reserve(kKeep);
    for (int d = 0; d < draws; ++d) {
        Vec theta(pack.size());
        for (int j = 0; j < theta.size(); ++j) theta(j) = rng.uniform(-span, span);
        const double obj = residual_vector(b, pack, theta).squaredNorm();
        if (static_cast<int>(best.size()) < kKeep) {
            best.push_back({obj, theta});
        } else {
            auto worst = std::max_element(
                best.begin(), best.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
            if (obj < worst->first) *worst = {obj, theta};
        }
    }

    SearchResult out;
    double champion = std::numeric_limits<double>::infinity();
    Vec champion_theta;
    for (auto& [obj0, theta] : best) {
        const double obj = polish(b, pack, theta);
        if (obj < champion) {
            champion = obj;
            champion_theta = theta;
        }
    }
    Mat a, c;
    pack.unpack(champion_theta, a, c);
    out.A = a;
    out.C = c;
    out.residual = std::sqrt(champion);
    out.found = out.residual <= 1e-7 * (1.0 + frob(b));
    return out;
}

} // namespace pwlab
