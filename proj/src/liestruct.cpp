#include "pwlab/liestruct.hpp"

#include "pwlab/errors.hpp"

#include <Eigen/LU>

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

Mat sym_part(const Mat& m) { return 0.5 * (m + m.transpose()); }
Mat skew_part(const Mat& m) { return 0.5 * (m - m.transpose()); }

void require_square(const Mat& m, int n, const std::string& name) {
    if (m.rows() != n || m.cols() != n) {
        throw validation_error(name + " must be " + std::to_string(n) + " x " +
                               std::to_string(n));
    }
    if (!m.allFinite()) {
        throw validation_error(name + " must have finite entries");
    }
}

void require_skew(const Mat& m, const std::string& name) {
    if (frob((m + m.transpose()).eval()) >= 1e-12 * (1.0 + frob(m))) {
        throw validation_error(name + " must be skew-symmetric");
    }
}

// Middle-block embedding of an n x n matrix as an endomorphism of V that
// annihilates the null pair.
Mat embed_e(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    Mat m = Mat::Zero(n + 2, n + 2);
    m.block(1, 1, n, n) = a;
    return m;
}

Vec embed_e_vec(const Vec& x) {
    const int n = static_cast<int>(x.size());
    Vec v = Vec::Zero(n + 2);
    v.segment(1, n) = x;
    return v;
}

} // namespace

LieAlgebraData::LieAlgebraData(std::vector<std::string> names)
    : labels(std::move(names)), dim(static_cast<int>(labels.size())) {
    c.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
}

void LieAlgebraData::set(int i, int j, int k, double value) {
    c[static_cast<std::size_t>((i * dim + j) * dim + k)] = value;
    c[static_cast<std::size_t>((j * dim + i) * dim + k)] = -value;
}

Vec LieAlgebraData::bracket(const Vec& x, const Vec& y) const {
    Vec out = Vec::Zero(dim);
    for (int i = 0; i < dim; ++i) {
        if (x(i) == 0.0) continue;
        for (int j = 0; j < dim; ++j) {
            if (y(j) == 0.0) continue;
            const double w = x(i) * y(j);
            for (int k = 0; k < dim; ++k) out(k) += w * at(i, j, k);
        }
    }
    return out;
}

void LieAlgebraData::finalize() { jacobi = jacobi_residual(*this); }

double jacobi_residual(const LieAlgebraData& alg) {
    const int d = alg.dim;
    double worst = 0.0;
    Vec cyc(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            for (int k = j + 1; k < d; ++k) {
                cyc.setZero();
                for (int m = 0; m < d; ++m) {
                    const double cij = alg.at(i, j, m);
                    const double cjk = alg.at(j, k, m);
                    const double cki = alg.at(k, i, m);
                    if (cij == 0.0 && cjk == 0.0 && cki == 0.0) continue;
                    for (int l = 0; l < d; ++l) {
                        cyc(l) += cij * alg.at(m, k, l) + cjk * alg.at(m, i, l) +
                                  cki * alg.at(m, j, l);
                    }
                }
                worst = std::max(worst, cyc.norm());
            }
        }
    }
    return worst;
}

LieAlgebraData change_basis(const LieAlgebraData& alg, const Mat& s) {
    const int d = alg.dim;
    if (s.rows() != d || s.cols() != d) {
        throw validation_error("change_basis: matrix size does not match the algebra");
    }
    Eigen::PartialPivLU<Mat> lu(s);
    LieAlgebraData out(alg.labels);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const Vec br = lu.solve(alg.bracket(s.col(i), s.col(j)));
            for (int k = 0; k < d; ++k) out.set(i, j, k, br(k));
        }
    }
    out.finalize();
    return out;
}

std::vector<Mat> centralizer_k(const Mat& b, const Mat& f) {
    const int n = static_cast<int>(b.rows());
    require_square(b, n, "B");
    require_square(f, n, "F");
    if (frob((b - b.transpose()).eval()) >= 1e-12 * (1.0 + frob(b))) {
        throw validation_error("centralizer_k: B must be symmetric");
    }
    require_skew(f, "F");

    // Skew basis E_ab (a < b) with unit entries; unknown K = sum coeff E_ab.
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int bcol = a + 1; bcol < n; ++bcol) pairs.push_back({a, bcol});
    const int r = static_cast<int>(pairs.size());
    if (r == 0) return {};

    Mat constraints(2 * n * n, r);
    for (int col = 0; col < r; ++col) {
        Mat e = Mat::Zero(n, n);
        e(pairs[static_cast<std::size_t>(col)].first,
          pairs[static_cast<std::size_t>(col)].second) = 1.0;
        e(pairs[static_cast<std::size_t>(col)].second,
          pairs[static_cast<std::size_t>(col)].first) = -1.0;
        const Mat cb = e * b - b * e;
        const Mat cf = e * f - f * e;
        for (int row = 0; row < n * n; ++row) {
            constraints(row, col) = cb(row / n, row % n);
            constraints(n * n + row, col) = cf(row / n, row % n);
        }
    }
    const Mat kernel = null_space(constraints, 1e-9);
    std::vector<Mat> basis;
    for (Eigen::Index col = 0; col < kernel.cols(); ++col) {
        Mat k = Mat::Zero(n, n);
        for (int idx = 0; idx < r; ++idx) {
            const auto& [a, bcol] = pairs[static_cast<std::size_t>(idx)];
            k(a, bcol) += kernel(idx, col);
            k(bcol, a) -= kernel(idx, col);
        }
        basis.push_back(k / frob(k));
    }
    return basis;
}

LieAlgebraData build_isom(const PlaneWaveSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const double lambda = spec.kind == PlaneWaveKind::a ? 0.0 : 1.0;
    const std::vector<Mat> kbasis = centralizer_k(spec.B, spec.F);
    const int m = static_cast<int>(kbasis.size());

    std::vector<std::string> labels;
    labels.push_back("q");
    for (int a = 0; a < m; ++a) labels.push_back("k_" + std::to_string(a + 1));
    for (int i = 0; i < n; ++i) labels.push_back("pwedge_e_" + std::to_string(i + 1));
    labels.push_back("p");
    for (int i = 0; i < n; ++i) labels.push_back("e_" + std::to_string(i + 1));

    LieAlgebraData alg(labels);
    const int iq = 0;
    auto ik = [&](int a) { return 1 + a; };
    auto ipw = [&](int i) { return 1 + m + i; };
    const int ip = 1 + m + n;
    auto ie = [&](int i) { return 2 + m + n + i; };

    alg.set(iq, ip, ip, lambda);
    const Mat kq = lambda * Mat::Identity(n, n) + spec.F;
    for (int i = 0; i < n; ++i) {
        // [q, pwedge_e_i] = pwedge((lambda + F) e_i) - e_i
        for (int j = 0; j < n; ++j) {
            if (kq(j, i) != 0.0) alg.set(iq, ipw(i), ipw(j), kq(j, i));
        }
        alg.set(iq, ipw(i), ie(i), -1.0);
        // [q, e_i] = pwedge(B e_i) + F e_i
        for (int j = 0; j < n; ++j) {
            if (spec.B(j, i) != 0.0) alg.set(iq, ie(i), ipw(j), spec.B(j, i));
            if (spec.F(j, i) != 0.0) alg.set(iq, ie(i), ie(j), spec.F(j, i));
        }
        // [pwedge_e_i, e_j] = -delta_ij p
        alg.set(ipw(i), ie(i), ip, -1.0);
    }
    for (int a = 0; a < m; ++a) {
        const Mat& k = kbasis[static_cast<std::size_t>(a)];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (k(j, i) != 0.0) {
                    alg.set(ik(a), ipw(i), ipw(j), k(j, i));
                    alg.set(ik(a), ie(i), ie(j), k(j, i));
                }
            }
        }
        for (int b = a + 1; b < m; ++b) {
            const Mat comm = k * kbasis[static_cast<std::size_t>(b)] -
                             kbasis[static_cast<std::size_t>(b)] * k;
            Mat rebuilt = Mat::Zero(n, n);
            for (int g = 0; g < m; ++g) {
                const double coeff =
                    (comm.array() * kbasis[static_cast<std::size_t>(g)].array()).sum();
                if (coeff != 0.0) alg.set(ik(a), ik(b), ik(g), coeff);
                rebuilt += coeff * kbasis[static_cast<std::size_t>(g)];
            }
            if (frob((comm - rebuilt).eval()) > 1e-10 * (1.0 + frob(comm))) {
                throw invariant_error(
                    "build_isom: centralizer is not closed under the commutator");
            }
        }
    }
    alg.finalize();
    return alg;
}

LieAlgebraData build_conf(const PlaneWaveSpec& spec) {
    spec.validate();
    if (is_conformally_flat(spec)) {
        throw validation_error(
            "build_conf: the profile is a multiple of the identity (conformally flat); "
            "the one-dimensional extension is defined only for non-scalar profiles");
    }
    const LieAlgebraData isom = build_isom(spec);
    std::vector<std::string> labels;
    labels.push_back("D");
    labels.insert(labels.end(), isom.labels.begin(), isom.labels.end());
    LieAlgebraData alg(labels);
    for (int i = 0; i < isom.dim; ++i) {
        for (int j = i + 1; j < isom.dim; ++j) {
            for (int k = 0; k < isom.dim; ++k) {
                const double v = isom.at(i, j, k);
                if (v != 0.0) alg.set(i + 1, j + 1, k + 1, v);
            }
        }
    }
    // Grading weights: q and the centralizer have weight 0, pwedge_E and E
    // weight 1, p weight 2.
    for (int i = 0; i < isom.dim; ++i) {
        const std::string& name = isom.labels[static_cast<std::size_t>(i)];
        double weight = 0.0;
        if (name == "p") {
            weight = 2.0;
        } else if (name.rfind("pwedge_", 0) == 0 || name.rfind("e_", 0) == 0) {
            weight = 1.0;
        }
        if (weight != 0.0) alg.set(0, i + 1, i + 1, weight);
    }
    alg.finalize();
    return alg;
}

void validate_derivation(const DerivationData& data, double tol) {
    const int n = data.n();
    if (n < 1) throw validation_error("derivation data: L must be at least 1 x 1");
    require_square(data.L, n, "L");
    require_square(data.omega, n, "omega");
    require_skew(data.omega, "omega");
    if (!std::isfinite(data.lambda)) throw validation_error("lambda must be finite");
    if (data.c0.size() != 0) {
        require_square(data.c0, n, "c0");
        require_skew(data.c0, "c0");
        const double scale = 1.0 + frob(data.c0) * (frob(data.L) + frob(data.omega));
        if (frob((data.c0 * data.L - data.L * data.c0).eval()) > tol * scale) {
            throw validation_error("derivation data: c0 must commute with L");
        }
        if (frob((data.c0 * data.omega - data.omega * data.c0).eval()) > tol * scale) {
            throw validation_error("derivation data: c0 must commute with omega");
        }
    }
    if (data.K) require_square(*data.K, n, "K");
    if (data.T) require_square(*data.T, n, "T");

    const Mat id = Mat::Identity(n, n);
    const Mat k = data.K ? *data.K
                         : (data.lambda * id - data.omega - data.L.transpose()).eval();
    const Mat t = data.T ? *data.T : Mat::Zero(n, n);
    const double scale =
        1.0 + frob(data.L) + frob(data.omega) + std::abs(data.lambda) + frob(k) + frob(t);

    const Mat k_gap = k - (data.lambda * id - data.omega - data.L.transpose());
    if (frob(k_gap) > tol * scale) {
        throw validation_error(
            "derivation data: jacobi(q, pwedge_e_i, e_j) fails; K differs from "
            "lambda*id - omega - L^T by " + fmt(frob(k_gap)));
    }
    const Mat t_gap = (t - t.transpose()) -
                      (data.omega * data.L + data.L.transpose() * data.omega -
                       data.lambda * data.omega);
    if (frob(t_gap) > tol * scale) {
        throw validation_error(
            "derivation data: jacobi(q, e_i, e_j) fails; the skew part of T differs "
            "from omega*L + L^T*omega - lambda*omega by " + fmt(frob(t_gap)));
    }
}

LieAlgebraData derivation_algebra(const DerivationData& data, double tol) {
    validate_derivation(data, tol);
    const int n = data.n();
    const Mat id = Mat::Identity(n, n);
    const Mat k = data.K ? *data.K
                         : (data.lambda * id - data.omega - data.L.transpose()).eval();
    const Mat t = data.T ? *data.T : Mat::Zero(n, n);

    std::vector<std::string> labels;
    labels.push_back("q");
    for (int i = 0; i < n; ++i) labels.push_back("pwedge_e_" + std::to_string(i + 1));
    labels.push_back("p");
    for (int i = 0; i < n; ++i) labels.push_back("e_" + std::to_string(i + 1));

    LieAlgebraData alg(labels);
    const int iq = 0;
    auto ipw = [&](int i) { return 1 + i; };
    const int ip = 1 + n;
    auto ie = [&](int i) { return 2 + n + i; };

    alg.set(iq, ip, ip, data.lambda);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (k(j, i) != 0.0) alg.set(iq, ipw(i), ipw(j), k(j, i));
            if (t(j, i) != 0.0) alg.set(iq, ie(i), ipw(j), t(j, i));
            if (data.L(j, i) != 0.0) alg.set(iq, ie(i), ie(j), data.L(j, i));
        }
        alg.set(iq, ipw(i), ie(i), -1.0);
        alg.set(ipw(i), ie(i), ip, -1.0);
        for (int j = i + 1; j < n; ++j) {
            // omega(e_i, e_j) = (Omega e_i, e_j)
            const double w = data.omega(j, i);
            if (w != 0.0) alg.set(ie(i), ie(j), ip, w);
        }
    }
    alg.finalize();
    return alg;
}

NormalizedFrame normalize_frame(const DerivationData& raw, double tol) {
    validate_derivation(raw, tol);
    const int n = raw.n();
    const Mat id = Mat::Identity(n, n);

    NormalizedFrame out;
    out.scale = 1.0;
    double lambda = raw.lambda;
    Mat omega = raw.omega;
    Mat l = raw.L;
    Mat k = raw.K ? *raw.K : (lambda * id - omega - l.transpose()).eval();
    Mat t = raw.T ? *raw.T : Mat::Zero(n, n);

    // Record the worst input-constraint residual before any rescaling.
    {
        const double scale =
            1.0 + frob(l) + frob(omega) + std::abs(lambda) + frob(k) + frob(t);
        const double r1 = frob((k - (lambda * id - omega - l.transpose())).eval());
        const double r2 = frob(((t - t.transpose()) -
                                (omega * l + l.transpose() * omega - lambda * omega))
                                   .eval());
        out.residual = std::max(r1, r2) / scale;
    }

    if (lambda != 0.0) {
        if (std::abs(lambda) < 1e-6) {
            throw validation_error(
                "normalize_frame: lambda = " + fmt(lambda) +
                " is too close to zero to rescale into {0,1} reliably");
        }
        // Null-pair rescaling p -> lambda p, q -> q/lambda.
        out.scale = lambda;
        omega /= lambda;
        l /= lambda;
        k /= lambda;
        t /= (lambda * lambda);
        lambda = 1.0;
    }
    out.lambda = lambda;

    const Mat ls = sym_part(l);
    const Mat lsk = skew_part(l);
    out.phi = ls + 0.5 * omega;
    out.F = lsk - 0.5 * omega;
    out.B = lambda * ls + (lsk * ls - ls * lsk) - 0.25 * omega * omega - ls * ls +
            0.5 * (ls * omega - omega * ls) + sym_part(t);

    // Cross-check against direct transport of the bracket data through the
    // frame change e_i -> e_i + pwedge(phi e_i).
    const Mat& phi = out.phi;
    const Mat omega_new = omega - (phi - phi.transpose());
    const Mat l_new = l - phi;
    const Mat t_new = t + k * phi - phi * (l - phi);
    const double scale = 1.0 + frob(l) + frob(omega) + frob(k) + frob(t);
    if (frob(omega_new) > 1e-9 * scale) {
        throw invariant_error("normalize_frame: omega fails to vanish after the frame "
                              "change; residual " + fmt(frob(omega_new)));
    }
    if (frob((l_new - out.F).eval()) > 1e-9 * scale) {
        throw invariant_error("normalize_frame: transported L disagrees with F");
    }
    if (frob((t_new - t_new.transpose()).eval()) > 1e-9 * scale) {
        throw invariant_error("normalize_frame: transported T is not symmetric");
    }
    if (frob((sym_part(t_new) - out.B).eval()) > 1e-9 * scale * (1.0 + scale)) {
        throw invariant_error("normalize_frame: transported T disagrees with the closed "
                              "form for B");
    }

    // The normalized data must itself satisfy the bracket constraints and
    // close into a Lie algebra.
    DerivationData normalized;
    normalized.lambda = lambda;
    normalized.omega = Mat::Zero(n, n);
    normalized.L = out.F;
    normalized.K = (lambda * id + out.F).eval();
    normalized.T = out.B;
    const LieAlgebraData check = derivation_algebra(normalized, 1e-8);
    if (check.jacobi > 1e-10 * (1.0 + scale * scale)) {
        throw invariant_error("normalize_frame: normalized brackets violate the Jacobi "
                              "identity; residual " + fmt(check.jacobi));
    }
    return out;
}

NomizuMap nomizu(double lambda, const Mat& omega, const Mat& l) {
    const int n = static_cast<int>(l.rows());
    require_square(l, n, "L");
    require_square(omega, n, "omega");
    require_skew(omega, "omega");
    if (!std::isfinite(lambda)) throw validation_error("lambda must be finite");

    const MinkowskiFrame frame(n);
    const int d = frame.dim();
    Vec pvec = Vec::Zero(d), qvec = Vec::Zero(d);
    pvec(0) = 1.0;
    qvec(d - 1) = 1.0;

    NomizuMap map;
    map.n = n;
    map.lambda_p = Mat::Zero(d, d);
    const Mat s = omega + l + l.transpose();
    for (int i = 0; i < n; ++i) {
        const Vec w = embed_e_vec(s.col(i));
        map.lambda_e.push_back(-0.5 * bivector_matrix(pvec, w, frame));
    }
    map.lambda_q = lambda * bivector_matrix(qvec, pvec, frame) +
                   embed_e(skew_part(l) - 0.5 * omega);

    if (so_residual(map.lambda_q, frame.gram) > 1e-12 * (1.0 + frob(map.lambda_q))) {
        throw invariant_error("nomizu: image of q leaves the orthogonal algebra");
    }
    for (const Mat& m : map.lambda_e) {
        if (so_residual(m, frame.gram) > 1e-12 * (1.0 + frob(m))) {
            throw invariant_error("nomizu: image of a spacelike direction leaves the "
                                  "orthogonal algebra");
        }
    }
    return map;
}

NomizuCurvature nomizu_curvature(const NomizuMap& map, double lambda, const Mat& omega,
                                 const Mat& l) {
    const int n = map.n;
    require_square(l, n, "L");
    require_square(omega, n, "omega");
    const int d = n + 2;
    if (static_cast<int>(map.lambda_e.size()) != n) {
        throw validation_error("nomizu_curvature: map does not match the bracket data");
    }

    auto lambda_of = [&](const Vec& w) {
        Mat m = w(0) * map.lambda_p;
        for (int i = 0; i < n; ++i) m += w(i + 1) * map.lambda_e[static_cast<std::size_t>(i)];
        m += w(d - 1) * map.lambda_q;
        return m;
    };
    auto lambda_at = [&](int idx) -> const Mat& {
        if (idx == 0) return map.lambda_p;
        if (idx == d - 1) return map.lambda_q;
        return map.lambda_e[static_cast<std::size_t>(idx - 1)];
    };
    // Algebra structure on V: [q, e_i] = L e_i, [e_i, e_j] = omega(e_i,e_j) p,
    // [q, p] = lambda p, everything else zero.  Callers pass a < b.
    auto bracket_v = [&](int a, int b) {
        Vec w = Vec::Zero(d);
        if (a == 0 && b == d - 1) {
            w(0) = -lambda; // [p, q] = -lambda p
        } else if (a >= 1 && a <= n && b >= 1 && b <= n) {
            w(0) = omega(b - 1, a - 1); // (Omega e_a, e_b)
        } else if (a >= 1 && a <= n && b == d - 1) {
            w.segment(1, n) = -l.col(a - 1); // [e_a, q] = -L e_a
        }
        return w;
    };

    NomizuCurvature out;
    out.d = d;
    out.values.assign(static_cast<std::size_t>(d) * d, Mat::Zero(d, d));
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            const Mat& la = lambda_at(a);
            const Mat& lb = lambda_at(b);
            const Mat value = -((la * lb - lb * la).eval() - lambda_of(bracket_v(a, b)));
            out.values[static_cast<std::size_t>(a * d + b)] = value;
            out.values[static_cast<std::size_t>(b * d + a)] = -value;
        }
    }
    return out;
}

double NomizuCurvature::span_residual(const MinkowskiFrame& frame) const {
    const int n = frame.n;
    Vec pvec = Vec::Zero(d);
    pvec(0) = 1.0;
    double worst = 0.0;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            const Mat& m = at(a, b);
            Mat rebuilt = Mat::Zero(d, d);
            for (int i = 0; i < n; ++i) {
                Vec ei = Vec::Zero(d);
                ei(i + 1) = 1.0;
                // coefficient of pwedge_e_i read from the (e_i, q) entry
                rebuilt += m(i + 1, d - 1) * bivector_matrix(pvec, ei, frame);
            }
            worst = std::max(worst, frob((m - rebuilt).eval()));
        }
    }
    return worst;
}

Prolongation first_prolongation(const std::vector<Mat>& g0, const MinkowskiFrame& frame) {
    if (g0.empty()) {
        throw validation_error("first_prolongation: empty generator list");
    }
    const int d = frame.dim();
    for (const Mat& g : g0) {
        if (g.rows() != d || g.cols() != d) {
            throw validation_error("first_prolongation: generator size does not match "
                                   "the frame");
        }
        if (co_residual(g, frame.gram) > 1e-8 * (1.0 + frob(g))) {
            throw validation_error("first_prolongation: a generator is not in the "
                                   "conformal algebra (scalar + skew)");
        }
    }
    const std::vector<Mat> basis = orthonormal_matrix_span(g0);
    const int r = static_cast<int>(basis.size());

    // Unknowns coeff[alpha*d + i] for phi(e_i) = sum_alpha coeff * A_alpha;
    // equations phi(e_i) e_j - phi(e_j) e_i = 0 for i < j.
    const int pairs = d * (d - 1) / 2;
    Mat system = Mat::Zero(pairs * d, r * d);
    int row0 = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            for (int alpha = 0; alpha < r; ++alpha) {
                const Vec aej = basis[static_cast<std::size_t>(alpha)].col(j);
                const Vec aei = basis[static_cast<std::size_t>(alpha)].col(i);
                for (int row = 0; row < d; ++row) {
                    system(row0 + row, alpha * d + i) += aej(row);
                    system(row0 + row, alpha * d + j) -= aei(row);
                }
            }
            row0 += d;
        }
    }
    const Mat kernel = null_space(system, 1e-9);
    Prolongation out;
    out.dimension = static_cast<int>(kernel.cols());
    for (Eigen::Index col = 0; col < kernel.cols(); ++col) {
        std::vector<Mat> images;
        for (int i = 0; i < d; ++i) {
            Mat phi_i = Mat::Zero(d, d);
            for (int alpha = 0; alpha < r; ++alpha) {
                phi_i += kernel(alpha * d + i, col) * basis[static_cast<std::size_t>(alpha)];
            }
            images.push_back(phi_i);
        }
        out.basis.push_back(std::move(images));
    }
    return out;
}

} // namespace pwlab
