#include "pwlab/verify.hpp"

#include "pwlab/cw.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/liestruct.hpp"
#include "pwlab/linalg.hpp"
#include "pwlab/lorentz.hpp"
#include "pwlab/minkowski.hpp"
#include "pwlab/planewave.hpp"
#include "pwlab/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace pwlab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    return base * 1000003ULL + salt;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

Vec unit(int dim, int i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

PlaneWaveSpec random_spec(Rng& rng, int n_lo, int n_hi) {
    PlaneWaveSpec spec;
    spec.kind = rng.uniform_int(0, 1) == 0 ? PlaneWaveKind::a : PlaneWaveKind::b;
    spec.n = rng.uniform_int(n_lo, n_hi);
    spec.B = rng.symmetric(spec.n, -2.0, 2.0);
    spec.F = rng.skew(spec.n, -2.0, 2.0);
    return spec;
}

SpacetimePoint random_point(Rng& rng, const PlaneWaveSpec& spec, double x_box,
                            double u_lo_b, double u_hi) {
    SpacetimePoint pt;
    pt.v = rng.uniform(-1.0, 1.0);
    pt.x = rng.vector(spec.n, -x_box, x_box);
    pt.u = spec.kind == PlaneWaveKind::a ? rng.uniform(-u_hi, u_hi)
                                         : rng.uniform(u_lo_b, u_hi);
    return pt;
}

// Shared corpus for the two finite-difference checks so "all suite specs"
// means the same list in both.
std::vector<PlaneWaveSpec> oracle_corpus(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 2));
    std::vector<PlaneWaveSpec> specs;
    specs.reserve(50);
    for (int t = 0; t < 50; ++t) specs.push_back(random_spec(rng, 1, 4));
    return specs;
}

double max_abs_diff(const Curvature4& a, const Curvature4& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.comp.size(); ++i)
        worst = std::max(worst, std::abs(a.comp[i] - b.comp[i]));
    return worst;
}

double bianchi_residual(const Curvature4& r) {
    double worst = 0.0;
    const int d = r.dim;
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    worst = std::max(
                        worst, std::abs(r.at(l, k, i, j) + r.at(l, i, j, k) + r.at(l, j, k, i)));
    return worst;
}

// Projection of a square matrix onto the orthogonal algebra of `gram`
// (gram is symmetric and involutive for the null-pair pairing).
Mat project_so(const Mat& x, const Mat& gram) {
    return 0.5 * (x - gram * x.transpose() * gram);
}

// Group-compatible data: L = lambda/2 id + H omega keeps the forced skew
// part of T at zero, so T = 0 is admissible and the bracket on V closes.
DerivationData group_instance(Rng& rng, int n, double lambda) {
    DerivationData d;
    d.lambda = lambda;
    d.omega = rng.skew(n, -1.5, 1.5);
    const Mat h = rng.symmetric(n, -1.0, 1.0);
    d.L = (0.5 * lambda * Mat::Identity(n, n) + h * d.omega).eval();
    return d;
}

} // namespace

// ---------------------------------------------------------------------------
// 1. Symmetry algebras close: Jacobi residual on random specs.
// ---------------------------------------------------------------------------
CheckResult check_symmetry_algebra_jacobi(std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    res.name = "01-symmetry-algebra-jacobi";

    Rng rng(mix_seed(seed, 1));
    double worst_isom = 0.0;
    double worst_conf = 0.0;
    int nonflat = 0;
    bool dims_ok = true;
    for (int t = 0; t < 100; ++t) {
        const PlaneWaveSpec spec = random_spec(rng, 1, 6);
        const LieAlgebraData isom = build_isom(spec);
        worst_isom = std::max(worst_isom, isom.jacobi);
        if (!is_conformally_flat(spec)) {
            ++nonflat;
            const LieAlgebraData conf = build_conf(spec);
            worst_conf = std::max(worst_conf, conf.jacobi);
            dims_ok = dims_ok && conf.dim == isom.dim + 1;
        }
    }
    const double elapsed = seconds_since(t0);

    res.residuals = {{"isometry-jacobi-worst", worst_isom, 1e-12},
                     {"conformal-jacobi-worst", worst_conf, 1e-12},
                     {"runtime-seconds", elapsed, 10.0}};
    const bool enough = nonflat >= 50;
    res.pass = worst_isom < 1e-12 && worst_conf < 1e-12 && dims_ok && enough &&
               elapsed < 10.0;
    res.detail = "100 random specs (n in 1..6, both kinds): worst isometry Jacobi " +
                 fmt(worst_isom) + "; " + std::to_string(nonflat) +
                 " non-flat specs (need >= 50): worst conformal Jacobi " + fmt(worst_conf) +
                 ", dim(conf) = dim(isom)+1 " + (dims_ok ? "in all" : "VIOLATED") + "; " +
                 fmt(elapsed) + " s (limit 10)";
    return res;
}

// ---------------------------------------------------------------------------
// 2. Curvature agreement: finite differences vs closed form, plus the first
//    Bianchi identity on the finite-difference tensor.
// ---------------------------------------------------------------------------
CheckResult check_curvature_oracle_agreement(std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    res.name = "02-curvature-oracle-agreement";

    const std::vector<PlaneWaveSpec> specs = oracle_corpus(seed);
    Rng rng(mix_seed(seed, 3));
    double worst_rel = 0.0;
    double worst_bianchi = 0.0;
    for (const PlaneWaveSpec& spec : specs) {
        for (int k = 0; k < 5; ++k) {
            const SpacetimePoint pt = random_point(rng, spec, 1.5, 0.2, 1.5);
            const Curvature4 fd = curvature_fd(spec, pt, 1e-4, true);
            const Curvature4 closed = curvature_closed(spec, pt.u).r;
            const double rel =
                max_abs_diff(fd, closed) / std::max(closed.max_abs(), 1e-3);
            worst_rel = std::max(worst_rel, rel);
            worst_bianchi = std::max(worst_bianchi, bianchi_residual(fd));
        }
    }
    const double elapsed = seconds_since(t0);

    res.residuals = {{"curvature-relative-gap-worst", worst_rel, 1e-5},
                     {"bianchi-worst", worst_bianchi, 1e-6},
                     {"runtime-seconds", elapsed, 30.0}};
    res.pass = worst_rel < 1e-5 && worst_bianchi < 1e-6 && elapsed < 30.0;
    res.detail = "50 specs (n in 1..4) x 5 points: worst relative gap " + fmt(worst_rel) +
                 ", worst Bianchi residual " + fmt(worst_bianchi) + "; " + fmt(elapsed) +
                 " s (limit 30)";
    return res;
}

// ---------------------------------------------------------------------------
// 3. Curvature is parallel along wave fronts, and demonstrably not along the
//    remaining direction.
// ---------------------------------------------------------------------------
CheckResult check_wavefront_parallel_curvature(std::uint64_t seed) {
    CheckResult res;
    res.name = "03-wavefront-parallel-curvature";

    const std::vector<PlaneWaveSpec> specs = oracle_corpus(seed);
    Rng rng(mix_seed(seed, 4));
    double worst_front = 0.0;
    for (const PlaneWaveSpec& spec : specs) {
        const SpacetimePoint pt = random_point(rng, spec, 1.0, 0.3, 1.2);
        const ParallelismReport rep = planewave_condition_check(spec, pt);
        worst_front = std::max(worst_front, rep.wavefront_residual);
    }

    // Control: a profile that genuinely rotates, so the curvature visibly
    // changes along the remaining coordinate direction.
    PlaneWaveSpec control;
    control.kind = PlaneWaveKind::a;
    control.n = 2;
    control.B = Mat::Zero(2, 2);
    control.B(0, 0) = 1.0;
    control.F = Mat::Zero(2, 2);
    control.F(0, 1) = 1.0;
    control.F(1, 0) = -1.0;
    SpacetimePoint cpt;
    cpt.v = 0.1;
    cpt.x = Vec::Zero(2);
    cpt.x(0) = 0.5;
    cpt.x(1) = -0.4;
    cpt.u = 0.3;
    const ParallelismReport control_rep = planewave_condition_check(control, cpt);

    res.residuals = {{"wavefront-derivative-worst", worst_front, 1e-5}};
    res.pass = worst_front < 1e-5 && control_rep.u_residual > 1e-3;
    res.detail = "50 suite specs: worst wave-front covariant derivative " + fmt(worst_front) +
                 "; rotating control's u-derivative " + fmt(control_rep.u_residual) +
                 " (must exceed 1e-03)";
    return res;
}

// ---------------------------------------------------------------------------
// 4. Conformal flatness holds exactly for scalar profiles and fails visibly
//    for a generic one.
// ---------------------------------------------------------------------------
CheckResult check_conformal_flatness() {
    CheckResult res;
    res.name = "04-conformal-flatness";

    double worst_scalar = 0.0;
    bool scalar_flags = true;
    const std::array<double, 2> betas = {0.8, -1.3};
    for (int idx = 0; idx < 2; ++idx) {
        const int n = idx + 2;
        PlaneWaveSpec spec;
        spec.kind = PlaneWaveKind::a;
        spec.n = n;
        spec.B = betas[static_cast<std::size_t>(idx)] * Mat::Identity(n, n);
        spec.F = Mat::Zero(n, n);
        if (n == 2) {
            spec.F(0, 1) = 0.7;
            spec.F(1, 0) = -0.7;
        } else {
            spec.F(0, 1) = 0.5;
            spec.F(1, 0) = -0.5;
            spec.F(0, 2) = -0.3;
            spec.F(2, 0) = 0.3;
            spec.F(1, 2) = 0.9;
            spec.F(2, 1) = -0.9;
        }
        scalar_flags = scalar_flags && is_conformally_flat(spec);
        for (const double u : {-1.0, 0.0, 1.0, 2.0})
            worst_scalar = std::max(worst_scalar, frob(weyl_closed(spec, u).profile));
    }

    PlaneWaveSpec generic;
    generic.kind = PlaneWaveKind::a;
    generic.n = 2;
    generic.B = Mat::Zero(2, 2);
    generic.B(0, 0) = 1.0;
    generic.B(1, 1) = 2.0;
    generic.F = Mat::Zero(2, 2);
    const bool generic_flag = is_conformally_flat(generic);
    const double generic_weyl = frob(weyl_closed(generic, 0.0).profile);

    res.residuals = {{"scalar-weyl-worst", worst_scalar, 1e-9}};
    res.pass = scalar_flags && worst_scalar < 1e-9 && !generic_flag && generic_weyl > 1e-3;
    res.detail = std::string("scalar profiles flagged flat with worst conformal curvature ") +
                 fmt(worst_scalar) + " over u in {-1,0,1,2}; diag(1,2) flagged " +
                 (generic_flag ? "flat (WRONG)" : "non-flat") + " with conformal curvature " +
                 fmt(generic_weyl) + " (must exceed 1e-03)";
    return res;
}

// ---------------------------------------------------------------------------
// 5. The scaling maps are homotheties: pullback = lambda^2 * metric.
// ---------------------------------------------------------------------------
CheckResult check_homothety_pullback(std::uint64_t seed) {
    CheckResult res;
    res.name = "05-homothety-pullback";

    Rng rng(mix_seed(seed, 5));
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const PlaneWaveSpec spec = random_spec(rng, 1, 4);
        for (const double lambda : {0.5, 2.0, 3.0}) {
            for (int k = 0; k < 5; ++k) {
                const SpacetimePoint pt = random_point(rng, spec, 1.0, 0.2, 2.0);
                const Mat pulled = homothety_pullback(spec, lambda, pt);
                const Mat scaled = (lambda * lambda) * metric_at(spec, pt);
                worst = std::max(worst,
                                 (pulled - scaled).cwiseAbs().maxCoeff());
            }
        }
    }

    res.residuals = {{"pullback-gap-worst", worst, 1e-12}};
    res.pass = worst < 1e-12;
    res.detail = "10 random specs x {1/2, 2, 3} x 5 points: worst |pullback - lambda^2 g| = " +
                 fmt(worst);
    return res;
}

// ---------------------------------------------------------------------------
// 6. The half-space family rewrites conformally as the global family.
// ---------------------------------------------------------------------------
CheckResult check_kind_b_to_a_conversion(std::uint64_t seed) {
    CheckResult res;
    res.name = "06-kind-b-to-a-conversion";

    Rng rng(mix_seed(seed, 6));
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        PlaneWaveSpec spec_b = random_spec(rng, 1, 4);
        spec_b.kind = PlaneWaveKind::b;
        const ConversionResult conv = convert_b_to_a(spec_b);
        for (int k = 0; k < 20; ++k) {
            SpacetimePoint pt;
            pt.v = rng.uniform(-1.0, 1.0);
            pt.x = rng.vector(spec_b.n, -1.0, 1.0);
            pt.u = rng.uniform(std::log(0.15), std::log(4.0));
            const Mat j = conversion_jacobian(pt);
            const SpacetimePoint image = conversion_map(pt);
            const Mat lhs = j.transpose() * metric_at(spec_b, image) * j;
            const Mat rhs = std::exp(pt.u) * metric_at(conv.a_spec, pt);
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }

    res.residuals = {{"conversion-gap-worst", worst, 1e-8}};
    res.pass = worst < 1e-8;
    res.detail = "10 random half-space specs x 20 points: worst |pullback - e^u g| = " +
                 fmt(worst);
    return res;
}

// ---------------------------------------------------------------------------
// 7. Classification is conjugation-invariant: kind and spectral value survive
//    1000 random conjugations of the three normal forms.
// ---------------------------------------------------------------------------
CheckResult check_classification_round_trip(std::uint64_t seed) {
    CheckResult res;
    res.name = "07-classification-round-trip";

    struct Combo {
        CanonicalKind kind;
        int n;
        Mat rep;
        double base_a;
    };
    std::vector<Combo> combos;
    for (const int n : {2, 3, 4}) {
        const MinkowskiFrame frame(n);
        const int d = n + 2;
        const Vec p = unit(d, 0);
        const Vec q = unit(d, d - 1);
        const Vec e1 = unit(d, 1);
        const Vec e2 = unit(d, 2);

        Mat elliptic = 0.9 * bivector_matrix(e1, e2, frame);
        if (n >= 4) elliptic += 0.35 * bivector_matrix(unit(d, 3), unit(d, 4), frame);
        Mat hyperbolic = 1.3 * bivector_matrix(p, q, frame) + 0.7 * bivector_matrix(e1, e2, frame);
        Mat parabolic = bivector_matrix(p, e1, frame);
        if (n >= 3) parabolic += 0.4 * bivector_matrix(e2, unit(d, 3), frame);

        for (const Mat& rep : {elliptic, hyperbolic, parabolic}) {
            const CanonicalForm base = classify(rep, frame);
            combos.push_back({base.kind, n, rep, base.a});
        }
    }

    Rng rng(mix_seed(seed, 7));
    int kind_mismatches = 0;
    double worst_a = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Combo& combo = combos[static_cast<std::size_t>(t) % combos.size()];
        const MinkowskiFrame frame(combo.n);
        const int d = combo.n + 2;
        Mat s = project_so(rng.matrix(d, d, -1.0, 1.0), frame.gram);
        const double norm = frob(s);
        if (norm > 1.5) s *= 1.5 / norm;
        const Mat g = expm(s);
        const Mat ginv = expm((-s).eval());
        const Mat conj = g * combo.rep * ginv;

        const CanonicalForm cf = classify(conj, frame);
        if (cf.kind != combo.kind) ++kind_mismatches;
        worst_a = std::max(worst_a, std::abs(cf.a - combo.base_a));
    }

    res.residuals = {{"spectral-value-gap-worst", worst_a, 1e-8}};
    res.pass = kind_mismatches == 0 && worst_a < 1e-8;
    res.detail = "1000 conjugations of 9 normal forms (3 kinds x n in {2,3,4}): " +
                 std::to_string(kind_mismatches) + " kind mismatches; worst spectral-value gap " +
                 fmt(worst_a);
    return res;
}

// ---------------------------------------------------------------------------
// 8. Group-structure decisions: witness reconstruction, agreement with the
//    randomized search oracle, and the eigenvalue sign rule.
// ---------------------------------------------------------------------------
CheckResult check_group_structure_decisions(std::uint64_t seed) {
    CheckResult res;
    res.name = "08-group-structure-decisions";

    Rng rng(mix_seed(seed, 8));
    int instances = 0;
    int yes_count = 0;
    int search_disagreements = 0;
    int sign_disagreements = 0;
    double worst_reconstruction = 0.0;
    double worst_anticommutator = 0.0;

    // Exhaustive eigenvalue patterns for n <= 4 over four classes: negative
    // (random magnitude), zero, and two distinct positive values whose
    // multiplicities decide the answer.
    for (int n = 1; n <= 4; ++n) {
        for (int c_neg = 0; c_neg <= n; ++c_neg) {
            for (int c_zero = 0; c_zero + c_neg <= n; ++c_zero) {
                for (int c_pos1 = 0; c_pos1 + c_zero + c_neg <= n; ++c_pos1) {
                    const int c_pos2 = n - c_neg - c_zero - c_pos1;
                    Vec vals(n);
                    int idx = 0;
                    for (int i = 0; i < c_neg; ++i) vals(idx++) = -rng.uniform(0.4, 2.0);
                    for (int i = 0; i < c_zero; ++i) vals(idx++) = 0.0;
                    for (int i = 0; i < c_pos1; ++i) vals(idx++) = 1.3;
                    for (int i = 0; i < c_pos2; ++i) vals(idx++) = 0.6;

                    Mat s = rng.skew(n, -1.0, 1.0);
                    const double norm = frob(s);
                    if (norm > 1.2) s *= 1.2 / norm;
                    const Mat r = expm(s);
                    const Mat b = (r * vals.asDiagonal() * r.transpose()).eval();
                    const Mat bsym = (0.5 * (b + b.transpose())).eval();
                    ++instances;

                    const DecisionWitness w = cw_left_invariant(bsym);
                    if (w.yes) {
                        ++yes_count;
                        const Mat& a = *w.A;
                        const Mat& c = *w.C;
                        const double scale = 1.0 + frob(bsym);
                        worst_reconstruction =
                            std::max(worst_reconstruction,
                                     frob((bsym + a * a + c * c).eval()) / scale);
                        worst_anticommutator =
                            std::max(worst_anticommutator, frob((a * c).eval()) / scale);
                    }

                    const std::uint64_t inst_seed =
                        mix_seed(seed, 80000 + static_cast<std::uint64_t>(instances));
                    const SearchResult sr = cw_search_decomposition(bsym, inst_seed, 100000);
                    if (sr.found != w.yes) ++search_disagreements;

                    const DecisionWitness bw = cw_bi_invariant(bsym);
                    Eigen::SelfAdjointEigenSolver<Mat> eig(bsym);
                    const bool sign_yes = eig.eigenvalues().maxCoeff() <= 1e-9;
                    if (bw.yes != sign_yes) ++sign_disagreements;
                }
            }
        }
    }

    res.residuals = {{"reconstruction-residual-worst", worst_reconstruction, 1e-9},
                     {"anticommutator-residual-worst", worst_anticommutator, 1e-9}};
    res.pass = search_disagreements == 0 && sign_disagreements == 0 &&
               worst_reconstruction < 1e-9 && worst_anticommutator < 1e-9;
    res.detail = std::to_string(instances) + " spectra (exhaustive patterns, n <= 4): " +
                 std::to_string(yes_count) + " yes-witnesses, worst reconstruction " +
                 fmt(worst_reconstruction) + ", worst A*C " + fmt(worst_anticommutator) +
                 "; search oracle (1e5 draws) disagreements " +
                 std::to_string(search_disagreements) + "; eigenvalue sign-rule disagreements " +
                 std::to_string(sign_disagreements);
    return res;
}

// ---------------------------------------------------------------------------
// 9. First-prolongation dimensions of the three reference linear algebras.
// ---------------------------------------------------------------------------
CheckResult check_prolongation_dimensions() {
    CheckResult res;
    res.name = "09-prolongation-dimensions";

    bool ok = true;
    std::string dims;
    for (const int n : {1, 2, 3}) {
        const MinkowskiFrame frame(n);
        const int d = n + 2;
        std::vector<Mat> so_basis;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                so_basis.push_back(bivector_matrix(unit(d, a), unit(d, b), frame));
        std::vector<Mat> co_basis = so_basis;
        co_basis.push_back(Mat::Identity(d, d));

        const int co_dim = first_prolongation(co_basis, frame).dimension;
        const int so_dim = first_prolongation(so_basis, frame).dimension;
        const int id_dim =
            first_prolongation({Mat::Identity(d, d)}, frame).dimension;
        ok = ok && co_dim == d && so_dim == 0 && id_dim == 0;
        if (!dims.empty()) dims += ", ";
        dims += "dim V=" + std::to_string(d) + ": similarity " + std::to_string(co_dim) +
                " (want " + std::to_string(d) + "), orthogonal " + std::to_string(so_dim) +
                " (want 0), scalings " + std::to_string(id_dim) + " (want 0)";
    }

    res.pass = ok;
    res.detail = dims;
    return res;
}

// ---------------------------------------------------------------------------
// 10. Pipeline coherence: frame normalization commutes with algebra
//     construction, and the homogeneous-model curvature matches the
//     coordinate curvature of the produced spec.
// ---------------------------------------------------------------------------
CheckResult check_pipeline_coherence(std::uint64_t seed) {
    CheckResult res;
    res.name = "10-pipeline-coherence";

    Rng rng(mix_seed(seed, 10));
    double worst_gap = 0.0;
    const std::array<double, 4> lambdas = {0.0, 1.0, 2.5, -1.3};
    for (int t = 0; t < 50; ++t) {
        const int n = rng.uniform_int(1, 4);
        DerivationData data;
        data.lambda = lambdas[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        data.omega = rng.skew(n, -1.5, 1.5);
        data.L = rng.matrix(n, n, -1.5, 1.5);
        const Mat forced =
            data.omega * data.L + data.L.transpose() * data.omega - data.lambda * data.omega;
        data.T = (rng.symmetric(n, -1.0, 1.0) + 0.5 * forced).eval();
        data.K = (data.lambda * Mat::Identity(n, n) - data.omega - data.L.transpose()).eval();

        const LieAlgebraData raw_alg = derivation_algebra(data);
        const NormalizedFrame nf = normalize_frame(data);
        PlaneWaveSpec spec;
        spec.kind = nf.lambda == 0.0 ? PlaneWaveKind::a : PlaneWaveKind::b;
        spec.n = n;
        spec.F = nf.F;
        spec.B = nf.B;
        const LieAlgebraData isom = build_isom(spec);
        const int m = isom.dim - raw_alg.dim;

        // Null-pair rescale, then the phi frame change.
        const int dim = raw_alg.dim;
        Mat s1 = Mat::Identity(dim, dim);
        s1(0, 0) = 1.0 / nf.scale;
        for (int i = 0; i < n; ++i) s1(1 + i, 1 + i) = nf.scale;
        s1(1 + n, 1 + n) = nf.scale;
        Mat s2 = Mat::Identity(dim, dim);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s2(1 + j, 2 + n + i) = nf.phi(j, i);
        const LieAlgebraData after = change_basis(change_basis(raw_alg, s1), s2);

        // The symmetry algebra contains the transported one as the
        // complement of its centralizer block.
        const auto to_isom = [m](int di) { return di == 0 ? 0 : di + m; };
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                for (int k = 0; k < dim; ++k)
                    worst_gap = std::max(
                        worst_gap, std::abs(after.at(i, j, k) -
                                            isom.at(to_isom(i), to_isom(j), to_isom(k))));
                for (int a = 0; a < m; ++a)
                    worst_gap = std::max(
                        worst_gap, std::abs(isom.at(to_isom(i), to_isom(j), 1 + a)));
            }
        }
    }

    double worst_span = 0.0;
    double worst_profile = 0.0;
    for (int t = 0; t < 30; ++t) {
        const int n = rng.uniform_int(1, 3);
        const MinkowskiFrame frame(n);
        const double lambda = t % 2 == 0 ? 0.0 : 1.0;
        const DerivationData data = group_instance(rng, n, lambda);

        const NomizuMap map = nomizu(data.lambda, data.omega, data.L);
        const NomizuCurvature r = nomizu_curvature(map, data.lambda, data.omega, data.L);
        worst_span = std::max(worst_span, r.span_residual(frame));

        const NormalizedFrame nf = normalize_frame(data);
        PlaneWaveSpec spec;
        spec.kind = lambda == 0.0 ? PlaneWaveKind::a : PlaneWaveKind::b;
        spec.n = n;
        spec.F = nf.F;
        spec.B = nf.B;
        const CurvatureMap closed = curvature_closed(spec, lambda == 0.0 ? 0.0 : 1.0);
        const int d = n + 2;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                if (a == b) continue;
                Mat coord(d, d);
                for (int row = 0; row < d; ++row)
                    for (int col = 0; col < d; ++col)
                        coord(row, col) = closed.r.at(row, col, a, b);
                worst_profile = std::max(worst_profile, frob((coord - r.at(a, b)).eval()));
            }
        }
    }

    res.residuals = {{"structure-constant-gap-worst", worst_gap, 1e-12},
                     {"curvature-span-residual-worst", worst_span, 1e-10},
                     {"curvature-profile-gap-worst", worst_profile, 1e-8}};
    res.pass = worst_gap < 1e-12 && worst_span < 1e-10 && worst_profile < 1e-8;
    res.detail = "50 frame instances: worst structure-constant gap " + fmt(worst_gap) +
                 " after normalization + basis change; 30 group instances: curvature span "
                 "residual " +
                 fmt(worst_span) + ", worst profile gap vs coordinate curvature " +
                 fmt(worst_profile);
    return res;
}

std::vector<CheckResult> run_verification(std::uint64_t seed) {
    std::vector<CheckResult> out;
    const auto timed = [&out](CheckResult r,
                              const std::chrono::steady_clock::time_point& t0) {
        r.wall_ms = seconds_since(t0) * 1000.0;
        out.push_back(std::move(r));
    };
    auto t0 = std::chrono::steady_clock::now();
    timed(check_symmetry_algebra_jacobi(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_curvature_oracle_agreement(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_wavefront_parallel_curvature(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_conformal_flatness(), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_homothety_pullback(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_kind_b_to_a_conversion(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_classification_round_trip(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_group_structure_decisions(seed), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_prolongation_dimensions(), t0);
    t0 = std::chrono::steady_clock::now();
    timed(check_pipeline_coherence(seed), t0);
    return out;
}

} // namespace pwlab
