// pwlab: command-line front end.  Every subcommand reads JSON files, writes a
// deterministic JSON run report to stdout (the only data channel), and prints
// a human-readable residual table with wall-clock timing to stderr.
//
// Exit codes: 0 success; 1 internal invariant violation (including a report
// whose own checks fail); 2 input validation failure, with a machine-readable
// error object on stdout; 64 usage errors.

#include "pwlab/cw.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/json_io.hpp"
#include "pwlab/liestruct.hpp"
#include "pwlab/lorentz.hpp"
#include "pwlab/minkowski.hpp"
#include "pwlab/planewave.hpp"
#include "pwlab/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace pwlab;

struct CliContext {
    std::string command;
    Json inputs = Json::object();
    std::vector<ResidualEntry> residuals;
    bool pass = true;
};

// --tol wins over the PWLAB_TOL environment variable, which wins over the
// operation's built-in default.
double effective_tol(const std::optional<double>& cli_tol, double builtin_default) {
    if (cli_tol) {
        if (*cli_tol <= 0.0) throw validation_error("--tol must be positive");
        return *cli_tol;
    }
    if (const char* env = std::getenv("PWLAB_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0)) {
            throw validation_error("PWLAB_TOL must be a positive number, got '" +
                                   std::string(env) + "'");
        }
        return v;
    }
    return builtin_default;
}

std::string register_input(CliContext& ctx, const std::string& flag, const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    ctx.inputs[flag] = Json{{"path", path}, {"fnv1a", fnv1a_digest(bytes)}};
    return bytes;
}

PlaneWaveSpec load_spec_input(CliContext& ctx, const std::string& path) {
    return spec_from_json(parse_json_text(register_input(ctx, "spec", path), path));
}

Mat load_matrix_input(CliContext& ctx, const std::string& flag, const std::string& path) {
    return matrix_from_json(parse_json_text(register_input(ctx, flag, path), path), flag);
}

DerivationData load_derivation_input(CliContext& ctx, const std::string& path) {
    return derivation_from_json(parse_json_text(register_input(ctx, "data", path), path));
}

std::vector<Mat> load_basis_input(CliContext& ctx, const std::string& path) {
    const Json j = parse_json_text(register_input(ctx, "basis", path), path);
    if (!j.is_array() || j.empty()) {
        throw validation_error("basis file must be a nonempty JSON array of matrices");
    }
    std::vector<Mat> out;
    for (std::size_t s = 0; s < j.size(); ++s) {
        out.push_back(matrix_from_json(j[s], "basis[" + std::to_string(s) + "]"));
    }
    for (const Mat& m : out) {
        if (m.rows() != m.cols() || m.rows() != out.front().rows()) {
            throw validation_error("basis matrices must all be square of one size");
        }
    }
    if (out.front().rows() < 3) {
        throw validation_error("basis matrices must have size n+2 >= 3");
    }
    return out;
}

// "v,x1,...,xn,u" with exactly n+2 comma-separated numbers.
SpacetimePoint parse_point(const std::string& text, int n) {
    std::vector<double> vals;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        char* end = nullptr;
        const double v = std::strtod(piece.c_str(), &end);
        if (end == piece.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw validation_error("--point: '" + piece + "' is not a finite number");
        }
        vals.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(vals.size()) != n + 2) {
        throw validation_error("--point needs v,x1..xn,u = " + std::to_string(n + 2) +
                               " numbers, got " + std::to_string(vals.size()));
    }
    SpacetimePoint pt;
    pt.v = vals.front();
    pt.x = Vec(n);
    for (int i = 0; i < n; ++i) pt.x(i) = vals[static_cast<std::size_t>(i) + 1];
    pt.u = vals.back();
    return pt;
}

// Generic off-origin point inside both coordinate domains.
SpacetimePoint default_point(const PlaneWaveSpec& spec) {
    SpacetimePoint pt;
    pt.v = 0.1;
    pt.x = Vec(spec.n);
    for (int i = 0; i < spec.n; ++i) pt.x(i) = 0.3 + 0.1 * i;
    pt.u = spec.kind == PlaneWaveKind::a ? 0.25 : 0.7;
    return pt;
}

Json point_to_json(const SpacetimePoint& pt) {
    return Json{{"v", pt.v}, {"x", vector_to_json(pt.x)}, {"u", pt.u}};
}

double max_abs_gap(const Curvature4& a, const Curvature4& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.comp.size(); ++i)
        worst = std::max(worst, std::abs(a.comp[i] - b.comp[i]));
    return worst;
}

// Timing and measured-runtime rows change between runs, so they stay out of
// the deterministic stdout payload; stderr carries the full table.
bool deterministic_entry(const ResidualEntry& e) { return e.name != "runtime-seconds"; }

void emit_report(const CliContext& ctx, const Json& output, double wall_ms) {
    Json residuals = Json::array();
    for (const ResidualEntry& e : ctx.residuals) {
        if (deterministic_entry(e))
            residuals.push_back(
                Json{{"name", e.name}, {"value", e.value}, {"tolerance", e.tolerance}});
    }
    const Json report{{"command", ctx.command},
                      {"inputs", ctx.inputs},
                      {"output", output},
                      {"residuals", residuals},
                      {"pass", ctx.pass}};
    std::fputs(dump_deterministic(report).c_str(), stdout);

    std::fprintf(stderr, "pwlab %s: %s (%.1f ms)\n", ctx.command.c_str(),
                 ctx.pass ? "pass" : "FAIL", wall_ms);
    for (const ResidualEntry& e : ctx.residuals)
        std::fprintf(stderr, "  %-36s %10.3e  (tolerance %.3e)\n", e.name.c_str(), e.value,
                     e.tolerance);
}

// ---------------------------------------------------------------------------
// Subcommand bodies.  Each returns the "output" object and records residuals.
// ---------------------------------------------------------------------------

Json run_metric(CliContext& ctx, const std::string& spec_path, const std::string& point) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    const SpacetimePoint pt = point.empty() ? default_point(spec) : parse_point(point, spec.n);
    const Mat g = metric_at(spec, pt);
    const double sym = frob((g - g.transpose()).eval()) / (1.0 + frob(g));
    ctx.residuals.push_back({"metric-symmetry", sym, 1e-12});
    ctx.pass = sym <= 1e-12;
    return Json{{"point", point_to_json(pt)}, {"metric", matrix_to_json(g)}};
}

Json run_curvature(CliContext& ctx, const std::string& spec_path, std::optional<double> u,
                   const std::string& point, bool weyl) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    std::optional<SpacetimePoint> pt;
    if (!point.empty()) pt = parse_point(point, spec.n);
    const double u_eval = pt ? pt->u
                             : u.value_or(spec.kind == PlaneWaveKind::a ? 0.0 : 1.0);

    const CurvatureMap cm = weyl ? weyl_closed(spec, u_eval) : curvature_closed(spec, u_eval);
    Json out{{"u", u_eval},
             {"profile", matrix_to_json(cm.profile)},
             {"curvature", curvature_to_json(cm.r)}};

    if (weyl) {
        const double tr = std::abs(cm.profile.trace()) / (1.0 + frob(cm.profile));
        ctx.residuals.push_back({"profile-trace", tr, 1e-12});
        ctx.pass = ctx.pass && tr <= 1e-12;
    } else if (pt) {
        // A point requests the metric-sampling cross-check of the closed form.
        const Curvature4 fd = curvature_fd(spec, *pt, 1e-4, true);
        const double rel = max_abs_gap(fd, cm.r) / std::max(cm.r.max_abs(), 1e-3);
        ctx.residuals.push_back({"curvature-oracle-gap", rel, 1e-5});
        ctx.pass = ctx.pass && rel <= 1e-5;
        out["fd_checked_at"] = point_to_json(*pt);
    }
    return out;
}

Json run_check_planewave(CliContext& ctx, const std::string& spec_path,
                         const std::string& point, const std::optional<double>& tol) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    const SpacetimePoint pt = point.empty() ? default_point(spec) : parse_point(point, spec.n);
    const double t = effective_tol(tol, 1e-5);
    const ParallelismReport rep = planewave_condition_check(spec, pt);
    ctx.residuals.push_back({"wavefront-derivative", rep.wavefront_residual, t});
    ctx.pass = rep.wavefront_residual <= t;
    return Json{{"point", point_to_json(pt)},
                {"plane_wave", ctx.pass},
                {"wavefront_residual", rep.wavefront_residual},
                {"u_residual", rep.u_residual}};
}

Json run_check_confflat(CliContext& ctx, const std::string& spec_path,
                        const std::optional<double>& tol) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    const double t = effective_tol(tol, 1e-9);
    return Json{{"conformally_flat", is_conformally_flat(spec, t)}};
}

Json run_convert_ba(CliContext& ctx, const std::string& spec_path) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    const ConversionResult conv = convert_b_to_a(spec);

    // Spot-check the realizing map at five deterministic points.
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        SpacetimePoint pt;
        pt.v = 0.1 * k - 0.2;
        pt.x = Vec(spec.n);
        for (int i = 0; i < spec.n; ++i)
            pt.x(i) = (i % 2 == 0 ? 1.0 : -1.0) * (0.2 + 0.05 * (i + k));
        pt.u = -0.5 + 0.3 * k;
        const Mat j = conversion_jacobian(pt);
        const SpacetimePoint image = conversion_map(pt);
        const Mat lhs = j.transpose() * metric_at(spec, image) * j;
        const Mat rhs = std::exp(pt.u) * metric_at(conv.a_spec, pt);
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    ctx.residuals.push_back({"conversion-gap-worst", worst, 1e-8});
    ctx.pass = worst <= 1e-8;
    return Json{{"a_spec", spec_to_json(conv.a_spec)},
                {"conformal_factor", conv.conformal_factor}};
}

Json run_homothety(CliContext& ctx, const std::string& spec_path, double lambda,
                   const std::string& point) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    if (lambda == 0.0) throw validation_error("--lambda must be nonzero");
    const SpacetimePoint pt = point.empty() ? default_point(spec) : parse_point(point, spec.n);
    const Mat pulled = homothety_pullback(spec, lambda, pt);
    const Mat scaled = (lambda * lambda) * metric_at(spec, pt);
    const double gap = (pulled - scaled).cwiseAbs().maxCoeff();
    ctx.residuals.push_back({"homothety-gap", gap, 1e-12});
    ctx.pass = gap <= 1e-12;
    return Json{{"lambda", lambda},
                {"point", point_to_json(pt)},
                {"pullback", matrix_to_json(pulled)},
                {"scaled_metric", matrix_to_json(scaled)}};
}

Json run_classify(CliContext& ctx, const std::string& matrix_path, int n,
                  const std::optional<double>& tol) {
    if (n < 1) throw validation_error("--n must be at least 1");
    const Mat c = load_matrix_input(ctx, "matrix", matrix_path);
    if (c.rows() != n + 2 || c.cols() != n + 2) {
        throw validation_error("--matrix must be (n+2)x(n+2) = " + std::to_string(n + 2) +
                               "x" + std::to_string(n + 2) + ", got " +
                               std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
    }
    const MinkowskiFrame frame(n);
    const CanonicalForm form = classify(c, frame, effective_tol(tol, 1e-9));
    ctx.residuals.push_back({"reconstruction-residual", form.residual, 1e-8});
    ctx.pass = form.residual <= 1e-8;
    return canonical_to_json(form);
}

Json run_algebra(CliContext& ctx, const std::string& spec_path, bool conformal) {
    const PlaneWaveSpec spec = load_spec_input(ctx, spec_path);
    const LieAlgebraData alg = conformal ? build_conf(spec) : build_isom(spec);
    ctx.residuals.push_back({"jacobi-residual", alg.jacobi, 1e-12});
    ctx.pass = alg.jacobi <= 1e-12;
    return algebra_to_json(alg);
}

Json run_normalize(CliContext& ctx, const std::string& data_path,
                   const std::optional<double>& tol) {
    const DerivationData data = load_derivation_input(ctx, data_path);
    const double t = effective_tol(tol, 1e-10);
    const NormalizedFrame nf = normalize_frame(data, t);
    ctx.residuals.push_back({"input-constraint-residual", nf.residual, t});
    return normalized_to_json(nf);
}

Json run_prolong(CliContext& ctx, const std::string& basis_path) {
    const std::vector<Mat> basis = load_basis_input(ctx, basis_path);
    const int d = static_cast<int>(basis.front().rows());
    const MinkowskiFrame frame(d - 2);
    const Prolongation pro = first_prolongation(basis, frame);

    // Re-verify the defining symmetry of every returned solution.
    double worst = 0.0;
    for (const std::vector<Mat>& sol : pro.basis) {
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                worst = std::max(worst, (sol[static_cast<std::size_t>(i)].col(j) -
                                         sol[static_cast<std::size_t>(j)].col(i))
                                            .cwiseAbs()
                                            .maxCoeff());
    }
    ctx.residuals.push_back({"solution-symmetry-worst", worst, 1e-8});
    ctx.pass = worst <= 1e-8;

    Json solutions = Json::array();
    for (const std::vector<Mat>& sol : pro.basis) {
        Json images = Json::array();
        for (const Mat& m : sol) images.push_back(matrix_to_json(m));
        solutions.push_back(images);
    }
    return Json{{"dimension", pro.dimension}, {"solutions", solutions}};
}

Json run_nomizu(CliContext& ctx, const std::string& data_path) {
    const DerivationData data = load_derivation_input(ctx, data_path);
    if (data.K || data.T) {
        throw validation_error("the connection map is defined by (lambda, omega, L) alone; "
                               "remove K and T from the input");
    }
    // The curvature below is the curvature of a homogeneous model, which only
    // exists when the bracket data closes into a Lie algebra.
    const Mat closure = (data.omega * data.L + data.L.transpose() * data.omega -
                         data.lambda * data.omega)
                            .eval();
    const double closure_norm = frob(closure);
    if (closure_norm > 1e-10 * (1.0 + frob(data.L) * frob(data.omega))) {
        std::ostringstream os;
        os.precision(2);
        os << std::scientific
           << "the bracket data does not close into a Lie algebra: "
              "omega*L + L^T*omega - lambda*omega must vanish, its norm is "
           << closure_norm;
        throw validation_error(os.str());
    }
    const NomizuMap map = nomizu(data.lambda, data.omega, data.L);
    const NomizuCurvature r = nomizu_curvature(map, data.lambda, data.omega, data.L);
    const MinkowskiFrame frame(map.n);
    const double span = r.span_residual(frame);
    ctx.residuals.push_back({"curvature-span-residual", span, 1e-10});
    ctx.pass = span <= 1e-10;

    Json images = Json::array();
    for (const Mat& m : map.lambda_e) images.push_back(matrix_to_json(m));
    Json curvature = Json::array();
    for (int i = 0; i < r.d; ++i)
        for (int j = i + 1; j < r.d; ++j)
            if (frob(r.at(i, j)) > 0.0)
                curvature.push_back(Json::array({i, j, matrix_to_json(r.at(i, j))}));
    return Json{{"n", map.n},
                {"map", Json{{"p", matrix_to_json(map.lambda_p)},
                             {"e", images},
                             {"q", matrix_to_json(map.lambda_q)}}},
                {"curvature_nonzero", curvature},
                {"span_residual", span}};
}

Json run_cw_left(CliContext& ctx, const std::string& b_path, std::uint64_t seed, int draws,
                 const std::optional<double>& tol) {
    const Mat b = load_matrix_input(ctx, "B", b_path);
    const double t = effective_tol(tol, 1e-9);
    const DecisionWitness w = cw_left_invariant(b, t);
    const double scale = 1.0 + frob(b);
    if (w.yes) {
        ctx.residuals.push_back(
            {"reconstruction-residual", frob((b + *w.A * *w.A + *w.C * *w.C).eval()) / scale,
             1e-9});
        ctx.residuals.push_back(
            {"anticommutator-residual", frob((*w.A * *w.C).eval()) / scale, 1e-9});
    }
    if (draws < 1) throw validation_error("--draws must be positive");
    const SearchResult sr = cw_search_decomposition(b, seed, draws);
    const bool agree = sr.found == w.yes;
    ctx.pass = agree;
    for (const ResidualEntry& e : ctx.residuals) ctx.pass = ctx.pass && e.value <= e.tolerance;

    Json out = witness_to_json(w);
    out["search"] = Json{{"found", sr.found},
                         {"residual", sr.residual},
                         {"draws", draws},
                         {"agrees", agree}};
    return out;
}

Json run_cw_bi(CliContext& ctx, const std::string& b_path, const std::optional<double>& tol) {
    const Mat b = load_matrix_input(ctx, "B", b_path);
    const DecisionWitness w = cw_bi_invariant(b, effective_tol(tol, 1e-9));
    if (w.yes) {
        const double scale = 1.0 + frob(b);
        const double rec = frob((b + *w.C * *w.C).eval()) / scale;
        ctx.residuals.push_back({"reconstruction-residual", rec, 1e-9});
        ctx.pass = rec <= 1e-9;
    }
    return witness_to_json(w);
}

Json run_from_derivation(CliContext& ctx, const std::string& data_path) {
    const DerivationData data = load_derivation_input(ctx, data_path);
    const PlaneWaveSpec spec = derivation_to_planewave(data);
    const NormalizedFrame nf = normalize_frame(data);
    ctx.residuals.push_back({"input-constraint-residual", nf.residual, 1e-10});
    return Json{{"spec", spec_to_json(spec)}, {"normalized", normalized_to_json(nf)}};
}

Json run_verify(CliContext& ctx, const std::string& suite, std::uint64_t seed) {
    if (suite != "all") {
        throw validation_error("only the full suite is defined: --suite all");
    }
    const std::vector<CheckResult> results = run_verification(seed);
    Json checks = Json::array();
    for (const CheckResult& r : results) {
        Json entries = Json::array();
        for (const ResidualEntry& e : r.residuals) {
            if (deterministic_entry(e))
                entries.push_back(
                    Json{{"name", e.name}, {"value", e.value}, {"tolerance", e.tolerance}});
        }
        checks.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"residuals", entries}});
        ctx.pass = ctx.pass && r.pass;

        std::fprintf(stderr, "[%s] %s: %s (%.0f ms)\n", r.pass ? "PASS" : "FAIL",
                     r.name.c_str(), r.detail.c_str(), r.wall_ms);
        for (const ResidualEntry& e : r.residuals)
            std::fprintf(stderr, "       %-36s %10.3e  (tolerance %.3e)\n", e.name.c_str(),
                         e.value, e.tolerance);
    }
    return Json{{"seed", seed}, {"checks", checks}, {"pass", ctx.pass}};
}

} // namespace

int main(int argc, char** argv) {
    using namespace pwlab;
    const auto t0 = std::chrono::steady_clock::now();

    CLI::App app{"homogeneous plane-wave geometry and symmetry toolkit"};
    app.require_subcommand(1);

    std::string spec_path, point, matrix_path, data_path, basis_path, b_path;
    std::string suite = "all";
    std::optional<double> tol, u_flag;
    double lambda = 0.0;
    int n = 1;
    int draws = 100000;
    std::uint64_t seed = 0;

    CLI::App* c_metric = app.add_subcommand("metric", "metric matrix at a point");
    c_metric->add_option("--spec", spec_path, "spec JSON file")->required();
    c_metric->add_option("--point", point, "v,x1..xn,u (default: a generic point)");

    CLI::App* c_curv = app.add_subcommand("curvature", "curvature tensor in closed form");
    c_curv->add_option("--spec", spec_path, "spec JSON file")->required();
    c_curv->add_option("--u", u_flag, "evaluation coordinate (default 0 / 1 by kind)");
    c_curv->add_option("--point", point, "also cross-check against metric sampling here");

    CLI::App* c_weyl = app.add_subcommand("weyl", "conformal curvature in closed form");
    c_weyl->add_option("--spec", spec_path, "spec JSON file")->required();
    c_weyl->add_option("--u", u_flag, "evaluation coordinate (default 0 / 1 by kind)");

    CLI::App* c_pw = app.add_subcommand("check-planewave",
                                        "curvature parallel along wave fronts?");
    c_pw->add_option("--spec", spec_path, "spec JSON file")->required();
    c_pw->add_option("--point", point, "v,x1..xn,u (default: a generic point)");
    c_pw->add_option("--tol", tol, "wavefront-derivative bound (default 1e-5)");

    CLI::App* c_flat = app.add_subcommand("check-confflat", "is the spec conformally flat?");
    c_flat->add_option("--spec", spec_path, "spec JSON file")->required();
    c_flat->add_option("--tol", tol, "scalar-profile tolerance (default 1e-9)");

    CLI::App* c_conv = app.add_subcommand("convert-ba",
                                          "rewrite a kind-b spec as conformal to kind a");
    c_conv->add_option("--spec", spec_path, "kind-b spec JSON file")->required();

    CLI::App* c_hom = app.add_subcommand("homothety", "pullback under the scaling map");
    c_hom->add_option("--spec", spec_path, "spec JSON file")->required();
    c_hom->add_option("--lambda", lambda, "scaling factor")->required();
    c_hom->add_option("--point", point, "v,x1..xn,u (default: a generic point)");

    CLI::App* c_cls = app.add_subcommand("classify-element",
                                         "canonical form of a Lorentz-algebra element");
    c_cls->add_option("--matrix", matrix_path, "matrix JSON file, (n+2)x(n+2)")->required();
    c_cls->add_option("--n", n, "Euclidean middle dimension")->required();
    c_cls->add_option("--tol", tol, "classification tolerance (default 1e-9)");

    CLI::App* c_isom = app.add_subcommand("isom", "symmetry algebra of a spec");
    c_isom->add_option("--spec", spec_path, "spec JSON file")->required();

    CLI::App* c_conf = app.add_subcommand("conf",
                                          "conformal symmetry algebra (non-flat specs)");
    c_conf->add_option("--spec", spec_path, "spec JSON file")->required();

    CLI::App* c_norm = app.add_subcommand("normalize", "normalize a derivation presentation");
    c_norm->add_option("--data", data_path, "derivation JSON file")->required();
    c_norm->add_option("--tol", tol, "constraint tolerance (default 1e-10)");

    CLI::App* c_pro = app.add_subcommand("prolong", "first prolongation of a matrix span");
    c_pro->add_option("--basis", basis_path, "JSON array of square matrices")->required();

    CLI::App* c_nom = app.add_subcommand("nomizu", "connection map and its curvature");
    c_nom->add_option("--data", data_path, "derivation JSON file (lambda, omega, L)")
        ->required();

    CLI::App* c_cw = app.add_subcommand("cw", "group-structure decisions for a profile");
    c_cw->require_subcommand(1);
    CLI::App* c_cw_left = c_cw->add_subcommand("left-invariant",
                                               "decide B = -A^2 - C^2 with [A, C] data");
    c_cw_left->add_option("--B", b_path, "symmetric matrix JSON file")->required();
    c_cw_left->add_option("--seed", seed, "search-oracle seed (default 0)");
    c_cw_left->add_option("--draws", draws, "search-oracle draws (default 100000)");
    c_cw_left->add_option("--tol", tol, "spectral tolerance (default 1e-9)");
    CLI::App* c_cw_bi = c_cw->add_subcommand("bi-invariant", "decide B = -C^2");
    c_cw_bi->add_option("--B", b_path, "symmetric matrix JSON file")->required();
    c_cw_bi->add_option("--tol", tol, "eigenvalue tolerance (default 1e-9)");

    CLI::App* c_fd = app.add_subcommand("from-derivation",
                                        "spec of the model attached to group-type data");
    c_fd->add_option("--data", data_path, "derivation JSON file")->required();

    CLI::App* c_ver = app.add_subcommand("verify", "run the verification suite");
    c_ver->add_option("--suite", suite, "which suite to run (only: all)");
    c_ver->add_option("--seed", seed, "corpus seed (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::fputs(app.help("", CLI::AppFormatMode::All).c_str(), stdout);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\nrun 'pwlab --help' for usage\n", e.what());
        return 64;
    }

    CliContext ctx;
    for (const CLI::App* sub : app.get_subcommands()) {
        ctx.command = sub->get_name();
        for (const CLI::App* nested : sub->get_subcommands())
            ctx.command += " " + nested->get_name();
    }

    try {
        Json output;
        if (app.got_subcommand(c_metric)) {
            output = run_metric(ctx, spec_path, point);
        } else if (app.got_subcommand(c_curv)) {
            output = run_curvature(ctx, spec_path, u_flag, point, false);
        } else if (app.got_subcommand(c_weyl)) {
            output = run_curvature(ctx, spec_path, u_flag, point, true);
        } else if (app.got_subcommand(c_pw)) {
            output = run_check_planewave(ctx, spec_path, point, tol);
        } else if (app.got_subcommand(c_flat)) {
            output = run_check_confflat(ctx, spec_path, tol);
        } else if (app.got_subcommand(c_conv)) {
            output = run_convert_ba(ctx, spec_path);
        } else if (app.got_subcommand(c_hom)) {
            output = run_homothety(ctx, spec_path, lambda, point);
        } else if (app.got_subcommand(c_cls)) {
            output = run_classify(ctx, matrix_path, n, tol);
        } else if (app.got_subcommand(c_isom)) {
            output = run_algebra(ctx, spec_path, false);
        } else if (app.got_subcommand(c_conf)) {
            output = run_algebra(ctx, spec_path, true);
        } else if (app.got_subcommand(c_norm)) {
            output = run_normalize(ctx, data_path, tol);
        } else if (app.got_subcommand(c_pro)) {
            output = run_prolong(ctx, basis_path);
        } else if (app.got_subcommand(c_nom)) {
            output = run_nomizu(ctx, data_path);
        } else if (app.got_subcommand(c_cw)) {
            if (c_cw->got_subcommand(c_cw_left)) {
                output = run_cw_left(ctx, b_path, seed, draws, tol);
            } else {
                output = run_cw_bi(ctx, b_path, tol);
            }
        } else if (app.got_subcommand(c_fd)) {
            output = run_from_derivation(ctx, data_path);
        } else if (app.got_subcommand(c_ver)) {
            output = run_verify(ctx, suite, seed);
        }

        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        emit_report(ctx, output, wall_ms);
        return ctx.pass ? 0 : 1;
    } catch (const validation_error& e) {
        const Json err{{"error", Json{{"type", "validation"}, {"message", e.what()}}}};
        std::fputs(dump_deterministic(err).c_str(), stdout);
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const invariant_error& e) {
        const Json err{{"error", Json{{"type", "invariant"}, {"message", e.what()}}}};
        std::fputs(dump_deterministic(err).c_str(), stdout);
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        const Json err{{"error", Json{{"type", "internal"}, {"message", e.what()}}}};
        std::fputs(dump_deterministic(err).c_str(), stdout);
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
