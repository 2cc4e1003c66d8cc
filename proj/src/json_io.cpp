#include "pwlab/json_io.hpp"

#include "pwlab/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pwlab {

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) {
        throw validation_error(name + ": expected an array of rows");
    }
    const std::size_t rows = j.size();
    if (rows == 0) return Mat(0, 0);
    std::size_t cols = 0;
    Mat m;
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& row = j[i];
        if (!row.is_array()) {
            throw validation_error(name + ": row " + std::to_string(i) +
                                   " is not an array");
        }
        if (i == 0) {
            cols = row.size();
            if (cols == 0) throw validation_error(name + ": rows must be non-empty");
            m.setZero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            throw validation_error(name + ": ragged rows (row " + std::to_string(i) +
                                   " has " + std::to_string(row.size()) +
                                   " entries, expected " + std::to_string(cols) + ")");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            if (!row[k].is_number()) {
                throw validation_error(name + ": entry (" + std::to_string(i) + "," +
                                       std::to_string(k) + ") is not a number");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                row[k].get<double>();
        }
    }
    if (!m.allFinite()) throw validation_error(name + ": entries must be finite");
    return m;
}

Json vector_to_json(const Vec& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Vec vector_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) throw validation_error(name + ": expected an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw validation_error(name + ": entry " + std::to_string(i) +
                                   " is not a number");
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    if (!v.allFinite()) throw validation_error(name + ": entries must be finite");
    return v;
}

Json spec_to_json(const PlaneWaveSpec& spec) {
    Json j;
    j["kind"] = spec.kind == PlaneWaveKind::a ? "a" : "b";
    j["n"] = spec.n;
    j["F"] = matrix_to_json(spec.F);
    j["B"] = matrix_to_json(spec.B);
    return j;
}

PlaneWaveSpec spec_from_json(const Json& j) {
    if (!j.is_object()) throw validation_error("spec: expected a JSON object");
    for (const char* key : {"kind", "n", "F", "B"}) {
        if (!j.contains(key)) {
            throw validation_error(std::string("spec: missing key \"") + key + "\"");
        }
    }
    PlaneWaveSpec spec;
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "a") {
        spec.kind = PlaneWaveKind::a;
    } else if (kind == "b") {
        spec.kind = PlaneWaveKind::b;
    } else {
        throw validation_error("spec: kind must be \"a\" or \"b\"");
    }
    if (!j["n"].is_number_integer()) {
        throw validation_error("spec: n must be an integer");
    }
    spec.n = j["n"].get<int>();
    spec.F = matrix_from_json(j["F"], "spec.F");
    spec.B = matrix_from_json(j["B"], "spec.B");
    spec.validate();
    return spec;
}

Json derivation_to_json(const DerivationData& data) {
    Json j;
    j["lambda"] = data.lambda;
    j["omega"] = matrix_to_json(data.omega);
    j["L"] = matrix_to_json(data.L);
    if (data.c0.size() != 0) j["c0"] = matrix_to_json(data.c0);
    if (data.K) j["K"] = matrix_to_json(*data.K);
    if (data.T) j["T"] = matrix_to_json(*data.T);
    return j;
}

DerivationData derivation_from_json(const Json& j) {
    if (!j.is_object()) throw validation_error("derivation data: expected a JSON object");
    for (const char* key : {"lambda", "omega", "L"}) {
        if (!j.contains(key)) {
            throw validation_error(std::string("derivation data: missing key \"") + key +
                                   "\"");
        }
    }
    if (!j["lambda"].is_number()) {
        throw validation_error("derivation data: lambda must be a number");
    }
    DerivationData data;
    data.lambda = j["lambda"].get<double>();
    data.omega = matrix_from_json(j["omega"], "derivation data.omega");
    data.L = matrix_from_json(j["L"], "derivation data.L");
    data.c0 = j.contains("c0") ? matrix_from_json(j["c0"], "derivation data.c0")
                               : Mat(0, 0);
    if (j.contains("K")) data.K = matrix_from_json(j["K"], "derivation data.K");
    if (j.contains("T")) data.T = matrix_from_json(j["T"], "derivation data.T");
    return data;
}

Json algebra_to_json(const LieAlgebraData& alg) {
    Json j;
    j["labels"] = alg.labels;
    Json nonzero = Json::array();
    for (int i = 0; i < alg.dim; ++i) {
        for (int jj = i + 1; jj < alg.dim; ++jj) {
            for (int k = 0; k < alg.dim; ++k) {
                const double v = alg.at(i, jj, k);
                if (v != 0.0) nonzero.push_back(Json::array({i, jj, k, v}));
            }
        }
    }
    j["nonzero"] = std::move(nonzero);
    j["jacobi_residual"] = alg.jacobi;
    return j;
}

Json normalized_to_json(const NormalizedFrame& nf) {
    Json j;
    j["lambda"] = nf.lambda;
    j["scale"] = nf.scale;
    j["F"] = matrix_to_json(nf.F);
    j["B"] = matrix_to_json(nf.B);
    j["phi"] = matrix_to_json(nf.phi);
    j["input_residual"] = nf.residual;
    return j;
}

Json witness_to_json(const DecisionWitness& w) {
    Json j;
    j["yes"] = w.yes;
    j["A"] = w.A ? matrix_to_json(*w.A) : Json(nullptr);
    j["C"] = w.C ? matrix_to_json(*w.C) : Json(nullptr);
    j["certificate"] = w.certificate;
    return j;
}

Json canonical_to_json(const CanonicalForm& form) {
    Json j;
    switch (form.kind) {
    case CanonicalKind::Elliptic: j["kind"] = "elliptic"; break;
    case CanonicalKind::Hyperbolic: j["kind"] = "hyperbolic"; break;
    case CanonicalKind::Parabolic: j["kind"] = "parabolic"; break;
    }
    j["a"] = form.a;
    j["c0"] = matrix_to_json(form.c0);
    j["frame"] = matrix_to_json(form.frame);
    if (form.witt_frame.size() != 0) j["witt_frame"] = matrix_to_json(form.witt_frame);
    j["canonical_matrix"] = matrix_to_json(form.canonical_matrix());
    j["residual"] = form.residual;
    j["n"] = form.n;
    return j;
}

Json curvature_to_json(const Curvature4& r) {
    Json j;
    j["dim"] = r.dim;
    Json nonzero = Json::array();
    for (int l = 0; l < r.dim; ++l) {
        for (int k = 0; k < r.dim; ++k) {
            for (int i = 0; i < r.dim; ++i) {
                for (int jj = 0; jj < r.dim; ++jj) {
                    const double v = r.at(l, k, i, jj);
                    if (v != 0.0) nonzero.push_back(Json::array({l, k, i, jj, v}));
                }
            }
        }
    }
    j["nonzero"] = std::move(nonzero);
    j["max_abs"] = r.max_abs();
    return j;
}

Json parse_json_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw validation_error(where + ": " + e.what());
    }
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Json load_json_file(const std::string& path) {
    return parse_json_text(read_file_bytes(path), path);
}

PlaneWaveSpec load_spec(const std::string& path) {
    return spec_from_json(load_json_file(path));
}

Mat load_matrix(const std::string& path) {
    return matrix_from_json(load_json_file(path), path);
}

DerivationData load_derivation(const std::string& path) {
    return derivation_from_json(load_json_file(path));
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char ch : bytes) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(out);
}

std::string dump_deterministic(const Json& j) {
    return j.dump(2) + "\n";
}

} // namespace pwlab
