#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pwlab {

// One numeric claim checked against the tolerance it was verified with.
struct ResidualEntry {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
};

// Outcome of one verification check: a stable name, a verdict, the worst
// residuals observed, and a one-line human summary.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<ResidualEntry> residuals;
    double wall_ms = 0.0; // filled by the runner; excluded from data output
};

// The ten checks of the verification suite.  Each is deterministic in the
// seed, self-contained, and safe to run independently.
CheckResult check_symmetry_algebra_jacobi(std::uint64_t seed);   // random-spec algebras close
CheckResult check_curvature_oracle_agreement(std::uint64_t seed); // finite differences vs closed form
CheckResult check_wavefront_parallel_curvature(std::uint64_t seed); // curvature constant along wavefronts
CheckResult check_conformal_flatness();                          // scalar profiles vs generic ones
CheckResult check_homothety_pullback(std::uint64_t seed);        // scaling maps rescale the metric
CheckResult check_kind_b_to_a_conversion(std::uint64_t seed);    // conformal coordinate change
CheckResult check_classification_round_trip(std::uint64_t seed); // conjugation-invariant normal forms
CheckResult check_group_structure_decisions(std::uint64_t seed); // decision rules vs search oracle
CheckResult check_prolongation_dimensions();                     // solution-space dimensions
CheckResult check_pipeline_coherence(std::uint64_t seed);        // frames, algebras and curvature agree

// Runs every check in the order above, filling wall_ms.
std::vector<CheckResult> run_verification(std::uint64_t seed);

} // namespace pwlab
