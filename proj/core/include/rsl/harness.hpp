#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsl/fourier.hpp"
#include "rsl/seminorms.hpp"

namespace rsl {

struct SearchBudget {
    int iterations = 160;
    int restarts = 2;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    PolynomialMap map = identity_map();
    ConvexBody body = ball();
    SeminormKind kind = SeminormKind::sup();
    double p = 2.0;
    TimeGrid grid = TimeGrid::dyadic(0, 3);
    SearchBudget budget;
    Index probe_halfwidth = 4;  // probes live on [-h, h]^d

    // experiment.cfg keys: map, body, kind, p, grid, iterations, restarts,
    // seed, probe_halfwidth. Unknown keys are rejected.
    static ExperimentConfig from_key_values(
        const std::map<std::string, std::string>& kv);
};

// Lower estimate of the ratio constant sup_f S_p(M_t f)/||f||_p.
struct ConstantEstimate {
    double value = 0.0;
    GridFunction witness;
    std::vector<double> trace;  // best ratio after each accepted step
    double recomputed = 0.0;    // ratio re-derived from the stored witness
    bool saturated = false;     // final ascent pass found no improvement
};

// S_p(M_t f : t in grid) / ||f||_p for one test function.
double family_ratio(const ExperimentConfig& config, const GridFunction& f,
                    KernelCache* cache = nullptr);

// Deterministic probes (Dirac, indicator boxes, seeded sign boxes), then
// greedy coordinate ascent that flips/rescales single entries.
ConstantEstimate estimate_constant(const ExperimentConfig& config);

struct SweepRow {
    Index coefficient = 0;
    double estimate = 0.0;
};
struct SweepTable {
    std::vector<SweepRow> rows;
    double max_over_min = 0.0;
};
// Runs estimate_constant for map_template instantiated at each coefficient,
// with a shared budget and seed. Template example: "c*n^2".
SweepTable uniformity_sweep(const ExperimentConfig& base,
                            const std::string& map_template,
                            const std::vector<Index>& coefficients);

struct InequalityViolation {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string witness;  // serialized offending sequence or family
};

struct SuiteReport {
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::int64_t> checks_run;
    std::vector<InequalityViolation> violations;    // explicit-constant checks
    std::map<std::string, double> ratio_reports;    // implicit-constant maxima
    bool passed() const { return violations.empty(); }
};

// Random-sequence verification of every explicit-constant inequality, plus
// finite-ratio reports where the constant is implicit.
SuiteReport seminorm_inequality_suite(std::int64_t trials, std::uint64_t seed);

struct MinorArcParams {
    ProjectionParams projection;
    int random_samples = 1500;
    std::uint64_t seed = 11;
    double threshold = 0.5;  // minor arc: 1 - Xi_n >= threshold
    std::vector<double> ray_multipliers = {1.0, 1.3, 1.8, 2.6, 4.0, 6.0};
};
struct MinorArcRow {
    int n = 0;
    double sup_value = 0.0;
    std::size_t samples = 0;
    double reference = 0.0;  // C (n+1)^{-2} profile, C fitted to the first row
};
struct MinorArcTable {
    std::vector<MinorArcRow> rows;
    bool strictly_decreasing = false;
};
// sup over sampled minor-arc frequencies of |(1 - Xi_n) m_{2^n}| per level n.
MinorArcTable minor_arc_decay(const CanonicalMapping& map, const ConvexBody& body,
                              int n0, int n1, const MinorArcParams& params);

struct BootstrapRow {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};
struct BootstrapReport {
    double q0 = 1.0;
    double q1 = 2.0;
    double theta = 0.5;
    double q_theta = 4.0 / 3.0;
    double b_norm_sup_estimate = 0.0;   // sup_k of the lower estimate of ||B_k||_{q0->q0}
    double b_star_norm_estimate = 0.0;  // lower estimate of ||B_*||_{q1->q1}
    std::vector<BootstrapRow> rows;
    double max_ratio = 0.0;
    double homogeneity_residual = 0.0;  // |ratio(c g) - ratio(g)|
};
// Square-function interpolation consistency for B_n = M_{2^{n+1}} - M_{2^n};
// the lattice maximal operator is evaluated exactly via |kernel| * |f|, the
// operator norms by witness lower estimates, so this is a report.
BootstrapReport bootstrap_interpolation_check(const PolynomialMap& map,
                                              const ConvexBody& body,
                                              const std::vector<int>& levels,
                                              double q0, double q1,
                                              int sample_count,
                                              std::uint64_t seed);

struct StabilizationRow {
    double horizon = 0.0;   // largest time 2^n of the dyadic grid
    double estimate = 0.0;
    double growth = 0.0;    // vs the previous row; 0 for the first
};
struct StabilizationTable {
    std::vector<StabilizationRow> rows;
    double total_growth = 0.0;  // last estimate / first estimate
};
// estimate_constant across a doubling schedule with identical seeds/budgets.
StabilizationTable stabilization_report(const ExperimentConfig& base,
                                        const std::vector<double>& horizons);

}  // namespace rsl
