#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rsl/radon.hpp"

namespace rsl {

// Finite sample (a_t : t in times) of a complex-valued family.
struct ScalarSequence {
    std::vector<double> times;
    std::vector<std::complex<double>> values;

    ScalarSequence() = default;
    ScalarSequence(std::vector<double> t, std::vector<std::complex<double>> v);
    static ScalarSequence from_values(std::vector<std::complex<double>> v);  // times 1,2,...
    std::size_t size() const { return values.size(); }
};

// V^r: sup over increasing index paths of (sum |increments|^r)^{1/r}.
// r = inf gives the largest pairwise increment in time order.
double variation(const ScalarSequence& seq, double r);
double variation_bruteforce(const ScalarSequence& seq, double r);  // length <= 14

// N_lambda: the largest J admitting t_0 < ... < t_J with every consecutive
// increment of modulus >= lambda.
std::int64_t jump_count(const ScalarSequence& seq, double lambda);
std::int64_t jump_bruteforce(const ScalarSequence& seq, double lambda);  // length <= 18

// Truncated oscillation over anchor times I_1 < ... < I_{N+1}: window suprema
// of |a_t - a_{I_j}| in l^2 over the windows. Anchor values follow the last
// sampled time <= I_j; a window with no samples contributes 0.
double oscillation(const ScalarSequence& seq, const std::vector<double>& anchors);

// sup_t |a_t - a_{t0}| with t0 the first sample.
double sup_seminorm(const ScalarSequence& seq);

struct SeminormKind {
    enum class Variant { Sup, Oscillation, Variation, Jump };

    Variant variant = Variant::Sup;
    std::vector<double> anchors;      // Oscillation
    double r = 2.0;                   // Variation, in [1, inf]
    std::vector<double> lambda_grid;  // Jump; empty = 32 log points over the
                                      // observed increment range

    static SeminormKind sup();
    static SeminormKind osc(std::vector<double> anchors);
    static SeminormKind var(double r);
    static SeminormKind jump(std::vector<double> lambda_grid = {});
    // "sup" | "osc" | "var:r" | "jump"
    static SeminormKind parse(const std::string& text);
    std::string name() const;
};

// Scalar dispatch used by the field evaluation and by the harness.
double scalar_seminorm(const ScalarSequence& seq, const SeminormKind& kind);

struct SeminormFieldResult {
    GridFunction pointwise;  // nonnegative seminorm values
    double aggregate = 0.0;  // l^p norm of pointwise
    double p = 0.0;
    double lambda_star = 0.0;  // maximizing lambda (jump kind only)
};

// Pointwise-in-x scalar seminorm, then the l^p norm. The jump kind takes the
// sup over the lambda grid of || lambda N_lambda^{1/2} ||_p.
SeminormFieldResult seminorm_field(const GridFamily& family,
                                   const SeminormKind& kind, double p);

struct RademacherMenshovReport {
    double lhs = 0.0;   // V^2 of the sequence
    double rhs = 0.0;   // sum over dyadic levels of the square-function terms
    double ratio = 0.0; // lhs / (sqrt(2) * rhs), 0 when degenerate
    bool holds = true;  // lhs <= sqrt(2) * rhs + tolerance
};

// Both sides of the dyadic-tree inequality for (a_j : b <= j <= 2^s); the
// level-i terms range over intervals [j 2^i, (j+1) 2^i) inside [b, 2^s].
RademacherMenshovReport rademacher_menshov_check(
    const std::vector<std::complex<double>>& values, std::int64_t b, int s);

struct LongShortSplit {
    GridFamily long_part;   // members at the sampled dyadic times 2^n
    std::vector<std::pair<int, GridFunction>> short_blocks;  // (l, V^2 field on [2^l, 2^{l+1}))
    GridFunction short_aggregate;  // (sum_l V^2_l(x)^2)^{1/2}
    double max_violation = 0.0;    // residual of the pointwise sup bound
    bool holds = true;
};

// Splits a family over a U-grid into dyadic long jumps plus per-block short
// 2-variations, and verifies pointwise
//   sup_t |a_t - a_{t0}| <= sup_n |a_{2^n} - a_{t0}| + (sum_l V^2_l^2)^{1/2}.
// Every nonempty block [2^l, 2^{l+1}) must contain its left endpoint.
LongShortSplit long_short_split(const GridFamily& family);

// Scalar convenience wrapper.
LongShortSplit long_short_split(const ScalarSequence& seq);

}  // namespace rsl
