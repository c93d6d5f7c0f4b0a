#include "rsl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rsl/errors.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string serialize_sequence(const ScalarSequence& seq) {
    std::ostringstream os;
    os << "times=";
    for (std::size_t i = 0; i < seq.times.size(); ++i)
        os << (i ? "," : "") << format_double(seq.times[i]);
    os << " values=";
    for (std::size_t i = 0; i < seq.values.size(); ++i)
        os << (i ? "," : "") << format_double(seq.values[i].real()) << "+"
           << format_double(seq.values[i].imag()) << "i";
    return os.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_key_values(
    const std::map<std::string, std::string>& kv) {
    ExperimentConfig config;
    for (const auto& [key, value] : kv) {
        if (key == "map") config.map = PolynomialMap::parse(value);
        else if (key == "body") config.body = ConvexBody::parse(value);
        else if (key == "kind") config.kind = SeminormKind::parse(value);
        else if (key == "p") config.p = std::stod(value);
        else if (key == "grid") config.grid = TimeGrid::parse(value);
        else if (key == "iterations") config.budget.iterations = std::stoi(value);
        else if (key == "restarts") config.budget.restarts = std::stoi(value);
        else if (key == "seed") config.budget.seed = std::stoull(value);
        else if (key == "probe_halfwidth") config.probe_halfwidth = std::stoll(value);
        else throw ValidationError("unknown experiment key '" + key + "'");
    }
    if (!(config.p > 1.0) || std::isinf(config.p))
        throw ValidationError("experiment exponent p must lie in (1, inf)");
    if (config.budget.iterations < 0 || config.budget.restarts < 0)
        throw ValidationError("budgets must be nonnegative");
    return config;
}

double family_ratio(const ExperimentConfig& config, const GridFunction& f,
                    KernelCache* cache) {
    const double fnorm = f.norm_lp(config.p);
    if (fnorm == 0.0) return 0.0;
    const GridFamily family =
        average_family(f, config.map, config.body, config.grid, cache);
    return seminorm_field(family, config.kind, config.p).aggregate / fnorm;
}

namespace {

std::vector<GridFunction> build_probes(const ExperimentConfig& config,
                                       std::mt19937_64& rng) {
    const int d = config.map.dimension();
    std::vector<GridFunction> probes;
    probes.push_back(GridFunction::dirac(d));
    for (Index h : {Index(1), Index(2), config.probe_halfwidth}) {
        if (h < 1 || h > config.probe_halfwidth) continue;
        Box box(std::vector<Index>(static_cast<std::size_t>(d), -h),
                std::vector<Index>(static_cast<std::size_t>(d), h));
        GridFunction ones(box);
        for (Index i = 0; i < ones.size(); ++i) ones[i] = 1.0;
        if (std::none_of(probes.begin(), probes.end(),
                         [&](const GridFunction& g) { return g.box() == box; }))
            probes.push_back(std::move(ones));
    }
    std::uniform_int_distribution<int> coin(0, 1);
    for (int copy = 0; copy < 2; ++copy) {
        Box box(std::vector<Index>(static_cast<std::size_t>(d), -config.probe_halfwidth),
                std::vector<Index>(static_cast<std::size_t>(d), config.probe_halfwidth));
        GridFunction signs(box);
        for (Index i = 0; i < signs.size(); ++i) signs[i] = coin(rng) ? 1.0 : -1.0;
        probes.push_back(std::move(signs));
    }
    return probes;
}

}  // namespace

ConstantEstimate estimate_constant(const ExperimentConfig& config) {
    std::mt19937_64 rng(config.budget.seed);
    KernelCache cache;
    auto ratio = [&](const GridFunction& f) { return family_ratio(config, f, &cache); };

    std::vector<GridFunction> probes = build_probes(config, rng);
    std::vector<double> probe_ratios(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) probe_ratios[i] = ratio(probes[i]);

    std::vector<std::size_t> order(probes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return probe_ratios[a] > probe_ratios[b];
    });

    ConstantEstimate best{probe_ratios[order.front()], probes[order.front()], {}, 0.0, false};
    best.trace.push_back(best.value);

    const std::size_t starts =
        std::min<std::size_t>(probes.size(), 1 + static_cast<std::size_t>(config.budget.restarts));
    const double factors[] = {-1.0, 2.0, 0.5, 0.0};
    for (std::size_t s = 0; s < starts; ++s) {
        GridFunction current = probes[order[s]];
        double current_ratio = probe_ratios[order[s]];
        bool improved_any = false;
        const Index entries = current.size();
        for (int iter = 0; iter < config.budget.iterations; ++iter) {
            const Index slot = entries > 0 ? static_cast<Index>(iter) % entries : 0;
            const std::complex<double> old = current[slot];
            double best_local = current_ratio;
            std::complex<double> best_entry = old;
            for (double factor : factors) {
                const std::complex<double> candidate =
                    old == std::complex<double>(0.0, 0.0) && factor != 0.0
                        ? std::complex<double>(factor, 0.0)
                        : old * factor;
                if (candidate == old) continue;
                current[slot] = candidate;
                const double r = ratio(current);
                if (r > best_local * (1.0 + 1e-12)) {
                    best_local = r;
                    best_entry = candidate;
                }
            }
            current[slot] = best_entry;
            if (best_local > current_ratio) {
                current_ratio = best_local;
                improved_any = true;
            }
            if (current_ratio > best.value) {
                best.value = current_ratio;
                best.witness = current;
            }
            best.trace.push_back(best.value);
        }
        if (s + 1 == starts) best.saturated = !improved_any;
    }

    best.recomputed = ratio(best.witness);
    return best;
}

SweepTable uniformity_sweep(const ExperimentConfig& base,
                            const std::string& map_template,
                            const std::vector<Index>& coefficients) {
    if (coefficients.empty()) throw ValidationError("empty coefficient range");
    SweepTable table;
    table.rows.resize(coefficients.size());
    parallel_for(static_cast<std::int64_t>(coefficients.size()), [&](std::int64_t i) {
        const Index c = coefficients[static_cast<std::size_t>(i)];
        ExperimentConfig config = base;
        config.map = PolynomialMap::parse(map_template, &c);
        const ConstantEstimate estimate = estimate_constant(config);
        table.rows[static_cast<std::size_t>(i)] = SweepRow{c, estimate.value};
    });
    double lo = table.rows.front().estimate, hi = lo;
    for (const auto& row : table.rows) {
        lo = std::min(lo, row.estimate);
        hi = std::max(hi, row.estimate);
    }
    table.max_over_min = lo > 0.0 ? hi / lo : 0.0;
    return table;
}

namespace {

constexpr double kIneqTol = 1e-12;

bool leq_tol(double lhs, double rhs) {
    return lhs <= rhs * (1.0 + kIneqTol) + kIneqTol;
}

ScalarSequence random_sequence(std::mt19937_64& rng, std::size_t min_len,
                               std::size_t max_len, bool complex_values) {
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::normal_distribution<double> val(0.0, 1.0);
    const std::size_t n = len_dist(rng);
    std::vector<std::complex<double>> values(n);
    for (auto& v : values)
        v = complex_values ? std::complex<double>(val(rng), val(rng))
                           : std::complex<double>(val(rng), 0.0);
    return ScalarSequence::from_values(std::move(values));
}

std::vector<double> pairwise_lambdas(const ScalarSequence& seq,
                                     std::mt19937_64& rng, int count) {
    double max_inc = 0.0;
    for (std::size_t j = 1; j < seq.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            max_inc = std::max(max_inc, std::abs(seq.values[j] - seq.values[i]));
    if (max_inc == 0.0) return {1.0};
    std::uniform_real_distribution<double> frac(0.05, 1.1);
    std::vector<double> lambdas;
    for (int i = 0; i < count; ++i) lambdas.push_back(frac(rng) * max_inc);
    return lambdas;
}

double weak_lp_norm(const GridFunction& field, double p) {
    std::vector<double> magnitudes;
    magnitudes.reserve(static_cast<std::size_t>(field.size()));
    for (const auto& v : field.values()) magnitudes.push_back(std::abs(v));
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < magnitudes.size(); ++k)
        best = std::max(best, magnitudes[k] *
                                  std::pow(static_cast<double>(k + 1), 1.0 / p));
    return best;
}

}  // namespace

SuiteReport seminorm_inequality_suite(std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw ValidationError("suite needs at least one trial");
    SuiteReport report;
    report.trials = trials;
    report.seed = seed;
    std::mt19937_64 rng(seed);

    auto check = [&](const std::string& name, double lhs, double rhs,
                     const ScalarSequence& witness) {
        ++report.checks_run[name];
        if (!leq_tol(lhs, rhs))
            report.violations.push_back(
                InequalityViolation{name, lhs, rhs, serialize_sequence(witness)});
    };
    auto note_ratio = [&](const std::string& name, double lhs, double rhs) {
        ++report.checks_run[name];
        if (rhs > 1e-14) {
            auto [it, inserted] = report.ratio_reports.try_emplace(name, 0.0);
            it->second = std::max(it->second, lhs / rhs);
        }
    };

    const std::vector<double> r_grid = {1.0, 1.5, 2.0, 3.0,
                                        std::numeric_limits<double>::infinity()};

    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const ScalarSequence seq = random_sequence(rng, 2, 12, trial % 2 == 0);

        // jump-variation bridge: lambda N_lambda^{1/r} <= V^r
        for (double r : {1.0, 2.0, 3.0}) {
            const double vr = variation(seq, r);
            for (double lambda : pairwise_lambdas(seq, rng, 3)) {
                const double n = static_cast<double>(jump_count(seq, lambda));
                check("jump_variation_bridge", lambda * std::pow(n, 1.0 / r), vr, seq);
            }
        }

        // oscillation-variation bridge: O^2 <= J^{1/2 - 1/r} V^r for r >= 2
        {
            std::uniform_int_distribution<std::size_t> pick(2, seq.size());
            const std::size_t anchor_count = pick(rng);
            std::vector<double> anchors(seq.times.begin(),
                                        seq.times.begin() + anchor_count);
            const double osc = oscillation(seq, anchors);
            const double windows = static_cast<double>(anchors.size() - 1);
            for (double r : {2.0, 3.0}) {
                check("oscillation_variation_bridge", osc,
                      std::pow(windows, 0.5 - 1.0 / r) * variation(seq, r), seq);
            }
        }

        // anchored maximal function under V^r
        for (double r : r_grid)
            check("sup_variation_domination", sup_seminorm(seq), variation(seq, r), seq);

        // V^r non-increasing in r
        for (std::size_t i = 1; i < r_grid.size(); ++i)
            check("variation_monotone_in_r", variation(seq, r_grid[i]),
                  variation(seq, r_grid[i - 1]), seq);

        // square-function bound with constant 2, scalar instances
        {
            double sq = 0.0;
            for (const auto& v : seq.values) sq += std::norm(v);
            sq = 2.0 * std::sqrt(sq);
            check("square_bound_sup", sup_seminorm(seq), sq, seq);
            check("square_bound_osc", oscillation(seq, seq.times), sq, seq);
            check("square_bound_var2", variation(seq, 2.0), sq, seq);
            check("square_bound_jump", scalar_seminorm(seq, SeminormKind::jump()), sq,
                  seq);
        }

        // subadditivity with constant 1 for the true seminorms
        {
            ScalarSequence other = seq;
            std::normal_distribution<double> val(0.0, 1.0);
            for (auto& v : other.values) v = {val(rng), val(rng)};
            ScalarSequence sum = seq;
            for (std::size_t i = 0; i < sum.values.size(); ++i)
                sum.values[i] += other.values[i];
            check("subadditive_sup", sup_seminorm(sum),
                  sup_seminorm(seq) + sup_seminorm(other), sum);
            check("subadditive_var2", variation(sum, 2.0),
                  variation(seq, 2.0) + variation(other, 2.0), sum);
            check("subadditive_osc", oscillation(sum, sum.times),
                  oscillation(seq, seq.times) + oscillation(other, other.times), sum);
        }

        // splitting estimates, reported as finite ratios
        if (seq.size() >= 4) {
            std::uniform_int_distribution<std::size_t> cut(1, seq.size() - 2);
            const std::size_t w = cut(rng);
            auto slice = [&](std::size_t from, std::size_t to) {
                return ScalarSequence(
                    std::vector<double>(seq.times.begin() + from, seq.times.begin() + to),
                    std::vector<std::complex<double>>(seq.values.begin() + from,
                                                      seq.values.begin() + to));
            };
            const ScalarSequence left = slice(0, std::min(w + 2, seq.size()));
            const ScalarSequence right = slice(w, seq.size());
            note_ratio("split_interval", variation(seq, 2.0),
                       variation(left, 2.0) + variation(right, 2.0));

            ScalarSequence truncated = seq;
            for (std::size_t i = 0; i < w; ++i) truncated.values[i] = 0.0;
            note_ratio("split_truncation", variation(truncated, 2.0),
                       variation(right, 2.0) + std::abs(seq.values[w]));
        }
    }

    // Rademacher-Menshov with the sqrt(2) constant
    {
        std::int64_t rm_trials = std::min<std::int64_t>(trials, 1000);
        std::uniform_int_distribution<int> s_dist(1, 6);
        std::normal_distribution<double> val(0.0, 1.0);
        for (std::int64_t t = 0; t < rm_trials; ++t) {
            const int s = s_dist(rng);
            std::uniform_int_distribution<std::int64_t> b_dist(1, (1 << s) - 1);
            const std::int64_t b = b_dist(rng);
            std::vector<std::complex<double>> values(
                static_cast<std::size_t>((1 << s) - b + 1));
            for (auto& v : values) v = {val(rng), val(rng)};
            const auto rm = rademacher_menshov_check(values, b, s);
            ++report.checks_run["rademacher_menshov"];
            if (!rm.holds)
                report.violations.push_back(InequalityViolation{
                    "rademacher_menshov", rm.lhs, std::numbers::sqrt2 * rm.rhs,
                    serialize_sequence(ScalarSequence::from_values(values))});
        }
    }

    // long jumps / short variations pointwise bound, constant 1
    {
        std::int64_t ls_trials = std::min<std::int64_t>(trials, 200);
        std::normal_distribution<double> val(0.0, 1.0);
        std::uniform_int_distribution<int> res_dist(1, 3);
        for (std::int64_t t = 0; t < ls_trials; ++t) {
            const TimeGrid grid = TimeGrid::u_blocks(0, 6, res_dist(rng));
            std::vector<std::complex<double>> values(grid.size());
            for (auto& v : values) v = {val(rng), val(rng)};
            ScalarSequence family(grid.times(), std::move(values));
            const auto split = long_short_split(family);
            ++report.checks_run["long_short_pointwise"];
            if (!split.holds)
                report.violations.push_back(
                    InequalityViolation{"long_short_pointwise", split.max_violation,
                                        0.0, serialize_sequence(family)});
        }
    }

    // mixed-norm estimates with implicit constants, small grid families
    {
        std::int64_t g_trials = std::min<std::int64_t>(trials, 100);
        std::normal_distribution<double> val(0.0, 1.0);
        for (std::int64_t t = 0; t < g_trials; ++t) {
            GridFamily family;
            const Box box(std::vector<Index>{0}, std::vector<Index>{7});
            for (int j = 0; j < 6; ++j) {
                family.times.push_back(static_cast<double>(j + 1));
                GridFunction g(box);
                for (Index i = 0; i < g.size(); ++i) g[i] = {val(rng), val(rng)};
                family.members.push_back(std::move(g));
            }
            const double p = 2.0;

            // oscillation controls the maximal function up to sup_t ||a_t||_p
            GridFunction sup_field(box);
            for (Index i = 0; i < 8; ++i) {
                double m = 0.0;
                for (std::size_t j = 0; j + 1 < family.size(); ++j)
                    m = std::max(m, std::abs(family.members[j][i]));
                sup_field[i] = m;
            }
            double sup_norms = 0.0;
            for (const auto& g : family.members)
                sup_norms = std::max(sup_norms, g.norm_lp(p));
            const double osc_norm =
                seminorm_field(family, SeminormKind::osc({}), p).aggregate;
            note_ratio("oscillation_maximal_lp", sup_field.norm_lp(p),
                       sup_norms + osc_norm);

            // weak-type variation bound from the jump quasi-seminorm
            const auto var3 = seminorm_field(family, SeminormKind::var(3.0), p);
            const auto jump = seminorm_field(family, SeminormKind::jump(), p);
            note_ratio("weak_variation_from_jumps", weak_lp_norm(var3.pointwise, p),
                       jump.aggregate);
        }
    }

    return report;
}

MinorArcTable minor_arc_decay(const CanonicalMapping& map, const ConvexBody& body,
                              int n0, int n1, const MinorArcParams& params) {
    if (n0 < 1 || n0 > n1) throw ValidationError("bad minor-arc level range");
    if (n1 > 12) throw ValidationError("minor-arc levels capped at 12");
    const int dim = map.dimension();
    IWProjection projection(map, params.projection);

    // shared random pool, filtered per level by the minor-arc condition
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    std::vector<Frequency> pool(static_cast<std::size_t>(params.random_samples));
    for (auto& xi : pool) {
        xi.resize(static_cast<std::size_t>(dim));
        for (auto& c : xi) c = unif(rng);
    }

    MinorArcTable table;
    for (int n = n0; n <= n1; ++n) {
        std::vector<Frequency> candidates;
        for (const auto& xi : pool)
            if (1.0 - projection.xi_n(n, xi) >= params.threshold)
                candidates.push_back(xi);

        // boundary rays: walk out of each major arc until Xi_n crosses the
        // threshold, then sample along the ray
        const SigmaSet& sigma = projection.sigma_leq(
            static_cast<Index>(std::pow(static_cast<double>(n), params.projection.u)));
        std::vector<Frequency> directions;
        for (int axis = 0; axis < dim; ++axis) {
            Frequency e(static_cast<std::size_t>(dim), 0.0);
            e[static_cast<std::size_t>(axis)] = 1.0;
            directions.push_back(e);
            e[static_cast<std::size_t>(axis)] = -1.0;
            directions.push_back(e);
        }
        directions.emplace_back(static_cast<std::size_t>(dim),
                                1.0 / std::sqrt(static_cast<double>(dim)));
        for (const auto& frac : sigma.fractions) {
            const Frequency center = frac.as_frequency();
            for (const auto& dir : directions) {
                // reach past the widest bump coordinate
                double r_hi = 0.0;
                for (int i = 0; i < dim; ++i)
                    r_hi = std::max(
                        r_hi, 0.25 * std::exp2(-n * (map.dilation_exponents()[i] -
                                                     params.projection.chi)));
                auto on_ray = [&](double r) {
                    Frequency xi(static_cast<std::size_t>(dim));
                    for (int i = 0; i < dim; ++i)
                        xi[static_cast<std::size_t>(i)] = torus_reduce(
                            center[static_cast<std::size_t>(i)] +
                            r * dir[static_cast<std::size_t>(i)]);
                    return xi;
                };
                if (1.0 - projection.xi_n(n, on_ray(r_hi)) < params.threshold) continue;
                double lo = 0.0, hi = r_hi;
                for (int step = 0; step < 40; ++step) {
                    const double mid = 0.5 * (lo + hi);
                    if (1.0 - projection.xi_n(n, on_ray(mid)) >= params.threshold)
                        hi = mid;
                    else
                        lo = mid;
                }
                for (double mult : params.ray_multipliers) {
                    const Frequency xi = on_ray(hi * mult);
                    if (1.0 - projection.xi_n(n, xi) >= params.threshold)
                        candidates.push_back(xi);
                }
            }
        }

        if (candidates.empty())
            throw ValidationError("no minor-arc samples at level " + std::to_string(n) +
                                  "; the sampling grid is too coarse");

        std::vector<double> values(candidates.size(), 0.0);
        const double scale = std::exp2(n);
        parallel_for(static_cast<std::int64_t>(candidates.size()), [&](std::int64_t i) {
            const Frequency& xi = candidates[static_cast<std::size_t>(i)];
            const double damp = 1.0 - projection.xi_n(n, xi);
            values[static_cast<std::size_t>(i)] =
                damp * std::abs(exponential_sum_m(map, body, scale, xi));
        });
        double sup = 0.0;
        for (double v : values) sup = std::max(sup, v);
        table.rows.push_back(MinorArcRow{n, sup, candidates.size(), 0.0});
    }

    const double c_fit =
        table.rows.front().sup_value *
        std::pow(static_cast<double>(table.rows.front().n + 1), 2.0);
    for (auto& row : table.rows)
        row.reference = c_fit / std::pow(static_cast<double>(row.n + 1), 2.0);

    table.strictly_decreasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (!(table.rows[i].sup_value < table.rows[i - 1].sup_value))
            table.strictly_decreasing = false;
    return table;
}

namespace {

// signed difference kernel of M_{2^{k+1}} - M_{2^k} as weights on points
struct SignedKernel {
    std::map<Point, double> weights;
    Box hull;

    GridFunction apply(const GridFunction& f, bool absolute) const {
        const Box out_box = f.box().minkowski_sum(hull);
        GridFunction out(out_box);
        for (const auto& [z, w] : weights) {
            const double weight = absolute ? std::abs(w) : w;
            for (Index flat = 0; flat < f.size(); ++flat) {
                Point x = f.box().unflatten(flat);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] += z[i];
                const std::complex<double> v = f[flat];
                out.at(x) += weight * (absolute ? std::complex<double>(std::abs(v), 0.0) : v);
            }
        }
        return out;
    }
};

SignedKernel difference_kernel(const RadonKernel& fine, const RadonKernel& coarse) {
    SignedKernel out;
    for (const auto& [z, c] : fine.counts)
        out.weights[z] += static_cast<double>(c) / static_cast<double>(fine.normalization);
    for (const auto& [z, c] : coarse.counts)
        out.weights[z] -= static_cast<double>(c) / static_cast<double>(coarse.normalization);
    std::vector<Index> lo = out.weights.begin()->first, hi = lo;
    for (const auto& [z, w] : out.weights) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            lo[i] = std::min(lo[i], z[i]);
            hi[i] = std::max(hi[i], z[i]);
        }
    }
    out.hull = Box(std::move(lo), std::move(hi));
    return out;
}

}  // namespace

BootstrapReport bootstrap_interpolation_check(const PolynomialMap& map,
                                              const ConvexBody& body,
                                              const std::vector<int>& levels,
                                              double q0, double q1,
                                              int sample_count,
                                              std::uint64_t seed) {
    if (levels.empty()) throw ValidationError("bootstrap check needs operators");
    if (!(q0 >= 1.0 && q0 <= 2.0 && q0 <= q1))
        throw ValidationError("bootstrap check needs 1 <= q0 <= min(2, q1)");

    BootstrapReport report;
    report.q0 = q0;
    report.q1 = q1;
    report.theta = 1.0 - q0 / 2.0;
    report.q_theta = 1.0 / (0.5 + report.theta / q1);

    std::vector<SignedKernel> kernels;
    for (int k : levels)
        kernels.push_back(difference_kernel(build_kernel(map, body, std::exp2(k + 1)),
                                            build_kernel(map, body, std::exp2(k))));

    auto b_star = [&](const GridFunction& f) {
        Box out_box = f.box().minkowski_sum(kernels.front().hull);
        for (const auto& k : kernels)
            out_box = Box::hull(out_box, f.box().minkowski_sum(k.hull));
        GridFunction out(out_box);
        for (const auto& k : kernels) {
            const GridFunction applied = k.apply(f, true);
            for (Index flat = 0; flat < applied.size(); ++flat) {
                const Point x = applied.box().unflatten(flat);
                auto& slot = out.at(x);
                slot = std::max(slot.real(), applied[flat].real());
            }
        }
        return out;
    };

    // operator norm lower estimates from probes
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    const int d = map.dimension();
    std::vector<GridFunction> probes;
    probes.push_back(GridFunction::dirac(d));
    for (Index h : {Index(2), Index(4)}) {
        Box box(std::vector<Index>(static_cast<std::size_t>(d), -h),
                std::vector<Index>(static_cast<std::size_t>(d), h));
        GridFunction ones(box);
        GridFunction signs(box);
        for (Index i = 0; i < ones.size(); ++i) {
            ones[i] = 1.0;
            signs[i] = coin(rng) ? 1.0 : -1.0;
        }
        probes.push_back(std::move(ones));
        probes.push_back(std::move(signs));
    }
    for (const auto& kernel : kernels) {
        double norm = 0.0;
        for (const auto& probe : probes)
            norm = std::max(norm, kernel.apply(probe, false).norm_lp(q0) /
                                      probe.norm_lp(q0));
        report.b_norm_sup_estimate = std::max(report.b_norm_sup_estimate, norm);
    }
    for (const auto& probe : probes)
        report.b_star_norm_estimate =
            std::max(report.b_star_norm_estimate,
                     b_star(probe).norm_lp(q1) / probe.norm_lp(q1));

    // sampled two-sided evaluation
    std::normal_distribution<double> val(0.0, 1.0);
    auto sample_ratio = [&](const std::vector<GridFunction>& gs, BootstrapRow& row) {
        Box out_box = gs.front().box().minkowski_sum(kernels.front().hull);
        for (std::size_t k = 0; k < kernels.size(); ++k)
            out_box = Box::hull(out_box, gs[k].box().minkowski_sum(kernels[k].hull));
        GridFunction lhs_sq(out_box);
        for (std::size_t k = 0; k < kernels.size(); ++k) {
            const GridFunction bk = kernels[k].apply(gs[k], false);
            for (Index flat = 0; flat < bk.size(); ++flat) {
                const Point x = bk.box().unflatten(flat);
                lhs_sq.at(x) += std::norm(bk[flat]);
            }
        }
        for (Index flat = 0; flat < lhs_sq.size(); ++flat)
            lhs_sq[flat] = std::sqrt(lhs_sq[flat].real());
        row.lhs = lhs_sq.norm_lp(report.q_theta);

        Box gbox = gs.front().box();
        GridFunction g_sq(gbox);
        for (const auto& g : gs)
            for (Index flat = 0; flat < g.size(); ++flat)
                g_sq[flat] += std::norm(g[flat]);
        for (Index flat = 0; flat < g_sq.size(); ++flat)
            g_sq[flat] = std::sqrt(g_sq[flat].real());
        row.rhs = std::pow(report.b_norm_sup_estimate, 1.0 - report.theta) *
                  std::pow(report.b_star_norm_estimate, report.theta) *
                  g_sq.norm_lp(report.q_theta);
        row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    };

    Box sample_box(std::vector<Index>(static_cast<std::size_t>(d), -4),
                   std::vector<Index>(static_cast<std::size_t>(d), 4));
    std::vector<GridFunction> first_sample;
    for (int s = 0; s < sample_count; ++s) {
        std::vector<GridFunction> gs;
        for (std::size_t k = 0; k < kernels.size(); ++k) {
            GridFunction g(sample_box);
            for (Index i = 0; i < g.size(); ++i) g[i] = {val(rng), val(rng)};
            gs.push_back(std::move(g));
        }
        if (s == 0) first_sample = gs;
        BootstrapRow row;
        sample_ratio(gs, row);
        report.rows.push_back(row);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
    }

    // exact scale invariance of the ratio
    if (!first_sample.empty()) {
        BootstrapRow base, scaled;
        sample_ratio(first_sample, base);
        std::vector<GridFunction> tripled = first_sample;
        for (auto& g : tripled)
            for (Index i = 0; i < g.size(); ++i) g[i] *= 3.0;
        sample_ratio(tripled, scaled);
        report.homogeneity_residual = std::abs(base.ratio - scaled.ratio);
    }
    return report;
}

StabilizationTable stabilization_report(const ExperimentConfig& base,
                                        const std::vector<double>& horizons) {
    if (horizons.empty()) throw ValidationError("empty stabilization schedule");
    StabilizationTable table;
    for (double horizon : horizons) {
        if (!(horizon >= 1.0)) throw ValidationError("horizons must be >= 1");
        ExperimentConfig config = base;
        config.grid = TimeGrid::dyadic(0, std::max(0, std::ilogb(horizon)));
        const ConstantEstimate estimate = estimate_constant(config);
        StabilizationRow row{horizon, estimate.value, 0.0};
        if (!table.rows.empty() && table.rows.back().estimate > 0.0)
            row.growth = estimate.value / table.rows.back().estimate;
        table.rows.push_back(row);
    }
    table.total_growth = table.rows.front().estimate > 0.0
                             ? table.rows.back().estimate / table.rows.front().estimate
                             : 0.0;
    return table;
}

}  // namespace rsl
