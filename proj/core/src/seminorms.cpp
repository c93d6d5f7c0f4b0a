#include "rsl/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsl/errors.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

ScalarSequence::ScalarSequence(std::vector<double> t, std::vector<std::complex<double>> v)
    : times(std::move(t)), values(std::move(v)) {
    if (times.size() != values.size())
        throw ValidationError("sequence times/values length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw ValidationError("sequence times must be strictly increasing");
}

ScalarSequence ScalarSequence::from_values(std::vector<std::complex<double>> v) {
    std::vector<double> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = static_cast<double>(i + 1);
    return ScalarSequence(std::move(t), std::move(v));
}

double variation(const ScalarSequence& seq, double r) {
    if (r < 1.0) throw ValidationError("variation exponent must satisfy r >= 1");
    const std::size_t n = seq.size();
    if (n < 2) return 0.0;
    if (std::isinf(r)) {
        double best = 0.0;
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 0; i < j; ++i)
                best = std::max(best, std::abs(seq.values[j] - seq.values[i]));
        return best;
    }
    // max-weight increasing path with edge weight |a_j - a_i|^r
    std::vector<double> best(n, 0.0);
    double overall = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double w = std::pow(std::abs(seq.values[j] - seq.values[i]), r);
            best[j] = std::max(best[j], best[i] + w);
        }
        overall = std::max(overall, best[j]);
    }
    return std::pow(overall, 1.0 / r);
}

double variation_bruteforce(const ScalarSequence& seq, double r) {
    if (r < 1.0) throw ValidationError("variation exponent must satisfy r >= 1");
    const std::size_t n = seq.size();
    if (n < 2) return 0.0;
    if (n > 14) throw ValidationError("brute-force variation capped at length 14");
    double best = 0.0;
    const std::uint32_t masks = 1u << n;
    std::vector<std::size_t> path;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        if (std::popcount(mask) < 2) continue;
        path.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) path.push_back(i);
        double sum = 0.0;
        double sup = 0.0;
        for (std::size_t j = 1; j < path.size(); ++j) {
            const double inc = std::abs(seq.values[path[j]] - seq.values[path[j - 1]]);
            sum += std::isinf(r) ? 0.0 : std::pow(inc, r);
            sup = std::max(sup, inc);
        }
        best = std::max(best, std::isinf(r) ? sup : sum);
    }
    return std::isinf(r) ? best : std::pow(best, 1.0 / r);
}

std::int64_t jump_count(const ScalarSequence& seq, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("jump threshold must be positive");
    const std::size_t n = seq.size();
    if (n < 2) return 0;
    // longest path in the DAG of pairs with |a_j - a_i| >= lambda
    std::vector<std::int64_t> best(n, 0);
    std::int64_t overall = 0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (std::abs(seq.values[j] - seq.values[i]) >= lambda)
                best[j] = std::max(best[j], best[i] + 1);
        }
        overall = std::max(overall, best[j]);
    }
    return overall;
}

std::int64_t jump_bruteforce(const ScalarSequence& seq, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("jump threshold must be positive");
    const std::size_t n = seq.size();
    if (n < 2) return 0;
    if (n > 18) throw ValidationError("brute-force jump count capped at length 18");
    std::int64_t best = 0;
    const std::uint32_t masks = 1u << n;
    std::vector<std::size_t> path;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        if (std::popcount(mask) < 2) continue;
        path.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) path.push_back(i);
        bool admissible = true;
        for (std::size_t j = 1; j < path.size() && admissible; ++j)
            admissible = std::abs(seq.values[path[j]] - seq.values[path[j - 1]]) >= lambda;
        if (admissible)
            best = std::max(best, static_cast<std::int64_t>(path.size()) - 1);
    }
    return best;
}

double oscillation(const ScalarSequence& seq, const std::vector<double>& anchors) {
    if (anchors.size() < 2)
        throw ValidationError("oscillation needs at least two anchors");
    for (std::size_t j = 1; j < anchors.size(); ++j)
        if (anchors[j] <= anchors[j - 1])
            throw ValidationError("oscillation anchors must be strictly increasing");
    if (seq.size() == 0) return 0.0;

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < anchors.size(); ++j) {
        const double wlo = anchors[j];
        const double whi = anchors[j + 1];
        // window samples: wlo <= t < whi
        auto begin = std::lower_bound(seq.times.begin(), seq.times.end(), wlo);
        auto end = std::lower_bound(seq.times.begin(), seq.times.end(), whi);
        if (begin == end) continue;
        // anchor value: last sample at time <= wlo, else the first in the window
        auto anchor_it = std::upper_bound(seq.times.begin(), seq.times.end(), wlo);
        const std::size_t anchor_idx =
            anchor_it == seq.times.begin()
                ? static_cast<std::size_t>(begin - seq.times.begin())
                : static_cast<std::size_t>(anchor_it - seq.times.begin()) - 1;
        const std::complex<double> anchor_value = seq.values[anchor_idx];
        double sup = 0.0;
        for (auto it = begin; it != end; ++it) {
            const std::size_t idx = static_cast<std::size_t>(it - seq.times.begin());
            sup = std::max(sup, std::abs(seq.values[idx] - anchor_value));
        }
        total += sup * sup;
    }
    return std::sqrt(total);
}

double sup_seminorm(const ScalarSequence& seq) {
    if (seq.size() == 0) throw ValidationError("sup seminorm needs a nonempty sequence");
    double sup = 0.0;
    for (const auto& v : seq.values) sup = std::max(sup, std::abs(v - seq.values[0]));
    return sup;
}

SeminormKind SeminormKind::sup() { return SeminormKind{}; }

SeminormKind SeminormKind::osc(std::vector<double> anchors) {
    SeminormKind k;
    k.variant = Variant::Oscillation;
    k.anchors = std::move(anchors);
    return k;
}

SeminormKind SeminormKind::var(double r) {
    if (r < 1.0) throw ValidationError("variation exponent must satisfy r >= 1");
    SeminormKind k;
    k.variant = Variant::Variation;
    k.r = r;
    return k;
}

SeminormKind SeminormKind::jump(std::vector<double> lambda_grid) {
    for (double l : lambda_grid)
        if (!(l > 0.0)) throw ValidationError("jump lambda grid must be positive");
    SeminormKind k;
    k.variant = Variant::Jump;
    k.lambda_grid = std::move(lambda_grid);
    return k;
}

SeminormKind SeminormKind::parse(const std::string& text) {
    if (text == "sup") return sup();
    if (text == "osc") return osc({});  // anchors filled from the family's times
    if (text == "jump") return jump();
    if (text.rfind("var:", 0) == 0) {
        const std::string arg = text.substr(4);
        return var(arg == "inf" ? std::numeric_limits<double>::infinity() : std::stod(arg));
    }
    throw ValidationError("unknown seminorm kind '" + text + "'");
}

std::string SeminormKind::name() const {
    switch (variant) {
        case Variant::Sup: return "sup";
        case Variant::Oscillation: return "osc";
        case Variant::Variation: {
            char buf[32];
            if (std::isinf(r)) return "var:inf";
            std::snprintf(buf, sizeof buf, "var:%g", r);
            return buf;
        }
        case Variant::Jump: return "jump";
    }
    return "?";
}

namespace {

std::vector<double> default_lambda_grid(const GridFamily& family) {
    double max_inc = 0.0;
    double min_inc = std::numeric_limits<double>::infinity();
    const Index n = family.members.front().size();
    for (Index flat = 0; flat < n; ++flat) {
        for (std::size_t j = 1; j < family.size(); ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                const double inc =
                    std::abs(family.members[j][flat] - family.members[i][flat]);
                if (inc > 0.0) {
                    max_inc = std::max(max_inc, inc);
                    min_inc = std::min(min_inc, inc);
                }
            }
        }
    }
    if (max_inc == 0.0) return {1.0};  // constant family, any lambda gives 0
    min_inc = std::max(min_inc, max_inc * 1e-8);
    std::vector<double> grid(32);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = static_cast<double>(i) / (grid.size() - 1);
        grid[i] = min_inc * std::pow(max_inc / min_inc, s);
    }
    return grid;
}

double aggregate_lp(const GridFunction& pointwise, double p) {
    if (std::isinf(p)) return pointwise.max_abs();
    double sum = 0.0;
    for (const auto& v : pointwise.values()) sum += std::pow(v.real(), p);
    return std::pow(sum, 1.0 / p);
}

}  // namespace

double scalar_seminorm(const ScalarSequence& seq, const SeminormKind& kind) {
    switch (kind.variant) {
        case SeminormKind::Variant::Sup:
            return sup_seminorm(seq);
        case SeminormKind::Variant::Oscillation: {
            if (!kind.anchors.empty()) return oscillation(seq, kind.anchors);
            return oscillation(seq, seq.times);  // finest anchor sequence
        }
        case SeminormKind::Variant::Variation:
            return variation(seq, kind.r);
        case SeminormKind::Variant::Jump: {
            std::vector<double> grid = kind.lambda_grid;
            if (grid.empty()) {
                GridFamily tiny;
                tiny.times = seq.times;
                for (const auto& v : seq.values) {
                    GridFunction g(Box::origin(1));
                    g[0] = v;
                    tiny.members.push_back(std::move(g));
                }
                grid = default_lambda_grid(tiny);
            }
            double best = 0.0;
            for (double lambda : grid)
                best = std::max(best, lambda * std::sqrt(static_cast<double>(
                                          jump_count(seq, lambda))));
            return best;
        }
    }
    return 0.0;
}

SeminormFieldResult seminorm_field(const GridFamily& family,
                                   const SeminormKind& kind, double p) {
    if (family.size() == 0) throw ValidationError("empty family");
    if (!(p >= 1.0)) throw ValidationError("field aggregation needs p >= 1");
    const Box& box = family.members.front().box();
    for (const auto& g : family.members)
        if (!(g.box() == box)) throw ValidationError("family members must share a box");
    const Index n = family.members.front().size();

    auto sequence_at = [&](Index flat) {
        std::vector<std::complex<double>> v(family.size());
        for (std::size_t j = 0; j < family.size(); ++j) v[j] = family.members[j][flat];
        return ScalarSequence(family.times, std::move(v));
    };

    SeminormFieldResult result{GridFunction(box), 0.0, p, 0.0};

    if (kind.variant == SeminormKind::Variant::Jump) {
        std::vector<double> grid = kind.lambda_grid;
        if (grid.empty()) grid = default_lambda_grid(family);
        GridFunction best_field(box);
        double best_aggregate = -1.0;
        double best_lambda = grid.front();
        GridFunction field(box);
        for (double lambda : grid) {
            parallel_for(n, [&](Index flat) {
                const auto seq = sequence_at(flat);
                field[flat] =
                    lambda * std::sqrt(static_cast<double>(jump_count(seq, lambda)));
            });
            const double agg = aggregate_lp(field, p);
            if (agg > best_aggregate) {
                best_aggregate = agg;
                best_field = field;
                best_lambda = lambda;
            }
        }
        result.pointwise = std::move(best_field);
        result.aggregate = std::max(best_aggregate, 0.0);
        result.lambda_star = best_lambda;
        return result;
    }

    SeminormKind resolved = kind;
    if (kind.variant == SeminormKind::Variant::Oscillation && kind.anchors.empty())
        resolved.anchors = family.times;
    parallel_for(n, [&](Index flat) {
        result.pointwise[flat] = scalar_seminorm(sequence_at(flat), resolved);
    });
    result.aggregate = aggregate_lp(result.pointwise, p);
    return result;
}

RademacherMenshovReport rademacher_menshov_check(
    const std::vector<std::complex<double>>& values, std::int64_t b, int s) {
    if (b < 0 || s < 0) throw ValidationError("rademacher-menshov needs b >= 0, s >= 0");
    const std::int64_t top = std::int64_t(1) << s;
    if (b > top) throw ValidationError("rademacher-menshov needs b <= 2^s");
    if (values.size() != static_cast<std::size_t>(top - b + 1))
        throw ValidationError("value count must equal 2^s - b + 1");

    auto at = [&](std::int64_t j) { return values[static_cast<std::size_t>(j - b)]; };

    RademacherMenshovReport report;
    report.lhs = variation(ScalarSequence::from_values(values), 2.0);

    double rhs = 0.0;
    for (int i = 0; i <= s; ++i) {
        const std::int64_t width = std::int64_t(1) << i;
        double level = 0.0;
        for (std::int64_t j = (b + width - 1) / width; (j + 1) * width <= top; ++j) {
            if (j * width < b) continue;
            const double inc = std::abs(at((j + 1) * width) - at(j * width));
            level += inc * inc;
        }
        rhs += std::sqrt(level);
    }
    report.rhs = rhs;
    const double bound = std::numbers::sqrt2 * rhs;
    report.ratio = bound > 0.0 ? report.lhs / bound : 0.0;
    report.holds = report.lhs <= bound + 1e-12 * (1.0 + report.lhs);
    return report;
}

LongShortSplit long_short_split(const GridFamily& family) {
    if (family.size() == 0) throw ValidationError("empty family");
    const Box& box = family.members.front().box();
    const Index n = family.members.front().size();

    auto dyadic_level = [](double t) { return std::ilogb(t); };
    auto is_power_of_two = [](double t) {
        return t > 0.0 && t == std::ldexp(1.0, std::ilogb(t));
    };

    // group sample indices into blocks [2^l, 2^{l+1})
    std::vector<std::pair<int, std::vector<std::size_t>>> blocks;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const int l = dyadic_level(family.times[i]);
        if (blocks.empty() || blocks.back().first != l) blocks.push_back({l, {}});
        blocks.back().second.push_back(i);
    }
    for (const auto& [l, idx] : blocks) {
        if (!is_power_of_two(family.times[idx.front()]))
            throw ValidationError(
                "grid not of U form: block [2^" + std::to_string(l) +
                ", 2^" + std::to_string(l + 1) + ") is missing its left endpoint");
    }

    LongShortSplit split{GridFamily{}, {}, GridFunction(box), 0.0, true};
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (is_power_of_two(family.times[i])) {
            split.long_part.times.push_back(family.times[i]);
            split.long_part.members.push_back(family.members[i]);
        }
    }

    for (const auto& [l, idx] : blocks) {
        GridFunction field(box);
        std::vector<double> block_times;
        for (std::size_t i : idx) block_times.push_back(family.times[i]);
        parallel_for(n, [&](Index flat) {
            std::vector<std::complex<double>> v(idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j)
                v[j] = family.members[idx[j]][flat];
            field[flat] = variation(ScalarSequence(block_times, std::move(v)), 2.0);
        });
        for (Index flat = 0; flat < n; ++flat) {
            const double v = field[flat].real();
            split.short_aggregate[flat] += v * v;
        }
        split.short_blocks.emplace_back(l, std::move(field));
    }
    for (Index flat = 0; flat < n; ++flat)
        split.short_aggregate[flat] = std::sqrt(split.short_aggregate[flat].real());

    // pointwise check of the constant-1 sup bound
    double violation = 0.0;
    for (Index flat = 0; flat < n; ++flat) {
        const std::complex<double> base = family.members.front()[flat];
        double lhs = 0.0;
        for (const auto& g : family.members)
            lhs = std::max(lhs, std::abs(g[flat] - base));
        double long_sup = 0.0;
        for (const auto& g : split.long_part.members)
            long_sup = std::max(long_sup, std::abs(g[flat] - base));
        const double rhs = long_sup + split.short_aggregate[flat].real();
        violation = std::max(violation, lhs - rhs);
    }
    split.max_violation = violation;
    split.holds = violation <= 1e-12;
    return split;
}

LongShortSplit long_short_split(const ScalarSequence& seq) {
    GridFamily family;
    family.times = seq.times;
    for (const auto& v : seq.values) {
        GridFunction g(Box::origin(1));
        g[0] = v;
        family.members.push_back(std::move(g));
    }
    return long_short_split(family);
}

}  // namespace rsl
