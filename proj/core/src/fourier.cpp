#include "rsl/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "dft_util.hpp"
#include "rsl/errors.hpp"
#include "rsl/radon.hpp"

namespace rsl {

using BigInt = boost::multiprecision::cpp_int;

double torus_reduce(double x) {
    const double y = x - std::floor(x + 0.5);
    return y == 0.5 ? -0.5 : y;  // keep representatives in [-1/2, 1/2)
}

Frequency torus_reduce(const Frequency& xi) {
    Frequency out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = torus_reduce(xi[i]);
    return out;
}

double torus_distance(double x, double y) { return std::abs(torus_reduce(x - y)); }

Frequency RationalFraction::as_frequency() const {
    Frequency out(numerators.size());
    for (std::size_t i = 0; i < numerators.size(); ++i) {
        Index m = ((numerators[i] % q) + q) % q;  // into [0, q)
        if (2 * m >= q) m -= q;                   // into [-q/2, q/2)
        out[i] = static_cast<double>(m) / static_cast<double>(q);
    }
    return out;
}

std::vector<Index> build_p_leq(Index N) {
    if (N < 1) throw ValidationError("admissible denominator set needs N >= 1");
    std::vector<Index> out(static_cast<std::size_t>(N));
    std::iota(out.begin(), out.end(), Index(1));
    validate_p_leq(out, N);
    return out;
}

void validate_p_leq(const std::vector<Index>& p_leq, Index N) {
    if (p_leq.empty()) throw ValidationError("empty denominator set");
    if (!std::is_sorted(p_leq.begin(), p_leq.end()))
        throw ValidationError("denominator set must be sorted");
    if (std::adjacent_find(p_leq.begin(), p_leq.end()) != p_leq.end())
        throw ValidationError("denominator set must be duplicate free");
    if (p_leq.front() < 1) throw ValidationError("denominators must be positive");

    // inclusion bounds: contains 1..N and stays below max(N, e^{N^{1/10}})
    std::size_t need = 1;
    for (Index q : p_leq) {
        if (need <= static_cast<std::size_t>(N) && q == static_cast<Index>(need)) ++need;
    }
    if (need != static_cast<std::size_t>(N) + 1)
        throw ValidationError("denominator set must contain 1..N");
    const double upper = std::max(static_cast<double>(N),
                                  std::exp(std::pow(static_cast<double>(N), 0.1)));
    if (static_cast<double>(p_leq.back()) > upper)
        throw ValidationError("denominator set exceeds the inclusion upper bound");

    // factor closure
    for (Index q : p_leq) {
        for (Index d = 1; d * d <= q; ++d) {
            if (q % d != 0) continue;
            for (Index f : {d, q / d}) {
                if (!std::binary_search(p_leq.begin(), p_leq.end(), f))
                    throw ValidationError("denominator set is not factor closed at " +
                                          std::to_string(f));
            }
        }
    }

    // lcm(P) <= 3^N, exact
    BigInt l = 1;
    for (Index q : p_leq) l = boost::multiprecision::lcm(l, BigInt(q));
    BigInt bound = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(N));
    if (l > bound)
        throw ValidationError("lcm of the denominator set exceeds 3^N");
}

SigmaSet build_sigma(const std::vector<Index>& p_leq, int dimension,
                     std::size_t cap) {
    if (dimension < 1) throw ValidationError("sigma set needs dimension >= 1");
    SigmaSet sigma;
    for (Index q : p_leq) {
        const Index lo = -(q / 2);
        const Index hi = (q - 1) / 2;
        std::vector<Index> a(static_cast<std::size_t>(dimension), lo);
        for (;;) {
            Index g = q;
            for (Index c : a) g = std::gcd(g, std::abs(c));
            if (g == 1) {
                sigma.fractions.push_back(RationalFraction{a, q});
                if (sigma.fractions.size() > cap)
                    throw MemoryBudgetError("sigma set exceeds the cap of " +
                                            std::to_string(cap) + " fractions");
            }
            std::size_t axis = a.size();
            while (axis > 0) {
                --axis;
                if (a[axis] < hi) { ++a[axis]; break; }
                a[axis] = lo;
                if (axis == 0) goto next_q;
            }
        }
    next_q:;
    }
    return sigma;
}

SigmaSet sigma_difference(const SigmaSet& big, const SigmaSet& small) {
    SigmaSet out;
    std::set_difference(big.fractions.begin(), big.fractions.end(),
                        small.fractions.begin(), small.fractions.end(),
                        std::back_inserter(out.fractions));
    return out;
}

IWFamily IWFamily::build(int u, Index N, int dimension) {
    if (u < 1) throw ValidationError("Ionescu-Wainger parameter u must be >= 1");
    IWFamily family;
    family.u = u;
    family.rho = 1.0 / (10.0 * u);
    family.N = N;
    family.p_leq = build_p_leq(N);
    family.sigma = build_sigma(family.p_leq, dimension);
    return family;
}

double IWFamily::cardinality_log_gap(int dimension) const {
    return std::log(static_cast<double>(sigma.size())) -
           (dimension + 1) * std::pow(static_cast<double>(N), rho);
}

namespace {

Index checked_mul(Index a, Index b, const char* context) {
    Index out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw OverflowError(std::string(context) + ": 64-bit overflow");
    return out;
}

// monomial y^gamma as int64, checked
Index monomial_i64(const Point& y, const MultiIndex& gamma) {
    Index acc = 1;
    for (std::size_t i = 0; i < gamma.size(); ++i)
        for (int e = 0; e < gamma[i]; ++e)
            acc = checked_mul(acc, y[i], "exponential sum monomial");
    return acc;
}

std::complex<double> unit_phase(double phase) {
    const double arg = 2.0 * std::numbers::pi * phase;
    return {std::cos(arg), std::sin(arg)};
}

}  // namespace

std::complex<double> exponential_sum_m(const CanonicalMapping& map,
                                       const ConvexBody& body, double N,
                                       const Frequency& xi) {
    if (xi.size() != static_cast<std::size_t>(map.dimension()))
        throw ValidationError("frequency dimension mismatch");
    const auto points = enumerate_lattice_points(body, map.arity(), N);
    const auto& gammas = map.gamma();
    std::complex<double> sum = 0.0;
    for (const auto& y : points) {
        double phase = 0.0;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            // per-term reduction keeps the phase small without changing e(.)
            phase += torus_reduce(xi[i] * static_cast<double>(monomial_i64(y, gammas[i])));
        }
        sum += unit_phase(phase);
    }
    return sum / static_cast<double>(points.size());
}

std::complex<double> exponential_sum_m(const PolynomialMap& map,
                                       const ConvexBody& body, double N,
                                       const Frequency& xi) {
    if (xi.size() != static_cast<std::size_t>(map.dimension()))
        throw ValidationError("frequency dimension mismatch");
    const auto points = enumerate_lattice_points(body, map.arity(), N);
    std::complex<double> sum = 0.0;
    for (const auto& y : points) {
        const Point z = map.evaluate(y);
        double phase = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i)
            phase += torus_reduce(xi[i] * static_cast<double>(z[i]));
        sum += unit_phase(phase);
    }
    return sum / static_cast<double>(points.size());
}

std::complex<double> gauss_sum(const CanonicalMapping& map,
                               const std::vector<Index>& numerators, Index q) {
    if (q < 1) throw ValidationError("gauss sum needs q >= 1");
    if (numerators.size() != static_cast<std::size_t>(map.dimension()))
        throw ValidationError("gauss sum numerator dimension mismatch");
    const int k = map.arity();
    const auto& gammas = map.gamma();

    // residues of r^gamma mod q for r in [1, q]
    auto powmod = [q](Index base, int exp) {
        Index b = ((base % q) + q) % q;
        Index acc = 1 % q;
        for (int e = 0; e < exp; ++e) acc = (acc * b) % q;
        return acc;
    };

    std::vector<Index> residue_counts(static_cast<std::size_t>(q), 0);
    Point r(static_cast<std::size_t>(k), 1);
    for (;;) {
        Index phase = 0;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            Index mono = 1;
            for (std::size_t v = 0; v < gammas[i].size(); ++v)
                mono = (mono * powmod(r[v], gammas[i][v])) % q;
            const Index a = ((numerators[i] % q) + q) % q;
            phase = (phase + a * mono) % q;
        }
        ++residue_counts[static_cast<std::size_t>(phase)];
        std::size_t axis = r.size();
        while (axis > 0) {
            --axis;
            if (r[axis] < q) { ++r[axis]; break; }
            r[axis] = 1;
            if (axis == 0) goto tally;
        }
    }
tally:
    std::complex<double> sum = 0.0;
    for (Index m = 0; m < q; ++m) {
        if (residue_counts[static_cast<std::size_t>(m)] == 0) continue;
        sum += static_cast<double>(residue_counts[static_cast<std::size_t>(m)]) *
               unit_phase(static_cast<double>(m) / static_cast<double>(q));
    }
    return sum / std::pow(static_cast<double>(q), k);
}

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr unsigned kQuadDepth = 13;

double quad_1d(const std::function<double(double)>& f, double a, double b,
               double tol, double* err_out) {
    double error = 0.0;
    const double value =
        gauss_kronrod<double, 61>::integrate(f, a, b, kQuadDepth, tol, &error);
    if (err_out) *err_out = error;
    return value;
}

}  // namespace

std::complex<double> oscillatory_integral_phi(const CanonicalMapping& map,
                                              const ConvexBody& body, double N,
                                              const Frequency& xi, double tol) {
    if (N <= 0.0) throw ValidationError("scale N must be positive");
    if (xi.size() != static_cast<std::size_t>(map.dimension()))
        throw ValidationError("frequency dimension mismatch");
    const int k = map.arity();

    // linear one-dimensional case has the sinc closed form
    if (k == 1 && map.degree() == 1) {
        const double u = 2.0 * std::numbers::pi * N * xi[0];
        if (u == 0.0) return 1.0;
        return std::sin(u) / u;
    }

    // substitute t = N s: dilated frequency eta_gamma = N^{|gamma|} xi_gamma
    const auto& gammas = map.gamma();
    std::vector<double> eta(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        eta[i] = std::pow(N, map.dilation_exponents()[i]) * xi[i];

    double achieved = 0.0;
    auto note_error = [&achieved](double e) { achieved = std::max(achieved, e); };

    if (k == 1) {
        auto phase = [&](double s) {
            double p = 0.0;
            double mono = 1.0;
            // gamma = (1), (2), ..., (deg) in order
            for (std::size_t i = 0; i < eta.size(); ++i) {
                mono *= s;
                p += eta[i] * mono;
            }
            return 2.0 * std::numbers::pi * p;
        };
        const double half = body.inner_radius(1);  // ball and cube agree for k = 1
        double e1 = 0.0, e2 = 0.0;
        const double re = quad_1d([&](double s) { return std::cos(phase(s)); },
                                  -half, half, tol, &e1);
        const double im = quad_1d([&](double s) { return std::sin(phase(s)); },
                                  -half, half, tol, &e2);
        note_error(e1);
        note_error(e2);
        if (achieved > tol * 10.0)
            throw QuadratureError("oscillatory integral did not reach tolerance",
                                  achieved);
        return std::complex<double>(re, im) / body.volume(1);
    }

    if (k != 2)
        throw ValidationError("oscillatory integral implemented for arity <= 2");

    auto phase2 = [&](double s1, double s2) {
        double p = 0.0;
        for (std::size_t i = 0; i < gammas.size(); ++i)
            p += eta[i] * std::pow(s1, gammas[i][0]) * std::pow(s2, gammas[i][1]);
        return 2.0 * std::numbers::pi * p;
    };
    const bool is_ball = body.kind() == ConvexBody::Kind::Ball;
    const double half = body.inner_radius(2);
    auto inner = [&](double s1, bool real_part) {
        const double reach = is_ball ? std::sqrt(std::max(0.0, 1.0 - s1 * s1)) : half;
        if (reach <= 0.0) return 0.0;
        double e = 0.0;
        const double v = quad_1d(
            [&](double s2) {
                return real_part ? std::cos(phase2(s1, s2)) : std::sin(phase2(s1, s2));
            },
            -reach, reach, tol * 0.25, &e);
        note_error(e);
        return v;
    };
    const double outer_reach = is_ball ? 1.0 : half;
    double e1 = 0.0, e2 = 0.0;
    const double re = quad_1d([&](double s1) { return inner(s1, true); },
                              -outer_reach, outer_reach, tol, &e1);
    const double im = quad_1d([&](double s1) { return inner(s1, false); },
                              -outer_reach, outer_reach, tol, &e2);
    note_error(e1);
    note_error(e2);
    if (achieved > tol * 100.0)
        throw QuadratureError("oscillatory integral did not reach tolerance", achieved);
    return std::complex<double>(re, im) / body.volume(2);
}

PhiDecayReport decay_check_phi(const CanonicalMapping& map, const ConvexBody& body,
                               double N, const std::vector<Frequency>& grid) {
    if (grid.empty()) throw ValidationError("decay check needs a nonempty grid");
    PhiDecayReport report;
    report.grid_size = grid.size();
    const int dim = map.dimension();
    for (const auto& xi : grid) {
        double dil = 0.0;
        for (int i = 0; i < dim; ++i)
            dil = std::max(dil, std::abs(std::pow(N, map.dilation_exponents()[i]) *
                                         xi[static_cast<std::size_t>(i)]));
        const std::complex<double> phi = oscillatory_integral_phi(map, body, N, xi);
        if (dil > 0.0) {
            report.vdc_sup = std::max(report.vdc_sup,
                                      std::abs(phi) * std::pow(dil, 1.0 / dim));
            report.lipschitz_sup =
                std::max(report.lipschitz_sup, std::abs(phi - 1.0) / dil);
        }
    }
    return report;
}

GaussDecayFit gauss_decay_fit(const CanonicalMapping& map, Index q_max,
                              std::uint64_t seed, int samples) {
    if (q_max < 10) throw ValidationError("gauss decay fit needs q_max >= 10");
    const int dim = map.dimension();
    GaussDecayFit fit;
    std::mt19937_64 rng(seed);

    for (Index q = 1; q <= q_max; ++q) {
        GaussDecayRow row;
        row.q = q;
        const Index lo = -(q / 2);
        const Index hi = (q - 1) / 2;
        auto admissible = [&](const std::vector<Index>& a) {
            Index g = q;
            for (Index c : a) g = std::gcd(g, std::abs(c));
            return g == 1;
        };
        auto consider = [&](const std::vector<Index>& a) {
            row.max_abs = std::max(row.max_abs, std::abs(gauss_sum(map, a, q)));
        };
        if (q <= 50) {
            std::vector<Index> a(static_cast<std::size_t>(dim), lo);
            for (;;) {
                if (admissible(a)) consider(a);
                std::size_t axis = a.size();
                while (axis > 0) {
                    --axis;
                    if (a[axis] < hi) { ++a[axis]; break; }
                    a[axis] = lo;
                    if (axis == 0) goto scanned;
                }
            }
        scanned:;
        } else {
            row.exhaustive = false;
            // deterministic probes, then seeded draws
            std::vector<Index> probe(static_cast<std::size_t>(dim), 0);
            probe.back() = 1;
            consider(probe);
            consider(std::vector<Index>(static_cast<std::size_t>(dim), 1));
            std::uniform_int_distribution<Index> dist(lo, hi);
            int kept = 0;
            for (int attempts = 0; kept < samples && attempts < samples * 8; ++attempts) {
                std::vector<Index> a(static_cast<std::size_t>(dim));
                for (auto& c : a) c = dist(rng);
                if (!admissible(a)) continue;
                consider(a);
                ++kept;
            }
        }
        fit.rows.push_back(row);
    }

    // least squares of log max|G| on log q, skipping exact cancellations
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    bool any_mass = false;
    for (const auto& row : fit.rows) {
        if (row.q >= 2 && row.max_abs > 1e-14) any_mass = true;
        if (row.max_abs <= 1e-14) continue;
        const double x = std::log(static_cast<double>(row.q));
        const double y = std::log(row.max_abs);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (!any_mass || m < 2) {
        fit.exact_cancellation = true;
        return fit;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.delta_hat = -slope;
    fit.log_constant = (sy - slope * sx) / static_cast<double>(m);
    return fit;
}

BumpProfile BumpProfile::standard(int dimension) {
    if (dimension < 1) throw ValidationError("bump profile needs dimension >= 1");
    BumpProfile p;
    p.dimension = dimension;
    p.inner_radius = 1.0 / (16.0 * dimension);
    p.outer_radius = 1.0 / (8.0 * dimension);
    return p;
}

double bump_eta(const BumpProfile& profile, double radius) {
    if (radius <= profile.inner_radius) return 1.0;
    if (radius >= profile.outer_radius) return 0.0;
    const double u =
        (radius - profile.inner_radius) / (profile.outer_radius - profile.inner_radius);
    // C^2 smootherstep ramp
    const double s = u * u * u * (u * (6.0 * u - 15.0) + 10.0);
    return 1.0 - s;
}

double bump_eta(const BumpProfile& profile, const RealPoint& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return bump_eta(profile, std::sqrt(s));
}

int kappa_s(int dimension, int s) {
    if (dimension < 1 || s < 0) throw ValidationError("bad kappa arguments");
    return 20 * dimension *
           static_cast<int>(std::ceil(std::pow(static_cast<double>(s + 1), 0.1)));
}

IWProjection::IWProjection(CanonicalMapping map, ProjectionParams params)
    : map_(std::move(map)),
      params_(params),
      profile_(BumpProfile::standard(map_.dimension())) {
    if (!(params_.chi > 0.0 && params_.chi < 0.1))
        throw ValidationError("projection parameter chi must lie in (0, 1/10)");
    if (params_.u < 1) throw ValidationError("projection parameter u must be >= 1");
}

namespace {

Index pow_index(Index base, int exp) {
    Index acc = 1;
    for (int e = 0; e < exp; ++e) acc = checked_mul(acc, base, "sigma level");
    return acc;
}

}  // namespace

const SigmaSet& IWProjection::sigma_leq(Index N) const {
    if (N < 1) N = 1;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = sigma_cache_.find(N);
    if (it == sigma_cache_.end()) {
        auto built = std::make_unique<SigmaSet>(
            build_sigma(build_p_leq(N), map_.dimension()));
        it = sigma_cache_.emplace(N, std::move(built)).first;
    }
    return *it->second;
}

const SigmaSet& IWProjection::shell(int s) const {
    if (s < 0) throw ValidationError("shell index must be >= 0");
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = shell_cache_.find(s);
        if (it != shell_cache_.end()) return *it->second;
    }
    SigmaSet result;
    if (s == 0) {
        result = sigma_leq(1);
    } else {
        const SigmaSet& big = sigma_leq(pow_index(s + 1, params_.u));
        const SigmaSet& small = sigma_leq(pow_index(s, params_.u));
        result = sigma_difference(big, small);
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = shell_cache_.find(s);
    if (it == shell_cache_.end())
        it = shell_cache_.emplace(s, std::make_unique<SigmaSet>(std::move(result))).first;
    return *it->second;
}

namespace {

// eta evaluated at the dilated torus offset; scale[i] multiplies coordinate i.
double eta_dilated(const BumpProfile& profile, const Frequency& xi,
                   const Frequency& center, const std::vector<double>& scale,
                   double radius_divisor = 1.0) {
    double s = 0.0;
    const double cutoff = profile.outer_radius * radius_divisor;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double c = torus_reduce(xi[i] - center[i]) * scale[i];
        if (std::abs(c) >= cutoff) return 0.0;
        s += c * c;
    }
    return bump_eta(profile, std::sqrt(s) / radius_divisor);
}

}  // namespace

double IWProjection::xi_n(int n, const Frequency& xi) const {
    const auto& sigma = sigma_leq(pow_index(std::max(n, 1), params_.u));
    std::vector<double> scale(static_cast<std::size_t>(map_.dimension()));
    for (std::size_t i = 0; i < scale.size(); ++i)
        scale[i] = std::exp2(n * (map_.dilation_exponents()[i] - params_.chi));
    double sum = 0.0;
    for (const auto& frac : sigma.fractions) {
        const double e = eta_dilated(profile_, xi, frac.as_frequency(), scale);
        sum += e * e;
    }
    return sum;
}

double IWProjection::xi_n_s(int n, int s, const Frequency& xi) const {
    const auto& sigma = shell(s);
    const int dim = map_.dimension();
    std::vector<double> scale_n(static_cast<std::size_t>(dim)),
        scale_s(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double a = map_.dilation_exponents()[i] - params_.chi;
        scale_n[static_cast<std::size_t>(i)] = std::exp2(n * a);
        scale_s[static_cast<std::size_t>(i)] = std::exp2(s * a);
    }
    double sum = 0.0;
    for (const auto& frac : sigma.fractions) {
        const Frequency center = frac.as_frequency();
        const double e = eta_dilated(profile_, xi, center, scale_n);
        if (e == 0.0) continue;
        const double tilde = eta_dilated(profile_, xi, center, scale_s, 2.0);
        sum += e * e * tilde * tilde;
    }
    return sum;
}

double IWProjection::xi_n_sj(int n, int s, double j, const Frequency& xi) const {
    const auto& sigma = shell(s);
    const int dim = map_.dimension();
    std::vector<double> scale_j(static_cast<std::size_t>(dim)),
        scale_s(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        scale_j[static_cast<std::size_t>(i)] =
            std::exp2(n * map_.dilation_exponents()[i] + j);
        scale_s[static_cast<std::size_t>(i)] =
            std::exp2(s * (map_.dilation_exponents()[i] - params_.chi));
    }
    double sum = 0.0;
    for (const auto& frac : sigma.fractions) {
        const Frequency center = frac.as_frequency();
        const double e = eta_dilated(profile_, xi, center, scale_j);
        if (e == 0.0) continue;
        const double tilde = eta_dilated(profile_, xi, center, scale_s, 2.0);
        sum += e * e * tilde * tilde;
    }
    return sum;
}

double IWProjection::delta_j1(int n, int s, int j, const Frequency& xi) const {
    const auto& sigma = shell(s);
    const int dim = map_.dimension();
    std::vector<double> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim)),
        scale_s(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        lo[static_cast<std::size_t>(i)] = std::exp2(n * map_.dilation_exponents()[i] + (j - 1));
        hi[static_cast<std::size_t>(i)] = std::exp2(n * map_.dilation_exponents()[i] + (j + 2));
        scale_s[static_cast<std::size_t>(i)] =
            std::exp2(s * (map_.dilation_exponents()[i] - params_.chi));
    }
    double sum = 0.0;
    for (const auto& frac : sigma.fractions) {
        const Frequency center = frac.as_frequency();
        const double a = eta_dilated(profile_, xi, center, lo);
        const double b = eta_dilated(profile_, xi, center, hi);
        if (a == b) continue;
        const double tilde = eta_dilated(profile_, xi, center, scale_s, 2.0);
        sum += (a - b) * tilde;
    }
    return sum;
}

double IWProjection::delta_j2(int n, int s, int j, const Frequency& xi) const {
    const auto& sigma = shell(s);
    const int dim = map_.dimension();
    std::vector<double> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim)),
        scale_s(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        lo[static_cast<std::size_t>(i)] = std::exp2(n * map_.dilation_exponents()[i] + j);
        hi[static_cast<std::size_t>(i)] = std::exp2(n * map_.dilation_exponents()[i] + (j + 1));
        scale_s[static_cast<std::size_t>(i)] =
            std::exp2(s * (map_.dilation_exponents()[i] - params_.chi));
    }
    double sum = 0.0;
    for (const auto& frac : sigma.fractions) {
        const Frequency center = frac.as_frequency();
        const double a = eta_dilated(profile_, xi, center, lo);
        const double b = eta_dilated(profile_, xi, center, hi);
        if (a == b) continue;
        const double tilde = eta_dilated(profile_, xi, center, scale_s, 2.0);
        sum += (a * a - b * b) * tilde;
    }
    return sum;
}

double IWProjection::xi_short(int l, int j, const Frequency& xi) const {
    const auto& sigma = sigma_leq(pow_index(std::max(l, 1), params_.u));
    std::vector<double> scale(static_cast<std::size_t>(map_.dimension()));
    for (std::size_t i = 0; i < scale.size(); ++i)
        scale[i] = std::exp2(l * map_.dilation_exponents()[i] + j);
    double sum = 0.0;
    for (const auto& frac : sigma.fractions)
        sum += eta_dilated(profile_, xi, frac.as_frequency(), scale);
    return sum;
}

double IWProjection::min_pairwise_separation(Index N) const {
    const auto& sigma = sigma_leq(N);
    double best = 1.0;
    for (std::size_t i = 0; i < sigma.fractions.size(); ++i) {
        const Frequency a = sigma.fractions[i].as_frequency();
        for (std::size_t j = i + 1; j < sigma.fractions.size(); ++j) {
            const Frequency b = sigma.fractions[j].as_frequency();
            double dist = 0.0;
            for (std::size_t c = 0; c < a.size(); ++c)
                dist = std::max(dist, torus_distance(a[c], b[c]));
            best = std::min(best, dist);
        }
    }
    return best;
}

bool IWProjection::supports_disjoint(int n) const {
    const auto& sigma = sigma_leq(pow_index(std::max(n, 1), params_.u));
    const int dim = map_.dimension();
    std::vector<double> reach(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        reach[static_cast<std::size_t>(i)] =
            profile_.outer_radius *
            std::exp2(-n * (map_.dilation_exponents()[i] - params_.chi));
    for (std::size_t i = 0; i < sigma.fractions.size(); ++i) {
        const Frequency a = sigma.fractions[i].as_frequency();
        for (std::size_t j = i + 1; j < sigma.fractions.size(); ++j) {
            const Frequency b = sigma.fractions[j].as_frequency();
            bool separated = false;
            for (std::size_t c = 0; c < a.size(); ++c) {
                if (torus_distance(a[c], b[c]) > 2.0 * reach[c]) {
                    separated = true;
                    break;
                }
            }
            if (!separated) return false;
        }
    }
    return true;
}

GridFunction multiplier_apply(const Multiplier& m, const GridFunction& f) {
    const int d = f.dimension();
    if (m.degree.size() != static_cast<std::size_t>(d))
        throw ValidationError("multiplier degree dimension mismatch");

    std::vector<int> dims(static_cast<std::size_t>(d));
    Index total = 1;
    Box out_box = f.box();
    for (int axis = 0; axis < d; ++axis) {
        const Index deg = m.degree[static_cast<std::size_t>(axis)];
        if (deg < 0) throw ValidationError("multiplier degree must be >= 0");
        const Index width = f.box().extent(axis) + 2 * deg + 1;
        const Index padded = detail::next_pow2(width);
        if (total > GridFunction::kMaxEntries / padded)
            throw MemoryBudgetError(
                "padding for the declared multiplier degree exceeds the budget");
        total *= padded;
        dims[static_cast<std::size_t>(axis)] = static_cast<int>(padded);
        out_box.lo[static_cast<std::size_t>(axis)] -= deg;
        out_box.hi[static_cast<std::size_t>(axis)] += deg;
    }

    std::vector<std::complex<double>> pad(static_cast<std::size_t>(total), {0.0, 0.0});
    auto flatten_padded = [&](const Point& offset) {
        Index idx = 0;
        for (int axis = 0; axis < d; ++axis)
            idx = idx * dims[static_cast<std::size_t>(axis)] +
                  offset[static_cast<std::size_t>(axis)];
        return idx;
    };
    for (Index flat = 0; flat < f.size(); ++flat) {
        Point x = f.box().unflatten(flat);
        for (int axis = 0; axis < d; ++axis)
            x[static_cast<std::size_t>(axis)] -= f.box().lo[static_cast<std::size_t>(axis)];
        pad[static_cast<std::size_t>(flatten_padded(x))] = f[flat];
    }

    // analysis with e(+ x.xi) convention, then pointwise multiply, then synthesis
    detail::dft_inplace(dims, pad.data(), FFTW_BACKWARD);
    Frequency xi(static_cast<std::size_t>(d));
    Point node(static_cast<std::size_t>(d), 0);
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        for (int axis = d - 1; axis >= 0; --axis) {
            const Index len = dims[static_cast<std::size_t>(axis)];
            node[static_cast<std::size_t>(axis)] = rem % len;
            rem /= len;
        }
        for (int axis = 0; axis < d; ++axis)
            xi[static_cast<std::size_t>(axis)] =
                torus_reduce(static_cast<double>(node[static_cast<std::size_t>(axis)]) /
                             static_cast<double>(dims[static_cast<std::size_t>(axis)]));
        pad[static_cast<std::size_t>(flat)] *= m.eval(xi);
    }
    detail::dft_inplace(dims, pad.data(), FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(total);

    GridFunction out(out_box);
    for (Index flat = 0; flat < out.size(); ++flat) {
        Point x = out_box.unflatten(flat);
        Point offset(x.size());
        for (int axis = 0; axis < d; ++axis) {
            const Index len = dims[static_cast<std::size_t>(axis)];
            Index v = x[static_cast<std::size_t>(axis)] -
                      f.box().lo[static_cast<std::size_t>(axis)];
            offset[static_cast<std::size_t>(axis)] = ((v % len) + len) % len;
        }
        out[flat] = pad[static_cast<std::size_t>(flatten_padded(offset))] * inv;
    }
    return out;
}

Multiplier radon_multiplier(const PolynomialMap& map, const ConvexBody& body,
                            double t) {
    auto kernel = std::make_shared<RadonKernel>(build_kernel(map, body, t));
    const Box hull = kernel->support_hull();
    std::vector<Index> degree(static_cast<std::size_t>(hull.dimension()));
    for (int axis = 0; axis < hull.dimension(); ++axis)
        degree[static_cast<std::size_t>(axis)] =
            std::max(std::abs(hull.lo[static_cast<std::size_t>(axis)]),
                     std::abs(hull.hi[static_cast<std::size_t>(axis)]));
    auto eval = [kernel](const Frequency& xi) {
        std::complex<double> sum = 0.0;
        for (const auto& [z, count] : kernel->counts) {
            double phase = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i)
                phase += torus_reduce(xi[i] * static_cast<double>(z[i]));
            sum += static_cast<double>(count) *
                   std::complex<double>(std::cos(2.0 * std::numbers::pi * phase),
                                        std::sin(2.0 * std::numbers::pi * phase));
        }
        return sum / static_cast<double>(kernel->normalization);
    };
    return Multiplier{std::move(eval), std::move(degree)};
}

ApproximationErrorReport approximation_error(const CanonicalMapping& map,
                                             const ConvexBody& body, int n,
                                             const RationalFraction& fraction,
                                             const std::vector<Frequency>& offsets) {
    if (offsets.empty()) throw ValidationError("approximation error needs offsets");
    ApproximationErrorReport report;
    report.n = n;
    report.trend_target = std::exp2(-0.5 * n);
    const double N = std::exp2(n);
    const Frequency center = fraction.as_frequency();
    const std::complex<double> g = gauss_sum(map, fraction.numerators, fraction.q);
    for (const auto& offset : offsets) {
        Frequency xi(center.size());
        for (std::size_t i = 0; i < center.size(); ++i)
            xi[i] = torus_reduce(center[i] + offset[i]);
        const std::complex<double> lhs = exponential_sum_m(map, body, N, xi);
        const std::complex<double> rhs =
            g * oscillatory_integral_phi(map, body, N, offset);
        report.rows.push_back({offset, std::abs(lhs - rhs)});
        report.max_error = std::max(report.max_error, report.rows.back().error);
    }
    return report;
}

std::vector<Frequency> near_zero_offsets(const CanonicalMapping& map, int n,
                                         double chi) {
    const int dim = map.dimension();
    std::vector<double> reach(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        reach[static_cast<std::size_t>(i)] =
            (1.0 / (16.0 * dim)) *
            std::exp2(-n * (map.dilation_exponents()[i] - chi));
    const std::vector<double> fractions = {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0};

    std::vector<Frequency> offsets;
    if (dim <= 2) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(dim), 0);
        for (;;) {
            Frequency off(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i)
                off[static_cast<std::size_t>(i)] =
                    fractions[pick[static_cast<std::size_t>(i)]] *
                    reach[static_cast<std::size_t>(i)];
            offsets.push_back(off);
            std::size_t axis = pick.size();
            while (axis > 0) {
                --axis;
                if (pick[axis] + 1 < fractions.size()) { ++pick[axis]; break; }
                pick[axis] = 0;
                if (axis == 0) return offsets;
            }
        }
    }
    offsets.emplace_back(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
        for (double fr : fractions) {
            if (fr == 0.0) continue;
            Frequency off(static_cast<std::size_t>(dim), 0.0);
            off[static_cast<std::size_t>(i)] = fr * reach[static_cast<std::size_t>(i)];
            offsets.push_back(off);
        }
    }
    return offsets;
}

std::vector<Frequency> uniform_frequency_grid(int dimension, int per_axis) {
    if (dimension < 1 || per_axis < 1)
        throw ValidationError("bad uniform grid parameters");
    double total = std::pow(static_cast<double>(per_axis), dimension);
    if (total > 4e6) throw MemoryBudgetError("uniform frequency grid too large");
    std::vector<Frequency> grid;
    grid.reserve(static_cast<std::size_t>(total));
    std::vector<int> pick(static_cast<std::size_t>(dimension), 0);
    for (;;) {
        Frequency xi(static_cast<std::size_t>(dimension));
        for (int i = 0; i < dimension; ++i)
            xi[static_cast<std::size_t>(i)] =
                -0.5 + static_cast<double>(pick[static_cast<std::size_t>(i)]) /
                           static_cast<double>(per_axis);
        grid.push_back(xi);
        std::size_t axis = pick.size();
        while (axis > 0) {
            --axis;
            if (pick[axis] + 1 < per_axis) { ++pick[axis]; break; }
            pick[axis] = 0;
            if (axis == 0) return grid;
        }
    }
}

std::vector<Frequency> arc_focused_grid(const RationalFraction& fraction,
                                        double radius, int count,
                                        std::uint64_t seed) {
    if (!(radius > 0.0) || count < 1)
        throw ValidationError("bad arc-focused grid parameters");
    const Frequency center = fraction.as_frequency();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-radius, radius);
    std::vector<Frequency> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Frequency xi(center.size());
        for (std::size_t c = 0; c < center.size(); ++c)
            xi[c] = torus_reduce(center[c] + dist(rng));
        grid.push_back(xi);
    }
    return grid;
}

}  // namespace rsl
