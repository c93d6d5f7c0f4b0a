#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rsl/grid.hpp"
#include "rsl/lattice.hpp"

namespace rsl {

// Frequency point on T^Gamma = [-1/2, 1/2)^dim.
using Frequency = std::vector<double>;

double torus_reduce(double x);
Frequency torus_reduce(const Frequency& xi);
double torus_distance(double x, double y);

// Reduced fraction a/q on the torus: gcd(gcd_gamma(a_gamma), q) = 1.
struct RationalFraction {
    std::vector<Index> numerators;
    Index q = 1;

    Frequency as_frequency() const;  // each a_gamma/q reduced into [-1/2, 1/2)
    bool operator<(const RationalFraction& other) const {
        if (q != other.q) return q < other.q;
        return numerators < other.numerators;
    }
    bool operator==(const RationalFraction& other) const {
        return q == other.q && numerators == other.numerators;
    }
};

// Admissible denominator set. The default is {1, ..., N}; any custom variant
// must pass the same validation.
std::vector<Index> build_p_leq(Index N);
// Checks: {1..N} inclusion bounds, factor closure, lcm <= 3^N (exact bigint).
void validate_p_leq(const std::vector<Index>& p_leq, Index N);

struct SigmaSet {
    std::vector<RationalFraction> fractions;  // sorted by (q, numerators)
    std::size_t size() const { return fractions.size(); }
};

// All reduced fractions with denominator in p_leq, deterministic order.
SigmaSet build_sigma(const std::vector<Index>& p_leq, int dimension,
                     std::size_t cap = 5'000'000);
SigmaSet sigma_difference(const SigmaSet& big, const SigmaSet& small);

struct IWFamily {
    int u = 1;
    double rho = 0.1;  // 1/(10u)
    Index N = 1;
    std::vector<Index> p_leq;
    SigmaSet sigma;

    static IWFamily build(int u, Index N, int dimension);
    // log |Sigma| - (d+1) N^rho; informational only.
    double cardinality_log_gap(int dimension) const;
};

// Normalized exponential sum over Omega_N lattice points.
std::complex<double> exponential_sum_m(const CanonicalMapping& map,
                                       const ConvexBody& body, double N,
                                       const Frequency& xi);
std::complex<double> exponential_sum_m(const PolynomialMap& map,
                                       const ConvexBody& body, double N,
                                       const Frequency& xi);

// G(a/q) = q^{-k} sum_{r in {1..q}^k} e((a/q) . (r)^Gamma); phases reduced
// mod q in exact integer arithmetic.
std::complex<double> gauss_sum(const CanonicalMapping& map,
                               const std::vector<Index>& numerators, Index q);

// Phi_N(xi) = |Omega_N|^{-1} int_{Omega_N} e(xi . (t)^Gamma) dt. Closed form
// for the linear one-dimensional case, adaptive Gauss-Kronrod otherwise
// (arity <= 2).
std::complex<double> oscillatory_integral_phi(const CanonicalMapping& map,
                                              const ConvexBody& body, double N,
                                              const Frequency& xi,
                                              double tol = 1e-10);

struct PhiDecayReport {
    double vdc_sup = 0.0;        // sup |Phi_N| * |N^A xi|_inf^{1/|Gamma|}
    double lipschitz_sup = 0.0;  // sup |Phi_N - 1| / |N^A xi|_inf
    std::size_t grid_size = 0;
};
PhiDecayReport decay_check_phi(const CanonicalMapping& map, const ConvexBody& body,
                               double N, const std::vector<Frequency>& grid);

struct GaussDecayRow {
    Index q = 1;
    double max_abs = 0.0;
    bool exhaustive = true;
};
struct GaussDecayFit {
    double delta_hat = 0.0;
    double log_constant = 0.0;
    bool exact_cancellation = false;  // max |G| vanishes for every q >= 2
    std::vector<GaussDecayRow> rows;
};
// Full scan over numerators for q <= 50, deterministic probes plus seeded
// sampling above; least squares of log max|G| against log q.
GaussDecayFit gauss_decay_fit(const CanonicalMapping& map, Index q_max,
                              std::uint64_t seed = 1, int samples = 200);

// Radial plateau/cutoff profile: 1 on [0, 1/(16 d)], 0 outside [0, 1/(8 d)],
// C^2 smoothstep between.
struct BumpProfile {
    int dimension = 1;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    int smoothness_order = 2;

    static BumpProfile standard(int dimension);
};
double bump_eta(const BumpProfile& profile, double radius);
double bump_eta(const BumpProfile& profile, const RealPoint& x);

struct ProjectionParams {
    double chi = 0.05;  // in (0, 1/10)
    int u = 1;
};

int kappa_s(int dimension, int s);  // 20 d ceil((s+1)^{1/10})

// Ionescu-Wainger projection multipliers around the fractions of Sigma.
// Shells Sigma_{s^u} = Sigma_{<=(s+1)^u} \ Sigma_{<=s^u}; Sigma_{0^u} = {0}.
class IWProjection {
public:
    IWProjection(CanonicalMapping map, ProjectionParams params);

    const CanonicalMapping& mapping() const { return map_; }
    const ProjectionParams& params() const { return params_; }
    const BumpProfile& profile() const { return profile_; }

    double xi_n(int n, const Frequency& xi) const;             // eta^2 bumps, Sigma_{<=n^u}
    double xi_n_s(int n, int s, const Frequency& xi) const;    // shell version
    double xi_n_sj(int n, int s, double j, const Frequency& xi) const;
    double delta_j1(int n, int s, int j, const Frequency& xi) const;
    double delta_j2(int n, int s, int j, const Frequency& xi) const;
    double xi_short(int l, int j, const Frequency& xi) const;  // single eta, Sigma_{<=l^u}

    const SigmaSet& sigma_leq(Index N) const;   // cached
    const SigmaSet& shell(int s) const;         // cached
    // Smallest pairwise separation bookkeeping for the disjointness report.
    double min_pairwise_separation(Index N) const;
    bool supports_disjoint(int n) const;

private:
    CanonicalMapping map_;
    ProjectionParams params_;
    BumpProfile profile_;
    mutable std::mutex cache_mutex_;
    mutable std::map<Index, std::unique_ptr<SigmaSet>> sigma_cache_;
    mutable std::map<int, std::unique_ptr<SigmaSet>> shell_cache_;
};

// Fourier multiplier operator on a padded box; exact for trigonometric
// polynomials whose spatial support half-width fits the declared degree.
struct Multiplier {
    std::function<std::complex<double>(const Frequency&)> eval;
    std::vector<Index> degree;  // kernel half-width per axis
};
GridFunction multiplier_apply(const Multiplier& m, const GridFunction& f);

// m_t of a polynomial map as a Multiplier with its exact declared degree.
Multiplier radon_multiplier(const PolynomialMap& map, const ConvexBody& body,
                            double t);

struct ApproximationErrorRow {
    Frequency offset;
    double error = 0.0;
};
struct ApproximationErrorReport {
    int n = 0;
    double max_error = 0.0;
    double trend_target = 0.0;  // 2^{-n/2}
    std::vector<ApproximationErrorRow> rows;
};
// |m_{2^n}(a/q + offset) - G(a/q) Phi_{2^n}(offset)| over an offset grid.
ApproximationErrorReport approximation_error(const CanonicalMapping& map,
                                             const ConvexBody& body, int n,
                                             const RationalFraction& fraction,
                                             const std::vector<Frequency>& offsets);
// Offsets within the level-n bump support scale, full tensor for dim <= 2.
std::vector<Frequency> near_zero_offsets(const CanonicalMapping& map, int n,
                                         double chi);

std::vector<Frequency> uniform_frequency_grid(int dimension, int per_axis);
std::vector<Frequency> arc_focused_grid(const RationalFraction& fraction,
                                        double radius, int count,
                                        std::uint64_t seed);

}  // namespace rsl
