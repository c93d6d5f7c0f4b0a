#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rsl/grid.hpp"
#include "rsl/lattice.hpp"

namespace rsl {

// Fiber counts of P over Omega_t: counts[z] = #{y in Omega_t cap Z^k : P(y) = z}.
struct RadonKernel {
    double t = 0.0;
    std::map<Point, Index> counts;
    Index normalization = 0;  // |Omega_t cap Z^k|

    int dimension() const;
    Box support_hull() const;
};

RadonKernel build_kernel(const PolynomialMap& map, const ConvexBody& body, double t);

// (M_t f)(x) = normalization^{-1} sum_z counts(z) f(x - z), exact output box.
GridFunction apply_direct(const GridFunction& f, const RadonKernel& kernel);

// Same operator via zero-padded cyclic convolution; padded extent is the next
// power of two >= box width + kernel width, so wraparound cannot alias.
GridFunction apply_fast(const GridFunction& f, const RadonKernel& kernel);

// Sorted positive times; the U kind keeps times of the form 2^n * m.
class TimeGrid {
public:
    enum class Kind { Dyadic, UBlocks, Explicit };

    static TimeGrid dyadic(int n0, int n1);  // 2^n0, ..., 2^n1
    // Blocks [2^l, 2^{l+1}] for l in [l0, l1), subdivided at spacing 2^{l-resolution}.
    static TimeGrid u_blocks(int l0, int l1, int resolution);
    static TimeGrid explicit_list(std::vector<double> times);
    // "dyadic:a..b" | "u:a..b" | "u:a..b:res" | "list:t1,t2,..."
    static TimeGrid parse(const std::string& spec);

    Kind kind() const { return kind_; }
    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    bool is_u_grid() const;  // every time equal to 2^n * m, n in Z, m in N
    std::string spec() const { return spec_; }

private:
    TimeGrid(Kind kind, std::vector<double> times, std::string spec);
    Kind kind_;
    std::vector<double> times_;
    std::string spec_;
};

// Keyed by (map, body, t); concurrent readers, exclusive insertion.
class KernelCache {
public:
    std::shared_ptr<const RadonKernel> get(const PolynomialMap& map,
                                           const ConvexBody& body, double t);

private:
    std::map<std::string, std::shared_ptr<const RadonKernel>> entries_;
    std::shared_mutex mutex_;
};

// One grid per time, all embedded into a common output box.
struct GridFamily {
    std::vector<double> times;
    std::vector<GridFunction> members;

    std::size_t size() const { return times.size(); }
    const Box& box() const { return members.front().box(); }
};

GridFamily average_family(const GridFunction& f, const PolynomialMap& map,
                          const ConvexBody& body, const TimeGrid& grid,
                          KernelCache* cache = nullptr);

}  // namespace rsl
