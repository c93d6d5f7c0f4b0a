#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "rsl/lattice.hpp"

namespace rsl {

// Axis-aligned integer box, inclusive bounds.
struct Box {
    std::vector<Index> lo;
    std::vector<Index> hi;

    Box() = default;
    Box(std::vector<Index> lo_, std::vector<Index> hi_);
    static Box origin(int dimension);  // {0}^d

    int dimension() const { return static_cast<int>(lo.size()); }
    Index extent(int axis) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)] + 1; }
    Index volume() const;  // checked product
    bool contains(const Point& x) const;
    Index flatten(const Point& x) const;  // row-major, last axis fastest
    Point unflatten(Index flat) const;
    static Box hull(const Box& a, const Box& b);
    Box minkowski_sum(const Box& other) const;

    bool operator==(const Box& other) const { return lo == other.lo && hi == other.hi; }
};

// Finitely supported f: Z^d -> C stored densely on a box.
class GridFunction {
public:
    // Boxes above this many entries are refused (memory budget).
    static constexpr Index kMaxEntries = Index(1) << 26;

    explicit GridFunction(Box box);
    static GridFunction dirac(int dimension);  // delta at the origin

    const Box& box() const { return box_; }
    int dimension() const { return box_.dimension(); }
    Index size() const { return static_cast<Index>(values_.size()); }

    std::complex<double>& at(const Point& x) { return values_[static_cast<std::size_t>(box_.flatten(x))]; }
    std::complex<double> value(const Point& x) const;  // 0 outside the box
    std::complex<double>& operator[](Index flat) { return values_[static_cast<std::size_t>(flat)]; }
    const std::complex<double>& operator[](Index flat) const { return values_[static_cast<std::size_t>(flat)]; }
    std::span<const std::complex<double>> values() const { return values_; }
    std::span<std::complex<double>> values() { return values_; }

    std::complex<double> mass() const;          // sum of all values
    double norm_lp(double p) const;             // p in [1, inf]
    double max_abs() const;
    GridFunction embedded(const Box& larger) const;

    // Text format: "d lo... hi..." header line, then one "re im" pair per
    // lattice point in row-major order.
    void write_text(std::ostream& out) const;
    static GridFunction read_text(std::istream& in);
    // Binary variant: "RSLGRID1\n" magic, int64 header, little-endian doubles.
    void write_binary(std::ostream& out) const;
    static GridFunction read_binary(std::istream& in);

private:
    Box box_;
    std::vector<std::complex<double>> values_;
};

}  // namespace rsl
