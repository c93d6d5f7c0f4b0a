#include "rsl/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "rsl/errors.hpp"

namespace rsl {

Box::Box(std::vector<Index> lo_, std::vector<Index> hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.empty())
        throw ValidationError("box bounds must be nonempty and of equal dimension");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw ValidationError("box with lo > hi");
}

Box Box::origin(int dimension) {
    return Box(std::vector<Index>(static_cast<std::size_t>(dimension), 0),
               std::vector<Index>(static_cast<std::size_t>(dimension), 0));
}

Index Box::volume() const {
    Index v = 1;
    for (int axis = 0; axis < dimension(); ++axis) {
        const Index e = extent(axis);
        if (v > std::numeric_limits<Index>::max() / e)
            throw MemoryBudgetError("box volume overflows 64-bit index");
        v *= e;
    }
    return v;
}

bool Box::contains(const Point& x) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

Index Box::flatten(const Point& x) const {
    Index idx = 0;
    for (std::size_t i = 0; i < lo.size(); ++i)
        idx = idx * extent(static_cast<int>(i)) + (x[i] - lo[i]);
    return idx;
}

Point Box::unflatten(Index flat) const {
    Point x(lo.size(), 0);
    for (std::size_t i = lo.size(); i-- > 0;) {
        const Index e = extent(static_cast<int>(i));
        x[i] = lo[i] + (flat % e);
        flat /= e;
    }
    return x;
}

Box Box::hull(const Box& a, const Box& b) {
    if (a.dimension() != b.dimension())
        throw ValidationError("box hull dimension mismatch");
    Box out = a;
    for (std::size_t i = 0; i < out.lo.size(); ++i) {
        out.lo[i] = std::min(a.lo[i], b.lo[i]);
        out.hi[i] = std::max(a.hi[i], b.hi[i]);
    }
    return out;
}

Box Box::minkowski_sum(const Box& other) const {
    if (dimension() != other.dimension())
        throw ValidationError("minkowski sum dimension mismatch");
    Box out = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        out.lo[i] = lo[i] + other.lo[i];
        out.hi[i] = hi[i] + other.hi[i];
    }
    return out;
}

GridFunction::GridFunction(Box box) : box_(std::move(box)) {
    const Index v = box_.volume();
    if (v > kMaxEntries)
        throw MemoryBudgetError("grid of " + std::to_string(v) +
                                " entries exceeds the budget of " +
                                std::to_string(kMaxEntries));
    values_.assign(static_cast<std::size_t>(v), {0.0, 0.0});
}

GridFunction GridFunction::dirac(int dimension) {
    GridFunction f(Box::origin(dimension));
    f.values_[0] = 1.0;
    return f;
}

std::complex<double> GridFunction::value(const Point& x) const {
    if (!box_.contains(x)) return {0.0, 0.0};
    return values_[static_cast<std::size_t>(box_.flatten(x))];
}

std::complex<double> GridFunction::mass() const {
    std::complex<double> s = 0.0;
    for (const auto& v : values_) s += v;
    return s;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::norm_lp(double p) const {
    if (p < 1.0) throw ValidationError("lp norm requires p >= 1");
    if (std::isinf(p)) return max_abs();
    double s = 0.0;
    if (p == 1.0) {
        for (const auto& v : values_) s += std::abs(v);
        return s;
    }
    if (p == 2.0) {
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s);
    }
    for (const auto& v : values_) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

GridFunction GridFunction::embedded(const Box& larger) const {
    GridFunction out(larger);
    const Index n = size();
    for (Index flat = 0; flat < n; ++flat) {
        const Point x = box_.unflatten(flat);
        if (!larger.contains(x)) {
            if (values_[static_cast<std::size_t>(flat)] != std::complex<double>(0.0, 0.0))
                throw ValidationError("embedding drops nonzero grid values");
            continue;
        }
        out.at(x) = values_[static_cast<std::size_t>(flat)];
    }
    return out;
}

namespace {

void print_double(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void GridFunction::write_text(std::ostream& out) const {
    out << dimension();
    for (Index v : box_.lo) out << ' ' << v;
    for (Index v : box_.hi) out << ' ' << v;
    out << '\n';
    for (const auto& v : values_) {
        print_double(out, v.real());
        out << ' ';
        print_double(out, v.imag());
        out << '\n';
    }
}

GridFunction GridFunction::read_text(std::istream& in) {
    int d = 0;
    if (!(in >> d) || d < 1) throw ValidationError("bad grid header");
    std::vector<Index> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (auto& v : lo)
        if (!(in >> v)) throw ValidationError("bad grid header");
    for (auto& v : hi)
        if (!(in >> v)) throw ValidationError("bad grid header");
    GridFunction f{Box(std::move(lo), std::move(hi))};
    for (Index i = 0; i < f.size(); ++i) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im)) throw ValidationError("truncated grid data");
        f[i] = {re, im};
    }
    return f;
}

namespace {

constexpr char kBinaryMagic[] = "RSLGRID1\n";

void put_i64(std::ostream& out, Index v) {
    unsigned char b[8];
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

Index get_i64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw ValidationError("truncated binary grid");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<Index>(u);
}

void put_f64(std::ostream& out, double v) {
    put_i64(out, static_cast<Index>(std::bit_cast<std::uint64_t>(v)));
}

double get_f64(std::istream& in) {
    return std::bit_cast<double>(static_cast<std::uint64_t>(get_i64(in)));
}

}  // namespace

void GridFunction::write_binary(std::ostream& out) const {
    out.write(kBinaryMagic, sizeof kBinaryMagic - 1);
    put_i64(out, dimension());
    for (Index v : box_.lo) put_i64(out, v);
    for (Index v : box_.hi) put_i64(out, v);
    for (const auto& v : values_) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
}

GridFunction GridFunction::read_binary(std::istream& in) {
    char magic[sizeof kBinaryMagic - 1];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0)
        throw ValidationError("bad binary grid magic");
    const Index d = get_i64(in);
    if (d < 1 || d > 16) throw ValidationError("bad binary grid dimension");
    std::vector<Index> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (auto& v : lo) v = get_i64(in);
    for (auto& v : hi) v = get_i64(in);
    GridFunction f{Box(std::move(lo), std::move(hi))};
    for (Index i = 0; i < f.size(); ++i) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        f[i] = {re, im};
    }
    return f;
}

}  // namespace rsl
