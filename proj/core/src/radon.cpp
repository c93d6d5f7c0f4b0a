#include "rsl/radon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dft_util.hpp"
#include "rsl/errors.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

int RadonKernel::dimension() const {
    return counts.empty() ? 0 : static_cast<int>(counts.begin()->first.size());
}

Box RadonKernel::support_hull() const {
    if (counts.empty()) throw ValidationError("empty kernel");
    std::vector<Index> lo = counts.begin()->first;
    std::vector<Index> hi = lo;
    for (const auto& [z, c] : counts) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            lo[i] = std::min(lo[i], z[i]);
            hi[i] = std::max(hi[i], z[i]);
        }
    }
    return Box(std::move(lo), std::move(hi));
}

RadonKernel build_kernel(const PolynomialMap& map, const ConvexBody& body, double t) {
    RadonKernel kernel;
    kernel.t = t;
    const auto points = enumerate_lattice_points(body, map.arity(), t);
    for (const auto& y : points) ++kernel.counts[map.evaluate(y)];
    kernel.normalization = static_cast<Index>(points.size());
    return kernel;
}

GridFunction apply_direct(const GridFunction& f, const RadonKernel& kernel) {
    const Box out_box = f.box().minkowski_sum(kernel.support_hull());
    GridFunction out(out_box);
    const double scale = 1.0 / static_cast<double>(kernel.normalization);
    const Index n = f.size();
    for (const auto& [z, count] : kernel.counts) {
        const double w = scale * static_cast<double>(count);
        for (Index flat = 0; flat < n; ++flat) {
            Point x = f.box().unflatten(flat);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += z[i];
            out.at(x) += w * f[flat];
        }
    }
    return out;
}

using detail::dft_inplace;
using detail::next_pow2;

GridFunction apply_fast(const GridFunction& f, const RadonKernel& kernel) {
    const Box ker_box = kernel.support_hull();
    const Box out_box = f.box().minkowski_sum(ker_box);
    const int d = f.dimension();

    std::vector<int> dims(static_cast<std::size_t>(d));
    Index total = 1;
    for (int axis = 0; axis < d; ++axis) {
        const Index padded = next_pow2(f.box().extent(axis) + ker_box.extent(axis));
        if (total > GridFunction::kMaxEntries / padded)
            throw MemoryBudgetError("padded transform exceeds the entry budget");
        total *= padded;
        dims[static_cast<std::size_t>(axis)] = static_cast<int>(padded);
    }

    auto flatten_padded = [&](const Point& offset) {
        Index idx = 0;
        for (int axis = 0; axis < d; ++axis)
            idx = idx * dims[static_cast<std::size_t>(axis)] + offset[static_cast<std::size_t>(axis)];
        return idx;
    };

    std::vector<std::complex<double>> fpad(static_cast<std::size_t>(total), {0.0, 0.0});
    std::vector<std::complex<double>> gpad(static_cast<std::size_t>(total), {0.0, 0.0});

    for (Index flat = 0; flat < f.size(); ++flat) {
        Point x = f.box().unflatten(flat);
        for (int axis = 0; axis < d; ++axis)
            x[static_cast<std::size_t>(axis)] -= f.box().lo[static_cast<std::size_t>(axis)];
        fpad[static_cast<std::size_t>(flatten_padded(x))] = f[flat];
    }
    const double scale = 1.0 / static_cast<double>(kernel.normalization);
    for (const auto& [z, count] : kernel.counts) {
        Point o = z;
        for (int axis = 0; axis < d; ++axis)
            o[static_cast<std::size_t>(axis)] -= ker_box.lo[static_cast<std::size_t>(axis)];
        gpad[static_cast<std::size_t>(flatten_padded(o))] = scale * static_cast<double>(count);
    }

    dft_inplace(dims, fpad.data(), FFTW_FORWARD);
    dft_inplace(dims, gpad.data(), FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(total);
    for (Index i = 0; i < total; ++i)
        fpad[static_cast<std::size_t>(i)] *= gpad[static_cast<std::size_t>(i)] * inv;
    dft_inplace(dims, fpad.data(), FFTW_BACKWARD);

    GridFunction out(out_box);
    for (Index flat = 0; flat < out.size(); ++flat) {
        Point x = out_box.unflatten(flat);
        for (int axis = 0; axis < d; ++axis)
            x[static_cast<std::size_t>(axis)] -= out_box.lo[static_cast<std::size_t>(axis)];
        out[flat] = fpad[static_cast<std::size_t>(flatten_padded(x))];
    }
    return out;
}

TimeGrid::TimeGrid(Kind kind, std::vector<double> times, std::string spec)
    : kind_(kind), times_(std::move(times)), spec_(std::move(spec)) {
    if (times_.empty()) throw ValidationError("time grid must be nonempty");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] > 0.0) || !std::isfinite(times_[i]))
            throw ValidationError("time grid entries must be positive and finite");
        if (i > 0 && times_[i] <= times_[i - 1])
            throw ValidationError("time grid must be strictly increasing");
    }
}

TimeGrid TimeGrid::dyadic(int n0, int n1) {
    if (n0 > n1) throw ValidationError("dyadic grid needs n0 <= n1");
    std::vector<double> times;
    for (int n = n0; n <= n1; ++n) times.push_back(std::ldexp(1.0, n));
    std::ostringstream spec;
    spec << "dyadic:" << n0 << ".." << n1;
    return TimeGrid(Kind::Dyadic, std::move(times), spec.str());
}

TimeGrid TimeGrid::u_blocks(int l0, int l1, int resolution) {
    if (l0 >= l1) throw ValidationError("u grid needs l0 < l1");
    if (resolution < 0 || resolution > 16)
        throw ValidationError("u grid resolution out of range 0..16");
    std::vector<double> times;
    for (int l = l0; l < l1; ++l) {
        const double base = std::ldexp(1.0, l);
        const double step = std::ldexp(1.0, l - resolution);
        const int m_end = 1 << resolution;
        for (int m = 0; m < m_end; ++m) times.push_back(base + m * step);
    }
    times.push_back(std::ldexp(1.0, l1));
    std::ostringstream spec;
    spec << "u:" << l0 << ".." << l1 << ":" << resolution;
    return TimeGrid(Kind::UBlocks, std::move(times), spec.str());
}

TimeGrid TimeGrid::explicit_list(std::vector<double> times) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::ostringstream spec;
    spec << "list:";
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i) spec << ',';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", times[i]);
        spec << buf;
    }
    return TimeGrid(Kind::Explicit, std::move(times), spec.str());
}

TimeGrid TimeGrid::parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ValidationError("bad grid spec '" + spec + "'");
    const std::string head = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (head == "list") {
        std::vector<double> times;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            times.push_back(std::stod(item));
        }
        return explicit_list(std::move(times));
    }
    auto dots = rest.find("..");
    if (dots == std::string::npos)
        throw ValidationError("bad grid range '" + rest + "' (expected a..b)");
    const int a = std::stoi(rest.substr(0, dots));
    std::string tail = rest.substr(dots + 2);
    int resolution = 3;
    auto res_sep = tail.find(':');
    if (res_sep != std::string::npos) {
        resolution = std::stoi(tail.substr(res_sep + 1));
        tail = tail.substr(0, res_sep);
    }
    const int b = std::stoi(tail);
    if (head == "dyadic") return dyadic(a, b);
    if (head == "u") return u_blocks(a, b, resolution);
    throw ValidationError("unknown grid kind '" + head + "'");
}

bool TimeGrid::is_u_grid() const {
    for (double t : times_)
        if (!(t > 0.0) || !std::isfinite(t)) return false;
    return true;  // every positive finite double is 2^n * m exactly
}

std::shared_ptr<const RadonKernel> KernelCache::get(const PolynomialMap& map,
                                                    const ConvexBody& body,
                                                    double t) {
    char tbuf[40];
    std::snprintf(tbuf, sizeof tbuf, "%a", t);
    const std::string key = map.serialize() + '|' + body.name() + '|' + tbuf;
    {
        std::shared_lock<std::shared_mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto kernel = std::make_shared<const RadonKernel>(build_kernel(map, body, t));
    std::unique_lock<std::shared_mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(kernel));
    return it->second;
}

GridFamily average_family(const GridFunction& f, const PolynomialMap& map,
                          const ConvexBody& body, const TimeGrid& grid,
                          KernelCache* cache) {
    KernelCache local;
    if (!cache) cache = &local;

    const std::size_t count = grid.size();
    std::vector<std::shared_ptr<const RadonKernel>> kernels(count);
    for (std::size_t i = 0; i < count; ++i)
        kernels[i] = cache->get(map, body, grid.times()[i]);

    std::vector<GridFunction> raw;
    raw.reserve(count);
    for (std::size_t i = 0; i < count; ++i) raw.emplace_back(Box::origin(f.dimension()));

    parallel_for(static_cast<std::int64_t>(count), [&](std::int64_t i) {
        const auto& kernel = *kernels[static_cast<std::size_t>(i)];
        try {
            const double direct_cost =
                static_cast<double>(f.box().minkowski_sum(kernel.support_hull()).volume()) *
                static_cast<double>(kernel.counts.size());
            raw[static_cast<std::size_t>(i)] =
                direct_cost > 2e7 ? apply_fast(f, kernel) : apply_direct(f, kernel);
        } catch (const MemoryBudgetError& e) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", kernel.t);
            throw MemoryBudgetError(std::string(e.what()) + " at time t=" + buf);
        }
    });

    Box common = raw.front().box();
    for (const auto& g : raw) common = Box::hull(common, g.box());

    GridFamily family;
    family.times = grid.times();
    family.members.reserve(count);
    for (auto& g : raw) family.members.push_back(g.embedded(common));
    return family;
}

}  // namespace rsl
