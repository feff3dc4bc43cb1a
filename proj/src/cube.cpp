#include "meandim/cube.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace meandim {

bool Box::valid() const {
    if (lo.size() != hi.size()) return false;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i] || lo[i] < 0 || hi[i] > 1) return false;
    return true;
}

bool Box::contains(const std::vector<Rational>& p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

Rational mesh(const BoxCover& c, const WeightedCube& cube) {
    Rational m = 0;
    for (const Box& b : c.boxes) {
        if (b.dim() != cube.dim()) throw std::invalid_argument("box dimension mismatch");
        for (std::size_t i = 0; i < cube.dim(); ++i)
            m = std::max(m, Rational(cube.weights[i] * (b.hi[i] - b.lo[i])));
    }
    return m;
}

namespace {

constexpr std::size_t kSweepLimit = std::size_t(1) << 26;

// Per-axis probe coordinates. For covering we need the open-cell midpoints;
// for order we additionally need the endpoints themselves (shared faces).
std::vector<std::vector<Rational>> probe_coords(const BoxCover& c, std::size_t dim,
                                                bool include_endpoints) {
    std::vector<std::vector<Rational>> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<Rational> ends = {Rational(0), Rational(1)};
        for (const Box& b : c.boxes) {
            ends.push_back(b.lo[i]);
            ends.push_back(b.hi[i]);
        }
        std::sort(ends.begin(), ends.end());
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        // clip to [0,1]
        std::vector<Rational> clipped;
        for (const Rational& e : ends)
            if (e >= 0 && e <= 1) clipped.push_back(e);
        std::vector<Rational>& probes = out[i];
        for (std::size_t j = 0; j + 1 < clipped.size(); ++j) {
            if (include_endpoints) probes.push_back(clipped[j]);
            probes.push_back((clipped[j] + clipped[j + 1]) / 2);
        }
        if (include_endpoints && !clipped.empty()) probes.push_back(clipped.back());
        if (probes.empty()) probes.push_back(Rational(1, 2));
    }
    return out;
}

std::size_t grid_size(const std::vector<std::vector<Rational>>& probes) {
    std::size_t total = 1;
    for (const auto& axis : probes) {
        if (axis.empty()) return 0;
        if (total > kSweepLimit / axis.size())
            throw std::runtime_error("arrangement sweep too large for this dimension");
        total *= axis.size();
    }
    return total;
}

std::vector<Rational> decode_point(const std::vector<std::vector<Rational>>& probes,
                                   std::size_t index) {
    std::vector<Rational> p(probes.size());
    for (std::size_t i = probes.size(); i-- > 0;) {
        p[i] = probes[i][index % probes[i].size()];
        index /= probes[i].size();
    }
    return p;
}

int multiplicity_at(const BoxCover& c, const std::vector<Rational>& p) {
    int m = 0;
    for (const Box& b : c.boxes)
        if (b.contains(p)) ++m;
    return m;
}

}  // namespace

bool covers_serial(const BoxCover& c, const WeightedCube& cube) {
    for (const Box& b : c.boxes)
        if (b.dim() != cube.dim() || !b.valid())
            throw std::invalid_argument("box dimension mismatch or invalid box");
    if (cube.dim() == 0) return !c.boxes.empty();
    if (c.boxes.empty()) return false;
    auto probes = probe_coords(c, cube.dim(), /*include_endpoints=*/false);
    std::size_t total = grid_size(probes);
    for (std::size_t idx = 0; idx < total; ++idx)
        if (multiplicity_at(c, decode_point(probes, idx)) == 0) return false;
    return true;
}

int order_serial(const BoxCover& c) {
    if (c.boxes.empty()) throw std::invalid_argument("empty cover has no order");
    std::size_t dim = c.boxes.front().dim();
    for (const Box& b : c.boxes)
        if (b.dim() != dim || !b.valid())
            throw std::invalid_argument("box dimension mismatch or invalid box");
    if (dim == 0) return static_cast<int>(c.boxes.size()) - 1;
    auto probes = probe_coords(c, dim, /*include_endpoints=*/true);
    std::size_t total = grid_size(probes);
    int max_mult = 0;
    for (std::size_t idx = 0; idx < total; ++idx)
        max_mult = std::max(max_mult, multiplicity_at(c, decode_point(probes, idx)));
    return max_mult - 1;
}

#ifdef _OPENMP

bool covers(const BoxCover& c, const WeightedCube& cube) {
    for (const Box& b : c.boxes)
        if (b.dim() != cube.dim() || !b.valid())
            throw std::invalid_argument("box dimension mismatch or invalid box");
    if (cube.dim() == 0) return !c.boxes.empty();
    if (c.boxes.empty()) return false;
    auto probes = probe_coords(c, cube.dim(), false);
    std::size_t total = grid_size(probes);
    bool gap = false;
#pragma omp parallel for schedule(static) reduction(|| : gap)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        if (gap) continue;
        if (multiplicity_at(c, decode_point(probes, static_cast<std::size_t>(idx))) == 0)
            gap = true;
    }
    return !gap;
}

int order(const BoxCover& c) {
    if (c.boxes.empty()) throw std::invalid_argument("empty cover has no order");
    std::size_t dim = c.boxes.front().dim();
    for (const Box& b : c.boxes)
        if (b.dim() != dim || !b.valid())
            throw std::invalid_argument("box dimension mismatch or invalid box");
    if (dim == 0) return static_cast<int>(c.boxes.size()) - 1;
    auto probes = probe_coords(c, dim, true);
    std::size_t total = grid_size(probes);
    int max_mult = 0;
#pragma omp parallel for schedule(static) reduction(max : max_mult)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx)
        max_mult = std::max(
            max_mult, multiplicity_at(c, decode_point(probes, static_cast<std::size_t>(idx))));
    return max_mult - 1;
}

#else

bool covers(const BoxCover& c, const WeightedCube& cube) { return covers_serial(c, cube); }
int order(const BoxCover& c) { return order_serial(c); }

#endif

}  // namespace meandim
