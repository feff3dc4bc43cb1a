#include "meandim/widim.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace meandim {

WeightedCube reduce_to_cube(const FiniteWindow& f, const Rational& eps, int k,
                            const MetricConfig& mc, ReductionStats* stats) {
    if (f.empty()) throw std::invalid_argument("empty window");
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    WeightedCube cube;
    cube.provenance_window = f;
    cube.provenance_epsilon = eps;
    long dropped = 0;
    if (eps < 1) {
        // effective weight of time index n: max_{g in F} 2^-|n-g|, which is
        // 2^-dist(n, F); it reaches eps iff dist(n, F) <= floor(log2(1/eps)).
        long reach = -floor_log2(eps);
        for (long n = f.min() - reach - 1; n <= f.max() + reach + 1; ++n) {
            long dist_to_f = 0;
            if (n < f.min())
                dist_to_f = f.min() - n;
            else if (n > f.max())
                dist_to_f = n - f.max();
            else if (!f.contains(n)) {
                dist_to_f = std::labs(n - f.elements().front());
                for (long g : f.elements()) dist_to_f = std::min(dist_to_f, std::labs(n - g));
            }
            Rational w = mc.cube_weight(dist_to_f);
            if (w >= eps)
                for (int c = 0; c < k; ++c) cube.weights.push_back(w);
            else
                dropped += k;
        }
    }
    if (stats) {
        stats->dropped_axes = dropped;
        long digits = 0;
        while (pow2(-digits) > eps) ++digits;
        stats->y_partition_count = Integer(1) << digits;
    }
    return cube;
}

// ---------------------------------------------------------------------------
// Greedy: r+1 interval families in the style of colored covers. On each
// effective axis, family t uses the intervals [m(r+1)s + ts, m(r+1)s + ts + rs]
// (brick length rs <= eps/w, gap s between consecutive bricks). Within one
// family the bricks of a box family are pairwise disjoint, so each family
// contributes at most one box to any point: the cover has order at most r.
// A coordinate misses family t only inside the open gap, and the gaps of the
// r+1 families are pairwise disjoint modulo (r+1)s, so a point of the r
// effective coordinates misses at most r families and is covered.
// ---------------------------------------------------------------------------

namespace {

struct BrickAxis {
    std::size_t axis = 0;
    Rational step;  // the gap unit s; bricks have length r*s
};

constexpr long kWitnessBoxCap = 100000;

// All family-t intervals of one axis clipped to [0,1].
std::vector<std::pair<Rational, Rational>> family_intervals(const BrickAxis& ax, long r,
                                                            long t) {
    std::vector<std::pair<Rational, Rational>> out;
    for (long m = -1;; ++m) {
        Rational lo = (Rational(m * (r + 1)) + t) * ax.step;
        Rational hi = lo + r * ax.step;
        if (lo > 1) break;
        Rational clo = std::max(lo, Rational(0));
        Rational chi = std::min(hi, Rational(1));
        if (clo > chi) continue;  // keep degenerate endpoints, drop empties
        out.push_back({clo, chi});
    }
    return out;
}

void family_boxes(const std::vector<BrickAxis>& eff, long r, long t, std::size_t level,
                  std::vector<std::pair<Rational, Rational>>& partial, std::size_t dim,
                  std::vector<Box>& out) {
    if (level == eff.size()) {
        Box b;
        b.lo.assign(dim, Rational(0));
        b.hi.assign(dim, Rational(1));
        for (std::size_t e = 0; e < eff.size(); ++e) {
            b.lo[eff[e].axis] = partial[e].first;
            b.hi[eff[e].axis] = partial[e].second;
        }
        out.push_back(std::move(b));
        return;
    }
    for (const auto& iv : family_intervals(eff[level], r, t)) {
        partial[level] = iv;
        family_boxes(eff, r, t, level + 1, partial, dim, out);
    }
}

}  // namespace

WidimResult widim_greedy(const WeightedCube& cube, const Rational& eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    WidimResult res;
    res.kind = WidimKind::upper_bound;

    std::vector<BrickAxis> eff;
    for (std::size_t i = 0; i < cube.dim(); ++i) {
        const Rational& w = cube.weights[i];
        if (w <= 0 || w > 1) throw std::invalid_argument("axis weight outside (0,1]");
        if (w >= eps) eff.push_back({i, Rational(0)});
    }
    const long r = static_cast<long>(eff.size());
    res.value = static_cast<int>(r);
    res.stats.dropped_axes = static_cast<long>(cube.dim()) - r;

    if (eff.empty()) {
        // a single full box has weighted diameter <= eps on every axis
        Box b;
        b.lo.assign(cube.dim(), Rational(0));
        b.hi.assign(cube.dim(), Rational(1));
        res.witness.boxes.push_back(std::move(b));
        res.stats.witness_materialized = true;
        res.stats.candidate_boxes = 1;
        return res;
    }
    for (BrickAxis& ax : eff) {
        Rational len = eps / cube.weights[ax.axis];
        if (len > Rational(1, 2)) len = Rational(1, 2);
        ax.step = len / r;
    }

    long estimate = r + 1;
    for (const BrickAxis& ax : eff) {
        Rational inv = 1 / (ax.step * (r + 1));
        long per_axis = static_cast<long>(boost::multiprecision::numerator(inv) /
                                          boost::multiprecision::denominator(inv)) + 2;
        if (estimate > kWitnessBoxCap / per_axis) {
            estimate = kWitnessBoxCap + 1;
            break;
        }
        estimate *= per_axis;
    }
    if (estimate <= kWitnessBoxCap) {
        std::vector<std::pair<Rational, Rational>> partial(eff.size());
        for (long t = 0; t <= r; ++t)
            family_boxes(eff, r, t, 0, partial, cube.dim(), res.witness.boxes);
        res.stats.witness_materialized = true;
        res.stats.candidate_boxes = static_cast<long>(res.witness.boxes.size());
    }
    return res;
}

// ---------------------------------------------------------------------------
// Exact: iterative deepening on the order with a multiplicity-capped
// depth-first cover search over grid-aligned candidate boxes.
// ---------------------------------------------------------------------------

namespace {

struct ExactSearch {
    std::size_t dim;
    long cells;  // 2^grid_resolution
    long pts_per_axis;
    std::vector<std::vector<std::pair<int, int>>> intervals;  // per axis, cell units
    std::vector<std::vector<std::vector<int>>> intervals_at;  // [axis][doubled coord] -> idx
    std::vector<long> strides;
    std::vector<std::size_t> odd_points;  // linear indices of full-dimensional cells
    std::vector<uint8_t> count;
    int cap = 0;
    long long nodes = 0;
    std::vector<std::vector<int>> chosen;

    bool box_fits(const std::vector<int>& box) const {
        return walk(box, [&](long idx) { return count[idx] + 1 <= cap; });
    }
    void apply(const std::vector<int>& box, int d) {
        walk(box, [&](long idx) {
            count[idx] = static_cast<uint8_t>(count[idx] + d);
            return true;
        });
    }

    template <typename Fn>
    bool walk(const std::vector<int>& box, Fn&& fn) const {
        std::vector<long> lo(dim), hi(dim), cur(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            auto [a, b] = intervals[i][static_cast<std::size_t>(box[i])];
            lo[i] = 2L * a;
            hi[i] = 2L * b;
            cur[i] = lo[i];
        }
        while (true) {
            long idx = 0;
            for (std::size_t i = 0; i < dim; ++i) idx += cur[i] * strides[i];
            if (!fn(idx)) return false;
            std::size_t i = dim;
            while (i-- > 0) {
                if (++cur[i] <= hi[i]) break;
                cur[i] = lo[i];
                if (i == 0) return true;
            }
            if (i == static_cast<std::size_t>(-1)) return true;
        }
    }

    long pivot() const {
        for (std::size_t p : odd_points)
            if (count[p] == 0) return static_cast<long>(p);
        return -1;
    }

    bool dfs() {
        ++nodes;
        long pv = pivot();
        if (pv < 0) return true;
        std::vector<long> coord(dim);
        long rem = pv;
        for (std::size_t i = 0; i < dim; ++i) {
            coord[i] = rem / strides[i];
            rem %= strides[i];
        }
        std::vector<int> box(dim);
        std::function<bool(std::size_t)> rec = [&](std::size_t axis) -> bool {
            if (axis == dim) {
                if (!box_fits(box)) return false;
                apply(box, +1);
                chosen.push_back(box);
                if (dfs()) return true;
                chosen.pop_back();
                apply(box, -1);
                return false;
            }
            for (int iv : intervals_at[axis][static_cast<std::size_t>(coord[axis])]) {
                box[axis] = iv;
                if (rec(axis + 1)) return true;
            }
            return false;
        };
        return rec(0);
    }
};

}  // namespace

WidimResult widim_exact(const WeightedCube& cube, const Rational& eps, int grid_resolution,
                        std::size_t axis_limit) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    if (grid_resolution < 1 || grid_resolution > 10)
        throw std::invalid_argument("grid resolution out of range");
    if (cube.dim() > axis_limit)
        throw std::runtime_error(
            "axis limit exceeded for exact widim search; use widim_greedy");

    WidimResult res;
    res.kind = WidimKind::exact;
    if (cube.dim() == 0) {
        Box b;  // the 0-dimensional cube is a point; one empty box covers it
        res.witness.boxes.push_back(b);
        res.value = 0;
        res.stats.witness_materialized = true;
        return res;
    }

    ExactSearch s;
    s.dim = cube.dim();
    s.cells = 1L << grid_resolution;
    s.pts_per_axis = 2 * s.cells + 1;
    s.intervals.resize(s.dim);
    s.intervals_at.resize(s.dim);
    long candidate_total = 0;
    for (std::size_t i = 0; i < s.dim; ++i) {
        const Rational& w = cube.weights[i];
        for (int a = 0; a < s.cells; ++a)
            for (int b = a + 1; b <= s.cells; ++b)
                if (w * Rational(b - a, s.cells) <= eps) s.intervals[i].push_back({a, b});
        if (s.intervals[i].empty())
            throw std::runtime_error("grid resolution too coarse for this eps");
        // longer intervals first: the cover search finds feasible covers much
        // faster when it prefers large boxes at every branch
        std::stable_sort(s.intervals[i].begin(), s.intervals[i].end(),
                         [](const std::pair<int, int>& p, const std::pair<int, int>& q) {
                             return p.second - p.first > q.second - q.first;
                         });
        candidate_total += static_cast<long>(s.intervals[i].size());
        s.intervals_at[i].resize(static_cast<std::size_t>(s.pts_per_axis));
        for (int idx = 0; idx < static_cast<int>(s.intervals[i].size()); ++idx) {
            auto [a, b] = s.intervals[i][static_cast<std::size_t>(idx)];
            for (int p = 2 * a; p <= 2 * b; ++p)
                s.intervals_at[i][static_cast<std::size_t>(p)].push_back(idx);
        }
    }
    res.stats.candidate_boxes = candidate_total;

    s.strides.assign(s.dim, 1);
    for (std::size_t i = s.dim - 1; i-- > 0;)
        s.strides[i] = s.strides[i + 1] * s.pts_per_axis;
    long total_points = s.strides[0] * s.pts_per_axis;
    s.count.assign(static_cast<std::size_t>(total_points), 0);
    // full-dimensional cells: all-odd doubled coordinates, row-major
    std::function<void(std::size_t, long)> gen = [&](std::size_t axis, long base) {
        if (axis == s.dim) {
            s.odd_points.push_back(static_cast<std::size_t>(base));
            return;
        }
        for (long p = 1; p < s.pts_per_axis; p += 2) gen(axis + 1, base + p * s.strides[axis]);
    };
    gen(0, 0);

    int cap_max = 1 << s.dim;
    for (int cap = 1; cap <= cap_max; ++cap) {
        s.cap = cap;
        std::fill(s.count.begin(), s.count.end(), 0);
        s.chosen.clear();
        if (s.dfs()) {
            res.value = cap - 1;
            res.stats.nodes += s.nodes;
            for (const auto& boxidx : s.chosen) {
                Box b;
                for (std::size_t i = 0; i < s.dim; ++i) {
                    auto [a, bb] = s.intervals[i][static_cast<std::size_t>(boxidx[i])];
                    b.lo.push_back(Rational(a, s.cells));
                    b.hi.push_back(Rational(bb, s.cells));
                }
                res.witness.boxes.push_back(std::move(b));
            }
            res.stats.witness_materialized = true;
            return res;
        }
        res.stats.nodes += s.nodes;
    }
    throw std::logic_error("no cover found up to the trivial multiplicity bound");
}

int phi(const FiniteWindow& f, const Rational& eps, int k, const MetricConfig& mc,
        WidimMode mode, int grid_resolution, std::size_t axis_limit) {
    ReductionStats rs;
    WeightedCube cube = reduce_to_cube(f, eps, k, mc, &rs);
    if (mode == WidimMode::exact)
        return widim_exact(cube, eps, grid_resolution, axis_limit).value;
    return widim_greedy(cube, eps).value;
}

std::vector<MdimSample> mdim_curve(const Rational& eps, int k, const MetricConfig& mc,
                                   long n_max, WidimMode mode) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<MdimSample> out;
    for (long n = 1; n <= n_max; ++n) {
        int v = phi(folner_interval(n), eps, k, mc, mode);
        out.push_back({n, Rational(v) / Rational(n)});
    }
    return out;
}

}  // namespace meandim
