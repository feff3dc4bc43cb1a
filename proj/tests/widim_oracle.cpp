#include "widim_oracle.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace meandim::oracle {

namespace {

struct Grid {
    long cells = 0;
    std::size_t dim = 0;
    std::vector<Box> boxes;                       // all candidate boxes
    std::vector<std::vector<long>> box_cells;     // doubled-grid points per box
    std::vector<std::vector<std::size_t>> at;     // boxes containing each point
    std::vector<long> strides;
    long total_points = 0;
    std::vector<long> interior;  // all-odd points

    explicit Grid(const WeightedCube& cube, const Rational& eps, int r) {
        cells = 1L << r;
        dim = cube.dim();
        std::vector<std::vector<std::pair<int, int>>> per_axis(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (int a = 0; a < cells; ++a)
                for (int b = a + 1; b <= cells; ++b)
                    if (cube.weights[i] * Rational(b - a, cells) <= eps)
                        per_axis[i].push_back({a, b});
        std::vector<std::size_t> pick(dim, 0);
        // cartesian product of per-axis intervals
        while (true) {
            Box bx;
            for (std::size_t i = 0; i < dim; ++i) {
                auto [a, b] = per_axis[i][pick[i]];
                bx.lo.push_back(Rational(a, cells));
                bx.hi.push_back(Rational(b, cells));
            }
            boxes.push_back(std::move(bx));
            std::size_t i = dim;
            bool done = true;
            while (i-- > 0) {
                if (++pick[i] < per_axis[i].size()) {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if (done) break;
        }
        long per = 2 * cells + 1;
        strides.assign(dim, 1);
        for (std::size_t i = dim - 1; i-- > 0;) strides[i] = strides[i + 1] * per;
        total_points = strides[0] * per;
        at.resize(static_cast<std::size_t>(total_points));
        box_cells.resize(boxes.size());
        for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
            std::vector<long> lo(dim), hi(dim), cur(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                lo[i] = 2 * static_cast<long>(
                                boost::multiprecision::numerator(Rational(boxes[bi].lo[i] *
                                                                          cells)));
                hi[i] = 2 * static_cast<long>(
                                boost::multiprecision::numerator(Rational(boxes[bi].hi[i] *
                                                                          cells)));
                cur[i] = lo[i];
            }
            while (true) {
                long idx = 0;
                for (std::size_t i = 0; i < dim; ++i) idx += cur[i] * strides[i];
                box_cells[bi].push_back(idx);
                at[static_cast<std::size_t>(idx)].push_back(bi);
                std::size_t i = dim;
                bool done = true;
                while (i-- > 0) {
                    if (++cur[i] <= hi[i]) {
                        done = false;
                        break;
                    }
                    cur[i] = lo[i];
                }
                if (done) break;
            }
        }
        std::vector<long> cur(dim, 1);
        while (true) {
            long idx = 0;
            for (std::size_t i = 0; i < dim; ++i) idx += cur[i] * strides[i];
            interior.push_back(idx);
            std::size_t i = dim;
            bool done = true;
            while (i-- > 0) {
                cur[i] += 2;
                if (cur[i] < 2 * cells + 1) {
                    done = false;
                    break;
                }
                cur[i] = 1;
            }
            if (done) break;
        }
    }
};

bool dfs(const Grid& g, std::vector<int>& count, int cap) {
    long pivot = -1;
    for (long p : g.interior)
        if (count[static_cast<std::size_t>(p)] == 0) {
            pivot = p;
            break;
        }
    if (pivot < 0) return true;
    for (std::size_t bi : g.at[static_cast<std::size_t>(pivot)]) {
        bool ok = true;
        for (long p : g.box_cells[bi])
            if (count[static_cast<std::size_t>(p)] + 1 > cap) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (long p : g.box_cells[bi]) ++count[static_cast<std::size_t>(p)];
        if (dfs(g, count, cap)) return true;
        for (long p : g.box_cells[bi]) --count[static_cast<std::size_t>(p)];
    }
    return false;
}

}  // namespace

int min_order_by_subset_enumeration(const WeightedCube& cube, const Rational& eps,
                                    int grid_resolution, std::size_t max_boxes) {
    Grid g(cube, eps, grid_resolution);
    int best = -1;
    std::vector<std::size_t> chosen;
    // enumerate subsets of size 1..max_boxes in lexicographic order
    std::vector<std::size_t> idx;
    auto evaluate = [&]() {
        BoxCover cover;
        for (std::size_t i : idx) cover.boxes.push_back(g.boxes[i]);
        if (!covers_serial(cover, cube)) return;
        int o = order_serial(cover);
        if (best < 0 || o < best) best = o;
    };
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                            std::size_t remaining) {
        if (!idx.empty()) evaluate();
        if (remaining == 0) return;
        for (std::size_t i = start; i < g.boxes.size(); ++i) {
            idx.push_back(i);
            rec(i + 1, remaining - 1);
            idx.pop_back();
        }
    };
    rec(0, max_boxes);
    return best;
}

bool cover_feasible_with_multiplicity(const WeightedCube& cube, const Rational& eps,
                                      int grid_resolution, int cap) {
    Grid g(cube, eps, grid_resolution);
    std::vector<int> count(static_cast<std::size_t>(g.total_points), 0);
    return dfs(g, count, cap + 1);
}

int min_order_by_multiplicity_search(const WeightedCube& cube, const Rational& eps,
                                     int grid_resolution) {
    for (int cap = 1; cap <= (1 << cube.dim()); ++cap)
        if (cover_feasible_with_multiplicity(cube, eps, grid_resolution, cap - 1))
            return cap - 1;
    throw std::logic_error("no cover found");
}

}  // namespace meandim::oracle
