#pragma once

#include <vector>

#include "meandim/cube.hpp"
#include "meandim/rational.hpp"
#include "meandim/systems.hpp"
#include "meandim/window.hpp"

namespace meandim {

enum class WidimKind { exact, upper_bound };

struct WidimSearchStats {
    long long nodes = 0;
    long candidate_boxes = 0;
    bool witness_materialized = false;
    Integer y_partition_count = 0;
    long dropped_axes = 0;
};

struct WidimResult {
    int value = 0;
    WidimKind kind = WidimKind::upper_bound;
    BoxCover witness;  // may be empty when materialization would be too large
    WidimSearchStats stats;
};

struct ReductionStats {
    Integer y_partition_count = 0;
    long dropped_axes = 0;
};

/// Finite-dimensional realization of the dynamical metric over the window F:
/// one axis per (time index, cube coordinate) whose effective weight
/// max_{g in F} 2^-|n-g| reaches eps; weaker axes cannot contribute diameter
/// above eps and are dropped. The totally disconnected factor adds no axis;
/// its digit-partition count is reported through stats.
WeightedCube reduce_to_cube(const FiniteWindow& f, const Rational& eps, int k,
                            const MetricConfig& mc, ReductionStats* stats = nullptr);

/// Exact minimal order over all covers drawn from the candidate family of
/// grid-aligned boxes (endpoints on the 2^-grid_resolution grid, weighted
/// diameter <= eps). Iterative deepening on the order with a
/// multiplicity-capped depth-first cover search underneath. Dimension is
/// limited (default 3); larger instances must use widim_greedy.
WidimResult widim_exact(const WeightedCube& cube, const Rational& eps, int grid_resolution,
                        std::size_t axis_limit = 3);

/// Upper bound from r+1 families of pairwise disjoint bricks over the r axes
/// whose weight reaches eps; each family meets any point at most once, so
/// the cover has order at most r. Value equals r; the witness is
/// materialized only when small enough to enumerate.
WidimResult widim_greedy(const WeightedCube& cube, const Rational& eps);

enum class WidimMode { exact, greedy };

/// widim of the reduced cube: the finitized F -> widim_eps(X, d^alpha_F).
int phi(const FiniteWindow& f, const Rational& eps, int k, const MetricConfig& mc,
        WidimMode mode, int grid_resolution = 3, std::size_t axis_limit = 3);

struct MdimSample {
    long n = 0;
    Rational normalized;  // phi(folner_interval(n)) / n
};

/// Normalized widim along the interval Folner sequence; for the k-cube
/// extension these values decrease toward k.
std::vector<MdimSample> mdim_curve(const Rational& eps, int k, const MetricConfig& mc,
                                   long n_max, WidimMode mode = WidimMode::greedy);

}  // namespace meandim
