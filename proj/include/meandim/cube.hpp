#pragma once

#include <optional>
#include <vector>

#include "meandim/rational.hpp"
#include "meandim/window.hpp"

namespace meandim {

/// A finite-dimensional cube with per-axis weights in (0,1]; every axis has
/// extent [0,1] and the metric is max_i w_i * |s_i - t_i|. Optionally tagged
/// with the window and epsilon it was reduced from.
struct WeightedCube {
    std::vector<Rational> weights;
    std::optional<FiniteWindow> provenance_window;
    std::optional<Rational> provenance_epsilon;

    std::size_t dim() const { return weights.size(); }
};

/// A closed axis-aligned box inside the cube: per-axis intervals [a_i, b_i]
/// with 0 <= a_i <= b_i <= 1.
struct Box {
    std::vector<Rational> lo, hi;

    std::size_t dim() const { return lo.size(); }
    bool valid() const;
    /// Closed containment of a point.
    bool contains(const std::vector<Rational>& p) const;
};

struct BoxCover {
    std::vector<Box> boxes;
};

/// max over boxes of max_i w_i * (b_i - a_i). Zero for an empty cover.
Rational mesh(const BoxCover& c, const WeightedCube& cube);

/// Exact covering test: sweeps the arrangement grid induced by all box
/// endpoints and checks every open cell's midpoint. Closed boxes make this
/// sufficient: an uncovered point forces an uncovered full-dimensional cell.
bool covers(const BoxCover& c, const WeightedCube& cube);

/// Exact cover order: max point multiplicity minus one, computed over the
/// endpoint arrangement including shared faces. Empty cover is an error.
int order(const BoxCover& c);

// Serial reference implementations; the unsuffixed entry points dispatch to
// OpenMP sweeps when built with it and fall back to these otherwise.
bool covers_serial(const BoxCover& c, const WeightedCube& cube);
int order_serial(const BoxCover& c);

}  // namespace meandim
