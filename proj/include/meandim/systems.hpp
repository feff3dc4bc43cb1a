#pragma once

#include <map>
#include <vector>

#include "meandim/odometer.hpp"
#include "meandim/rational.hpp"
#include "meandim/window.hpp"

namespace meandim {

/// A finitely supported two-sided sequence of vectors in [0,1]^k, the value
/// off the support being the zero vector. Coordinates are exact rationals.
class CubeSeqPoint {
public:
    explicit CubeSeqPoint(int k);

    int k() const { return k_; }
    const std::map<long, std::vector<Rational>>& entries() const { return entries_; }

    /// Sets entry n; every coordinate must lie in [0,1]. Zero vectors are
    /// dropped so that supports stay minimal.
    void set_entry(long n, std::vector<Rational> coords);

    /// Entry at n (zero vector off the support).
    std::vector<Rational> entry(long n) const;

    /// Shift by g: result(n) = this(n + g).
    CubeSeqPoint shifted(long g) const;

    bool operator==(const CubeSeqPoint& other) const = default;

private:
    int k_ = 1;
    std::map<long, std::vector<Rational>> entries_;
};

/// A point of the extension: an odometer point together with a cube-valued
/// sequence.
struct ProductPoint {
    OdometerPoint y;
    CubeSeqPoint u;

    bool operator==(const ProductPoint& other) const {
        return y == other.y && u == other.u;
    }
};

/// Weights of the compatible metric on the extension and of the trajectory
/// metric on the cubical shift: w_n = 2^-|n| for the cube factor,
/// c_n = 2^-|n|/3 for trajectory sums (sum_n c_n = 1 exactly).
struct MetricConfig {
    Rational cube_weight(long n) const { return pow2(-std::labs(n)); }
    Rational trajectory_weight(long n) const { return pow2(-std::labs(n)) / 3; }
    /// sum of trajectory weights over a window; the tail bound is 1 - this.
    Rational trajectory_weight_sum(const FiniteWindow& w) const;
};

/// max(dist_Y, sup_n w_n * ||u1_n - u2_n||_inf). Exact; requires equal k.
Rational dist_X(const ProductPoint& x1, const ProductPoint& x2, const MetricConfig& mc);

/// The product action: odometer +g on the first factor, shift by g on the
/// second. Satisfies act(act(x,g),h) == act(x,g+h) exactly.
ProductPoint act(const ProductPoint& x, long g);

/// max over g in F of dist_X(act(x1,g), act(x2,g)); F non-empty.
Rational dyn_metric(const ProductPoint& x1, const ProductPoint& x2, const FiniteWindow& f,
                    const MetricConfig& mc);

/// The factor map onto the odometer.
inline const OdometerPoint& factor_pi(const ProductPoint& x) { return x.y; }

struct SampleSpec {
    int k = 1;
    std::uint64_t seed = 1;
    int count = 8;
    long support_radius = 2;  // cube entries generated within |n| <= this
    int digit_budget = 4;     // odometer pre/period word lengths, dyadic resolution
    Rational eta = Rational(1, 16);  // separation enforced for structured pairs
};

/// Deterministic structured sample: consecutive blocks of four points are
/// (random point, same-fiber eta-separated partner, random point, orbit
/// translate of it). The same-fiber pairs exercise the fiberwise branch of
/// embedding verification; translates exercise equivariance.
std::vector<ProductPoint> sample_points(const SampleSpec& spec);

}  // namespace meandim
