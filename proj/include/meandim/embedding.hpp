#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meandim/castle.hpp"
#include "meandim/systems.hpp"
#include "meandim/window.hpp"

namespace meandim {

/// Injective coding of the odometer into the middle-thirds Cantor set:
/// psi(y) = sum 2 y_i 3^-(i+1), summed exactly through the eventual period.
/// 1-Lipschitz for dist_Y, and |psi(y) - psi(y')| >= 3^-(n+1) when the first
/// differing digit is n.
Rational cantor_code(const OdometerPoint& y);

/// Coordinate functional of a ProductPoint: either the Cantor coding of the
/// odometer coordinate or one cube coordinate of one trajectory entry.
struct Feature {
    enum class Kind { psi, cube };
    Kind kind = Kind::psi;
    long n = 0;    // trajectory index, cube features only
    int coord = 0;  // coordinate within [0,1]^k, cube features only

    Rational evaluate(const ProductPoint& x) const;
    /// Lipschitz constant with respect to dist_X: 1 for psi, 2^|n| for cube.
    Rational lipschitz() const;
};

/// The standard feature basis: psi plus every cube coordinate with |n| <= R.
std::vector<Feature> feature_basis(int k, long radius);

/// Affine map in a finite feature vector followed by clamping to [0,1]^m.
struct BaseMap {
    int m = 0;
    std::vector<Feature> features;
    std::vector<Rational> offsets;              // per output
    std::vector<std::vector<Rational>> coeffs;  // per output, per feature

    std::vector<Rational> evaluate(const ProductPoint& x) const;
    /// Uniform modulus L: |f0(x)-f0(y)|_inf <= L dist_X(x,y). Max over
    /// outputs of the Lipschitz-weighted coefficient sum; clamping only
    /// shrinks distances.
    Rational modulus() const;
};

/// Largest dyadic eps = 2^-j with eps <= min(eta, delta/L); eta itself when
/// the map is constant (L = 0) or eta already fits. Chosen from the analytic
/// modulus so the implication dist_X < eps => |f0 diff|_inf < delta holds
/// everywhere, not just on a sample.
Rational calibrate_epsilon(const BaseMap& f0, const Rational& eta, const Rational& delta);

/// Block map over a tower: the orbit block of a base map plus a per-level,
/// per-output affine correction in the same features, evaluated at the
/// translated point. Zero corrections give F0.
struct TowerBlockMap {
    std::size_t tower = 0;
    FiniteWindow shape;
    BaseMap base;
    /// corrections[level index][output] = offset followed by one coefficient
    /// per feature; empty outer vector means the unperturbed F0.
    std::vector<std::vector<std::vector<Rational>>> corrections;

    /// One output block: for z in the tower base, entry s of the block.
    std::vector<Rational> evaluate_level(const ProductPoint& z, std::size_t level_index) const;
    /// Full block over the shape, |S| x m.
    std::vector<std::vector<Rational>> evaluate(const ProductPoint& z) const;
};

/// The unperturbed block map F0(x) = (f0(act(x,s)))_{s in S}.
TowerBlockMap block_map_F0(const BaseMap& f0, const FiniteWindow& s, std::size_t tower = 0);

struct PerturbResult {
    TowerBlockMap map;
    Rational s_min;    // smallest block separation over certified pairs
    bool vacuous = false;  // no sampled pair reached eps separation
    int tries = 0;
    long certified_pairs = 0;
};

struct PerturbFailure : std::runtime_error {
    PerturbFailure(std::string what, TowerBlockMap best,
                   std::vector<std::pair<std::size_t, std::size_t>> pairs)
        : std::runtime_error(std::move(what)),
          best_map(std::move(best)),
          violating_pairs(std::move(pairs)) {}

    TowerBlockMap best_map;
    std::vector<std::pair<std::size_t, std::size_t>> violating_pairs;
};

/// Search for a certified eps-embedding near F0: accept a candidate when
/// every sampled base pair with d^alpha_S(x,x') >= eps gets block separation
/// > 0. The zero perturbation is tried first; retries draw correction
/// coefficients uniformly from dyadics in [-delta/(2(F+1)), delta/(2(F+1))]
/// (F = feature count), which keeps |F - F0|_inf < delta everywhere. Retry
/// seeds derive from (seed, tower, try) so results are deterministic.
/// Throws PerturbFailure with the best map and its violating pairs when
/// max_tries is exhausted.
PerturbResult perturb_search(const TowerBlockMap& f0, const Rational& eps, const Rational& delta,
                             const std::vector<ProductPoint>& base_sample,
                             const MetricConfig& mc, std::uint64_t seed, int max_tries);

/// Castle-glued map: f(x) = F_i(act(x,-s))(s) where (i,s) locates x.
struct GluedMap {
    Castle castle;
    std::vector<TowerBlockMap> maps;
    int m = 0;

    std::vector<Rational> evaluate(const ProductPoint& x) const;
};

GluedMap glue(const Castle& castle, std::vector<TowerBlockMap> maps);

using PointMap = std::function<std::vector<Rational>(const ProductPoint&)>;

/// (f(act(x,g)))_{g in W}. Exactly equivariant:
/// trajectory_block(f, act(x,h), W) == trajectory_block(f, x, W+h).
std::vector<std::vector<Rational>> trajectory_block(const PointMap& f, const ProductPoint& x,
                                                    const FiniteWindow& w);

struct PairRecord {
    std::size_t a = 0, b = 0;  // sample indices
    Rational dist;             // dist_X
    Rational separation;       // weighted block separation over W
    bool violates = false;
};

struct EmbeddingCertificate {
    Rational eta;
    std::uint64_t seed = 0;
    Rational margin;  // valid only when margin_infinite is false
    bool margin_infinite = false;
    Rational tail;  // weight outside the truncation window
    bool per_tower_certified = false;
    bool global_certified = false;
    long checked_pairs = 0;
    long violating_pairs = 0;
    std::vector<PairRecord> worst_pairs;
    std::vector<std::string> log;
};

/// Certify the eta-embedding property of I_f x pi on a sample: every pair
/// with equal odometer coordinate and dist_X >= eta must have differing
/// trajectory blocks over W. Pairs found in a common tower level are also
/// replayed through the per-tower comparison. Requires W to contain every
/// difference S_i - S_i of the castle shapes.
EmbeddingCertificate verify_eta_embedding(const GluedMap& f,
                                          const std::vector<ProductPoint>& sample,
                                          const Rational& eta, const FiniteWindow& w,
                                          const MetricConfig& mc);

struct SeparationMargin {
    Rational value;         // inf/2 - tail, floored at 0
    bool infinite = false;  // no qualifying pair in the sample
    Rational tail;
};

/// Half the sampled infimum of sum_{g in W} c_g |f(act(x,g)) - f(act(y,g))|_inf
/// over pairs with equal odometer coordinate and dist_X >= eta, minus the
/// tail sum_{g not in W} c_g; a lower bound for the untruncated quantity.
SeparationMargin separation_margin(const GluedMap& f, const std::vector<ProductPoint>& sample,
                                   const Rational& eta, const MetricConfig& mc,
                                   const FiniteWindow& w);

/// phi(t, j) = (j-1)/ell + t/(2 ell): squeezes [0,1] x {1..ell} into [0,1]
/// with disjoint closed images per symbol.
Rational interleave_phi(const Rational& t, int j, int ell);

/// Symbol coding of the zero-dimensional factor, values in 1..ell.
using SymbolCoding = std::function<int(const OdometerPoint&)>;

/// Window block of the composed embedding. Without a coding, the m+1
/// dimensional route: entry g = (f(act(x,g)), psi of the odometer coordinate
/// at g). With a coding, the m dimensional route: the last output of f is
/// interleaved with the symbol via phi.
std::vector<std::vector<Rational>> compose_final(const GluedMap& f, const ProductPoint& x,
                                                 const FiniteWindow& w,
                                                 const SymbolCoding& coding = nullptr,
                                                 int ell = 0);

}  // namespace meandim
