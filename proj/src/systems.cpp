#include "meandim/systems.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace meandim {

CubeSeqPoint::CubeSeqPoint(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("cube dimension must be positive");
}

void CubeSeqPoint::set_entry(long n, std::vector<Rational> coords) {
    if (static_cast<int>(coords.size()) != k_)
        throw std::invalid_argument("coordinate count does not match k");
    bool all_zero = true;
    for (const Rational& c : coords) {
        if (c < 0 || c > 1) throw std::invalid_argument("coordinate outside [0,1]");
        if (c != 0) all_zero = false;
    }
    if (all_zero)
        entries_.erase(n);
    else
        entries_[n] = std::move(coords);
}

std::vector<Rational> CubeSeqPoint::entry(long n) const {
    auto it = entries_.find(n);
    if (it != entries_.end()) return it->second;
    return std::vector<Rational>(static_cast<std::size_t>(k_), Rational(0));
}

CubeSeqPoint CubeSeqPoint::shifted(long g) const {
    CubeSeqPoint out(k_);
    for (const auto& [n, coords] : entries_) out.entries_[n - g] = coords;
    return out;
}

Rational MetricConfig::trajectory_weight_sum(const FiniteWindow& w) const {
    Rational s = 0;
    for (long g : w.elements()) s += trajectory_weight(g);
    return s;
}

Rational dist_X(const ProductPoint& x1, const ProductPoint& x2, const MetricConfig& mc) {
    if (x1.u.k() != x2.u.k()) throw std::invalid_argument("cube dimension mismatch");
    Rational best = dist_Y(x1.y, x2.y);
    std::set<long> support;
    for (const auto& [n, _] : x1.u.entries()) support.insert(n);
    for (const auto& [n, _] : x2.u.entries()) support.insert(n);
    for (long n : support) {
        auto a = x1.u.entry(n);
        auto b = x2.u.entry(n);
        Rational diff = 0;
        for (int c = 0; c < x1.u.k(); ++c)
            diff = std::max(diff, Rational(boost::multiprecision::abs(Rational(a[c] - b[c]))));
        best = std::max(best, Rational(mc.cube_weight(n) * diff));
    }
    return best;
}

ProductPoint act(const ProductPoint& x, long g) {
    return ProductPoint{odometer_act(x.y, g), x.u.shifted(g)};
}

Rational dyn_metric(const ProductPoint& x1, const ProductPoint& x2, const FiniteWindow& f,
                    const MetricConfig& mc) {
    if (f.empty()) throw std::invalid_argument("empty window");
    Rational best = 0;
    for (long g : f.elements()) best = std::max(best, dist_X(act(x1, g), act(x2, g), mc));
    return best;
}

namespace {

Rational random_dyadic(std::mt19937_64& rng, int resolution_bits) {
    std::uniform_int_distribution<long> dist(0, (1L << resolution_bits));
    return Rational(dist(rng)) / pow2(resolution_bits);
}

OdometerPoint random_odometer(std::mt19937_64& rng, int digit_budget) {
    std::uniform_int_distribution<int> len(1, digit_budget);
    std::uniform_int_distribution<int> bit(0, 1);
    int p = len(rng) - 1, q = len(rng);
    std::string pre, per;
    for (int i = 0; i < p; ++i) pre.push_back(bit(rng) ? '1' : '0');
    for (int i = 0; i < q; ++i) per.push_back(bit(rng) ? '1' : '0');
    return OdometerPoint(pre, per);
}

CubeSeqPoint random_cube_seq(std::mt19937_64& rng, const SampleSpec& spec) {
    CubeSeqPoint u(spec.k);
    for (long n = -spec.support_radius; n <= spec.support_radius; ++n) {
        std::vector<Rational> coords;
        for (int c = 0; c < spec.k; ++c) coords.push_back(random_dyadic(rng, spec.digit_budget));
        u.set_entry(n, std::move(coords));
    }
    return u;
}

}  // namespace

std::vector<ProductPoint> sample_points(const SampleSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("count must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::vector<ProductPoint> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    while (static_cast<int>(out.size()) < spec.count) {
        // anchor point
        ProductPoint a{random_odometer(rng, spec.digit_budget), random_cube_seq(rng, spec)};
        out.push_back(a);
        if (static_cast<int>(out.size()) >= spec.count) break;

        // same-fiber partner, separated by at least eta at entry 0
        ProductPoint b = a;
        std::vector<Rational> coords = b.u.entry(0);
        Rational c0 = coords[0];
        coords[0] = (c0 <= Rational(1, 2)) ? std::min(Rational(1), c0 + Rational(1, 2))
                                           : c0 - Rational(1, 2);
        b.u.set_entry(0, std::move(coords));
        out.push_back(b);
        if (static_cast<int>(out.size()) >= spec.count) break;

        // fresh point and an orbit translate of it
        ProductPoint c{random_odometer(rng, spec.digit_budget), random_cube_seq(rng, spec)};
        out.push_back(c);
        if (static_cast<int>(out.size()) >= spec.count) break;
        std::uniform_int_distribution<long> shift(-spec.support_radius, spec.support_radius);
        out.push_back(act(c, shift(rng)));
    }
    return out;
}

}  // namespace meandim
