#include "meandim/embedding.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace meandim {

Rational cantor_code(const OdometerPoint& y) {
    const std::string& pre = y.preperiod();
    const std::string& per = y.period();
    Rational pre_sum = 0;
    for (std::size_t i = 0; i < pre.size(); ++i)
        if (pre[i] == '1') pre_sum += Rational(2, pow3(i + 1));
    Rational per_sum = 0;
    for (std::size_t i = 0; i < per.size(); ++i)
        if (per[i] == '1') per_sum += Rational(2, pow3(i + 1));
    // geometric summation of the periodic tail
    Integer p3q = pow3(per.size());
    Rational tail = per_sum * Rational(p3q, p3q - 1);
    return pre_sum + Rational(1, pow3(pre.size())) * tail;
}

Rational Feature::evaluate(const ProductPoint& x) const {
    if (kind == Kind::psi) return cantor_code(x.y);
    if (coord < 0 || coord >= x.u.k()) throw std::invalid_argument("feature coord out of range");
    return x.u.entry(n)[static_cast<std::size_t>(coord)];
}

Rational Feature::lipschitz() const {
    if (kind == Kind::psi) return Rational(1);
    return pow2(std::labs(n));
}

std::vector<Feature> feature_basis(int k, long radius) {
    std::vector<Feature> fs;
    fs.push_back(Feature{Feature::Kind::psi, 0, 0});
    for (long n = -radius; n <= radius; ++n)
        for (int c = 0; c < k; ++c) fs.push_back(Feature{Feature::Kind::cube, n, c});
    return fs;
}

namespace {

Rational clamp01(const Rational& q) {
    if (q < 0) return Rational(0);
    if (q > 1) return Rational(1);
    return q;
}

std::vector<Rational> feature_values(const std::vector<Feature>& fs, const ProductPoint& x) {
    std::vector<Rational> v;
    v.reserve(fs.size());
    for (const Feature& f : fs) v.push_back(f.evaluate(x));
    return v;
}

Rational abs_rat(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace

std::vector<Rational> BaseMap::evaluate(const ProductPoint& x) const {
    std::vector<Rational> fv = feature_values(features, x);
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        Rational v = offsets[static_cast<std::size_t>(j)];
        for (std::size_t f = 0; f < features.size(); ++f)
            v += coeffs[static_cast<std::size_t>(j)][f] * fv[f];
        out.push_back(clamp01(v));
    }
    return out;
}

Rational BaseMap::modulus() const {
    Rational best = 0;
    for (int j = 0; j < m; ++j) {
        Rational sum = 0;
        for (std::size_t f = 0; f < features.size(); ++f)
            sum += abs_rat(coeffs[static_cast<std::size_t>(j)][f]) * features[f].lipschitz();
        best = std::max(best, sum);
    }
    return best;
}

Rational calibrate_epsilon(const BaseMap& f0, const Rational& eta, const Rational& delta) {
    if (eta <= 0 || delta <= 0) throw std::invalid_argument("eta and delta must be positive");
    Rational l = f0.modulus();
    if (l == 0) return eta;
    Rational bound = delta / l;
    if (bound >= eta) return eta;
    return pow2(floor_log2(bound));
}

std::vector<Rational> TowerBlockMap::evaluate_level(const ProductPoint& z,
                                                    std::size_t level_index) const {
    long s = shape.elements().at(level_index);
    ProductPoint xs = act(z, s);
    std::vector<Rational> fv = feature_values(base.features, xs);
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(base.m));
    for (int j = 0; j < base.m; ++j) {
        Rational v = base.offsets[static_cast<std::size_t>(j)];
        for (std::size_t f = 0; f < base.features.size(); ++f)
            v += base.coeffs[static_cast<std::size_t>(j)][f] * fv[f];
        if (!corrections.empty()) {
            const auto& c = corrections[level_index][static_cast<std::size_t>(j)];
            v += c[0];
            for (std::size_t f = 0; f < base.features.size(); ++f) v += c[f + 1] * fv[f];
        }
        out.push_back(clamp01(v));
    }
    return out;
}

std::vector<std::vector<Rational>> TowerBlockMap::evaluate(const ProductPoint& z) const {
    std::vector<std::vector<Rational>> block;
    block.reserve(shape.size());
    for (std::size_t li = 0; li < shape.size(); ++li) block.push_back(evaluate_level(z, li));
    return block;
}

TowerBlockMap block_map_F0(const BaseMap& f0, const FiniteWindow& s, std::size_t tower) {
    if (s.empty()) throw std::invalid_argument("empty shape");
    return TowerBlockMap{tower, s, f0, {}};
}

namespace {

Rational block_sup_dist(const std::vector<std::vector<Rational>>& a,
                        const std::vector<std::vector<Rational>>& b) {
    Rational best = 0;
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t j = 0; j < a[s].size(); ++j)
            best = std::max(best, abs_rat(a[s][j] - b[s][j]));
    return best;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tower, std::uint64_t t) {
    std::uint64_t h = seed;
    for (std::uint64_t v : {tower + 1, t + 1}) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace

PerturbResult perturb_search(const TowerBlockMap& f0, const Rational& eps, const Rational& delta,
                             const std::vector<ProductPoint>& base_sample,
                             const MetricConfig& mc, std::uint64_t seed, int max_tries) {
    if (max_tries < 1) throw std::invalid_argument("max_tries must be at least 1");
    const std::size_t nfeat = f0.base.features.size();
    const std::size_t nlev = f0.shape.size();
    const std::size_t m = static_cast<std::size_t>(f0.base.m);

    // pairs the certificate must separate
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < base_sample.size(); ++a)
        for (std::size_t b = a + 1; b < base_sample.size(); ++b)
            if (dyn_metric(base_sample[a], base_sample[b], f0.shape, mc) >= eps)
                pairs.push_back({a, b});

    // per-point feature vectors along the shape; equal vectors across every
    // level can never be separated by a feature-affine perturbation
    std::vector<std::vector<std::vector<Rational>>> feats(base_sample.size());
    for (std::size_t a = 0; a < base_sample.size(); ++a)
        for (std::size_t li = 0; li < nlev; ++li)
            feats[a].push_back(feature_values(f0.base.features,
                                              act(base_sample[a], f0.shape.elements()[li])));
    for (const auto& [a, b] : pairs)
        if (feats[a] == feats[b])
            throw PerturbFailure("feature collision: an eps-separated pair has identical "
                                 "feature vectors on every level; no affine perturbation "
                                 "can separate it",
                                 f0, {{a, b}});

    Rational bound = delta / (2 * (Rational(nfeat) + 1));
    TowerBlockMap best = f0;
    std::vector<std::pair<std::size_t, std::size_t>> best_violations;
    bool have_best = false;

    for (int t = 0; t < max_tries; ++t) {
        TowerBlockMap cand = f0;
        if (t > 0) {
            std::mt19937_64 rng(mix_seed(seed, f0.tower, static_cast<std::uint64_t>(t)));
            std::uniform_int_distribution<long> num(-4096, 4096);
            cand.corrections.assign(nlev, std::vector<std::vector<Rational>>(
                                              m, std::vector<Rational>(nfeat + 1)));
            for (std::size_t li = 0; li < nlev; ++li)
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t f = 0; f <= nfeat; ++f)
                        cand.corrections[li][j][f] = bound * Rational(num(rng), 4096);
        }
        std::vector<std::vector<std::vector<Rational>>> blocks(base_sample.size());
        for (std::size_t a = 0; a < base_sample.size(); ++a) blocks[a] = cand.evaluate(base_sample[a]);
        Rational s_min;
        bool first = true;
        std::vector<std::pair<std::size_t, std::size_t>> violations;
        for (const auto& [a, b] : pairs) {
            Rational sep = block_sup_dist(blocks[a], blocks[b]);
            if (sep == 0) {
                violations.push_back({a, b});
                continue;
            }
            if (first || sep < s_min) s_min = sep;
            first = false;
        }
        if (violations.empty()) {
            PerturbResult res;
            res.map = std::move(cand);
            res.s_min = first ? Rational(0) : s_min;
            res.vacuous = pairs.empty();
            res.tries = t + 1;
            res.certified_pairs = static_cast<long>(pairs.size());
            return res;
        }
        if (!have_best || violations.size() < best_violations.size()) {
            best = cand;
            best_violations = violations;
            have_best = true;
        }
    }
    std::ostringstream os;
    os << "perturbation search exhausted " << max_tries << " tries with "
       << best_violations.size() << " unseparated pair(s)";
    throw PerturbFailure(os.str(), best, best_violations);
}

GluedMap glue(const Castle& castle, std::vector<TowerBlockMap> maps) {
    if (castle.towers.size() != maps.size())
        throw std::invalid_argument("one block map per tower required");
    int m = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].shape != castle.towers[i].shape)
            throw std::invalid_argument("block map shape differs from tower shape");
        if (i == 0)
            m = maps[i].base.m;
        else if (maps[i].base.m != m)
            throw std::invalid_argument("block maps disagree on target dimension");
    }
    return GluedMap{castle, std::move(maps), m};
}

std::vector<Rational> GluedMap::evaluate(const ProductPoint& x) const {
    std::string why;
    auto loc = locate(castle, x.y, &why);
    if (!loc) throw std::runtime_error("glued map undefined: " + why);
    const TowerBlockMap& tm = maps[loc->tower];
    const auto& elems = tm.shape.elements();
    std::size_t li = static_cast<std::size_t>(
        std::lower_bound(elems.begin(), elems.end(), loc->level) - elems.begin());
    return tm.evaluate_level(act(x, -loc->level), li);
}

std::vector<std::vector<Rational>> trajectory_block(const PointMap& f, const ProductPoint& x,
                                                    const FiniteWindow& w) {
    if (w.empty()) throw std::invalid_argument("empty window");
    std::vector<std::vector<Rational>> block;
    block.reserve(w.size());
    for (long g : w.elements()) block.push_back(f(act(x, g)));
    return block;
}

namespace {

Rational weighted_block_separation(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<std::vector<Rational>>& b,
                                   const FiniteWindow& w, const MetricConfig& mc) {
    Rational sum = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Rational sup = 0;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            sup = std::max(sup, abs_rat(a[i][j] - b[i][j]));
        sum += mc.trajectory_weight(w.elements()[i]) * sup;
    }
    return sum;
}

void require_shape_differences(const GluedMap& f, const FiniteWindow& w) {
    for (const TowerBlockMap& tm : f.maps)
        for (long s1 : tm.shape.elements())
            for (long s2 : tm.shape.elements())
                if (!w.contains(s1 - s2))
                    throw std::invalid_argument(
                        "window must contain every difference of shape elements");
}

}  // namespace

EmbeddingCertificate verify_eta_embedding(const GluedMap& f,
                                          const std::vector<ProductPoint>& sample,
                                          const Rational& eta, const FiniteWindow& w,
                                          const MetricConfig& mc) {
    require_shape_differences(f, w);
    EmbeddingCertificate cert;
    cert.eta = eta;
    cert.tail = 1 - mc.trajectory_weight_sum(w);

    std::vector<std::vector<std::vector<Rational>>> blocks(sample.size());
    PointMap eval = [&f](const ProductPoint& p) { return f.evaluate(p); };
    for (std::size_t a = 0; a < sample.size(); ++a) blocks[a] = trajectory_block(eval, sample[a], w);

    bool first_margin = true;
    Rational inf_sep;
    cert.per_tower_certified = true;
    for (std::size_t a = 0; a < sample.size(); ++a)
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            if (!(sample[a].y == sample[b].y)) continue;
            Rational d = dist_X(sample[a], sample[b], mc);
            if (d < eta) continue;
            ++cert.checked_pairs;
            PairRecord rec;
            rec.a = a;
            rec.b = b;
            rec.dist = d;
            rec.separation = weighted_block_separation(blocks[a], blocks[b], w, mc);
            rec.violates = blocks[a] == blocks[b];
            if (rec.violates) {
                ++cert.violating_pairs;
                // proof replay: equal blocks in a common tower level would
                // force the per-tower comparison to conclude dist < eta
                auto la = locate(f.castle, sample[a].y);
                auto lb = locate(f.castle, sample[b].y);
                if (la && lb && la->tower == lb->tower && la->level == lb->level) {
                    std::ostringstream os;
                    os << "pair (" << a << "," << b << "): equal trajectory blocks in tower "
                       << la->tower << " level " << la->level << " but dist_X = "
                       << rational_to_string(d) << " >= eta";
                    cert.log.push_back(os.str());
                    cert.per_tower_certified = false;
                }
            }
            if (first_margin || rec.separation < inf_sep) inf_sep = rec.separation;
            first_margin = false;
            cert.worst_pairs.push_back(rec);
        }

    std::sort(cert.worst_pairs.begin(), cert.worst_pairs.end(),
              [](const PairRecord& x, const PairRecord& y) { return x.separation < y.separation; });
    if (cert.worst_pairs.size() > 10) cert.worst_pairs.resize(10);

    cert.global_certified = cert.violating_pairs == 0;
    if (first_margin) {
        cert.margin_infinite = true;
        cert.log.push_back("no qualifying pair in the sample; vacuously certified");
    } else {
        Rational margin = inf_sep / 2 - cert.tail;
        cert.margin = margin > 0 ? margin : Rational(0);
    }
    return cert;
}

SeparationMargin separation_margin(const GluedMap& f, const std::vector<ProductPoint>& sample,
                                   const Rational& eta, const MetricConfig& mc,
                                   const FiniteWindow& w) {
    SeparationMargin out;
    out.tail = 1 - mc.trajectory_weight_sum(w);
    PointMap eval = [&f](const ProductPoint& p) { return f.evaluate(p); };
    bool first = true;
    Rational inf_sep;
    std::vector<std::vector<std::vector<Rational>>> blocks(sample.size());
    for (std::size_t a = 0; a < sample.size(); ++a) blocks[a] = trajectory_block(eval, sample[a], w);
    for (std::size_t a = 0; a < sample.size(); ++a)
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            if (!(sample[a].y == sample[b].y)) continue;
            if (dist_X(sample[a], sample[b], mc) < eta) continue;
            Rational sep = weighted_block_separation(blocks[a], blocks[b], w, mc);
            if (first || sep < inf_sep) inf_sep = sep;
            first = false;
        }
    if (first) {
        out.infinite = true;
        return out;
    }
    Rational margin = inf_sep / 2 - out.tail;
    out.value = margin > 0 ? margin : Rational(0);
    return out;
}

Rational interleave_phi(const Rational& t, int j, int ell) {
    if (ell < 1 || j < 1 || j > ell) throw std::invalid_argument("symbol index out of range");
    if (t < 0 || t > 1) throw std::invalid_argument("t out of [0,1]");
    return Rational(j - 1, ell) + t / (2 * ell);
}

std::vector<std::vector<Rational>> compose_final(const GluedMap& f, const ProductPoint& x,
                                                 const FiniteWindow& w,
                                                 const SymbolCoding& coding, int ell) {
    if (w.empty()) throw std::invalid_argument("empty window");
    std::vector<std::vector<Rational>> block;
    block.reserve(w.size());
    for (long g : w.elements()) {
        ProductPoint xg = act(x, g);
        std::vector<Rational> entry = f.evaluate(xg);
        if (coding) {
            if (ell < 1) throw std::invalid_argument("coding requires a positive symbol count");
            int j = coding(xg.y);
            entry.back() = interleave_phi(entry.back(), j, ell);
        } else {
            entry.push_back(cantor_code(xg.y));
        }
        block.push_back(std::move(entry));
    }
    return block;
}

}  // namespace meandim
