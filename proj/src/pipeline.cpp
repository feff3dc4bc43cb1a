#include "meandim/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "meandim/widim.hpp"

namespace meandim {

BaseMap make_demo_base_map(int k, int m) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (m < 1 || m > 3) throw std::invalid_argument("demo base map supports m in 1..3");
    BaseMap f0;
    f0.m = m;
    f0.features = feature_basis(k, 1);
    // feature order: psi, then (n, c) for n = -1, 0, 1
    auto idx = [&](long n, int c) {
        return 1 + static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k) +
               static_cast<std::size_t>(c);
    };
    std::vector<Rational> zero(f0.features.size(), Rational(0));
    // output 0: 1/4 + u_0 / 2
    f0.offsets.push_back(Rational(1, 4));
    f0.coeffs.push_back(zero);
    f0.coeffs[0][idx(0, 0)] = Rational(1, 2);
    if (m >= 2) {
        // output 1: 1/4 + psi(y) / 2
        f0.offsets.push_back(Rational(1, 4));
        f0.coeffs.push_back(zero);
        f0.coeffs[1][0] = Rational(1, 2);
    }
    if (m >= 3) {
        // output 2: 1/4 + u_-1 / 4 + u_1 / 4
        f0.offsets.push_back(Rational(1, 4));
        f0.coeffs.push_back(zero);
        f0.coeffs[2][idx(-1, 0)] = Rational(1, 4);
        f0.coeffs[2][idx(1, 0)] = Rational(1, 4);
    }
    return f0;
}

namespace {

std::string rs(const Rational& q) { return rational_to_string(q); }

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult out;
    const MetricConfig mc;
    auto log = [&out](const std::string& line) { out.report.push_back(line); };

    // stage 1: base map and calibration
    out.f0 = make_demo_base_map(config.k, config.m);
    Rational modulus = out.f0.modulus();
    out.epsilon = calibrate_epsilon(out.f0, config.eta, config.delta);
    log("calibrate: modulus L = " + rs(modulus) + ", eta = " + rs(config.eta) + ", delta = " +
        rs(config.delta) + " -> epsilon = " + rs(out.epsilon));

    // stage 2: castle, verified
    Castle castle = odometer_castle(config.castle_level);
    auto castle_report = verify_castle(castle, config.invariance);
    if (!castle_report.disjoint || !castle_report.covers) {
        std::string why = castle_report.diagnostics.empty() ? "castle check failed"
                                                            : castle_report.diagnostics.front();
        throw PipelineError("castle", why);
    }
    if (!castle_report.shapes_invariant)
        throw PipelineError("castle", "tower shapes are not (K,gamma)-invariant");
    log("castle: odometer rank " + std::to_string(config.castle_level) +
        " verified (disjoint, covering, invariant shapes)");
    Castle pulled = pullback(castle);

    // stage 3: sample
    std::vector<ProductPoint> sample = sample_points(config.sample);
    for (std::size_t a = 0; a < sample.size(); ++a)
        for (std::size_t b = a + 1; b < sample.size(); ++b)
            if (sample[a].y == sample[b].y &&
                dist_X(sample[a], sample[b], mc) >= config.eta)
                ++out.same_fiber_pairs;
    log("sample: " + std::to_string(sample.size()) + " points, " +
        std::to_string(out.same_fiber_pairs) + " same-fiber eta-separated pairs");

    // hypothesis checks (logged, never aborting)
    {
        int v = phi(folner_interval(config.mdim_check_n), out.epsilon, config.k, mc,
                    WidimMode::greedy);
        out.mdim_estimate = Rational(v, config.mdim_check_n);
        out.hypothesis_mdim_ok = 2 * out.mdim_estimate < config.m;
        log(std::string("hypothesis (mdim): normalized widim estimate ") + rs(out.mdim_estimate) +
            (out.hypothesis_mdim_ok ? " < " : " >= ") + rs(Rational(config.m, 2)) +
            (out.hypothesis_mdim_ok ? " -- satisfied" : " -- VIOLATED"));
        out.per_shape_verified = true;
        for (std::size_t i = 0; i < pulled.towers.size(); ++i) {
            int w = phi(pulled.towers[i].shape, out.epsilon, config.k, mc, WidimMode::greedy);
            Rational bound = Rational(pulled.towers[i].shape.size()) * config.m / 2;
            bool ok = Rational(w) < bound;
            if (!ok) out.per_shape_verified = false;
            log("hypothesis (shape " + std::to_string(i) + "): greedy widim bound " +
                std::to_string(w) + (ok ? " < " : " >= ") + rs(bound) +
                (ok ? " -- satisfied" : " -- unverified (upper bound only)"));
        }
    }

    // stage 4: per-tower search
    std::vector<std::vector<ProductPoint>> base_samples(pulled.towers.size());
    for (const ProductPoint& x : sample) {
        auto loc = locate(pulled, x.y);
        if (!loc) throw PipelineError("locate", "sample point escapes the castle");
        base_samples[loc->tower].push_back(act(x, -loc->level));
    }
    std::vector<TowerBlockMap> maps;
    out.per_tower_certified = true;
    for (std::size_t i = 0; i < pulled.towers.size(); ++i) {
        TowerBlockMap f0i = block_map_F0(out.f0, pulled.towers[i].shape, i);
        try {
            PerturbResult pr = perturb_search(f0i, out.epsilon, config.delta, base_samples[i],
                                              mc, config.seed, config.max_tries);
            log("tower " + std::to_string(i) + ": certified in " + std::to_string(pr.tries) +
                " try(ies), " + std::to_string(pr.certified_pairs) + " pair(s), s_min = " +
                (pr.vacuous ? std::string("n/a (vacuous)") : rs(pr.s_min)));
            maps.push_back(pr.map);
            out.tower_results.push_back(std::move(pr));
        } catch (const PerturbFailure& e) {
            std::ostringstream os;
            os << e.what() << "; first witness pair (" << e.violating_pairs.front().first << ","
               << e.violating_pairs.front().second << ")";
            throw PipelineError("perturb_search tower " + std::to_string(i), os.str());
        }
    }

    // stage 5: glue and replay the gluing identity on the sample
    out.map = glue(pulled, std::move(maps));
    out.gluing_identity_ok = true;
    for (std::size_t i = 0; i < pulled.towers.size() && out.gluing_identity_ok; ++i) {
        const auto& shape = pulled.towers[i].shape;
        for (const ProductPoint& z : base_samples[i]) {
            auto block = out.map.maps[i].evaluate(z);
            for (std::size_t li = 0; li < shape.size(); ++li)
                if (out.map.evaluate(act(z, shape.elements()[li])) != block[li]) {
                    out.gluing_identity_ok = false;
                    break;
                }
            if (!out.gluing_identity_ok) break;
        }
    }
    if (!out.gluing_identity_ok) throw PipelineError("glue", "gluing identity failed on sample");
    log("glue: gluing identity replayed on every in-base sample point");

    // stage 6: |f - f0| < delta on the sample
    out.close_to_f0 = true;
    Rational worst_dev = 0;
    for (const ProductPoint& x : sample) {
        auto a = out.map.evaluate(x);
        auto b = out.f0.evaluate(x);
        for (std::size_t j = 0; j < a.size(); ++j) {
            Rational d = a[j] - b[j];
            if (d < 0) d = -d;
            worst_dev = std::max(worst_dev, d);
        }
    }
    out.close_to_f0 = worst_dev < config.delta;
    log("deviation: sup |f - f0| on sample = " + rs(worst_dev) +
        (out.close_to_f0 ? " < delta" : " >= delta"));
    if (!out.close_to_f0) throw PipelineError("glue", "glued map strays from f0 by >= delta");

    // stage 7: eta-embedding verification and margin
    FiniteWindow w = FiniteWindow::interval(-config.window_radius, config.window_radius);
    out.certificate = verify_eta_embedding(out.map, sample, config.eta, w, mc);
    out.certificate.seed = config.seed;
    out.separates_fibers = out.certificate.global_certified;
    out.margin_positive =
        out.certificate.margin_infinite || out.certificate.margin > 0;
    log("verify: " + std::to_string(out.certificate.checked_pairs) + " pair(s) checked, " +
        std::to_string(out.certificate.violating_pairs) + " violation(s), margin = " +
        (out.certificate.margin_infinite ? std::string("+inf (vacuous)")
                                         : rs(out.certificate.margin)) +
        ", tail = " + rs(out.certificate.tail));
    if (!out.separates_fibers) {
        std::string witness;
        for (const auto& p : out.certificate.worst_pairs)
            if (p.violates) {
                witness = " witness pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                          "), dist_X = " + rs(p.dist);
                break;
            }
        throw PipelineError("verify", "trajectory map fails to separate a sampled pair;" +
                                          witness);
    }
    if (!out.margin_positive)
        throw PipelineError("verify", "separation margin not positive after tail correction");
    log(out.certified() ? "certified" : "NOT certified");
    return out;
}

}  // namespace meandim
