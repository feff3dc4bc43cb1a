#include "meandim/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace meandim::io {

namespace {

std::string rs(const Rational& q) { return dyadic_to_string(q); }

Rational rq(const json& j, const std::string& context) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument(context + ": expected a rational as string or integer");
}

void require_keys(const json& j, const std::vector<std::string>& required,
                  const std::string& context) {
    if (!j.is_object()) throw std::invalid_argument(context + ": expected an object");
    for (const auto& k : required)
        if (!j.contains(k)) throw std::invalid_argument(context + ": missing key \"" + k + "\"");
}

}  // namespace

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument(context + ": unknown key \"" + key + "\"");
}

json window_to_json(const FiniteWindow& f) {
    json a = json::array();
    for (long g : f.elements()) a.push_back(g);
    return a;
}

FiniteWindow window_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("window: expected an array of integers");
    std::vector<long> v;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw std::invalid_argument("window: non-integer element");
        v.push_back(e.get<long>());
    }
    return FiniteWindow(std::move(v));
}

json invariance_to_json(const InvarianceParams& p) {
    return json{{"k", window_to_json(p.k)}, {"delta", rs(p.delta)}};
}

InvarianceParams invariance_from_json(const json& j) {
    require_keys(j, {"k", "delta"}, "invariance");
    reject_unknown_keys(j, {"k", "delta"}, "invariance");
    return InvarianceParams{window_from_json(j.at("k")), rq(j.at("delta"), "invariance.delta")};
}

json odometer_to_json(const OdometerPoint& y) {
    return json{{"pre", y.preperiod()}, {"per", y.period()}};
}

OdometerPoint odometer_from_json(const json& j) {
    require_keys(j, {"pre", "per"}, "odometer point");
    reject_unknown_keys(j, {"pre", "per"}, "odometer point");
    return OdometerPoint(j.at("pre").get<std::string>(), j.at("per").get<std::string>());
}

json cubeseq_to_json(const CubeSeqPoint& u) {
    json entries = json::object();
    for (const auto& [n, coords] : u.entries()) {
        json a = json::array();
        for (const Rational& c : coords) a.push_back(rs(c));
        entries[std::to_string(n)] = std::move(a);
    }
    return json{{"k", u.k()}, {"entries", std::move(entries)}};
}

CubeSeqPoint cubeseq_from_json(const json& j) {
    require_keys(j, {"k", "entries"}, "cube sequence");
    reject_unknown_keys(j, {"k", "entries"}, "cube sequence");
    CubeSeqPoint u(j.at("k").get<int>());
    for (const auto& [key, coords] : j.at("entries").items()) {
        long n = std::stol(key);
        std::vector<Rational> v;
        for (const auto& c : coords) v.push_back(rq(c, "cube entry"));
        u.set_entry(n, std::move(v));
    }
    return u;
}

json product_to_json(const ProductPoint& x) {
    return json{{"y", odometer_to_json(x.y)}, {"u", cubeseq_to_json(x.u)}};
}

ProductPoint product_from_json(const json& j) {
    require_keys(j, {"y", "u"}, "product point");
    reject_unknown_keys(j, {"y", "u"}, "product point");
    return ProductPoint{odometer_from_json(j.at("y")), cubeseq_from_json(j.at("u"))};
}

json sample_spec_to_json(const SampleSpec& s) {
    return json{{"k", s.k},
                {"seed", s.seed},
                {"count", s.count},
                {"support_radius", s.support_radius},
                {"digit_budget", s.digit_budget},
                {"eta", rs(s.eta)}};
}

SampleSpec sample_spec_from_json(const json& j) {
    static const std::vector<std::string> keys = {"k",    "seed",         "count",
                                                  "support_radius", "digit_budget", "eta"};
    reject_unknown_keys(j, keys, "sample");
    SampleSpec s;
    if (j.contains("k")) s.k = j.at("k").get<int>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("count")) s.count = j.at("count").get<int>();
    if (j.contains("support_radius")) s.support_radius = j.at("support_radius").get<long>();
    if (j.contains("digit_budget")) s.digit_budget = j.at("digit_budget").get<int>();
    if (j.contains("eta")) s.eta = rq(j.at("eta"), "sample.eta");
    return s;
}

json box_to_json(const Box& b) {
    json lo = json::array(), hi = json::array();
    for (const Rational& c : b.lo) lo.push_back(rs(c));
    for (const Rational& c : b.hi) hi.push_back(rs(c));
    return json{{"lo", std::move(lo)}, {"hi", std::move(hi)}};
}

json cover_to_json(const BoxCover& c) {
    json a = json::array();
    for (const Box& b : c.boxes) a.push_back(box_to_json(b));
    return a;
}

json widim_result_to_json(const WidimResult& r) {
    return json{{"value", r.value},
                {"kind", r.kind == WidimKind::exact ? "exact" : "upper_bound"},
                {"witness_boxes", cover_to_json(r.witness)},
                {"witness_materialized", r.stats.witness_materialized}};
}

namespace {

json cylinder_to_json(const CylinderSet& c) {
    if (const auto* od = std::get_if<OdometerCylinder>(&c)) {
        std::string digits;
        for (int d : od->digits) digits.push_back(d ? '1' : '0');
        return json{{"type", "odometer_digits"}, {"digits", digits}};
    }
    const auto& sub = std::get<SubshiftCylinder>(c);
    return json{{"type", "subshift_word"}, {"word", sub.word}, {"offset", sub.offset}};
}

CylinderSet cylinder_from_json(const json& j) {
    require_keys(j, {"type"}, "cylinder");
    std::string type = j.at("type").get<std::string>();
    if (type == "odometer_digits") {
        reject_unknown_keys(j, {"type", "digits"}, "cylinder");
        require_keys(j, {"digits"}, "cylinder");
        OdometerCylinder c;
        for (char ch : j.at("digits").get<std::string>()) {
            if (ch != '0' && ch != '1')
                throw std::invalid_argument("cylinder: digits must be 0/1");
            c.digits.push_back(ch - '0');
        }
        return c;
    }
    if (type == "subshift_word") {
        reject_unknown_keys(j, {"type", "word", "offset"}, "cylinder");
        require_keys(j, {"word"}, "cylinder");
        SubshiftCylinder c;
        c.word = j.at("word").get<std::string>();
        if (j.contains("offset")) c.offset = j.at("offset").get<long>();
        return c;
    }
    throw std::invalid_argument("cylinder: unknown type \"" + type + "\"");
}

}  // namespace

json castle_to_json(const Castle& c) {
    json towers = json::array();
    for (const Tower& t : c.towers)
        towers.push_back(
            json{{"base", cylinder_to_json(t.base)}, {"shape", window_to_json(t.shape)}});
    return json{{"towers", std::move(towers)}};
}

Castle castle_from_json(const json& j) {
    require_keys(j, {"towers"}, "castle");
    reject_unknown_keys(j, {"towers"}, "castle");
    Castle c;
    for (const auto& t : j.at("towers")) {
        require_keys(t, {"base", "shape"}, "tower");
        reject_unknown_keys(t, {"base", "shape"}, "tower");
        c.towers.push_back(
            Tower{cylinder_from_json(t.at("base")), window_from_json(t.at("shape"))});
    }
    return c;
}

json castle_report_to_json(const CastleCheckReport& r) {
    return json{{"disjoint", r.disjoint},
                {"covers", r.covers},
                {"shapes_invariant", r.shapes_invariant},
                {"ok", r.ok()},
                {"diagnostics", r.diagnostics}};
}

json certificate_to_json(const EmbeddingCertificate& c) {
    json pairs = json::array();
    for (const PairRecord& p : c.worst_pairs)
        pairs.push_back(json{{"a", p.a},
                             {"b", p.b},
                             {"dist", rs(p.dist)},
                             {"separation", rs(p.separation)},
                             {"violates", p.violates}});
    return json{{"eta", rs(c.eta)},
                {"seed", c.seed},
                {"margin", c.margin_infinite ? json("inf") : json(rs(c.margin))},
                {"tail", rs(c.tail)},
                {"per_tower_certified", c.per_tower_certified},
                {"global_certified", c.global_certified},
                {"checked_pairs", c.checked_pairs},
                {"violating_pairs", c.violating_pairs},
                {"worst_pairs", std::move(pairs)},
                {"log", c.log}};
}

json pipeline_result_to_json(const PipelineResult& r) {
    json towers = json::array();
    for (const PerturbResult& t : r.tower_results)
        towers.push_back(json{{"tries", t.tries},
                              {"certified_pairs", t.certified_pairs},
                              {"vacuous", t.vacuous},
                              {"s_min", rs(t.s_min)}});
    return json{{"epsilon", rs(r.epsilon)},
                {"certificate", certificate_to_json(r.certificate)},
                {"towers", std::move(towers)},
                {"hypothesis_mdim_ok", r.hypothesis_mdim_ok},
                {"mdim_estimate", rs(r.mdim_estimate)},
                {"per_shape_verified", r.per_shape_verified},
                {"per_tower_certified", r.per_tower_certified},
                {"gluing_identity_ok", r.gluing_identity_ok},
                {"close_to_f0", r.close_to_f0},
                {"separates_fibers", r.separates_fibers},
                {"margin_positive", r.margin_positive},
                {"same_fiber_pairs", r.same_fiber_pairs},
                {"certified", r.certified()},
                {"report", r.report}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
    static const std::vector<std::string> keys = {
        "k",       "m",        "eta",          "delta", "castle_level", "invariance",
        "sample",  "seed",     "max_tries",    "window_radius", "mdim_check_n"};
    reject_unknown_keys(j, keys, "config");
    PipelineConfig c;
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("m")) c.m = j.at("m").get<int>();
    if (j.contains("eta")) c.eta = rq(j.at("eta"), "config.eta");
    if (j.contains("delta")) c.delta = rq(j.at("delta"), "config.delta");
    if (j.contains("castle_level")) c.castle_level = j.at("castle_level").get<int>();
    if (j.contains("invariance")) c.invariance = invariance_from_json(j.at("invariance"));
    if (j.contains("sample")) c.sample = sample_spec_from_json(j.at("sample"));
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_tries")) c.max_tries = j.at("max_tries").get<int>();
    if (j.contains("window_radius")) c.window_radius = j.at("window_radius").get<long>();
    if (j.contains("mdim_check_n")) c.mdim_check_n = j.at("mdim_check_n").get<long>();
    c.sample.k = c.k;
    c.sample.eta = c.eta;
    return c;
}

json pipeline_config_to_json(const PipelineConfig& c) {
    return json{{"k", c.k},
                {"m", c.m},
                {"eta", rs(c.eta)},
                {"delta", rs(c.delta)},
                {"castle_level", c.castle_level},
                {"invariance", invariance_to_json(c.invariance)},
                {"sample", sample_spec_to_json(c.sample)},
                {"seed", c.seed},
                {"max_tries", c.max_tries},
                {"window_radius", c.window_radius},
                {"mdim_check_n", c.mdim_check_n}};
}

std::string config_hash(const json& j) {
    std::string canonical = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace meandim::io
