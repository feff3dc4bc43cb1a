#include "meandim/castle.hpp"

#include <sstream>
#include <stdexcept>

namespace meandim {

Integer OdometerCylinder::modulus() const { return Integer(1) << digits.size(); }

Integer OdometerCylinder::residue() const {
    Integer r = 0;
    for (std::size_t i = digits.size(); i-- > 0;) r = 2 * r + digits[i];
    return r;
}

bool OdometerCylinder::contains(const OdometerPoint& y) const {
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (y.digit(i) != digits[i]) return false;
    return true;
}

Rational OdometerCylinder::measure() const { return pow2(-static_cast<long>(digits.size())); }

std::size_t Castle::level_count() const {
    std::size_t n = 0;
    for (const Tower& t : towers) n += t.shape.size();
    return n;
}

Castle odometer_castle(int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("odometer castle rank out of range");
    Tower t;
    t.base = OdometerCylinder{std::vector<int>(static_cast<std::size_t>(n), 0)};
    t.shape = FiniteWindow::interval(0, (1L << n) - 1);
    return Castle{{std::move(t)}};
}

Castle returnword_castle(const SubstitutionSystem& sub, const std::string& w, long horizon) {
    Castle c;
    for (const ReturnWord& r : return_words(sub, w, horizon)) {
        Tower t;
        t.base = SubshiftCylinder{r.word + w, 0};
        t.shape = FiniteWindow::interval(0, static_cast<long>(r.word.size()) - 1);
        c.towers.push_back(std::move(t));
    }
    return c;
}

namespace {

struct OdometerLevel {
    Integer modulus;
    Integer residue;
    std::size_t tower;
    long level;
};

Integer mod_pos(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

CastleCheckReport verify_odometer(const Castle& c, const InvarianceParams& inv) {
    CastleCheckReport rep;
    std::vector<OdometerLevel> levels;
    Rational measure = 0;
    for (std::size_t i = 0; i < c.towers.size(); ++i) {
        const auto& cyl = std::get<OdometerCylinder>(c.towers[i].base);
        Integer m = cyl.modulus();
        Integer r = cyl.residue();
        for (long s : c.towers[i].shape.elements()) {
            levels.push_back({m, mod_pos(r + s, m), i, s});
            measure += cyl.measure();
        }
    }
    rep.disjoint = true;
    for (std::size_t a = 0; a < levels.size() && rep.disjoint; ++a)
        for (std::size_t b = a + 1; b < levels.size(); ++b) {
            // congruence classes intersect iff residues agree mod the
            // coarser modulus (both moduli are powers of two)
            Integer m = std::min(levels[a].modulus, levels[b].modulus);
            if (mod_pos(levels[a].residue, m) == mod_pos(levels[b].residue, m)) {
                std::ostringstream os;
                os << "levels (" << levels[a].tower << "," << levels[a].level << ") and ("
                   << levels[b].tower << "," << levels[b].level << ") share residue "
                   << mod_pos(levels[a].residue, m) << " mod " << m;
                rep.diagnostics.push_back(os.str());
                rep.disjoint = false;
                break;
            }
        }
    // with disjointness established, total Haar measure 1 certifies covering
    rep.covers = rep.disjoint && measure == 1;
    if (rep.disjoint && !rep.covers) {
        std::ostringstream os;
        os << "total level measure " << rational_to_string(measure) << " != 1";
        rep.diagnostics.push_back(os.str());
    }
    rep.shapes_invariant = true;
    for (std::size_t i = 0; i < c.towers.size(); ++i)
        if (!is_invariant(c.towers[i].shape, inv)) {
            rep.shapes_invariant = false;
            std::ostringstream os;
            os << "tower " << i << " shape fails (K,delta)-invariance";
            rep.diagnostics.push_back(os.str());
        }
    return rep;
}

CastleCheckReport verify_subshift(const Castle& c, const InvarianceParams& inv,
                                  const SubstitutionSystem& sub, long horizon) {
    CastleCheckReport rep;
    char seed = 0;
    for (char s : sub.alphabet())
        if (!sub.rule(s).empty() && sub.rule(s)[0] == s) {
            seed = s;
            break;
        }
    if (seed == 0) throw std::invalid_argument("substitution has no extendable seed");
    std::string text = substitution_fixed_word(sub, seed, horizon);
    long maxlen = 0;
    for (const Tower& t : c.towers) {
        const auto& cyl = std::get<SubshiftCylinder>(t.base);
        maxlen = std::max(maxlen, static_cast<long>(cyl.word.size()) + t.shape.max());
    }
    if (horizon < 3 * maxlen) throw std::invalid_argument("horizon too short for verification");
    rep.disjoint = true;
    rep.covers = true;
    // every orbit position inside the safe band must lie in exactly one level
    for (long p = maxlen; p + maxlen < horizon; ++p) {
        int hits = 0;
        for (std::size_t i = 0; i < c.towers.size(); ++i) {
            const auto& cyl = std::get<SubshiftCylinder>(c.towers[i].base);
            for (long s : c.towers[i].shape.elements()) {
                long start = p - s + cyl.offset;
                if (start < 0 || start + static_cast<long>(cyl.word.size()) > horizon) continue;
                if (text.compare(static_cast<std::size_t>(start), cyl.word.size(), cyl.word) ==
                    0)
                    ++hits;
            }
        }
        if (hits == 0 && rep.covers) {
            rep.covers = false;
            rep.diagnostics.push_back("position " + std::to_string(p) + " is in no level");
        }
        if (hits > 1 && rep.disjoint) {
            rep.disjoint = false;
            rep.diagnostics.push_back("position " + std::to_string(p) + " is in " +
                                      std::to_string(hits) + " levels");
        }
    }
    rep.shapes_invariant = true;
    for (std::size_t i = 0; i < c.towers.size(); ++i)
        if (!is_invariant(c.towers[i].shape, inv)) {
            rep.shapes_invariant = false;
            rep.diagnostics.push_back("tower " + std::to_string(i) +
                                      " shape fails (K,delta)-invariance");
        }
    return rep;
}

}  // namespace

CastleCheckReport verify_castle(const Castle& c, const InvarianceParams& inv,
                                const SubstitutionSystem* sub, long horizon) {
    if (c.towers.empty()) throw std::invalid_argument("empty castle");
    bool odometer = std::holds_alternative<OdometerCylinder>(c.towers.front().base);
    for (const Tower& t : c.towers)
        if (std::holds_alternative<OdometerCylinder>(t.base) != odometer)
            throw std::invalid_argument("mixed castle base kinds");
    if (odometer) return verify_odometer(c, inv);
    if (sub == nullptr) throw std::invalid_argument("subshift castle needs its substitution");
    return verify_subshift(c, inv, *sub, horizon);
}

Castle pullback(const Castle& c) {
    for (const Tower& t : c.towers)
        if (!std::holds_alternative<OdometerCylinder>(t.base))
            throw std::invalid_argument("pullback expects an odometer castle");
    // the factor map reads off the odometer coordinate, so the pulled-back
    // castle has the same combinatorics; membership tests go through locate
    return c;
}

std::optional<CastleLocation> locate(const Castle& c, const OdometerPoint& y,
                                     std::string* diagnostic) {
    for (std::size_t i = 0; i < c.towers.size(); ++i) {
        const auto* cyl = std::get_if<OdometerCylinder>(&c.towers[i].base);
        if (cyl == nullptr) throw std::invalid_argument("locate expects an odometer castle");
        for (long s : c.towers[i].shape.elements())
            if (cyl->contains(odometer_act(y, -s))) return CastleLocation{i, s};
    }
    if (diagnostic != nullptr) {
        std::ostringstream os;
        os << "point " << rational_to_string(y.value()) << " lies in no level of "
           << c.towers.size() << " tower(s)";
        *diagnostic = os.str();
    }
    return std::nullopt;
}

}  // namespace meandim
