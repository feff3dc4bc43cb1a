#include "meandim/odometer.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace meandim {

namespace {

Integer word_value(const std::string& w) {
    Integer v = 0;
    for (std::size_t i = w.size(); i-- > 0;) {
        v <<= 1;
        if (w[i] == '1')
            v += 1;
        else if (w[i] != '0')
            throw std::invalid_argument("digit word must be over {0,1}");
    }
    return v;
}

}  // namespace

OdometerPoint::OdometerPoint(const std::string& preperiod, const std::string& period) {
    if (period.empty()) throw std::invalid_argument("period must be non-empty");
    Integer p_val = word_value(preperiod);
    Integer v_val = word_value(period);
    long p = static_cast<long>(preperiod.size());
    long q = static_cast<long>(period.size());
    // y = P + 2^p * V / (1 - 2^q)
    Rational val = Rational(p_val) - pow2(p) * Rational(v_val, (Integer(1) << q) - 1);
    *this = from_rational(val);
}

OdometerPoint OdometerPoint::zero() {
    OdometerPoint y;
    y.pre_ = "";
    y.per_ = "0";
    y.value_ = 0;
    return y;
}

OdometerPoint OdometerPoint::from_rational(const Rational& value) {
    Integer b = boost::multiprecision::denominator(value);
    if ((b & 1) == 0)
        throw std::invalid_argument("not a 2-adic integer: denominator is even");
    Integer a = boost::multiprecision::numerator(value);

    // Expand digits of a/b; the state is the running numerator, which stays
    // bounded, so the expansion cycles. The first repeated state marks the
    // minimal preperiod and a primitive period.
    std::map<Integer, std::size_t> seen;
    std::string digits;
    Integer cur = a;
    while (true) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            OdometerPoint y;
            y.pre_ = digits.substr(0, it->second);
            y.per_ = digits.substr(it->second);
            y.value_ = value;
            return y;
        }
        seen.emplace(cur, digits.size());
        int d = (cur % 2 != 0) ? 1 : 0;
        digits.push_back(d ? '1' : '0');
        cur = (cur - d * b) / 2;
    }
}

int OdometerPoint::digit(std::size_t i) const {
    if (i < pre_.size()) return pre_[i] == '1';
    return per_[(i - pre_.size()) % per_.size()] == '1';
}

OdometerPoint odometer_act(const OdometerPoint& y, long g) {
    if (g == 0) return y;
    return OdometerPoint::from_rational(y.value() + g);
}

std::size_t first_differing_digit(const OdometerPoint& y1, const OdometerPoint& y2) {
    if (y1 == y2) throw std::logic_error("points are equal");
    std::size_t p = std::max(y1.preperiod().size(), y2.preperiod().size());
    std::size_t q = std::lcm(y1.period().size(), y2.period().size());
    for (std::size_t i = 0; i < p + q; ++i)
        if (y1.digit(i) != y2.digit(i)) return i;
    throw std::logic_error("distinct points with identical expansions");
}

Rational dist_Y(const OdometerPoint& y1, const OdometerPoint& y2) {
    if (y1 == y2) return 0;
    return pow2(-static_cast<long>(first_differing_digit(y1, y2)));
}

}  // namespace meandim
