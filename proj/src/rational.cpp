#include "meandim/rational.hpp"

#include <cmath>

namespace meandim {

std::string rational_to_string(const Rational& q) {
    Integer n = boost::multiprecision::numerator(q);
    Integer d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

std::string dyadic_to_string(const Rational& q) {
    Integer n = boost::multiprecision::numerator(q);
    Integer d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    if (is_power_of_two(d)) {
        unsigned long e = 0;
        Integer m = d;
        while (m > 1) { m >>= 1; ++e; }
        return n.str() + "/2^" + std::to_string(e);
    }
    return n.str() + "/" + d.str();
}

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        Integer n(num);
        Integer d;
        if (den.rfind("2^", 0) == 0) {
            unsigned long e = std::stoul(den.substr(2));
            d = Integer(1) << e;
        } else {
            d = Integer(den);
        }
        if (d == 0) throw std::invalid_argument("zero denominator in: " + s);
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (neg) whole = whole.substr(1);
        if (whole.empty()) whole = "0";
        Integer scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer n = Integer(whole) * scale + (frac.empty() ? Integer(0) : Integer(frac));
        Rational r(n, scale);
        return neg ? -r : r;
    }
    return Rational(Integer(s));
}

double to_double(const Rational& q) {
    return static_cast<double>(q);
}

long floor_log2(const Rational& q) {
    if (q <= 0) throw std::domain_error("floor_log2 requires a positive argument");
    long e = 0;
    Rational v = q;
    while (v >= 2) { v /= 2; ++e; }
    while (v < 1) { v *= 2; --e; }
    return e;
}

}  // namespace meandim
