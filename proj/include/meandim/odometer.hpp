#pragma once

#include <string>

#include "meandim/rational.hpp"

namespace meandim {

/// A point of the 2-adic odometer: an eventually periodic binary expansion,
/// least significant digit first. Stored in canonical form (primitive period,
/// minimal preperiod), so equality of points is equality of representations.
///
/// Such expansions are exactly the rationals with odd denominator inside the
/// 2-adic integers; the canonical form is recovered by re-expanding that
/// rational with cycle detection.
class OdometerPoint {
public:
    /// Digit words over {'0','1'}; period must be non-empty.
    OdometerPoint(const std::string& preperiod, const std::string& period);

    /// The all-zero point.
    static OdometerPoint zero();
    /// The point with expansion of the rational a/b; b must be odd.
    static OdometerPoint from_rational(const Rational& value);

    const std::string& preperiod() const { return pre_; }
    const std::string& period() const { return per_; }

    /// i-th binary digit, i >= 0.
    int digit(std::size_t i) const;

    /// The rational a/b (b odd) whose 2-adic expansion this point is.
    const Rational& value() const { return value_; }

    bool operator==(const OdometerPoint& other) const { return value_ == other.value_; }

private:
    OdometerPoint() = default;
    std::string pre_, per_;
    Rational value_;
};

/// The odometer action: add g with carry. Exact and associative,
/// odometer_act(odometer_act(y,g),h) == odometer_act(y,g+h).
OdometerPoint odometer_act(const OdometerPoint& y, long g);

/// 2^-n where n is the first differing digit; 0 for equal points.
Rational dist_Y(const OdometerPoint& y1, const OdometerPoint& y2);

/// Index of the first differing digit; requires y1 != y2.
std::size_t first_differing_digit(const OdometerPoint& y1, const OdometerPoint& y2);

}  // namespace meandim
