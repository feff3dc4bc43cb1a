#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meandim/odometer.hpp"
#include "meandim/substitution.hpp"
#include "meandim/systems.hpp"
#include "meandim/window.hpp"

namespace meandim {

/// Clopen subset of the odometer given by a binary digit word: y is a member
/// iff its first |w| digits equal w, i.e. value(y) lies in a fixed residue
/// class mod 2^|w|. Membership, disjointness and measure are all exact
/// congruence arithmetic.
struct OdometerCylinder {
    std::vector<int> digits;  // least significant first

    Integer modulus() const;
    Integer residue() const;  // value of the digit word
    bool contains(const OdometerPoint& y) const;
    /// Haar measure 2^-|digits|.
    Rational measure() const;
};

/// Clopen subset of a substitution subshift: sequences whose window starting
/// at offset equals the word.
struct SubshiftCylinder {
    std::string word;
    long offset = 0;
};

using CylinderSet = std::variant<OdometerCylinder, SubshiftCylinder>;

struct Tower {
    CylinderSet base;
    FiniteWindow shape;
};

/// Family of towers; levels are the translates base + s, s in shape. A valid
/// castle has pairwise disjoint levels across all towers.
struct Castle {
    std::vector<Tower> towers;

    std::size_t level_count() const;
};

/// Rank-n odometer castle: single tower with base the cylinder [0^n] and
/// shape {0,...,2^n - 1}. Levels partition the space exactly.
Castle odometer_castle(int n);

/// Castle from the return words of w in the substitution fixed point: one
/// tower per return word r_j with base the cylinder [r_j w ...] at offset 0
/// and shape {0,...,|r_j|-1}. The fixed point decomposes into consecutive
/// return words, which is the tiling certificate.
Castle returnword_castle(const SubstitutionSystem& sub, const std::string& w, long horizon);

struct CastleCheckReport {
    bool disjoint = false;
    bool covers = false;
    bool shapes_invariant = false;
    std::vector<std::string> diagnostics;

    bool ok() const { return disjoint && covers && shapes_invariant; }
};

/// Verify disjointness and covering. For odometer castles both are decided
/// exactly: levels are congruence classes, disjointness is a pairwise residue
/// check and covering is the measure identity sum 2^-d_i |S_i| = 1. For
/// subshift castles covering is certified on the fixed-point horizon.
/// Shape invariance checks |KS \ S| <= delta |S| for each tower.
CastleCheckReport verify_castle(const Castle& c, const InvarianceParams& inv,
                                const SubstitutionSystem* sub = nullptr, long horizon = 0);

/// Location of a point inside a castle: tower index and level within the
/// shape, so that alpha_{-s}(x) lies in the base.
struct CastleLocation {
    std::size_t tower = 0;
    long level = 0;
};

/// Pull an odometer castle back through the factor map of the cube extension:
/// same combinatorics, membership read off the odometer coordinate.
Castle pullback(const Castle& c);

/// Locate the odometer coordinate of x in the castle, or report why it is in
/// no level.
std::optional<CastleLocation> locate(const Castle& c, const OdometerPoint& y,
                                     std::string* diagnostic = nullptr);

}  // namespace meandim
