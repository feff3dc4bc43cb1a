#include <random>

#include "doctest.h"
#include "meandim/castle.hpp"

using namespace meandim;

namespace {
const InvarianceParams kLoose{FiniteWindow{-1, 0, 1}, Rational(1)};
}

TEST_CASE("odometer cylinders are congruence classes") {
    OdometerCylinder c{{1, 0, 1}};  // digits 101 lsb-first: value 5 mod 8
    CHECK(c.modulus() == 8);
    CHECK(c.residue() == 5);
    CHECK(c.measure() == Rational(1, 8));
    CHECK(c.contains(OdometerPoint::from_rational(Rational(5))));
    CHECK(c.contains(OdometerPoint::from_rational(Rational(13))));
    CHECK_FALSE(c.contains(OdometerPoint::from_rational(Rational(1))));
    // the all-ones point ...111 = -1 is 7 mod 8
    OdometerCylinder ones{{1, 1, 1}};
    CHECK(ones.contains(OdometerPoint::from_rational(Rational(-1))));
}

TEST_CASE("odometer castle partitions exactly") {
    for (int n : {1, 3, 6}) {
        Castle c = odometer_castle(n);
        REQUIRE(c.towers.size() == 1);
        CHECK(c.level_count() == (1u << n));
        auto rep = verify_castle(c, kLoose);
        CHECK(rep.disjoint);
        CHECK(rep.covers);
        CHECK(rep.shapes_invariant);
        CHECK(rep.ok());
    }
    // shape {0..2^n-1} is ({-1,0,1}, 1/10)-invariant once 2/2^n <= 1/10
    InvarianceParams tight{FiniteWindow{-1, 0, 1}, Rational(1, 10)};
    CHECK_FALSE(verify_castle(odometer_castle(3), tight).shapes_invariant);
    CHECK(verify_castle(odometer_castle(5), tight).shapes_invariant);
}

TEST_CASE("verify_castle catches broken odometer castles") {
    // duplicate level: two towers with the same base, singleton shapes
    Tower t1{OdometerCylinder{{0}}, FiniteWindow{0}};
    Tower t2{OdometerCylinder{{0}}, FiniteWindow{0}};
    auto rep = verify_castle(Castle{{t1, t2}}, kLoose);
    CHECK_FALSE(rep.disjoint);
    CHECK_FALSE(rep.diagnostics.empty());

    // disjoint but not covering: only the even class
    auto rep2 = verify_castle(Castle{{t1}}, kLoose);
    CHECK(rep2.disjoint);
    CHECK_FALSE(rep2.covers);

    // finer/coarser cylinders that do intersect
    Tower fine{OdometerCylinder{{0, 1}}, FiniteWindow{0}};  // 2 mod 4
    auto rep3 = verify_castle(Castle{{t1, fine}}, kLoose);
    CHECK_FALSE(rep3.disjoint);
}

TEST_CASE("locate inverts the odometer castle structure") {
    Castle c = odometer_castle(4);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-2000, 2000);
    for (int trial = 0; trial < 50; ++trial) {
        long a = num(rng);
        long b = 2 * std::uniform_int_distribution<long>(0, 400)(rng) + 1;
        OdometerPoint y = OdometerPoint::from_rational(Rational(a, b));
        auto loc = locate(c, y);
        REQUIRE(loc.has_value());
        CHECK(loc->tower == 0);
        // pulling back by the level lands in the base cylinder
        const auto& base = std::get<OdometerCylinder>(c.towers[0].base);
        CHECK(base.contains(odometer_act(y, -loc->level)));
    }
    // a point is located at level = value mod 16
    CHECK(locate(c, OdometerPoint::from_rational(Rational(21)))->level == 5);
    std::string why;
    Castle evens{{Tower{OdometerCylinder{{0}}, FiniteWindow{0}}}};
    CHECK_FALSE(locate(evens, OdometerPoint::from_rational(Rational(1)), &why).has_value());
    CHECK_FALSE(why.empty());
}

TEST_CASE("pullback keeps the combinatorics") {
    Castle c = odometer_castle(3);
    Castle p = pullback(c);
    CHECK(p.level_count() == c.level_count());
    CHECK(verify_castle(p, kLoose).ok());
}

TEST_CASE("return-word castle for the Fibonacci subshift") {
    auto fib = SubstitutionSystem::fibonacci();
    Castle c = returnword_castle(fib, "a", 500);
    REQUIRE(c.towers.size() == 2);  // return words a and ab
    auto rep = verify_castle(c, kLoose, &fib, 500);
    CHECK(rep.disjoint);
    CHECK(rep.covers);
    // shapes as small as {0} cannot absorb K = {-1,0,1}
    CHECK_FALSE(rep.shapes_invariant);
    CHECK(verify_castle(c, InvarianceParams{FiniteWindow{0}, Rational(0)}, &fib, 500).ok());

    Castle c2 = returnword_castle(fib, "ab", 800);
    REQUIRE(c2.towers.size() == 2);  // return words ab and aba
    auto rep2 = verify_castle(c2, kLoose, &fib, 800);
    CHECK(rep2.disjoint);
    CHECK(rep2.covers);

    // dropping a tower breaks covering
    Castle broken{{c.towers[0]}};
    auto rep3 = verify_castle(broken, kLoose, &fib, 500);
    CHECK_FALSE(rep3.covers);
    CHECK_FALSE(rep3.diagnostics.empty());
}

TEST_CASE("verify_castle input validation") {
    CHECK_THROWS(verify_castle(Castle{}, kLoose));
    Castle sub = returnword_castle(SubstitutionSystem::fibonacci(), "a", 300);
    CHECK_THROWS(verify_castle(sub, kLoose));  // missing substitution
    CHECK_THROWS(pullback(sub));
    Castle mixed{{Tower{OdometerCylinder{{0}}, FiniteWindow{0}}, sub.towers[0]}};
    CHECK_THROWS(verify_castle(mixed, kLoose));
    CHECK_THROWS(odometer_castle(0));
}
