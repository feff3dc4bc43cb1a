#include <random>

#include "doctest.h"
#include "meandim/widim.hpp"
#include "widim_oracle.hpp"

using namespace meandim;

namespace {
const MetricConfig mc;

WeightedCube unit_cube(std::size_t dim) {
    WeightedCube c;
    c.weights.assign(dim, Rational(1));
    return c;
}
}  // namespace

TEST_CASE("reduce_to_cube axis selection") {
    WeightedCube c = reduce_to_cube(FiniteWindow{0}, Rational(1, 4), 1, mc);
    REQUIRE(c.dim() == 5);
    CHECK(c.weights == std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1),
                                             Rational(1, 2), Rational(1, 4)});
    WeightedCube c2 = reduce_to_cube(FiniteWindow::interval(0, 7), Rational(1, 2), 1, mc);
    CHECK(c2.dim() == 10);
    WeightedCube c3 = reduce_to_cube(FiniteWindow{0}, Rational(1), 1, mc);
    CHECK(c3.dim() == 0);
    // k replicates every axis
    CHECK(reduce_to_cube(FiniteWindow{0}, Rational(1, 4), 3, mc).dim() == 15);
    ReductionStats rs;
    reduce_to_cube(FiniteWindow{0}, Rational(1, 4), 1, mc, &rs);
    CHECK(rs.y_partition_count == 4);
}

TEST_CASE("widim_greedy brick witnesses") {
    for (std::size_t m = 1; m <= 3; ++m) {
        WidimResult r = widim_greedy(unit_cube(m), Rational(1, 2));
        CHECK(r.value == static_cast<int>(m));
        CHECK(r.kind == WidimKind::upper_bound);
        REQUIRE(r.stats.witness_materialized);
        CHECK(covers(r.witness, unit_cube(m)));
        CHECK(mesh(r.witness, unit_cube(m)) <= Rational(1, 2));
        CHECK(order(r.witness) == r.value);
    }
    // an axis below eps contributes nothing
    WeightedCube mixed;
    mixed.weights = {Rational(1), Rational(1, 8)};
    WidimResult r = widim_greedy(mixed, Rational(1, 4));
    CHECK(r.value == 1);
    CHECK(covers(r.witness, mixed));
    CHECK(order(r.witness) == 1);
    // 0-axis cube
    WidimResult r0 = widim_greedy(unit_cube(0), Rational(1, 2));
    CHECK(r0.value == 0);
    CHECK(covers(r0.witness, unit_cube(0)));
    // eps at least the max weighted extent: one box suffices
    WeightedCube small;
    small.weights = {Rational(1, 4), Rational(1, 8)};
    WidimResult rs = widim_greedy(small, Rational(1, 2));
    CHECK(rs.value == 0);
    CHECK(rs.witness.boxes.size() == 1);
}

TEST_CASE("widim_exact against the brute-force oracle") {
    // 1-cube, eps = 1/2: subset enumeration over covers of at most 4 boxes
    WidimResult r1 = widim_exact(unit_cube(1), Rational(1, 2), 3);
    CHECK(r1.value == 1);
    CHECK(r1.kind == WidimKind::exact);
    CHECK(covers(r1.witness, unit_cube(1)));
    CHECK(mesh(r1.witness, unit_cube(1)) <= Rational(1, 2));
    CHECK(order(r1.witness) == r1.value);
    CHECK(oracle::min_order_by_subset_enumeration(unit_cube(1), Rational(1, 2), 3, 4) == 1);

    // degenerate: eps covers the whole cube
    WidimResult r0 = widim_exact(unit_cube(1), Rational(1), 3);
    CHECK(r0.value == 0);

    // dimension guard
    CHECK_THROWS(widim_exact(unit_cube(4), Rational(1, 2), 3, 3));
}

TEST_CASE("widim_exact never exceeds widim_greedy") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> wexp(0, 2);
    for (int trial = 0; trial < 6; ++trial) {
        WeightedCube c;
        std::size_t dim = 1 + static_cast<std::size_t>(trial % 2);
        for (std::size_t i = 0; i < dim; ++i) c.weights.push_back(pow2(-wexp(rng)));
        Rational eps(1, 2);
        WidimResult ex = widim_exact(c, eps, 2);
        WidimResult gr = widim_greedy(c, eps);
        CHECK(ex.value <= gr.value);
        CHECK(covers(ex.witness, c));
        CHECK(order(ex.witness) == ex.value);
    }
}

TEST_CASE("phi properties") {
    Rational eps(1, 2);
    // monotone under window inclusion
    int p1 = phi(FiniteWindow::interval(0, 3), eps, 1, mc, WidimMode::greedy);
    int p2 = phi(FiniteWindow::interval(0, 7), eps, 1, mc, WidimMode::greedy);
    CHECK(p1 <= p2);
    // translation invariance is exact
    FiniteWindow f{0, 2, 5};
    CHECK(phi(f, eps, 1, mc, WidimMode::greedy) ==
          phi(f.translated(5), eps, 1, mc, WidimMode::greedy));
    // subadditivity on random window pairs
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> val(-10, 10);
    std::uniform_int_distribution<int> len(1, 5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<long> v1, v2;
        for (int i = 0; i < len(rng); ++i) v1.push_back(val(rng));
        for (int i = 0; i < len(rng); ++i) v2.push_back(val(rng));
        FiniteWindow f1(std::move(v1)), f2(std::move(v2));
        CHECK(phi(f1.united(f2), eps, 1, mc, WidimMode::greedy) <=
              phi(f1, eps, 1, mc, WidimMode::greedy) + phi(f2, eps, 1, mc, WidimMode::greedy));
    }
    // exact mode agrees with itself under translation; eps = 3/4 keeps the
    // reduced cube one-dimensional so the exact search stays cheap
    int e1 = phi(FiniteWindow{4}, Rational(3, 4), 1, mc, WidimMode::exact);
    CHECK(e1 == 1);
    CHECK(e1 == phi(FiniteWindow{-3}, Rational(3, 4), 1, mc, WidimMode::exact));
}

TEST_CASE("mdim_curve for the cube extension") {
    auto curve = mdim_curve(Rational(1, 2), 1, mc, 32);
    for (const auto& s : curve) {
        CHECK(s.normalized == Rational(s.n + 2, s.n));
        CHECK(s.normalized >= 1);
        CHECK(s.normalized <= 1 + Rational(2, s.n));  // k + 2k*ceil(log2(1/eps))/n
    }
    CHECK(curve[7].normalized == Rational(10, 8));
    CHECK(curve[31].normalized == Rational(34, 32));
}
