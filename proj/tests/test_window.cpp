#include <random>

#include "doctest.h"
#include "meandim/window.hpp"

using namespace meandim;

TEST_CASE("sum_set basics") {
    CHECK(sum_set(FiniteWindow{-1, 0, 1}, FiniteWindow::interval(0, 9)) ==
          FiniteWindow::interval(-1, 10));
    FiniteWindow f{3, 7, 11};
    CHECK(sum_set(FiniteWindow{0}, f) == f);
    CHECK(sum_set(FiniteWindow{2}, FiniteWindow{1, 3}) == FiniteWindow{3, 5});
    CHECK_THROWS(sum_set(FiniteWindow{}, f));
}

TEST_CASE("boundary basics") {
    CHECK(boundary(FiniteWindow::interval(0, 99), FiniteWindow{-1, 0, 1}) ==
          FiniteWindow{-1, 100});
    CHECK(boundary(FiniteWindow::interval(0, 99), FiniteWindow{0}).empty());
    CHECK(boundary(FiniteWindow{0, 2, 4}, FiniteWindow{1}) == FiniteWindow{1, 3, 5});
}

TEST_CASE("is_invariant exact rational comparison") {
    InvarianceParams p{FiniteWindow{-1, 0, 1}, Rational(1, 50)};
    CHECK(is_invariant(FiniteWindow::interval(0, 99), p));  // 2 <= 2, boundary case
    CHECK_FALSE(is_invariant(FiniteWindow{0}, {FiniteWindow{1}, Rational(1, 2)}));
    for (long n = 1; n <= 12; ++n) {
        FiniteWindow f = FiniteWindow::interval(0, (1L << n) - 1);
        CHECK(is_invariant(f, {FiniteWindow{-1, 0, 1}, pow2(1 - n)}));
    }
}

TEST_CASE("folner_interval") {
    CHECK(folner_interval(1) == FiniteWindow{0});
    CHECK(folner_interval(4) == FiniteWindow{0, 1, 2, 3});
    CHECK_THROWS(folner_interval(0));
    InvarianceParams p{FiniteWindow{-1, 0, 1}, Rational(1, 10)};
    for (long n = 1; n < 20; ++n) CHECK_FALSE(is_invariant(folner_interval(n), p));
    for (long n = 20; n < 40; ++n) CHECK(is_invariant(folner_interval(n), p));
}

TEST_CASE("window properties on random data") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> val(-30, 30);
    std::uniform_int_distribution<int> len(1, 8);
    auto random_window = [&]() {
        std::vector<long> v;
        int n = len(rng);
        for (int i = 0; i < n; ++i) v.push_back(val(rng));
        return FiniteWindow(std::move(v));
    };
    for (int trial = 0; trial < 10; ++trial) {
        FiniteWindow k = random_window();
        FiniteWindow f = random_window();
        CHECK(boundary(f, FiniteWindow{0}).empty());
        auto kf = sum_set(k, f);
        CHECK(kf.size() <= k.size() * f.size());
        CHECK(kf.size() >= std::max(k.size(), f.size()));
        // translation invariance of the invariance predicate
        InvarianceParams p{k, Rational(len(rng), 7)};
        long g = val(rng);
        CHECK(is_invariant(f, p) == is_invariant(f.translated(g), p));
        // intervals: |boundary| constant while |F| grows, so eventually invariant
        InvarianceParams q{k, Rational(1, 5)};
        long spread = k.max() - k.min();
        bool seen_true = false;
        for (long n = 1; n <= 10 * (spread + 1) + 10; ++n)
            if (is_invariant(folner_interval(n), q)) seen_true = true;
        CHECK(seen_true);
    }
}
