#include <random>

#include "doctest.h"
#include "meandim/embedding.hpp"

using namespace meandim;

namespace {

const MetricConfig mc;

OdometerPoint pt(long v) { return OdometerPoint::from_rational(Rational(v)); }

ProductPoint product_point(long yv, int k = 1) {
    return ProductPoint{pt(yv), CubeSeqPoint(k)};
}

// the demo base map: three outputs reading u_0, psi(y), and a neighbor blend
BaseMap demo_base_map() {
    BaseMap f0;
    f0.m = 3;
    f0.features = feature_basis(1, 1);  // psi, u_-1, u_0, u_1
    f0.offsets = {Rational(1, 4), Rational(1, 4), Rational(1, 4)};
    f0.coeffs = {
        {Rational(0), Rational(0), Rational(1, 2), Rational(0)},
        {Rational(1, 2), Rational(0), Rational(0), Rational(0)},
        {Rational(0), Rational(1, 4), Rational(0), Rational(1, 4)},
    };
    return f0;
}

}  // namespace

TEST_CASE("cantor_code values and separation") {
    CHECK(cantor_code(OdometerPoint::zero()) == 0);
    CHECK(cantor_code(OdometerPoint::from_rational(Rational(-1))) == 1);  // all ones
    CHECK(cantor_code(pt(1)) == Rational(2, 3));
    CHECK(cantor_code(pt(2)) == Rational(2, 9));
    // 1/3 = (1,0,1,0,...) reading lsb-first 2-adically: digits of -1/3... use
    // explicit digit words instead
    CHECK(cantor_code(OdometerPoint("", "10")) == Rational(2, 3) * Rational(9, 8));

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> num(-500, 500);
    for (int trial = 0; trial < 40; ++trial) {
        long b1 = 2 * std::uniform_int_distribution<long>(0, 60)(rng) + 1;
        long b2 = 2 * std::uniform_int_distribution<long>(0, 60)(rng) + 1;
        OdometerPoint y1 = OdometerPoint::from_rational(Rational(num(rng), b1));
        OdometerPoint y2 = OdometerPoint::from_rational(Rational(num(rng), b2));
        if (y1 == y2) continue;
        std::size_t n = first_differing_digit(y1, y2);
        Rational diff = cantor_code(y1) - cantor_code(y2);
        if (diff < 0) diff = -diff;
        CHECK(diff >= Rational(1, pow3(n + 1)));   // separation
        CHECK(diff <= dist_Y(y1, y2));             // 1-Lipschitz
    }
}

TEST_CASE("base map evaluation, clamping and modulus") {
    BaseMap f0 = demo_base_map();
    ProductPoint x = product_point(0);
    x.u.set_entry(0, {Rational(1, 2)});
    auto v = f0.evaluate(x);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == Rational(1, 2));   // 1/4 + (1/2)(1/2)
    CHECK(v[1] == Rational(1, 4));   // psi(0) = 0
    CHECK(v[2] == Rational(1, 4));
    // modulus: max over outputs of lip-weighted coefficient sums; output 2
    // reads u_{+-1} whose Lipschitz constant is 2
    CHECK(f0.modulus() == 1);

    BaseMap clamped = f0;
    clamped.offsets = {Rational(2), Rational(-1), Rational(1, 4)};
    auto w = clamped.evaluate(x);
    CHECK(w[0] == 1);
    CHECK(w[1] == 0);

    BaseMap constant;
    constant.m = 1;
    constant.offsets = {Rational(1, 3)};
    constant.coeffs = {{}};
    CHECK(constant.modulus() == 0);
    CHECK(constant.evaluate(x) == std::vector<Rational>{Rational(1, 3)});
}

TEST_CASE("calibrate_epsilon") {
    BaseMap constant;
    constant.m = 1;
    constant.offsets = {Rational(1, 2)};
    constant.coeffs = {{}};
    CHECK(calibrate_epsilon(constant, Rational(1), Rational(1, 8)) == 1);

    BaseMap f;
    f.m = 1;
    f.features = {Feature{Feature::Kind::cube, 2, 0}};  // lipschitz 4
    f.offsets = {Rational(0)};
    f.coeffs = {{Rational(1)}};
    REQUIRE(f.modulus() == 4);
    CHECK(calibrate_epsilon(f, Rational(1), Rational(1, 4)) == Rational(1, 16));
    CHECK(calibrate_epsilon(f, Rational(1, 32), Rational(1, 4)) == Rational(1, 32));
    // non-dyadic bound rounds down to a power of two
    CHECK(calibrate_epsilon(f, Rational(1), Rational(3, 4)) == Rational(1, 8));  // 3/16 -> 1/8
    CHECK_THROWS(calibrate_epsilon(f, Rational(0), Rational(1)));
}

TEST_CASE("block map F0 along a shape") {
    BaseMap f0 = demo_base_map();
    FiniteWindow s = FiniteWindow::interval(0, 3);
    TowerBlockMap F0 = block_map_F0(f0, s);
    ProductPoint z = product_point(0);
    z.u.set_entry(2, {Rational(1)});
    auto block = F0.evaluate(z);
    REQUIRE(block.size() == 4);
    // level 2 sees u_0 = 1
    CHECK(block[2][0] == Rational(3, 4));
    CHECK(block[0][0] == Rational(1, 4));
    // level s output 0 equals f0 at the translate
    for (std::size_t li = 0; li < 4; ++li)
        CHECK(block[li] == f0.evaluate(act(z, s.elements()[li])));
    // S = {0} reduces to the base map itself
    TowerBlockMap single = block_map_F0(f0, FiniteWindow{0});
    CHECK(single.evaluate(z)[0] == f0.evaluate(z));
    CHECK_THROWS(block_map_F0(f0, FiniteWindow{}));
}

TEST_CASE("lifted modulus on sampled pairs") {
    BaseMap f0 = demo_base_map();
    Rational delta(1, 8);
    Rational eps = calibrate_epsilon(f0, Rational(1, 16), delta);
    FiniteWindow s = FiniteWindow::interval(0, 3);
    TowerBlockMap F0 = block_map_F0(f0, s);
    auto sample = sample_points(SampleSpec{1, 99, 16, 2, 4, Rational(1, 16)});
    for (std::size_t a = 0; a < sample.size(); ++a)
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            if (dyn_metric(sample[a], sample[b], s, mc) >= eps) continue;
            auto ba = F0.evaluate(sample[a]);
            auto bb = F0.evaluate(sample[b]);
            Rational sup = 0;
            for (std::size_t li = 0; li < ba.size(); ++li)
                for (std::size_t j = 0; j < ba[li].size(); ++j) {
                    Rational d = ba[li][j] - bb[li][j];
                    if (d < 0) d = -d;
                    sup = std::max(sup, d);
                }
            CHECK(sup < delta);
        }
}

TEST_CASE("perturb_search accepts a separating F0 with zero perturbation") {
    BaseMap f0 = demo_base_map();
    FiniteWindow s = FiniteWindow::interval(0, 3);
    TowerBlockMap F0 = block_map_F0(f0, s);
    ProductPoint z1 = product_point(0);
    ProductPoint z2 = product_point(0);
    z2.u.set_entry(0, {Rational(1, 2)});
    auto res = perturb_search(F0, Rational(1, 16), Rational(1, 8), {z1, z2}, mc, 42, 10);
    CHECK(res.tries == 1);
    CHECK(res.map.corrections.empty());
    CHECK(res.s_min == Rational(1, 4));  // output 0 differs by (1/2)(1/2)
    CHECK(res.certified_pairs == 1);
    CHECK_FALSE(res.vacuous);
}

TEST_CASE("perturb_search reports feature collisions as permanent") {
    // a base map blind to u_2, two points differing only there
    BaseMap f0;
    f0.m = 1;
    f0.features = {Feature{Feature::Kind::cube, 0, 0}};
    f0.offsets = {Rational(1, 2)};
    f0.coeffs = {{Rational(1, 4)}};
    TowerBlockMap F0 = block_map_F0(f0, FiniteWindow{0});
    ProductPoint z1 = product_point(0);
    ProductPoint z2 = product_point(0);
    z2.u.set_entry(2, {Rational(1)});  // dist 1/4 >= eps, feature invisible
    CHECK_THROWS_AS(perturb_search(F0, Rational(1, 8), Rational(1, 8), {z1, z2}, mc, 1, 50),
                    PerturbFailure);
    try {
        perturb_search(F0, Rational(1, 8), Rational(1, 8), {z1, z2}, mc, 1, 50);
    } catch (const PerturbFailure& e) {
        REQUIRE(e.violating_pairs.size() == 1);
        CHECK(e.violating_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    }
}

TEST_CASE("perturb_search separates a collision that differs in a feature") {
    // base map with zero coefficient on u_0: F0 collides, but a perturbation
    // reading u_0 separates
    BaseMap f0;
    f0.m = 1;
    f0.features = feature_basis(1, 0);  // psi, u_0
    f0.offsets = {Rational(1, 2)};
    f0.coeffs = {{Rational(0), Rational(0)}};
    TowerBlockMap F0 = block_map_F0(f0, FiniteWindow{0});
    ProductPoint z1 = product_point(0);
    ProductPoint z2 = product_point(0);
    z2.u.set_entry(0, {Rational(3, 4)});
    auto res = perturb_search(F0, Rational(1, 8), Rational(1, 8), {z1, z2}, mc, 42, 10);
    CHECK(res.tries > 1);
    CHECK(res.tries <= 10);
    CHECK(res.s_min > 0);
    CHECK_FALSE(res.map.corrections.empty());
    // determinism: same seed, same result
    auto res2 = perturb_search(F0, Rational(1, 8), Rational(1, 8), {z1, z2}, mc, 42, 10);
    CHECK(res2.tries == res.tries);
    CHECK(res2.s_min == res.s_min);
    // corrections stay within the sup-norm budget on any point
    ProductPoint probe = product_point(3);
    probe.u.set_entry(0, {Rational(1)});
    auto pert = res.map.evaluate(probe);
    auto unpert = F0.evaluate(probe);
    Rational d = pert[0][0] - unpert[0][0];
    if (d < 0) d = -d;
    CHECK(d < Rational(1, 8));
}

TEST_CASE("glue and the gluing identity") {
    BaseMap f0 = demo_base_map();
    Castle c = pullback(odometer_castle(2));
    TowerBlockMap F0 = block_map_F0(f0, c.towers[0].shape);
    GluedMap f = glue(c, {F0});
    // identity f(act(z, s)) = F_0(z)(s) for z in the base
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        ProductPoint z = product_point(4 * std::uniform_int_distribution<long>(-30, 30)(rng));
        z.u.set_entry(std::uniform_int_distribution<long>(-2, 2)(rng),
                      {Rational(std::uniform_int_distribution<long>(0, 16)(rng), 16)});
        auto block = F0.evaluate(z);
        for (std::size_t li = 0; li < c.towers[0].shape.size(); ++li)
            CHECK(f.evaluate(act(z, c.towers[0].shape.elements()[li])) == block[li]);
    }
    // |glued - f0| < delta with zero perturbation: they agree exactly
    ProductPoint x = product_point(7);
    CHECK(f.evaluate(x) == f0.evaluate(x));
    CHECK_THROWS(glue(c, {}));
}

TEST_CASE("trajectory blocks are equivariant") {
    BaseMap f0 = demo_base_map();
    Castle c = pullback(odometer_castle(2));
    GluedMap f = glue(c, {block_map_F0(f0, c.towers[0].shape)});
    PointMap eval = [&f](const ProductPoint& p) { return f.evaluate(p); };
    ProductPoint x = product_point(5);
    x.u.set_entry(1, {Rational(2, 5)});
    FiniteWindow w = FiniteWindow::interval(-4, 4);
    for (long h : {-3L, 3L})
        CHECK(trajectory_block(eval, act(x, h), w) == trajectory_block(eval, x, w.translated(h)));
    // constant map gives a constant tuple; W={0} gives (f(x))
    PointMap constant = [](const ProductPoint&) {
        return std::vector<Rational>{Rational(1, 2)};
    };
    auto tb = trajectory_block(constant, x, w);
    for (const auto& e : tb) CHECK(e == std::vector<Rational>{Rational(1, 2)});
    CHECK(trajectory_block(eval, x, FiniteWindow{0}) ==
          std::vector<std::vector<Rational>>{f.evaluate(x)});
}

TEST_CASE("verify_eta_embedding on small samples") {
    BaseMap f0 = demo_base_map();
    Castle c = pullback(odometer_castle(2));
    GluedMap f = glue(c, {block_map_F0(f0, c.towers[0].shape)});
    FiniteWindow w = FiniteWindow::interval(-4, 4);
    Rational eta(1, 16);

    // single point: vacuous
    auto cert = verify_eta_embedding(f, {product_point(0)}, eta, w, mc);
    CHECK(cert.global_certified);
    CHECK(cert.margin_infinite);
    CHECK(cert.checked_pairs == 0);

    // same-fiber separated pair with visible difference
    ProductPoint x1 = product_point(0);
    ProductPoint x2 = product_point(0);
    x2.u.set_entry(0, {Rational(1, 2)});
    auto cert2 = verify_eta_embedding(f, {x1, x2}, eta, w, mc);
    CHECK(cert2.global_certified);
    CHECK(cert2.checked_pairs == 1);
    CHECK_FALSE(cert2.margin_infinite);
    CHECK(cert2.violating_pairs == 0);

    // constant map separates nothing
    BaseMap constant;
    constant.m = 3;
    constant.offsets = {Rational(1, 2), Rational(1, 2), Rational(1, 2)};
    constant.coeffs = {{}, {}, {}};
    GluedMap fc = glue(c, {block_map_F0(constant, c.towers[0].shape)});
    auto cert3 = verify_eta_embedding(fc, {x1, x2}, eta, w, mc);
    CHECK_FALSE(cert3.global_certified);
    CHECK(cert3.violating_pairs == 1);
    CHECK_FALSE(cert3.per_tower_certified);

    // the window must contain shape differences
    CHECK_THROWS(verify_eta_embedding(f, {x1}, eta, FiniteWindow{0}, mc));
}

TEST_CASE("separation margin arithmetic") {
    BaseMap f0 = demo_base_map();
    Castle c = pullback(odometer_castle(2));
    GluedMap f = glue(c, {block_map_F0(f0, c.towers[0].shape)});
    FiniteWindow w = FiniteWindow::interval(-4, 4);
    Rational eta(1, 16);

    auto none = separation_margin(f, {product_point(0)}, eta, mc, w);
    CHECK(none.infinite);

    ProductPoint x1 = product_point(0);
    ProductPoint x2 = product_point(0);
    x2.u.set_entry(0, {Rational(1, 2)});
    auto m = separation_margin(f, {x1, x2}, eta, mc, w);
    CHECK_FALSE(m.infinite);
    CHECK(m.tail == 1 - mc.trajectory_weight_sum(w));
    CHECK(m.value >= 0);
    // the difference is visible at several window terms, so the truncated sum
    // clears twice the tail
    CHECK(m.value > 0);
}

TEST_CASE("interleave_phi") {
    CHECK(interleave_phi(Rational(0), 1, 2) == 0);
    CHECK(interleave_phi(Rational(1), 4, 4) == Rational(7, 8));
    // ell = 2: symbol ranges [0,1/4] and [1/2,3/4]
    CHECK(interleave_phi(Rational(1), 1, 2) == Rational(1, 4));
    CHECK(interleave_phi(Rational(0), 2, 2) == Rational(1, 2));
    CHECK(interleave_phi(Rational(1), 2, 2) == Rational(3, 4));
    CHECK_THROWS(interleave_phi(Rational(0), 0, 2));
    CHECK_THROWS(interleave_phi(Rational(0), 3, 2));
    CHECK_THROWS(interleave_phi(Rational(2), 1, 2));
}

TEST_CASE("compose_final on both routes") {
    BaseMap f0 = demo_base_map();
    Castle c = pullback(odometer_castle(2));
    GluedMap f = glue(c, {block_map_F0(f0, c.towers[0].shape)});
    ProductPoint x = product_point(3);
    x.u.set_entry(0, {Rational(1, 3)});

    // m+1 route at W={0}: (f(x), psi(y))
    auto b = compose_final(f, x, FiniteWindow{0});
    REQUIRE(b.size() == 1);
    REQUIRE(b[0].size() == 4);
    auto fx = f.evaluate(x);
    for (int j = 0; j < 3; ++j) CHECK(b[0][static_cast<std::size_t>(j)] == fx[static_cast<std::size_t>(j)]);
    CHECK(b[0][3] == cantor_code(x.y));

    // symbol route with ell=2 coding by the parity digit
    SymbolCoding parity = [](const OdometerPoint& y) { return y.digit(0) + 1; };
    auto bc = compose_final(f, x, FiniteWindow{0}, parity, 2);
    REQUIRE(bc[0].size() == 3);
    CHECK(bc[0][2] == interleave_phi(fx[2], x.y.digit(0) + 1, 2));

    // equivariance of the composed block
    FiniteWindow w = FiniteWindow::interval(-2, 2);
    CHECK(compose_final(f, act(x, 3), w) == compose_final(f, x, w.translated(3)));
    CHECK(compose_final(f, act(x, -2), w, parity, 2) ==
          compose_final(f, x, w.translated(-2), parity, 2));
}
