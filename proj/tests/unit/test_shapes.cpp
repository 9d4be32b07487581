#include <doctest.h>

#include <cmath>
#include <random>

#include "cubic/reduction.hpp"
#include "cubic/shapes.hpp"

using namespace cubic;

namespace {

UnimodularMatrix random_gamma(std::mt19937_64& rng, int len = 10) {
    const UnimodularMatrix gens[3] = {UnimodularMatrix::T(), UnimodularMatrix::T(-1), UnimodularMatrix::S()};
    std::uniform_int_distribution<int> pick(0, 2);
    UnimodularMatrix g;
    for (int j = 0; j < len; ++j) g = g * gens[pick(rng)];
    return g;
}

void check_point(const HalfPlanePoint& p, double x, double y, double tol = 1e-12) {
    CHECK(p.x == doctest::Approx(x).epsilon(tol).scale(1));
    CHECK(p.y == doctest::Approx(y).epsilon(tol));
}

}  // namespace

TEST_CASE("iwasawa examples") {
    const auto id = iwasawa(RealMatrix2{});
    CHECK(id.theta == doctest::Approx(0));
    CHECK(id.t == doctest::Approx(1));
    CHECK(id.u == doctest::Approx(0));
    const auto a2 = iwasawa(RealMatrix2{2, 0, 0, 0.5});
    CHECK(a2.theta == doctest::Approx(0));
    CHECK(a2.t == doctest::Approx(2));
    CHECK(a2.u == doctest::Approx(0));
}

TEST_CASE("iwasawa round trip") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 10000; ++k) {
        RealMatrix2 g{u(rng), u(rng), u(rng), u(rng)};
        const double d = g.det();
        if (d < 0.05) continue;
        const double s = 1 / std::sqrt(d);
        g = {g.a11 * s, g.a12 * s, g.a21 * s, g.a22 * s};
        const auto c = iwasawa(g);
        CHECK(c.theta >= 0);
        CHECK(c.theta < 1);
        const RealMatrix2 h = from_iwasawa(c);
        CHECK(std::abs(h.a11 - g.a11) + std::abs(h.a12 - g.a12) + std::abs(h.a21 - g.a21) + std::abs(h.a22 - g.a22) <
              1e-9);
    }
}

TEST_CASE("to_halfplane examples") {
    check_point(to_halfplane(RealMatrix2{}), 0, 1);
    check_point(to_halfplane(RealMatrix2{1.5, 0, 0, 1 / 1.5}), 0, 2.25);
    const RealMatrix2 g{1.2, 0.3, -0.4, 0.9};
    const auto p = to_halfplane(g), q = to_halfplane(RealMatrix2{3 * g.a11, 3 * g.a12, 3 * g.a21, 3 * g.a22});
    check_point(q, p.x, p.y);
}

TEST_CASE("reduce_fundamental examples") {
    check_point(reduce_fundamental({0.4, 2.0}).point, 0.4, 2.0);
    check_point(reduce_fundamental({1.4, 2.0}).point, 0.4, 2.0);
    check_point(reduce_fundamental({0, 0.25}).point, 0, 4);
    // boundary identifications: x = 1/2 goes to -1/2, right arc to left arc
    check_point(reduce_fundamental({0.5, 1.2}).point, -0.5, 1.2);
    const double c = std::cos(1.2), s = std::sin(1.2);
    check_point(reduce_fundamental({c, s}).point, -c, s, 1e-9);
}

TEST_CASE("reduce_fundamental is a Gamma-invariant") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.87, 3);
    for (int k = 0; k < 2000; ++k) {
        const HalfPlanePoint z{ux(rng), uy(rng)};
        const auto r = reduce_fundamental(z);
        CHECK(is_reduced(r.point));
        const auto moved = mobius(r.gamma, z);
        CHECK(std::abs(moved.x - r.point.x) + std::abs(moved.y - r.point.y) < 1e-9);
        const auto w = reduce_fundamental(mobius(random_gamma(rng, 6), z)).point;
        CHECK(fundamental_distance(w, r.point) < 1e-8);
    }
}

TEST_CASE("shape examples") {
    const auto plus = shape({0, 1, -1, 0});
    check_point(plus.point, 0, 1);
    REQUIRE(plus.orbit.size() == 3);
    check_point(plus.orbit[0], 0, 1);
    const auto minus = shape({0, 1, 0, 1});
    check_point(minus.point, 0, 1);
    CHECK(minus.orbit.size() == 1);
    CHECK_THROWS_AS(shape({0, 0, 1, 0}), DomainError);
}

TEST_CASE("shape matrix maps the base form") {
    for (const IntegralCubicForm f : {IntegralCubicForm{1, 0, -1, -1}, IntegralCubicForm{1, -1, -2, 1},
                                      IntegralCubicForm{2, 3, -5, 7}, IntegralCubicForm{0, 3, -2, 9}}) {
        const auto r = shape(f);
        const RealCubicForm b = act(r.g, base_form(disc(f) > 0 ? 1 : -1));
        CHECK(b.a == doctest::Approx(double(f.a)).scale(1));
        CHECK(b.b == doctest::Approx(double(f.b)).scale(1));
        CHECK(b.c == doctest::Approx(double(f.c)).scale(1));
        CHECK(b.d == doctest::Approx(double(f.d)).scale(1));
    }
}

TEST_CASE("shape is a Gamma-invariant") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> c(-7, 7);
    int done = 0;
    while (done < 1000) {
        IntegralCubicForm f{c(rng), c(rng), c(rng), c(rng)};
        if (disc(f) == 0) continue;
        ++done;
        const auto a = shape(f), b = shape(act(random_gamma(rng), f));
        CHECK(fundamental_distance(a.point, b.point) < 1e-8);
    }
}

TEST_CASE("shape of the x+ class has a stabilizer orbit of three points") {
    // the class of a cyclic cubic: orbit points are reduced and distinct unless at i or rho
    const auto r = shape({1, -1, -2, 1});
    REQUIRE(r.orbit.size() == 3);
    for (const auto& p : r.orbit) CHECK(is_reduced(p));
    check_point(r.orbit[0], r.point.x, r.point.y);
}

TEST_CASE("convention self test") {
    const auto rep = convention_self_test(300, 2);
    CHECK(rep.transpose_ok);
    CHECK_FALSE(rep.other_ok);
}
