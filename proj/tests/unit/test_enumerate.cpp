#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "cubic/enumerate.hpp"
#include "cubic/reduction.hpp"

using namespace cubic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cubic_unit_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

std::int64_t gl2_irreducible(const std::vector<ClassRecord>& recs, std::int64_t d) {
    std::int64_t n = 0;
    for (const auto& r : fuse_gl2(recs))
        if (r.disc == d && r.irreducible) ++n;
    return n;
}

UnimodularMatrix random_gamma(std::mt19937_64& rng) {
    const UnimodularMatrix gens[3] = {UnimodularMatrix::T(), UnimodularMatrix::T(-1), UnimodularMatrix::S()};
    std::uniform_int_distribution<int> pick(0, 2);
    UnimodularMatrix g;
    for (int j = 0; j < 10; ++j) g = g * gens[pick(rng)];
    return g;
}

}  // namespace

TEST_CASE("reduce examples") {
    const auto r = reduce({0, 1, 0, 1});
    CHECK(act(r.gamma, IntegralCubicForm{0, 1, 0, 1}) == r.canonical);
    CHECK(reduce(r.canonical).canonical == r.canonical);
    CHECK(is_canonical(r.canonical));
    std::mt19937_64 rng(1);
    const IntegralCubicForm x{0, 1, -1, 0};
    for (int k = 0; k < 100; ++k) CHECK(reduce(act(random_gamma(rng), x)).canonical == reduce(x).canonical);
}

TEST_CASE("reduce is constant on orbits and returns a witness") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> c(-6, 6);
    for (int k = 0; k < 400; ++k) {
        IntegralCubicForm f{c(rng), c(rng), c(rng), c(rng)};
        if (disc(f) == 0) continue;
        const auto r = reduce(f);
        CHECK(act(r.gamma, f) == r.canonical);
        CHECK(disc(r.canonical) == disc(f));
        CHECK(reduce(act(random_gamma(rng), f)).canonical == r.canonical);
    }
}

TEST_CASE("stabilizer orders") {
    CHECK(stabilizer_order({0, 1, -1, 0}) == 3);
    CHECK(stabilizer_order({0, 1, 0, 1}) == 1);
    CHECK(stabilizer_order({1, 0, -1, -1}) == 1);
    CHECK(stabilizer_order({1, -1, -2, 1}) == 3);  // disc 49, cyclic cubic
    CHECK(stabilizer_order({1, 0, -3, 1}) == 3);   // disc 81
}

TEST_CASE("reduced forms lie in the bound box") {
    for (int sign : {1, -1}) {
        const BoundBox box = reduced_bound_box(500, sign);
        for (const auto& r : brute_force_classes(500, false)) {
            if ((r.disc > 0) != (sign > 0)) continue;
            const CoefficientBox& b = r.rep.a == 0 ? box.leading_zero : box.leading_nonzero;
            CHECK(std::abs(r.rep.a) <= b.a);
            CHECK(std::abs(r.rep.b) <= b.b);
            CHECK(std::abs(r.rep.c) <= b.c);
            CHECK(std::abs(r.rep.d) <= b.d);
        }
    }
}

TEST_CASE("enumeration small examples") {
    const auto one = enumerate_classes(1, false);
    REQUIRE(one.size() == 1);
    CHECK(one[0].rep == reduce({0, 1, -1, 0}).canonical);
    CHECK(one[0].stabilizer_order == 3);
    const auto four = enumerate_classes(4, false);
    CHECK(std::any_of(four.begin(), four.end(),
                      [](const ClassRecord& r) { return r.rep == reduce({0, 1, 0, 1}).canonical && r.disc == -4; }));
}

TEST_CASE("enumeration equals brute force") {
    for (bool dual : {false, true}) {
        CAPTURE(dual);
        const auto e = enumerate_classes(300, dual);
        const auto b = brute_force_classes(300, dual);
        CHECK(e == b);
    }
    const auto full = enumerate_classes(300, false);
    CHECK(full.size() == 503);
    CHECK(enumerate_classes(300, true).size() == 20);
}

TEST_CASE("enumeration record invariants") {
    const auto recs = enumerate_classes(2000, false);
    CHECK(std::is_sorted(recs.begin(), recs.end(), record_less));
    for (const auto& r : recs) {
        CHECK(disc(r.rep) == r.disc);
        CHECK(r.disc != 0);
        CHECK(is_canonical(r.rep));
        if (r.stabilizer_order == 3) CHECK(r.disc > 0);
        CHECK(r.in_dual == in_dual_lattice(r.rep));
        CHECK(r.irreducible == is_irreducible(r.rep));
    }
    for (const auto& r : enumerate_classes(2000, true)) {
        CHECK(r.rep.b % 3 == 0);
        CHECK(r.rep.c % 3 == 0);
    }
}

TEST_CASE("shards do not change the output") {
    EnumerationOptions one, eight;
    eight.shards = 8;
    eight.threads = 2;
    CHECK(enumerate_classes(3000, false, one) == enumerate_classes(3000, false, eight));
}

TEST_CASE("cubic rings of small fundamental discriminant") {
    // One cubic ring for each of these (all maximal, one field each).
    const auto recs = enumerate_classes(250, false);
    for (std::int64_t d : {-23, -31, -44, -59, 49, 81, 148, 169, 229})
        CHECK_MESSAGE(gl2_irreducible(recs, d) == 1, "disc ", d);
    CHECK(gl2_irreducible(recs, -4) == 0);
    CHECK(gl2_irreducible(recs, 1) == 0);
}

TEST_CASE("class numbers include stabilizer weights") {
    const auto cn = class_numbers(enumerate_classes(100, false));
    REQUIRE(cn.count(1));
    CHECK(cn.at(1).h == 1);
    CHECK(cn.at(1).weighted == doctest::Approx(1.0 / 3));
    CHECK(cn.at(-4).h >= 1);
    double sum_w = 0;
    std::int64_t sum_h = 0;
    for (const auto& [m, c] : cn) {
        sum_w += c.weighted;
        sum_h += c.h;
        CHECK(c.weighted <= c.h);
        CHECK(c.h_irreducible <= c.h);
    }
    CHECK(sum_h == std::int64_t(enumerate_classes(100, false).size()));
}

TEST_CASE("gl2 fusion halves or keeps") {
    const auto recs = enumerate_classes(1000, false);
    const auto fused = fuse_gl2(recs);
    CHECK(fused.size() <= recs.size());
    CHECK(2 * fused.size() >= recs.size());
    for (const auto& r : fused) CHECK(gl2_canonical(r.rep) == r.rep);
}

TEST_CASE("records csv round trip") {
    const auto recs = enumerate_classes(200, false);
    std::stringstream ss;
    ss << "# some metadata\n";
    write_records_csv(ss, recs);
    CHECK(read_records_csv(ss) == recs);
}

TEST_CASE("checkpoint resume and truncation") {
    const fs::path p = scratch("ckpt.csv");
    const auto ref = enumerate_classes(5000, false);

    auto first = enumerate_checkpointed(p.string(), 2500, false, {}, 1000);
    CHECK(first.resumed_from == 0);
    CHECK_FALSE(first.no_op);

    // torn write after the last marker
    {
        std::ofstream out(p, std::ios::app);
        out << "2501,1,2,3,4,1,0,1\n2502,1,2";
    }
    auto second = enumerate_checkpointed(p.string(), 5000, false, {}, 1000);
    CHECK(second.resumed_from == 2500);
    CHECK(second.records == ref);

    auto third = enumerate_checkpointed(p.string(), 5000, false, {}, 1000);
    CHECK(third.no_op);
    CHECK(third.records == ref);

    auto smaller = enumerate_checkpointed(p.string(), 1000, false, {}, 1000);
    CHECK(smaller.no_op);
    CHECK(smaller.records == enumerate_classes(1000, false));

    CHECK_THROWS_AS(enumerate_checkpointed(p.string(), 6000, true, {}, 1000), DomainError);
    fs::remove(p);
}

TEST_CASE("record ceiling") {
    const fs::path p = scratch("ceiling.csv");
    EnumerationOptions opt;
    opt.max_records = 100;
    try {
        enumerate_checkpointed(p.string(), 5000, false, opt, 500);
        FAIL("no ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.progress > 0);
        CHECK(e.progress < 5000);
    }
    // resuming without the ceiling completes the run
    CHECK(enumerate_checkpointed(p.string(), 5000, false, {}, 500).records == enumerate_classes(5000, false));
    fs::remove(p);
}
