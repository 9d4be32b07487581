#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cubic/errors.hpp"
#include "cubic/lseries.hpp"
#include "cubic/reduction.hpp"

using namespace cubic;

namespace {

const std::vector<ClassRecord>& records() {
    static const auto r = enumerate_classes(5000, false);
    return r;
}

std::vector<cplx> ones(std::size_t n) { return std::vector<cplx>(n, cplx(1, 0)); }

MaassFormData delta_one(std::size_t n) {
    MaassFormData d;
    d.t_phi = 9.5;
    d.coeffs.assign(n, 0.0);
    d.coeffs[0] = 1;
    return d;
}

}  // namespace

TEST_CASE("smooth cutoff") {
    const SmoothCutoff psi;
    CHECK(psi(0.4) == 0);
    CHECK(psi(0.5) == 0);
    CHECK(psi(0.8) == 1);
    CHECK(psi(1.0) == 1);
    CHECK(psi(1.25) == 0);
    CHECK(psi(0.625) == doctest::Approx(0.5));
    CHECK(psi(1.125) == doctest::Approx(0.5));
    for (double r = 0.5; r < 0.75; r += 0.01) CHECK(psi(r + 0.01) >= psi(r));
    CHECK_THROWS_AS(SmoothCutoff(1, 0.5, 2, 3), DomainError);
}

TEST_CASE("pairwise sum is order-fixed and accurate") {
    std::vector<double> v(1000);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    long double ref = 0;
    for (auto& x : v) {
        x = u(rng);
        ref += x;
    }
    CHECK(std::abs(pairwise_sum(v) - double(ref)) < 1e-13);
    CHECK(pairwise_sum(std::span<const double>{}) == 0);
}

TEST_CASE("a_phi for the constant function is the weighted class number") {
    const auto& recs = records();
    const auto cn = class_numbers(recs);
    const TwistedCoefficients a(recs, ones(recs.size()), 5000);
    for (const auto& [m, c] : cn) CHECK(a(m).real() == doctest::Approx(c.weighted).epsilon(1e-14));
    CHECK(a(1).real() == doctest::Approx(1.0 / 3));
    CHECK(a_phi(1, recs, ones(recs.size())).real() == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(a(5001), ShortfallError);
}

TEST_CASE("a_phi does not depend on the stored representative") {
    const auto sub = enumerate_classes(800, false);
    const auto phi = TestFunction::eisenstein(cplx(0, 2), false);
    const auto base = phi_values(sub, phi);
    std::mt19937_64 rng(3);
    const UnimodularMatrix gens[3] = {UnimodularMatrix::T(), UnimodularMatrix::T(-1), UnimodularMatrix::S()};
    std::uniform_int_distribution<int> pick(0, 2);
    auto moved = sub;
    for (auto& r : moved) {
        UnimodularMatrix g;
        for (int j = 0; j < 7; ++j) g = g * gens[pick(rng)];
        r.rep = act(g, r.rep);
    }
    const auto other = phi_values(moved, phi);
    const TwistedCoefficients a(sub, base.averaged, 800), b(moved, other.averaged, 800);
    for (std::int64_t m = -800; m <= 800; ++m)
        if (m != 0) CHECK(std::abs(a(m) - b(m)) < 1e-8);
}

TEST_CASE("weyl sum two routes") {
    const auto& recs = records();
    const TwistedCoefficients a(recs, ones(recs.size()), 5000);
    const SmoothCutoff psi;
    const auto cn = class_numbers(recs);
    for (int sign : {1, -1}) {
        long double direct = 0;
        for (const auto& [m, c] : cn)
            if ((m > 0) == (sign > 0)) direct += psi(std::abs(double(m)) / 4000.0) * c.weighted;
        const cplx s = weyl_sum(4000, a, psi, sign);
        CHECK(s.real() == doctest::Approx(double(direct)).epsilon(1e-10));
        CHECK(s.imag() == 0);
    }
    CHECK_THROWS_AS(weyl_sum(4001, a, psi, 1), ShortfallError);
}

TEST_CASE("wider plateau does not decrease the count") {
    const auto& recs = records();
    const TwistedCoefficients a(recs, ones(recs.size()), 5000);
    const double narrow = weyl_sum(3000, a, SmoothCutoff(0.5, 0.75, 1.0, 1.25), 1).real();
    const double wide = weyl_sum(3000, a, SmoothCutoff(0.5, 0.6, 1.1, 1.25), 1).real();
    CHECK(wide >= narrow);
}

TEST_CASE("Eisenstein Weyl sum is smaller than the count") {
    const auto& recs = records();
    const auto vals = phi_values(recs, TestFunction::eisenstein(cplx(0, 2), false));
    const TwistedCoefficients a(recs, vals.averaged, 5000), c(recs, ones(recs.size()), 5000);
    for (int sign : {1, -1}) CHECK(std::abs(weyl_sum(1000, a, {}, sign)) < weyl_sum(1000, c, {}, sign).real());
}

TEST_CASE("partial L against an independent sum") {
    const auto& recs = records();
    const TwistedCoefficients a(recs, ones(recs.size()), 5000);
    const auto cn = class_numbers(recs);
    long double direct = 0;
    for (const auto& [m, c] : cn)
        if (m > 0 && m <= 4000) direct += c.weighted / std::pow((long double)m, 5.0L);
    const auto r = partial_L(5, 4000, a, 1);
    CHECK(r.value.real() == doctest::Approx(double(direct)).epsilon(1e-13));
    CHECK(r.certified);
    CHECK_FALSE(partial_L(cplx(3, 1), 100, a, 1).certified);
    double prev = 1e300;
    for (std::int64_t M : {250, 500, 1000, 2000, 4000}) {
        const auto p = partial_L(5, M, a, -1);
        const double diff = std::abs(p.value - p.half_value);
        CHECK(diff <= prev);
        prev = diff;
    }
}

TEST_CASE("streaming and enumerate-then-sum agree") {
    const auto phi = TestFunction::eisenstein(cplx(2, 0), true);
    const auto& recs = records();
    std::vector<ClassRecord> sub;
    for (const auto& r : recs)
        if (std::abs(r.disc) <= 3000) sub.push_back(r);
    const auto vals = phi_values(sub, phi);
    const TwistedCoefficients a(sub, vals.averaged, 3000);
    for (int sign : {1, -1}) {
        const auto x = partial_L(5, 3000, a, sign);
        const auto y = partial_L_streaming(5, 3000, phi, Lattice::Full, sign, AveragingMode::Averaged, {}, 700);
        CHECK(std::abs(x.value - y.value) <= 1e-10 * std::abs(x.value));
    }
}

TEST_CASE("g_phi examples") {
    const auto d = delta_one(200);
    const auto g = g_phi(1, d, 100, DualReading::Plain);
    CHECK(g.value == cplx(1, 0));
    CHECK(std::isfinite(g.tail_bound));
    CHECK(std::isinf(g_phi(0.05, d, 100, DualReading::Plain).tail_bound));
    CHECK_THROWS_AS(g_phi(1, d, 100, DualReading::B), ShortfallError);
    CHECK_THROWS_AS(g_phi(-0.3, d, 10, DualReading::Plain), DomainError);
}

TEST_CASE("g_phi doubling stays within the tail bound") {
    const auto d = synthetic_maass(1200, 7);
    for (auto reading : {DualReading::Plain, DualReading::A, DualReading::B}) {
        const auto g1 = g_phi(1, d, 200, reading), g2 = g_phi(1, d, 400, reading);
        CHECK(std::abs(g1.value - g2.value) <= g1.tail_bound);
        CHECK(g1.value.imag() == 0);
    }
}

TEST_CASE("g_phi is linear in the table") {
    const auto a = synthetic_maass(300, 1), b = synthetic_maass(300, 2);
    MaassFormData c = a;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) c.coeffs[i] = 2 * a.coeffs[i] - 0.5 * b.coeffs[i];
    const cplx x(0.7, 1.3);
    const cplx lhs = g_phi(x, c, 300, DualReading::A).value;
    const cplx rhs = 2.0 * g_phi(x, a, 300, DualReading::A).value - 0.5 * g_phi(x, b, 300, DualReading::A).value;
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("weyl table output") {
    const auto& recs = records();
    const auto phi = TestFunction::eisenstein(cplx(0, 2), false);
    const auto vals = phi_values(recs, phi);
    const auto t = weyl_table({1000, 2000}, recs, 5000, vals, phi, {}, Lattice::Full, AveragingMode::Raw);
    REQUIRE(t.rows.size() == 2);
    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str().find("X,S_plus,S_minus,N_plus,N_minus\n") != std::string::npos);
    CHECK(os.str().find("# data_hash=" + data_hash(recs)) != std::string::npos);
    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j["metadata"]["mode"] == "raw");
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["S_plus"].size() == 2);
    CHECK(data_hash(recs).size() == 40);
    CHECK_THROWS_AS(weyl_table({5000}, recs, 5000, vals, phi, {}, Lattice::Full, AveragingMode::Raw), ShortfallError);
}

TEST_CASE("data hash is the git blob id") {
    // git hash-object of "disc,a,b,c,d,stab,dual,irreducible\n"
    std::ostringstream os;
    write_records_csv(os, {});
    CHECK(os.str() == "disc,a,b,c,d,stab,dual,irreducible\n");
    CHECK(data_hash({}) == "491d3b241e9521ba07f7946c2a02e48f11ce081b");
}

TEST_CASE("log-log fit") {
    const auto f = fit_loglog({10, 100, 1000}, {3, 30, 300});
    CHECK(f.slope == doctest::Approx(1));
    CHECK(f.stderr_ == doctest::Approx(0).scale(1));
}

TEST_CASE("phi values do not depend on the thread count") {
    const auto& recs = records();
    const auto phi = TestFunction::eisenstein(cplx(0, 2), false);
    const auto a = phi_values(recs, phi, 1), b = phi_values(recs, phi, 3);
    CHECK(a.raw == b.raw);
    CHECK(a.averaged == b.averaged);
}
