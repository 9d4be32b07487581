#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cubic/errors.hpp"
#include "cubic/special.hpp"

using namespace cubic;

namespace {
constexpr double pi = std::numbers::pi;
}

// Reference values: mpmath besselk / zeta at 30 digits.
TEST_CASE("K of imaginary order") {
    CHECK(bessel_k_imag(0, 1).value == doctest::Approx(0.42102443824070833334).epsilon(1e-13));
    CHECK(bessel_k_imag(9.53369, 1).value == doctest::Approx(1.2779694992413791876e-7).epsilon(1e-10));
    CHECK(bessel_k_imag(9.53369, 5).value == doctest::Approx(-2.7507306897187332212e-7).epsilon(1e-10));
    CHECK(bessel_k_imag(9.53369, 0.3).value == doctest::Approx(-1.4103741153105554832e-7).epsilon(1e-9));
    CHECK(bessel_k_imag(13.77975, 2).value == doctest::Approx(-2.5429141489176297064e-10).epsilon(1e-9));
    CHECK(bessel_k_imag(50, 30).value == doctest::Approx(-9.3846345032937527385e-38).epsilon(1e-8));
    CHECK(bessel_k_imag(2, 100).value == doctest::Approx(4.5648694553415863728e-45).epsilon(1e-11));
    CHECK(bessel_k_imag(1, 800).underflow);
    CHECK_THROWS_AS(bessel_k_imag(1, -1), DomainError);
}

TEST_CASE("K of complex order") {
    const cplx k = bessel_k(cplx(0.5, 1), 2);
    CHECK(k.real() == doctest::Approx(0.095437182404267288814).epsilon(1e-11));
    CHECK(k.imag() == doctest::Approx(0.020366259191183347487).epsilon(1e-10));
    for (double x : {0.1, 1.0, 10.0, 50.0}) {
        const double closed = std::sqrt(pi / (2 * x)) * std::exp(-x);
        CHECK(std::abs(bessel_k(0.5, x) - closed) <= 1e-12 * closed);
        CHECK(bessel_k_abs_bound(0.5, x) >= closed * (1 - 1e-12));
    }
}

TEST_CASE("zeta and xi") {
    CHECK(zeta(3).real() == doctest::Approx(1.2020569031595942854).epsilon(1e-14));
    const cplx z = zeta(cplx(0.3, 2));
    CHECK(z.real() == doctest::Approx(0.3853103509076438974).epsilon(1e-11));
    CHECK(z.imag() == doctest::Approx(-0.28252821168648398714).epsilon(1e-11));
    CHECK(std::abs(zeta(cplx(0.5, 14.134725141734693790))) < 1e-9);
    CHECK(xi(2).real() == doctest::Approx(pi / 6).epsilon(1e-14));
    CHECK(xi(3).real() == doctest::Approx(1.2020569031595942854 / (2 * pi)).epsilon(1e-14));
    const cplx x1 = xi(cplx(0.3, 2)), x2 = xi(cplx(4, 1));
    CHECK(x1.real() == doctest::Approx(-0.20717261339322476216).epsilon(1e-11));
    CHECK(x1.imag() == doctest::Approx(0.043375669082548639749).epsilon(1e-11));
    CHECK(x2.real() == doctest::Approx(0.090648867988731420813).epsilon(1e-12));
    CHECK(x2.imag() == doctest::Approx(-0.039163492755996867361).epsilon(1e-12));
    CHECK_THROWS_AS(xi(1), DomainError);
    CHECK_THROWS_AS(xi(0), DomainError);
}

TEST_CASE("xi functional equation") {
    for (double re : {0.1, 0.35, 0.6, 0.85})
        for (double im : {0.5, 3.0, 17.0, 40.0}) {
            const cplx s(re, im);
            CHECK(std::abs(xi_unreflected(s) - xi_unreflected(1.0 - s)) <= 1e-10 * std::abs(xi_unreflected(s)));
        }
}

TEST_CASE("log gamma") {
    CHECK(log_gamma(5).real() == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(log_gamma(0.5).real() == doctest::Approx(0.5 * std::log(pi)).epsilon(1e-14));
}
