#include "cubic/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cubic/errors.hpp"

namespace cubic {

namespace {

constexpr double kPi = std::numbers::pi;

// Truncation point where x (cosh W - 1) - r W exceeds 46 (e^-46 ~ 1e-20).
double truncation(double x, double r) {
    double W = std::acosh(1 + 46 / x);
    while (x * (std::cosh(W) - 1) - r * W < 46) W += 0.25;
    return W;
}

template <class T, class F>
T trapezoid(F f, double W) {
    int n = 16;
    double h = W / n;
    T sum = f(0.0) * 0.5;
    double asum = std::abs(f(0.0)) * 0.5;
    for (int k = 1; k <= n; ++k) {
        const T v = f(k * h);
        sum += v;
        asum += std::abs(v);
    }
    T prev = sum * h;
    for (int level = 1; level <= 16; ++level) {
        h *= 0.5;
        for (int k = 1; k < 2 * n; k += 2) {
            const T v = f(k * h);
            sum += v;
            asum += std::abs(v);
        }
        n *= 2;
        const T cur = sum * h;
        if (level >= 2 && std::abs(cur - prev) <= 4e-15 * asum * h) return cur;
        prev = cur;
    }
    return prev;
}

// e^{-x (cosh w - 1)}; K carries the factor e^{-x} outside the quadrature so
// the exponent stays O(1) near the peak.
double scaled_kernel(double x, double w) {
    const double s = std::sinh(0.5 * w);
    return std::exp(-2 * x * s * s);
}

}  // namespace

BesselValue bessel_k_imag(double mu, double x) {
    if (!(x > 0) || !std::isfinite(x) || !std::isfinite(mu) || std::abs(mu) > 100)
        throw DomainError("bessel_k_imag: need x > 0 and |mu| <= 100");
    if (x > 700) return {0.0, true};
    const double W = truncation(x, 0);
    const double v = trapezoid<double>([&](double w) { return scaled_kernel(x, w) * std::cos(mu * w); }, W);
    return {v * std::exp(-x), false};
}

cplx bessel_k(cplx nu, double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("bessel_k: need x > 0");
    if (x > 700) return 0.0;
    const double W = truncation(x, std::abs(nu.real()));
    return std::exp(-x) * trapezoid<cplx>([&](double w) { return scaled_kernel(x, w) * std::cosh(nu * w); }, W);
}

double bessel_k_abs_bound(double re_nu, double x) {
    if (x > 700) return 0.0;
    const double r = std::abs(re_nu);
    const double W = truncation(x, r);
    return std::exp(-x) * trapezoid<double>([&](double w) { return scaled_kernel(x, w) * std::cosh(r * w); }, W);
}

cplx log_gamma(cplx z) {
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    cplx shift = 0;
    while (std::abs(z) < 15 || z.real() < 15) {
        shift += std::log(z);
        z += 1.0;
    }
    static constexpr std::array<double, 8> B{1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                             5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510};
    cplx series = 0;
    const cplx z2 = z * z;
    cplx zp = z;
    for (int k = 1; k <= 8; ++k) {
        series += B[k - 1] / (2.0 * k * (2 * k - 1)) / zp;
        zp *= z2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * kPi) + series - shift;
}

cplx zeta(cplx s) {
    if (s == cplx(1, 0)) throw DomainError("zeta: pole at 1");
    // Euler-Maclaurin with 20 correction terms.
    static const std::array<double, 21> coef = [] {
        std::array<double, 21> c{};
        for (int k = 1; k <= 20; ++k)  // B_2k / (2k)!
            c[k] = (k % 2 ? 2.0 : -2.0) * std::riemann_zeta(2.0 * k) / std::pow(2 * kPi, 2.0 * k);
        return c;
    }();
    const int N = 20 + int(std::abs(s));
    cplx sum = 0;
    for (int n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(double(n)));
    const double lN = std::log(double(N));
    const cplx Ns = std::exp(-s * lN);
    sum += Ns * double(N) / (s - 1.0) + 0.5 * Ns;
    // term_k = B_2k/(2k)! s (s+1) ... (s+2k-2) N^(-s-2k+1)
    cplx rising = s;
    cplx power = Ns / double(N);
    for (int k = 1; k <= 20; ++k) {
        sum += coef[k] * rising * power;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        power /= double(N) * double(N);
    }
    return sum;
}

cplx xi_unreflected(cplx z) {
    if (!(z.real() > 0)) throw DomainError("xi_unreflected: need Re z > 0");
    if (std::abs(z - 1.0) < 1e-14) throw DomainError("xi: pole at 1");
    return std::exp(-0.5 * z * std::log(kPi) + log_gamma(0.5 * z)) * zeta(z);
}

cplx xi(cplx z) {
    if (std::abs(z) < 1e-14 || std::abs(z - 1.0) < 1e-14) throw DomainError("xi: poles at 0 and 1");
    if (std::abs(z.imag()) > 200) throw DomainError("xi: |Im z| must be at most 200");
    if (z.real() < 0.5) return xi_unreflected(1.0 - z);
    return xi_unreflected(z);
}

}  // namespace cubic
