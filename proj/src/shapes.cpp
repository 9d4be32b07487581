#include "cubic/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cubic/reduction.hpp"

namespace cubic {

namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

IwasawaCoords iwasawa(const RealMatrix2& g) {
    const double det = g.det();
    if (std::abs(det - 1) > 1e-10) throw DomainError("iwasawa: determinant is not 1");
    const double C = g.a12 * g.a12 + g.a22 * g.a22;
    const double B = g.a11 * g.a12 + g.a21 * g.a22;
    const double t = 1 / std::sqrt(C);
    const double u = B / C;
    // k = g (a_t n_u)^-1 with (a_t n_u)^-1 = [[1/t, 0], [-u/t, t]].
    const double k11 = g.a11 / t - g.a12 * u / t;
    const double k12 = g.a12 * t;
    double theta = std::atan2(k12, k11) / kTwoPi;
    if (theta < 0) theta += 1;
    if (theta >= 1) theta -= 1;
    return {theta, t, u};
}

RealMatrix2 from_iwasawa(const IwasawaCoords& c) {
    const double co = std::cos(kTwoPi * c.theta), si = std::sin(kTwoPi * c.theta);
    const RealMatrix2 k{co, si, -si, co};
    const RealMatrix2 a{c.t, 0, 0, 1 / c.t};
    const RealMatrix2 n{1, 0, c.u, 1};
    return k * a * n;
}

HalfPlanePoint to_halfplane(const RealMatrix2& g) {
    const double det = g.det();
    if (!(det > 0) || !std::isfinite(det)) throw DomainError("to_halfplane: determinant must be positive");
    const double C = g.a12 * g.a12 + g.a22 * g.a22;
    const double B = g.a11 * g.a12 + g.a21 * g.a22;
    return {B / C, det / C};
}

HalfPlanePoint mobius(const RealMatrix2& m, const HalfPlanePoint& z) {
    const std::complex<double> w = z.z();
    const std::complex<double> r = (m.a11 * w + m.a12) / (m.a21 * w + m.a22);
    return {r.real(), r.imag()};
}

HalfPlanePoint mobius(const UnimodularMatrix& m, const HalfPlanePoint& z) {
    // Imaginary part via y / |cz + d|^2 keeps full relative precision.
    const double c = double(m.a21()), d = double(m.a22());
    const double cx = c * z.x + d;
    const double den = cx * cx + c * c * z.y * z.y;
    const double a = double(m.a11()), b = double(m.a12());
    const double re = ((a * z.x + b) * cx + a * c * z.y * z.y) / den;
    return {re, z.y / den};
}

bool is_reduced(const HalfPlanePoint& z, double tol) {
    return z.y > 0 && std::abs(z.x) <= 0.5 + tol && z.x * z.x + z.y * z.y >= 1 - tol;
}

double fundamental_distance(const HalfPlanePoint& p, const HalfPlanePoint& q) {
    auto d = [&](double x, double y) { return std::hypot(p.x - x, p.y - y); };
    double best = d(q.x, q.y);
    best = std::min({best, d(q.x + 1, q.y), d(q.x - 1, q.y)});
    // Unit-circle arc is identified by x -> -x.
    if (std::abs(q.x * q.x + q.y * q.y - 1) < 1e-6) best = std::min(best, d(-q.x, q.y));
    return best;
}

FundamentalReduction reduce_fundamental(const HalfPlanePoint& z0) {
    if (!(z0.y > 0) || !std::isfinite(z0.x) || !std::isfinite(z0.y))
        throw DomainError("reduce_fundamental: point not in the upper half-plane");
    HalfPlanePoint z = z0;
    UnimodularMatrix g;
    for (int step = 0; step < 10000; ++step) {
        const double k = std::floor(z.x + 0.5);
        if (k != 0) {
            z.x -= k;
            g = UnimodularMatrix::T(-std::int64_t(k)) * g;
        }
        const double r2 = z.x * z.x + z.y * z.y;
        if (r2 >= 1) {
            if (r2 < 1 + 1e-14 && z.x > 0) {
                z = {-z.x / r2, z.y / r2};
                g = UnimodularMatrix::S() * g;
            }
            return {z, g};
        }
        z = {-z.x / r2, z.y / r2};
        g = UnimodularMatrix::S() * g;
    }
    throw InternalError("reduce_fundamental: step guard exceeded");
}

RealCubicForm base_form(int sign) {
    if (sign > 0) return {0, 1, -1, 0};
    const double lam = std::pow(4.0, -0.25);
    return {0, lam, 0, lam};
}

const std::array<UnimodularMatrix, 3>& base_stabilizer() {
    static const std::array<UnimodularMatrix, 3> s{UnimodularMatrix{}, UnimodularMatrix{0, 1, -1, -1},
                                                   UnimodularMatrix{-1, -1, 1, 0}};
    return s;
}

namespace {

ld eval(const IntegralCubicForm& f, ld t) { return ((ld(f.a) * t + ld(f.b)) * t + ld(f.c)) * t + ld(f.d); }
ld deriv(const IntegralCubicForm& f, ld t) { return (3 * ld(f.a) * t + 2 * ld(f.b)) * t + ld(f.c); }
cld eval(const IntegralCubicForm& f, cld t) { return ((ld(f.a) * t + ld(f.b)) * t + ld(f.c)) * t + ld(f.d); }
cld deriv(const IntegralCubicForm& f, cld t) { return (3 * ld(f.a) * t + 2 * ld(f.b)) * t + ld(f.c); }

template <class T>
T polish(const IntegralCubicForm& f, T t) {
    for (int i = 0; i < 4; ++i) {
        const T df = deriv(f, t);
        if (df == T(0)) break;
        const T step = eval(f, t) / df;
        t -= step;
        if (std::abs(step) <= 1e-19L * (1 + std::abs(t))) break;
    }
    return t;
}

}  // namespace

CubicRoots cubic_roots(const IntegralCubicForm& f) {
    const i128 D = disc(f);
    if (D == 0) throw DomainError("cubic_roots: zero discriminant");
    CubicRoots out;
    out.real_three = D > 0;
    std::vector<ld> reals;
    const ld a = f.a, b = f.b, c = f.c, d = f.d;
    bool infinite = false;
    if (f.a == 0) {
        infinite = true;
        // b t^2 + c t + d
        const ld disc2 = c * c - 4 * b * d;
        if (out.real_three) {
            const ld sq = std::sqrt(disc2);
            const ld q = -0.5L * (c + (c >= 0 ? sq : -sq));
            reals.push_back(q / b);
            reals.push_back(d / q);
        } else {
            const ld im = std::sqrt(-disc2) / (2 * std::abs(b));
            out.upper = cld(-c / (2 * b), im);
        }
    } else {
        const ld B = b / a, C = c / a, E = d / a;
        const ld p = C - B * B / 3;
        const ld q = 2 * B * B * B / 27 - B * C / 3 + E;
        if (out.real_three) {
            const ld m = 2 * std::sqrt(-p / 3);
            const ld arg = std::clamp(3 * q / (2 * p) * std::sqrt(-3 / p), -1.0L, 1.0L);
            const ld th = std::acos(arg) / 3;
            for (int k = 0; k < 3; ++k)
                reals.push_back(polish(f, m * std::cos(th - 2 * std::numbers::pi_v<ld> * k / 3) - B / 3));
        } else {
            const ld delta = q * q / 4 + p * p * p / 27;
            const ld u = std::cbrt(-q / 2 - (q >= 0 ? 1 : -1) * std::sqrt(std::max(delta, 0.0L)));
            const ld s = u == 0 ? 0 : u - p / (3 * u);
            const ld r = polish(f, s - B / 3);
            reals.push_back(r);
            // Deflate: f = (t - r)(a t^2 + e t + g).
            const ld e = b + a * r;
            const ld g = std::abs(r) > 1 ? -d / r : c + e * r;
            const ld disc2 = 4 * a * g - e * e;
            cld z(-e / (2 * a), std::sqrt(std::max(disc2, 0.0L)) / (2 * std::abs(a)));
            z = polish(f, z);
            if (z.imag() < 0) z = std::conj(z);
            out.upper = z;
        }
    }
    if (out.real_three) {
        std::sort(reals.begin(), reals.end(), std::greater<>());
        if (infinite) {
            out.real[0] = {1, 0};
            out.real[1] = {reals[0], 1};
            out.real[2] = {reals[1], 1};
        } else {
            for (int i = 0; i < 3; ++i) out.real[i] = {reals[i], 1};
        }
    } else {
        out.real[0] = infinite ? std::array<ld, 2>{1, 0} : std::array<ld, 2>{reals[0], 1};
    }
    return out;
}

namespace {

struct LMatrix {
    ld a11, a12, a21, a22;
};

// Scale g0 by the real cube root matching act(g0, base) to f.
RealMatrix2 scale_to(const LMatrix& g0, const RealCubicForm& base, const IntegralCubicForm& f) {
    const RealMatrix2 g{double(g0.a11), double(g0.a12), double(g0.a21), double(g0.a22)};
    const RealCubicForm h = act(g, base);
    const std::array<double, 4> fv{double(f.a), double(f.b), double(f.c), double(f.d)};
    const std::array<double, 4> hv{h.a, h.b, h.c, h.d};
    int k = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(fv[i]) > std::abs(fv[k])) k = i;
    const double kappa = std::cbrt(fv[k] / hv[k]);
    RealMatrix2 out{g.a11 * kappa, g.a12 * kappa, g.a21 * kappa, g.a22 * kappa};
    if (!(out.det() > 0)) throw InternalError("root matching produced a non-positive determinant");
    return out;
}

LMatrix inverse(const LMatrix& m) {
    const ld det = m.a11 * m.a22 - m.a12 * m.a21;
    return {m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det};
}

}  // namespace

RealMatrix2 root_matching_matrix(const IntegralCubicForm& f) {
    const CubicRoots roots = cubic_roots(f);
    LMatrix M;
    if (roots.real_three) {
        const auto& R1 = roots.real[0];
        const auto& R2 = roots.real[1];
        const auto& R3 = roots.real[2];
        // s1 R1 + s2 R3 = R2
        const ld det = R1[0] * R3[1] - R3[0] * R1[1];
        const ld s1 = (R2[0] * R3[1] - R3[0] * R2[1]) / det;
        const ld s2 = (R1[0] * R2[1] - R2[0] * R1[1]) / det;
        M = {s1 * R1[0], s1 * R1[1], s2 * R3[0], s2 * R3[1]};
        return scale_to(inverse(M), base_form(+1), f);
    }
    const auto& R = roots.real[0];
    const cld rho = roots.upper;
    const ld k1 = (R[0] - R[1] * rho.real()) / rho.imag();
    M = {R[0], R[1], k1 * rho.real() - R[1] * rho.imag(), k1};
    return scale_to(inverse(M), base_form(-1), f);
}

HalfPlanePoint covariant_point(const IntegralCubicForm& f) { return to_halfplane(inverse(root_matching_matrix(f))); }

ShapeResult shape(const IntegralCubicForm& f, AveragingMode mode) {
    const i128 D = disc(f);
    if (D == 0) throw DomainError("shape: zero discriminant");
    const Reduction red = reduce(f);
    const RealMatrix2 gc = root_matching_matrix(red.canonical);
    const RealMatrix2 gc_inv = inverse(gc);
    ShapeResult out;
    out.mode = mode;
    out.g = to_real(red.gamma.inverse()) * gc;
    out.point = reduce_fundamental(to_halfplane(gc_inv)).point;
    if (D > 0) {
        for (const auto& s : base_stabilizer())
            out.orbit.push_back(reduce_fundamental(to_halfplane(to_real(s.inverse()) * gc_inv)).point);
    } else {
        out.orbit.push_back(out.point);
    }
    return out;
}

ConventionReport convention_self_test(int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2, 2);
    std::uniform_int_distribution<int> W(0, 3);
    ConventionReport rep;
    double worst_t = 0, worst_o = 0;
    for (int i = 0; i < samples; ++i) {
        RealMatrix2 g{U(rng), U(rng), U(rng), U(rng)};
        if (g.det() < 0) {
            std::swap(g.a11, g.a12);
            std::swap(g.a21, g.a22);
        }
        if (std::abs(g.det()) < 0.1) continue;
        UnimodularMatrix gamma;
        for (int k = 0; k < 6; ++k) {
            switch (W(rng)) {
                case 0: gamma = gamma * UnimodularMatrix::T(1); break;
                case 1: gamma = gamma * UnimodularMatrix::T(-1); break;
                default: gamma = gamma * UnimodularMatrix::S(); break;
            }
        }
        const RealMatrix2 gg = g * to_real(gamma);
        auto p1 = reduce_fundamental(to_halfplane(g)).point;
        auto p2 = reduce_fundamental(to_halfplane(gg)).point;
        worst_t = std::max(worst_t, fundamental_distance(p1, p2));
        // Alternative dictionary: Mobius action of g itself on i.
        auto q1 = reduce_fundamental(mobius(g, HalfPlanePoint{0, 1})).point;
        auto q2 = reduce_fundamental(mobius(gg, HalfPlanePoint{0, 1})).point;
        worst_o = std::max(worst_o, fundamental_distance(q1, q2));
    }
    rep.transpose_ok = worst_t < 1e-8;
    rep.other_ok = worst_o < 1e-8;
    rep.max_residual = worst_t;
    return rep;
}

}  // namespace cubic
