#include "cubic/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "cubic/shapes.hpp"

namespace cubic {

namespace ck = checked;

const std::vector<UnimodularMatrix>& small_matrices() {
    static const std::vector<UnimodularMatrix> all = [] {
        std::vector<UnimodularMatrix> v;
        for (int p = -2; p <= 2; ++p)
            for (int q = -2; q <= 2; ++q)
                for (int r = -2; r <= 2; ++r)
                    for (int s = -2; s <= 2; ++s)
                        if (p * s - q * r == 1) v.emplace_back(p, q, r, s);
        return v;
    }();
    return all;
}

namespace {

i128 floor_div(i128 n, i128 d) {
    i128 q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

// Gauss reduction of the Hessian; returns gamma with hessian(act(gamma, f)) reduced.
UnimodularMatrix hessian_reduce(const IntegralCubicForm& f) {
    const QuadraticForm h = hessian(f);
    i128 P = h.p, Q = h.q, R = h.r;
    UnimodularMatrix g;
    for (int step = 0; step < 100000; ++step) {
        // x -> x + k y: (P, Q + 2kP, Pk^2 + Qk + R)
        const i128 k = floor_div(P - Q, 2 * P);
        if (k != 0) {
            const i128 Qn = ck::add(Q, ck::mul(2 * k, P));
            R = ck::add(ck::add(ck::mul(ck::mul(P, k), k), ck::mul(Q, k)), R);
            Q = Qn;
            g = UnimodularMatrix(1, 0, ck::narrow(k), 1) * g;
        }
        if (P > R) {
            std::swap(P, R);
            Q = -Q;
            g = UnimodularMatrix(0, 1, -1, 0) * g;
            continue;
        }
        return g;
    }
    throw InternalError("hessian_reduce: step guard exceeded");
}

bool leading_positive(const IntegralCubicForm& f) {
    if (f.a != 0) return f.a > 0;
    if (f.b != 0) return f.b > 0;
    if (f.c != 0) return f.c > 0;
    return f.d > 0;
}

}  // namespace

std::vector<Reduction> reduced_candidates(const IntegralCubicForm& f) {
    const i128 D = disc(f);
    if (D == 0) throw DomainError("reduce: zero discriminant");
    std::vector<Reduction> out;
    if (D > 0) {
        const UnimodularMatrix g0 = hessian_reduce(f);
        const IntegralCubicForm f0 = act(g0, f);
        const QuadraticForm h = hessian(f0);
        const i128 P = h.p, Q = h.q, R = h.r;
        for (const auto& m : small_matrices()) {
            const i128 p = m.a11(), q = m.a12(), r = m.a21(), s = m.a22();
            // H(v m) with v m = (p x + r y, q x + s y)
            const i128 P1 = P * p * p + Q * p * q + R * q * q;
            const i128 R1 = P * r * r + Q * r * s + R * s * s;
            const i128 Q1 = 2 * P * p * r + Q * (p * s + q * r) + 2 * R * q * s;
            if ((Q1 < 0 ? -Q1 : Q1) <= P1 && P1 <= R1) out.push_back({act(m, f0), m * g0});
        }
    } else {
        // Recompute the point from the exactly transformed form until it is
        // reduced; a skew input can put the first float estimate a few tiles off.
        UnimodularMatrix g0;
        IntegralCubicForm f0 = f;
        HalfPlanePoint z0 = covariant_point(f0);
        for (int pass = 0; !is_reduced(z0, 1e-9); ++pass) {
            if (pass == 8) throw InternalError("reduce: root point does not settle for " + to_string(f));
            const UnimodularMatrix step = reduce_fundamental(z0).gamma.inverse_transpose();
            g0 = step * g0;
            f0 = act(step, f0);
            z0 = covariant_point(f0);
        }
        for (const auto& m : small_matrices()) {
            if (is_reduced(mobius(m.inverse_transpose(), z0), 1e-9)) out.push_back({act(m, f0), m * g0});
        }
    }
    if (out.empty()) throw InternalError("reduce: empty candidate set for " + to_string(f));
    return out;
}

Reduction reduce(const IntegralCubicForm& f) {
    const auto cands = reduced_candidates(f);
    const Reduction* best = nullptr;
    for (const auto& c : cands) {
        if (!leading_positive(c.canonical)) continue;
        if (!best || c.canonical < best->canonical || (c.canonical == best->canonical && c.gamma < best->gamma))
            best = &c;
    }
    if (!best) throw InternalError("reduce: no candidate with positive leading coefficient");
    return *best;
}

bool is_canonical(const IntegralCubicForm& f) { return reduce(f).canonical == f; }

int stabilizer_order(const IntegralCubicForm& f) {
    if (disc(f) == 0) throw DomainError("stabilizer_order: zero discriminant");
    const Reduction r = reduce(f);
    int n = 0;
    for (const auto& m : small_matrices())
        if (act(m, r.canonical) == r.canonical) ++n;
    if (n != 1 && n != 3) throw InternalError("stabilizer_order: unexpected order " + std::to_string(n));
    return n;
}

IntegralCubicForm gl2_canonical(const IntegralCubicForm& f) {
    const IntegralCubicForm a = reduce(f).canonical;
    const IntegralCubicForm b = reduce({f.a, -f.b, f.c, -f.d}).canonical;
    return std::min(a, b);
}

namespace {

std::int64_t ceil_bound(double v) { return std::int64_t(std::floor(v * (1 + 1e-6))) + 1; }

void widen(CoefficientBox& box, double a, double b, double c, double d) {
    box.a = std::max(box.a, ceil_bound(a));
    box.b = std::max(box.b, ceil_bound(b));
    box.c = std::max(box.c, ceil_bound(c));
    box.d = std::max(box.d, ceil_bound(d));
}

// disc > 0. |f(v)| <= 2 H(v)^(3/2) / sqrt(27 D) bounds a and d; each linear
// factor L of f satisfies L^2 <= (4/3) H / D^(1/3), which bounds b and c.
void positive_box(double D, BoundBox& out) {
    const double s = std::sqrt(27 * D);
    const double k = 3 * std::pow(4.0 / 3.0, 1.5);
    const double d13 = std::cbrt(D);
    const double pmax = std::sqrt(D);
    const double pmin = std::max(1.0, std::cbrt(27 * D / 4));
    if (pmin <= pmax) {
        for (int i = 0; i <= 256; ++i) {
            const double P = pmin + (pmax - pmin) * i / 256.0;
            const double R = (3 * D + P * P) / (4 * P);
            const double pt = P / d13, rt = R / d13;
            widen(out.leading_nonzero, 2 * std::pow(P, 1.5) / s, k * pt * std::sqrt(rt), k * std::sqrt(pt) * rt,
                  2 * std::pow(R, 1.5) / s);
        }
    }
    // a = 0: P = b^2 <= sqrt(D), |c| <= |b|, D = b^2 (c^2 - 4 b d).
    const double bmax = std::pow(D, 0.25);
    widen(out.leading_zero, 0, bmax, bmax, (D + 1) / 4);
    out.leading_zero.a = 0;
}

// disc < 0. f = lambda L Q with Q = X^2 + Y^2 of determinant |D|^(1/3) and
// L^2 <= Q; reduced means |Q_xy| <= Q_xx <= Q_yy.
void negative_box(double D, BoundBox& out) {
    const double lam = std::pow(4.0, -0.25);
    const double d2 = std::cbrt(D);  // delta^2
    const double pmin = std::pow(lam, -2.0 / 3.0);
    const double pmax = 2 * std::sqrt(d2) / std::sqrt(3.0);
    if (pmin <= pmax) {
        for (int i = 0; i <= 256; ++i) {
            const double P = pmin + (pmax - pmin) * i / 256.0;
            const double R = (d2 + P * P / 4) / P;
            widen(out.leading_nonzero, lam * std::pow(P, 1.5), lam * P * (std::sqrt(P) + std::sqrt(R)),
                  lam * (std::sqrt(P) * R + std::sqrt(R) * P), lam * std::pow(R, 1.5));
        }
    }
    // a = 0: f = y (b x^2 + c x y + d y^2), |c| <= |b| <= |d|, |D| = b^2 (4 b d - c^2) >= 3 b^4.
    const double bmax = std::pow(D / 3, 0.25);
    widen(out.leading_zero, 0, bmax, bmax, (D + 1) / 4);
    out.leading_zero.a = 0;
}

}  // namespace

BoundBox reduced_bound_box(std::int64_t X, int sign) {
    if (X < 1) throw DomainError("reduced_bound_box: X must be positive");
    BoundBox out;
    // The bounds grow with |D|; a geometric sweep guards against non-monotone pieces.
    for (int i = 0; i <= 64; ++i) {
        const double D = std::pow(double(X), i / 64.0);
        if (sign > 0)
            positive_box(D, out);
        else
            negative_box(D, out);
    }
    return out;
}

}  // namespace cubic
