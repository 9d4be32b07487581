#include "cubic/forms.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

namespace cubic {

namespace ck = checked;

std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

RealCubicForm::RealCubicForm(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw DomainError("real cubic form with non-finite coefficient");
}

UnimodularMatrix::UnimodularMatrix(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22)
    : m_{a11, a12, a21, a22} {
    i128 det = ck::sub(ck::mul(a11, a22), ck::mul(a12, a21));
    if (det != 1) throw DomainError("matrix is not in SL2(Z): det = " + to_string(det));
}

UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
    auto e = [](std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
        return ck::narrow(ck::add(ck::mul(p, q), ck::mul(r, s)));
    };
    const auto& a = x.m_;
    const auto& b = y.m_;
    return {e(a.a11, b.a11, a.a12, b.a21), e(a.a11, b.a12, a.a12, b.a22), e(a.a21, b.a11, a.a22, b.a21),
            e(a.a21, b.a12, a.a22, b.a22)};
}

RealMatrix2 to_real(const UnimodularMatrix& g) {
    return {double(g.a11()), double(g.a12()), double(g.a21()), double(g.a22())};
}

RealMatrix2 inverse(const RealMatrix2& g) {
    double det = g.det();
    if (det == 0 || !std::isfinite(det)) throw DomainError("singular matrix");
    return {g.a22 / det, -g.a12 / det, -g.a21 / det, g.a11 / det};
}

IntegralCubicForm act(const UnimodularMatrix& g, const IntegralCubicForm& f) {
    const i128 p = g.a11(), q = g.a12(), r = g.a21(), s = g.a22();
    const i128 a = f.a, b = f.b, c = f.c, d = f.d;
    auto m = [](std::initializer_list<i128> xs) {
        i128 r = 1;
        for (i128 x : xs) r = ck::mul(r, x);
        return r;
    };
    auto sum = [](std::initializer_list<i128> xs) {
        i128 r = 0;
        for (i128 x : xs) r = ck::add(r, x);
        return r;
    };
    i128 A = sum({m({a, p, p, p}), m({b, p, p, q}), m({c, p, q, q}), m({d, q, q, q})});
    i128 B = sum({m({3, a, p, p, r}), m({b, p, p, s}), m({2, b, p, q, r}), m({2, c, p, q, s}), m({c, q, q, r}),
                  m({3, d, q, q, s})});
    i128 C = sum({m({3, a, p, r, r}), m({2, b, p, r, s}), m({b, q, r, r}), m({c, p, s, s}), m({2, c, q, r, s}),
                  m({3, d, q, s, s})});
    i128 D = sum({m({a, r, r, r}), m({b, r, r, s}), m({c, r, s, s}), m({d, s, s, s})});
    return {ck::narrow(A), ck::narrow(B), ck::narrow(C), ck::narrow(D)};
}

RealCubicForm act(const RealMatrix2& g, const RealCubicForm& f) {
    const double p = g.a11, q = g.a12, r = g.a21, s = g.a22;
    const double a = f.a, b = f.b, c = f.c, d = f.d;
    return {a * p * p * p + b * p * p * q + c * p * q * q + d * q * q * q,
            3 * a * p * p * r + b * (p * p * s + 2 * p * q * r) + c * (2 * p * q * s + q * q * r) + 3 * d * q * q * s,
            3 * a * p * r * r + b * (2 * p * r * s + q * r * r) + c * (p * s * s + 2 * q * r * s) + 3 * d * q * s * s,
            a * r * r * r + b * r * r * s + c * r * s * s + d * s * s * s};
}

i128 disc(const IntegralCubicForm& f) {
    const i128 a = f.a, b = f.b, c = f.c, d = f.d;
    auto m = [](std::initializer_list<i128> xs) {
        i128 r = 1;
        for (i128 x : xs) r = ck::mul(r, x);
        return r;
    };
    i128 D = m({18, a, b, c, d});
    D = ck::sub(D, m({4, b, b, b, d}));
    D = ck::add(D, m({b, b, c, c}));
    D = ck::sub(D, m({4, a, c, c, c}));
    D = ck::sub(D, m({27, a, a, d, d}));
    return D;
}

double disc(const RealCubicForm& f) {
    const double a = f.a, b = f.b, c = f.c, d = f.d;
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
}

Rational pairing(const IntegralCubicForm& x, const IntegralCubicForm& y) {
    // <x, y> = x4 y1 - x3 y2 / 3 + x2 y3 / 3 - x1 y4, over the common denominator 3.
    i128 n = ck::mul(3, ck::sub(ck::mul(x.d, y.a), ck::mul(x.a, y.d)));
    n = ck::add(n, ck::sub(ck::mul(x.b, y.c), ck::mul(x.c, y.b)));
    std::int64_t den = 3;
    if (n % 3 == 0) {
        n /= 3;
        den = 1;
    }
    return {ck::narrow(n), den};
}

double pairing(const RealCubicForm& x, const RealCubicForm& y) {
    return x.d * y.a - x.c * y.b / 3 + x.b * y.c / 3 - x.a * y.d;
}

RealMatrix2 involution(const RealMatrix2& g) {
    const RealMatrix2 j1{0, -1, 1, 0}, j2{0, 1, -1, 0};
    return j1 * inverse(g).transpose() * j2;
}

bool in_dual_lattice(const IntegralCubicForm& f) { return f.b % 3 == 0 && f.c % 3 == 0; }

namespace {

std::vector<std::int64_t> positive_divisors(std::int64_t n) {
    n = std::llabs(n);
    std::vector<std::int64_t> small, large;
    for (std::int64_t k = 1; k <= n / k; ++k) {
        if (n % k == 0) {
            small.push_back(k);
            if (k != n / k) large.push_back(n / k);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

}  // namespace

bool is_irreducible(const IntegralCubicForm& f) {
    if (disc(f) == 0) throw DomainError("is_irreducible: zero discriminant");
    if (f.a == 0 || f.d == 0) return false;
    // Rational roots x/y = p/q of f(x, y) with p | d and q | a.
    const auto ps = positive_divisors(f.d);
    const auto qs = positive_divisors(f.a);
    for (std::int64_t q : qs) {
        for (std::int64_t p0 : ps) {
            if (gcd64(p0, q) != 1) continue;
            for (std::int64_t p : {p0, -p0}) {
                i128 v = ck::mul(ck::mul(ck::mul(f.a, p), p), p);
                v = ck::add(v, ck::mul(ck::mul(ck::mul(f.b, p), p), q));
                v = ck::add(v, ck::mul(ck::mul(ck::mul(f.c, p), q), q));
                v = ck::add(v, ck::mul(ck::mul(ck::mul(f.d, q), q), q));
                if (v == 0) return false;
            }
        }
    }
    return true;
}

QuadraticForm hessian(const IntegralCubicForm& f) {
    const i128 a = f.a, b = f.b, c = f.c, d = f.d;
    return {ck::narrow(ck::sub(ck::mul(b, b), ck::mul(3, ck::mul(a, c)))),
            ck::narrow(ck::sub(ck::mul(b, c), ck::mul(9, ck::mul(a, d)))),
            ck::narrow(ck::sub(ck::mul(c, c), ck::mul(3, ck::mul(b, d))))};
}

namespace {

// Returns (x, y) with u x + v y = gcd(u, v).
std::pair<std::int64_t, std::int64_t> ext_gcd(std::int64_t u, std::int64_t v) {
    std::int64_t r0 = u, r1 = v, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - k * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
    }
    if (r0 < 0) {
        s0 = -s0;
        t0 = -t0;
    }
    return {s0, t0};
}

std::int64_t floor_mod(std::int64_t n, std::int64_t m) {
    std::int64_t r = n % m;
    return r < 0 ? r + m : r;
}

}  // namespace

SingularClass singular_classify(const IntegralCubicForm& f, bool dual) {
    if (disc(f) != 0) throw DomainError("singular_classify: nonzero discriminant");
    if (dual && !in_dual_lattice(f)) throw DomainError("singular_classify: form is not in the dual lattice");
    if (f.is_zero()) return singular::Zero{};

    // The repeated linear factor u x + v y: the Hessian is a multiple of its
    // square, or vanishes identically when f is a cube.
    const QuadraticForm h = hessian(f);
    const bool cube = h.p == 0 && h.q == 0 && h.r == 0;
    std::int64_t u, v;
    if (cube) {
        if (f.a != 0) {
            u = ck::narrow(ck::mul(3, f.a));
            v = f.b;
        } else {
            u = 0;
            v = 1;
        }
    } else if (h.p != 0) {
        u = ck::narrow(ck::mul(2, h.p));
        v = h.q;
    } else {
        u = 0;
        v = 1;
    }
    const std::int64_t g = gcd64(u, v);
    u /= g;
    v /= g;

    // gamma maps the factor to y: first row (v, -u), second row solving u x + v y = 1.
    auto [s, t] = ext_gcd(u, v);
    UnimodularMatrix gamma(v, -u, s, t);
    IntegralCubicForm r = act(gamma, f);
    if (r.a != 0 || r.b != 0 || (cube && r.c != 0)) throw InternalError("singular_classify: factor not moved to y");

    if (cube) return singular::TypeI{r.d < 0 ? -r.d : r.d};
    std::int64_t m = r.c, n = r.d;
    if (m < 0) {
        m = -m;
        n = -n;
    }
    n = floor_mod(n, m);
    if (dual) return singular::TypeIIDual{m / 3, n};
    return singular::TypeII{m, n};
}

IntegralCubicForm singular_base(const SingularClass& s) {
    struct V {
        IntegralCubicForm operator()(const singular::Zero&) const { return {}; }
        IntegralCubicForm operator()(const singular::TypeI& x) const { return {0, 0, 0, x.m}; }
        IntegralCubicForm operator()(const singular::TypeII& x) const { return {0, 0, x.m, x.n}; }
        IntegralCubicForm operator()(const singular::TypeIIDual& x) const {
            return {0, 0, ck::narrow(ck::mul(3, x.m)), x.n};
        }
    };
    return std::visit(V{}, s);
}

std::string to_string(const SingularClass& s) {
    struct V {
        std::string operator()(const singular::Zero&) const { return "Zero"; }
        std::string operator()(const singular::TypeI& x) const { return "TypeI(" + std::to_string(x.m) + ")"; }
        std::string operator()(const singular::TypeII& x) const {
            return "TypeII(" + std::to_string(x.m) + "," + std::to_string(x.n) + ")";
        }
        std::string operator()(const singular::TypeIIDual& x) const {
            return "TypeIIDual(" + std::to_string(x.m) + "," + std::to_string(x.n) + ")";
        }
    };
    return std::visit(V{}, s);
}

std::string to_string(const IntegralCubicForm& f) {
    std::ostringstream os;
    os << f;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntegralCubicForm& f) {
    return os << '(' << f.a << ',' << f.b << ',' << f.c << ',' << f.d << ')';
}

std::ostream& operator<<(std::ostream& os, const UnimodularMatrix& g) {
    return os << "[[" << g.a11() << ',' << g.a12() << "],[" << g.a21() << ',' << g.a22() << "]]";
}

}  // namespace cubic
