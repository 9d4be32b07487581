#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <tuple>
#include <variant>

#include "cubic/checked.hpp"

namespace cubic {

struct IntegralCubicForm {
    std::int64_t a = 0, b = 0, c = 0, d = 0;

    auto operator<=>(const IntegralCubicForm&) const = default;
    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
};

struct RealCubicForm {
    double a = 0, b = 0, c = 0, d = 0;

    RealCubicForm() = default;
    RealCubicForm(double a_, double b_, double c_, double d_);
    explicit RealCubicForm(const IntegralCubicForm& f)
        : a(double(f.a)), b(double(f.b)), c(double(f.c)), d(double(f.d)) {}
    bool operator==(const RealCubicForm&) const = default;
    double operator()(double x, double y) const { return ((a * x + b * y) * x + c * y * y) * x + d * y * y * y; }
};

// Row-major 2x2 matrix [[a11, a12], [a21, a22]].
template <class T>
struct Matrix2 {
    T a11{1}, a12{0}, a21{0}, a22{1};

    bool operator==(const Matrix2&) const = default;
    T det() const { return a11 * a22 - a12 * a21; }
    Matrix2 transpose() const { return {a11, a21, a12, a22}; }
    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
    }
};

// Element of SL2(Z). Construction checks det = 1.
class UnimodularMatrix {
  public:
    UnimodularMatrix() = default;
    UnimodularMatrix(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22);

    static UnimodularMatrix identity() { return {}; }
    static UnimodularMatrix T(std::int64_t k = 1) { return {1, k, 0, 1}; }
    static UnimodularMatrix S() { return {0, -1, 1, 0}; }

    const Matrix2<std::int64_t>& m() const { return m_; }
    std::int64_t a11() const { return m_.a11; }
    std::int64_t a12() const { return m_.a12; }
    std::int64_t a21() const { return m_.a21; }
    std::int64_t a22() const { return m_.a22; }

    UnimodularMatrix inverse() const { return {m_.a22, -m_.a12, -m_.a21, m_.a11}; }
    UnimodularMatrix transpose() const { return {m_.a11, m_.a21, m_.a12, m_.a22}; }
    UnimodularMatrix inverse_transpose() const { return {m_.a22, -m_.a21, -m_.a12, m_.a11}; }

    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y);
    bool operator==(const UnimodularMatrix&) const = default;
    auto operator<=>(const UnimodularMatrix& o) const {
        return std::tie(m_.a11, m_.a12, m_.a21, m_.a22) <=> std::tie(o.m_.a11, o.m_.a12, o.m_.a21, o.m_.a22);
    }

  private:
    Matrix2<std::int64_t> m_;
};

using RealMatrix2 = Matrix2<double>;

RealMatrix2 to_real(const UnimodularMatrix& g);
RealMatrix2 inverse(const RealMatrix2& g);
inline double chi(const RealMatrix2& g) {
    double d = g.det();
    return d * d * d * d * d * d;
}

// (g.f)(x, y) = f(a11 x + a21 y, a12 x + a22 y); act(g, act(h, f)) = act(g h, f).
IntegralCubicForm act(const UnimodularMatrix& g, const IntegralCubicForm& f);
RealCubicForm act(const RealMatrix2& g, const RealCubicForm& f);

i128 disc(const IntegralCubicForm& f);
double disc(const RealCubicForm& f);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // > 0, gcd(num, den) = 1

    bool operator==(const Rational&) const = default;
    double value() const { return double(num) / double(den); }
};

Rational pairing(const IntegralCubicForm& x, const IntegralCubicForm& y);
double pairing(const RealCubicForm& x, const RealCubicForm& y);

RealMatrix2 involution(const RealMatrix2& g);

bool in_dual_lattice(const IntegralCubicForm& f);
bool is_irreducible(const IntegralCubicForm& f);

// Hessian covariant (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd), disc = -3 D.
struct QuadraticForm {
    std::int64_t p = 0, q = 0, r = 0;
    bool operator==(const QuadraticForm&) const = default;
};
QuadraticForm hessian(const IntegralCubicForm& f);

namespace singular {
struct Zero {
    bool operator==(const Zero&) const = default;
};
struct TypeI {
    std::int64_t m;
    bool operator==(const TypeI&) const = default;
};
struct TypeII {
    std::int64_t m, n;
    bool operator==(const TypeII&) const = default;
};
// Representative (0, 0, 3m, n), 0 <= n < 3m.
struct TypeIIDual {
    std::int64_t m, n;
    bool operator==(const TypeIIDual&) const = default;
};
}  // namespace singular

using SingularClass = std::variant<singular::Zero, singular::TypeI, singular::TypeII, singular::TypeIIDual>;

SingularClass singular_classify(const IntegralCubicForm& f, bool dual);
// Base point of a singular class, e.g. (0,0,m,n) for TypeII.
IntegralCubicForm singular_base(const SingularClass& s);
std::string to_string(const SingularClass& s);

std::string to_string(const IntegralCubicForm& f);
std::ostream& operator<<(std::ostream& os, const IntegralCubicForm& f);
std::ostream& operator<<(std::ostream& os, const UnimodularMatrix& g);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace cubic
