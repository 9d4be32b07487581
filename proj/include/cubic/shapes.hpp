#pragma once

#include <array>
#include <complex>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

// g = k_theta a_t n_u with k_theta = [[cos 2 pi theta, sin 2 pi theta], [-sin, cos]],
// a_t = diag(t, 1/t), n_u = [[1, 0], [u, 1]].
struct IwasawaCoords {
    double theta = 0;  // in [0, 1)
    double t = 1;
    double u = 0;
};

struct HalfPlanePoint {
    double x = 0;
    double y = 1;
    bool operator==(const HalfPlanePoint&) const = default;
    std::complex<double> z() const { return {x, y}; }
};

IwasawaCoords iwasawa(const RealMatrix2& g);
RealMatrix2 from_iwasawa(const IwasawaCoords& c);

// Point u + i t^2 of the determinant-one projection of g.
HalfPlanePoint to_halfplane(const RealMatrix2& g);

HalfPlanePoint mobius(const UnimodularMatrix& m, const HalfPlanePoint& z);
HalfPlanePoint mobius(const RealMatrix2& m, const HalfPlanePoint& z);

bool is_reduced(const HalfPlanePoint& z, double tol = 1e-12);

// Distance between two reduced points modulo the boundary identifications of
// the fundamental domain.
double fundamental_distance(const HalfPlanePoint& p, const HalfPlanePoint& q);

struct FundamentalReduction {
    HalfPlanePoint point;
    UnimodularMatrix gamma;  // point = mobius(gamma, input)
};

// Reduced point with x in [-1/2, 1/2) and x <= 0 on the unit circle.
FundamentalReduction reduce_fundamental(const HalfPlanePoint& z);

enum class AveragingMode { Raw, Averaged };

// x+ = (0, 1, -1, 0) and x-0 = 4^(-1/4) (0, 1, 0, 1).
RealCubicForm base_form(int sign);

// The matrices of SL2(Z) fixing x+.
const std::array<UnimodularMatrix, 3>& base_stabilizer();

struct ShapeResult {
    RealMatrix2 g;                        // act(g, base_form(sign)) = f
    HalfPlanePoint point;                 // reduced point of g^-1 (raw convention)
    std::vector<HalfPlanePoint> orbit;    // reduced points over the x+ stabilizer; size 3 if disc > 0, else 1
    AveragingMode mode = AveragingMode::Raw;
};

// Root matching without canonicalization: largest real root to infinity,
// smallest to 0, middle to 1 (disc > 0); real root to infinity and the upper
// complex root to i (disc < 0).
RealMatrix2 root_matching_matrix(const IntegralCubicForm& f);

// Point of g^-1 for g = root_matching_matrix(f), before reduction. For
// disc < 0 it moves by the Mobius action of gamma^-T under f -> gamma.f.
HalfPlanePoint covariant_point(const IntegralCubicForm& f);

ShapeResult shape(const IntegralCubicForm& f, AveragingMode mode = AveragingMode::Raw);

// Projective roots of f: (x, y) pairs with f(x, y) = 0, y in {0, 1}.
struct CubicRoots {
    bool real_three = false;
    std::array<std::array<long double, 2>, 3> real{};  // real roots, descending with infinity first
    std::complex<long double> upper{};                // disc < 0: root in the upper half-plane
};
CubicRoots cubic_roots(const IntegralCubicForm& f);

// Random samples checking that to_halfplane(g * gamma) and to_halfplane(g)
// reduce to the same point, for the adopted convention and the transposed one.
struct ConventionReport {
    bool transpose_ok = false;
    bool other_ok = false;
    double max_residual = 0;
};
ConventionReport convention_self_test(int samples = 200, unsigned seed = 1);

}  // namespace cubic
