#pragma once

#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

struct Reduction {
    IntegralCubicForm canonical;
    UnimodularMatrix gamma;  // act(gamma, f) = canonical
};

// Forms in the orbit of f whose reduction covariant (Hessian for disc > 0,
// root point for disc < 0) lies in the closed fundamental domain.
std::vector<Reduction> reduced_candidates(const IntegralCubicForm& f);

// Lexicographically least candidate with positive first nonzero coefficient.
Reduction reduce(const IntegralCubicForm& f);

bool is_canonical(const IntegralCubicForm& f);

int stabilizer_order(const IntegralCubicForm& f);

// Canonical representative of the GL2(Z)-class: the least of the SL2(Z)
// canonical forms of f and (a, -b, c, -d).
IntegralCubicForm gl2_canonical(const IntegralCubicForm& f);

// Bounds on |a|, |b|, |c|, |d| of every reduced form with 0 < +-disc <= X,
// separately for a = 0 and a != 0.
struct CoefficientBox {
    std::int64_t a = 0, b = 0, c = 0, d = 0;
};
struct BoundBox {
    CoefficientBox leading_zero;
    CoefficientBox leading_nonzero;
};
BoundBox reduced_bound_box(std::int64_t X, int sign);

// All SL2(Z) matrices with entries in [-2, 2].
const std::vector<UnimodularMatrix>& small_matrices();

}  // namespace cubic
