#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cubic/forms.hpp"
#include "cubic/shapes.hpp"
#include "cubic/special.hpp"

namespace cubic {

enum class Parity { Even, Odd };

struct MaassFormData {
    double t_phi = 0;
    Parity parity = Parity::Even;
    std::vector<double> coeffs;  // coeffs[n - 1] = rho(n)
    double stated_precision = 0;

    std::size_t size() const { return coeffs.size(); }
    double rho(std::size_t n) const { return coeffs.at(n - 1); }
    bool operator==(const MaassFormData&) const = default;
};

double hecke_check(const MaassFormData& data);

// Invariant checks applied before any evaluator sees the data; throws ParseError.
void validate(const MaassFormData& data);

struct Evaluation {
    cplx value;
    double tail_bound = 0;
    int terms = 0;
};

// Number of Fourier terms needed at height y for the tail bound to drop below
// tol * e^(-pi |mu| / 2), the natural size of K_{i mu}.
int maass_terms_needed(double mu, double y, double tol = 1e-10);

Evaluation eval_maass(const MaassFormData& data, const HalfPlanePoint& z, int terms = 0);

// E(z, g) from its Fourier development; with include_constant false the two
// constant terms are dropped.
class EisensteinSeries {
  public:
    EisensteinSeries(cplx z, bool include_constant);
    cplx z() const { return z_; }
    bool include_constant() const { return constant_; }
    Evaluation operator()(const HalfPlanePoint& p) const;

  private:
    cplx z_;
    bool constant_;
    cplx xi_z_, xi_z1_;
};

Evaluation eval_eisenstein(cplx z, const HalfPlanePoint& point, bool include_constant);

// divisor sum eta_{z/2}(m) = sum_{ab = m} (a/b)^{z/2} = m^{-z/2} sigma_z(m)
cplx eta(cplx z, std::int64_t m);

struct ConstantFunction {};

class TestFunction {
  public:
    using Variant = std::variant<ConstantFunction, std::shared_ptr<const MaassFormData>, EisensteinSeries>;

    static TestFunction constant() { return TestFunction(ConstantFunction{}); }
    static TestFunction maass(MaassFormData data);
    static TestFunction eisenstein(cplx z, bool include_constant);

    const Variant& variant() const { return v_; }
    bool is_constant() const { return std::holds_alternative<ConstantFunction>(v_); }
    std::string describe() const;

    // Value at a reduced half-plane point.
    cplx at(const HalfPlanePoint& reduced) const;

  private:
    explicit TestFunction(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// phi(g) := phi(det(g)^(-1/2) g): projects, maps to the half-plane, reduces, evaluates.
cplx eval_testfunction(const TestFunction& phi, const RealMatrix2& g);

// Hecke-consistent table from prime seeds; not an eigenform.
MaassFormData synthetic_maass(std::size_t N, std::uint64_t seed, double t_phi = 9.5, Parity parity = Parity::Even);

}  // namespace cubic
