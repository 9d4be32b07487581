#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cubic/automorphic.hpp"
#include "cubic/checked.hpp"
#include "cubic/forms.hpp"

namespace cubic {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

using DiscFn = std::function<i128(const IntegralCubicForm&)>;

// Each suite returns a verdict with the measured residuals in `detail`.
SuiteResult suite_disc_invariance(int samples, unsigned seed, const DiscFn& disc_fn = {});
SuiteResult suite_real_disc_invariance(int samples, unsigned seed);
SuiteResult suite_pairing_involution(int samples, unsigned seed);
SuiteResult suite_homomorphism(int samples, unsigned seed);
SuiteResult suite_oracle(std::int64_t X);
SuiteResult suite_orbit_soundness(std::int64_t X, int per_record, unsigned seed);
SuiteResult suite_convention(int samples, unsigned seed);
SuiteResult suite_shape_invariance(int samples, unsigned seed);
SuiteResult suite_singular(int samples, unsigned seed);
SuiteResult suite_bessel();
SuiteResult suite_xi();
SuiteResult suite_eisenstein_lattice(int points, unsigned seed);
SuiteResult suite_eisenstein_functional();
SuiteResult suite_gamma_invariance(const std::vector<TestFunction>& phis, int samples, unsigned seed);
SuiteResult suite_hecke(const std::vector<MaassFormData>& ingested);
SuiteResult suite_spectral_roundtrip(unsigned seed);
SuiteResult suite_two_route(std::int64_t X);
SuiteResult suite_streaming(std::int64_t M);
SuiteResult suite_determinism(std::int64_t X, const TestFunction& phi);

// E(2, z) from the lattice sum y^(3/2) / (2 zeta(3)) sum' |c z + d|^-3.
double eisenstein_lattice_sum_z2(double x, double y);

struct VerifyOptions {
    bool quick = true;
    unsigned seed = 20240601;
    DiscFn disc_fn;
    std::vector<MaassFormData> maass;
};
std::vector<SuiteResult> run_verify(const VerifyOptions& opt, const std::function<void(const SuiteResult&)>& on_result = {});

}  // namespace cubic
