#include "cubic/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "cubic/enumerate.hpp"
#include "cubic/lseries.hpp"
#include "cubic/reduction.hpp"
#include "cubic/shapes.hpp"
#include "cubic/spectral.hpp"

namespace cubic {

namespace {

constexpr double kPi = std::numbers::pi;

class Timer {
  public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

  private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

SuiteResult finish(std::string name, bool ok, const std::string& detail, const Timer& t) {
    return {std::move(name), ok, detail, t.seconds()};
}

std::string sci(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

// Uniform-ish element of SL2(Z) with entries bounded by B.
UnimodularMatrix random_sl2(std::mt19937_64& rng, std::int64_t B) {
    std::uniform_int_distribution<std::int64_t> U(-B, B);
    for (;;) {
        const std::int64_t a = U(rng), c = U(rng);
        if (gcd64(a, c) != 1) continue;
        // solve a d - b c = 1
        std::int64_t r0 = a, r1 = c, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            const std::int64_t q = r0 / r1;
            std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
            std::tie(s0, s1) = std::pair(s1, s0 - q * s1);
            std::tie(t0, t1) = std::pair(t1, t0 - q * t1);
        }
        // s0 a + t0 c = r0 = +-1
        std::int64_t d = s0 * r0, b = -t0 * r0;
        // shift (b, d) by k (a, c) to make them small
        const double k = a != 0 ? -double(b) / double(a) : -double(d) / double(c);
        const auto kk = std::int64_t(std::llround(k));
        b += kk * a;
        d += kk * c;
        if (std::abs(b) > B || std::abs(d) > B) continue;
        return UnimodularMatrix(a, b, c, d);
    }
}

RealMatrix2 random_gplus(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-2, 2);
    for (;;) {
        RealMatrix2 g{U(rng), U(rng), U(rng), U(rng)};
        if (g.det() > 0.05) return g;
    }
}

}  // namespace

SuiteResult suite_disc_invariance(int samples, unsigned seed, const DiscFn& disc_fn) {
    Timer t;
    const DiscFn D = disc_fn ? disc_fn : DiscFn([](const IntegralCubicForm& f) { return disc(f); });
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> C(-100, 100);
    int bad = 0;
    for (int i = 0; i < samples; ++i) {
        const IntegralCubicForm f{C(rng), C(rng), C(rng), C(rng)};
        const auto g = random_sl2(rng, 50);
        if (D(act(g, f)) != D(f)) ++bad;
    }
    return finish("disc-invariance", bad == 0,
                  std::to_string(samples) + " samples, " + std::to_string(bad) + " mismatches (exact)", t);
}

SuiteResult suite_real_disc_invariance(int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-3, 3);
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        const RealCubicForm f(U(rng), U(rng), U(rng), U(rng));
        const RealMatrix2 g = random_gplus(rng);
        const RealCubicForm gf = act(g, f);
        const double lhs = disc(gf), rhs = chi(g) * disc(f);
        // disc is quartic: compare against the fourth power of the coefficient size
        const double n = std::max({1.0, std::abs(gf.a), std::abs(gf.b), std::abs(gf.c), std::abs(gf.d)});
        worst = std::max(worst, std::abs(lhs - rhs) / (n * n * n * n));
    }
    return finish("real-disc-invariance", worst <= 1e-9,
                  "residual relative to |g.f|^4 " + sci(worst) + " (bound 1e-9)", t);
}

SuiteResult suite_pairing_involution(int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2, 2);
    double worst = 0, worst_inv = 0;
    for (int i = 0; i < samples; ++i) {
        const RealCubicForm x(U(rng), U(rng), U(rng), U(rng)), y(U(rng), U(rng), U(rng), U(rng));
        const RealMatrix2 g = random_gplus(rng);
        const RealMatrix2 gi = involution(g);
        const RealCubicForm gx = act(g, x), gy = act(gi, y);
        const double lhs = pairing(gx, gy), rhs = pairing(x, y);
        // relative to the size of the bilinear form's operands
        auto norm = [](const RealCubicForm& f) {
            return std::max({1.0, std::abs(f.a), std::abs(f.b), std::abs(f.c), std::abs(f.d)});
        };
        worst = std::max(worst, std::abs(lhs - rhs) / (norm(gx) * norm(gy)));
        const RealMatrix2 gii = involution(gi);
        for (double d : {gii.a11 - g.a11, gii.a12 - g.a12, gii.a21 - g.a21, gii.a22 - g.a22})
            worst_inv = std::max(worst_inv, std::abs(d));
    }
    const bool ok = worst <= 1e-10 && worst_inv <= 1e-12;
    return finish("pairing-involution", ok,
                  std::to_string(samples) + " samples, pairing residual relative to |g.x| |g*.y| " + sci(worst) + " (bound 1e-10), iota^2 - id " +
                      sci(worst_inv) + " (bound 1e-12)",
                  t);
}

SuiteResult suite_homomorphism(int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> C(-100, 100);
    int bad = 0;
    for (int i = 0; i < samples; ++i) {
        const IntegralCubicForm f{C(rng), C(rng), C(rng), C(rng)};
        const auto g = random_sl2(rng, 12), h = random_sl2(rng, 12);
        if (act(g * h, f) != act(g, act(h, f))) ++bad;
    }
    return finish("action-homomorphism", bad == 0,
                  std::to_string(samples) + " samples, " + std::to_string(bad) + " mismatches (exact)", t);
}

SuiteResult suite_oracle(std::int64_t X) {
    Timer t;
    std::string detail;
    bool ok = true;
    for (bool dual : {false, true}) {
        const auto e = enumerate_classes(X, dual);
        const auto b = brute_force_classes(X, dual);
        ok = ok && e == b;
        detail += std::string(dual ? " dual: " : "full: ") + std::to_string(e.size()) + " vs " +
                  std::to_string(b.size()) + (e == b ? " equal" : " DIFFER");
    }
    return finish("oracle-equivalence X=" + std::to_string(X), ok, detail, t);
}

SuiteResult suite_orbit_soundness(std::int64_t X, int per_record, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    int bad = 0, n = 0;
    for (bool dual : {false, true})
        for (const auto& r : enumerate_classes(X, dual))
            for (int k = 0; k < per_record; ++k, ++n)
                if (reduce(act(random_sl2(rng, 20), r.rep)).canonical != r.rep) ++bad;
    return finish("orbit-soundness X=" + std::to_string(X), bad == 0,
                  std::to_string(n) + " translates, " + std::to_string(bad) + " failed to return to the canonical form",
                  t);
}

SuiteResult suite_convention(int samples, unsigned seed) {
    Timer t;
    const auto rep = convention_self_test(samples, seed);
    std::string detail = std::string("adopted u + i t^2 dictionary: ") + (rep.transpose_ok ? "consistent" : "INCONSISTENT") +
                         "; alternative: " + (rep.other_ok ? "consistent" : "inconsistent") + "; max residual " +
                         sci(rep.max_residual);
    return finish("halfplane-convention", rep.transpose_ok, detail, t);
}

SuiteResult suite_shape_invariance(int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    const auto recs = enumerate_classes(2000, false);
    double worst = 0, worst_rec = 0;
    for (int i = 0; i < samples; ++i) {
        const auto& r = recs[rng() % recs.size()];
        const auto g = random_sl2(rng, 30);
        const auto a = shape(r.rep), b = shape(act(g, r.rep));
        worst = std::max(worst, fundamental_distance(a.point, b.point));
        const RealCubicForm back = act(b.g, base_form(r.disc > 0 ? 1 : -1));
        const RealCubicForm target(act(g, r.rep));
        double scale = 1;
        for (double c : {target.a, target.b, target.c, target.d}) scale = std::max(scale, std::abs(c));
        for (double d : {back.a - target.a, back.b - target.b, back.c - target.c, back.d - target.d})
            worst_rec = std::max(worst_rec, std::abs(d) / scale);
    }
    const bool ok = worst <= 1e-8 && worst_rec <= 1e-8;
    return finish("shape-invariance", ok,
                  std::to_string(samples) + " samples, point residual " + sci(worst) + ", reconstruction " +
                      sci(worst_rec) + " (bound 1e-8)",
                  t);
}

SuiteResult suite_singular(int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> M(1, 30);
    int bad = 0, counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < samples; ++i) {
        const int kind = int(rng() % 4);
        const std::int64_t m = M(rng);
        SingularClass s;
        bool dual = false;
        switch (kind) {
            case 0: s = singular::TypeI{m}; break;
            case 1: s = singular::TypeII{m, std::int64_t(rng() % std::uint64_t(m))}; break;
            case 2:
                s = singular::TypeIIDual{m, std::int64_t(rng() % std::uint64_t(3 * m))};
                dual = true;
                break;
            default: s = singular::Zero{};
        }
        ++counts[kind];
        const auto f = act(random_sl2(rng, 15), singular_base(s));
        if (singular_classify(f, dual) != s) ++bad;
    }
    return finish("singular-roundtrip", bad == 0,
                  std::to_string(samples) + " round trips (I " + std::to_string(counts[0]) + ", II " +
                      std::to_string(counts[1]) + ", II-dual " + std::to_string(counts[2]) + ", zero " +
                      std::to_string(counts[3]) + "), " + std::to_string(bad) + " mismatches",
                  t);
}

SuiteResult suite_bessel() {
    Timer t;
    double worst = 0;
    for (double x : {0.1, 1.0, 10.0, 50.0}) {
        const double exact = std::sqrt(kPi / (2 * x)) * std::exp(-x);
        worst = std::max(worst, std::abs(bessel_k(cplx(0.5, 0), x).real() - exact) / exact);
    }
    return finish("bessel-closed-form", worst <= 1e-12, "K_1/2 max relative error " + sci(worst) + " (bound 1e-12)",
                  t);
}

SuiteResult suite_xi() {
    Timer t;
    double worst = 0;
    for (double re : {0.1, 0.3, 0.7, 0.9})
        for (double im : {0.5, 2.0, 5.0, 10.0, 20.0}) {
            const cplx z(re, im);
            const cplx a = xi_unreflected(z), b = xi_unreflected(1.0 - z);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    return finish("xi-functional-equation", worst <= 1e-10,
                  "20-point grid, max relative residual " + sci(worst) + " (bound 1e-10)", t);
}

double eisenstein_lattice_sum_z2(double x, double y) {
    // c = 0 contributes 2 zeta(3); for 1 <= |c| <= C0 the d-sum is direct with an
    // integral tail; beyond C0 Poisson summation leaves 2 / (c y)^2 up to e^{-2 pi c y}.
    const int C0 = 40, D0 = 4000;
    const double z3 = std::riemann_zeta(3.0);
    double sum = 2 * z3;
    auto prim = [](double u, double a2) { return u / (a2 * std::sqrt(u * u + a2)); };
    for (int c = 1; c <= C0; ++c) {
        for (int sgn : {1, -1}) {
            const double cx = sgn * c * x, a2 = double(c) * c * y * y;
            double s = 0;
            for (int d = -D0; d <= D0; ++d) {
                const double u = cx + d;
                s += 1 / ((u * u + a2) * std::sqrt(u * u + a2));
            }
            // midpoint-rule tails
            s += (1 / a2 - prim(cx + D0 + 0.5, a2)) + (prim(cx - D0 - 0.5, a2) + 1 / a2);
            sum += s;
        }
    }
    double inv_sq = 0;
    for (int c = C0; c >= 1; --c) inv_sq += 1.0 / (double(c) * c);
    sum += 2 * 2 * (kPi * kPi / 6 - inv_sq) / (y * y);
    return std::pow(y, 1.5) / (2 * z3) * sum;
}

SuiteResult suite_eisenstein_lattice(int points, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> X(-0.5, 0.5), Y(0.9, 2.5);
    const EisensteinSeries E(cplx(2, 0), true);
    double worst = 0;
    for (int i = 0; i < points; ++i) {
        const HalfPlanePoint p = reduce_fundamental({X(rng), Y(rng)}).point;
        const double lat = eisenstein_lattice_sum_z2(p.x, p.y);
        const cplx f = E(p).value;
        worst = std::max(worst, std::max(std::abs(f.real() - lat), std::abs(f.imag())) / std::abs(lat));
    }
    return finish("eisenstein-lattice-vs-fourier", worst <= 1e-6,
                  std::to_string(points) + " points at z = 2, max relative difference " + sci(worst) +
                      " (bound 1e-6)",
                  t);
}

SuiteResult suite_eisenstein_functional() {
    Timer t;
    const std::pair<cplx, HalfPlanePoint> cases[] = {
        {cplx(1.7, 0), {0.2, 1.5}},   {cplx(0.4, 3.0), {-0.3, 1.1}}, {cplx(0, 2.0), {0.1, 0.95}},
        {cplx(2.5, -1.0), {0.45, 2.0}}, {cplx(0.3, 7.0), {-0.1, 1.3}},
    };
    double worst = 0;
    for (const auto& [z, p] : cases) {
        const cplx lhs = xi(z + 1.0) * eval_eisenstein(z, p, true).value;
        const cplx rhs = xi(1.0 - z) * eval_eisenstein(-z, p, true).value;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
    return finish("eisenstein-functional-equation", worst <= 1e-8,
                  "5 points, max relative residual " + sci(worst) + " (bound 1e-8)", t);
}

// Lowest height at which unreduced translates are evaluated; the fixture
// tables hold 32 coefficients.
constexpr double kMinTranslateHeight = 0.5;

SuiteResult suite_gamma_invariance(const std::vector<TestFunction>& phis, int samples, unsigned seed) {
    Timer t;
    std::mt19937_64 rng(seed);
    std::string detail;
    bool ok = true;
    for (const auto& phi : phis) {
        // without its constant term an Eisenstein series is not automorphic
        const auto* e = std::get_if<EisensteinSeries>(&phi.variant());
        const bool automorphic = !e || e->include_constant();
        double worst = 0, scale = 0;
        for (int i = 0; i < samples; ++i) {
            const RealMatrix2 g = random_gplus(rng);
            const auto gamma = random_sl2(rng, 10);
            // right translation through the full pipeline
            const cplx a = eval_testfunction(phi, g), b = eval_testfunction(phi, g * to_real(gamma));
            // automorphy of the Fourier development itself: evaluate at an
            // unreduced Gamma-translate of the reduced point
            const HalfPlanePoint zr = reduce_fundamental(to_halfplane(g)).point;
            HalfPlanePoint w{};
            for (int tries = 0; tries < 50; ++tries) {
                w = mobius(random_sl2(rng, 3), zr);
                if (w.y >= kMinTranslateHeight) break;
            }
            if (w.y < kMinTranslateHeight) w = {zr.x + 1, zr.y};
            const cplx c = phi.at(zr), d = automorphic ? phi.at(w) : c;
            scale = std::max({scale, std::abs(a), std::abs(c)});
            worst = std::max({worst, std::abs(a - b), std::abs(c - d)});
        }
        const double r = scale > 0 ? worst / scale : worst;
        ok = ok && r <= 1e-8;
        detail += (detail.empty() ? "" : "; ") + phi.describe() + ": " + sci(r);
    }
    return finish("gamma-invariance", ok,
                  std::to_string(samples) + " samples each, residual relative to max|phi| (bound 1e-8): " + detail, t);
}

SuiteResult suite_hecke(const std::vector<MaassFormData>& ingested) {
    Timer t;
    bool ok = true;
    std::string detail;
    double worst_syn = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        worst_syn = std::max(worst_syn, hecke_check(synthetic_maass(200, seed)));
    ok = worst_syn == 0;
    detail = "synthetic (5 tables, N = 200): " + sci(worst_syn);
    for (const auto& d : ingested) {
        const double h = hecke_check(d), tol = std::max(10 * d.stated_precision, 1e-6);
        ok = ok && h <= tol;
        detail += "; t_phi " + std::to_string(d.t_phi) + ": " + sci(h) + " (bound " + sci(tol) + ")";
    }
    if (ingested.empty()) detail += "; no ingested data";
    return finish("hecke", ok, detail, t);
}

SuiteResult suite_spectral_roundtrip(unsigned seed) {
    Timer t;
    bool ok = true;
    for (std::uint64_t s = seed; s < seed + 5; ++s) {
        auto d = synthetic_maass(100, s, 9.5 + double(s % 7) / 3, s % 2 ? Parity::Odd : Parity::Even);
        d.stated_precision = 1e-12;
        ok = ok && parse_coefficient_file(serialize(d)) == d;
    }
    return finish("spectral-roundtrip", ok, ok ? "parse(serialize(d)) == d on 5 tables" : "round trip mismatch", t);
}

SuiteResult suite_two_route(std::int64_t X) {
    Timer t;
    const SmoothCutoff psi;
    const auto hi = std::int64_t(psi.beta * double(X));
    const auto recs = enumerate_classes(hi, false);
    const TwistedCoefficients n(recs, std::vector<cplx>(recs.size(), 1.0), hi);
    const auto h = class_numbers(recs);
    double worst = 0;
    for (int sign : {1, -1}) {
        const double a = weyl_sum(double(X), n, psi, sign).real();
        double b = 0;
        for (const auto& [m, c] : h)
            if ((m > 0) == (sign > 0)) b += psi(double(std::abs(m)) / double(X)) * c.weighted;
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    return finish("weyl-two-route", worst <= 1e-10,
                  "constant phi at X = " + std::to_string(X) + ", relative difference " + sci(worst) +
                      " (bound 1e-10)",
                  t);
}

SuiteResult suite_streaming(std::int64_t M) {
    Timer t;
    const auto phi = TestFunction::eisenstein(cplx(2, 0), true);
    const auto recs = enumerate_classes(M, false);
    const auto vals = phi_values(recs, phi);
    const TwistedCoefficients a(recs, vals.averaged, M);
    double worst = 0;
    for (int sign : {1, -1}) {
        const auto x = partial_L(cplx(5, 0), M, a, sign).value;
        const auto y = partial_L_streaming(cplx(5, 0), M, phi, Lattice::Full, sign, AveragingMode::Averaged, {}, M / 7 + 1)
                           .value;
        worst = std::max(worst, std::abs(x - y) / std::abs(x));
    }
    return finish("partial-L-streaming", worst <= 1e-10,
                  "s = 5, M = " + std::to_string(M) + ", relative difference " + sci(worst) + " (bound 1e-10)", t);
}

SuiteResult suite_determinism(std::int64_t X, const TestFunction& phi) {
    Timer t;
    std::string ref_csv;
    std::vector<double> ref_sums;
    bool ok = true;
    for (int shards : {1, 2, 8}) {
        EnumerationOptions opt;
        opt.shards = shards;
        opt.threads = std::min(shards, 4);
        const auto recs = enumerate_classes(X, false, opt);
        std::ostringstream os;
        write_records_csv(os, recs);
        const auto vals = phi_values(recs, phi, opt.threads);
        std::vector<double> sums;
        for (auto mode : {AveragingMode::Raw, AveragingMode::Averaged}) {
            const TwistedCoefficients a(recs, vals.get(mode), X);
            for (int sign : {1, -1}) {
                const cplx s = weyl_sum(double(X) / 1.25, a, SmoothCutoff{}, sign);
                sums.push_back(s.real());
                sums.push_back(s.imag());
            }
        }
        if (shards == 1) {
            ref_csv = os.str();
            ref_sums = sums;
        } else {
            ok = ok && os.str() == ref_csv &&
                 std::memcmp(sums.data(), ref_sums.data(), sums.size() * sizeof(double)) == 0;
        }
    }
    return finish("determinism", ok,
                  "shards {1, 2, 8} at X = " + std::to_string(X) +
                      (ok ? ": byte-identical records, bit-identical Weyl sums" : ": OUTPUT DIFFERS"),
                  t);
}

std::vector<SuiteResult> run_verify(const VerifyOptions& opt, const std::function<void(const SuiteResult&)>& on_result) {
    const int n = opt.quick ? 20000 : 100000;
    const unsigned s = opt.seed;
    std::vector<std::function<SuiteResult()>> suites = {
        [&] { return suite_disc_invariance(n, s, opt.disc_fn); },
        [&] { return suite_real_disc_invariance(n / 10, s + 1); },
        [&] { return suite_pairing_involution(n, s + 2); },
        [&] { return suite_homomorphism(n, s + 3); },
        [&] { return suite_oracle(300); },
        [&] { return suite_orbit_soundness(300, opt.quick ? 20 : 100, s + 4); },
        [&] { return suite_convention(1000, s + 5); },
        [&] { return suite_shape_invariance(opt.quick ? 300 : 1000, s + 6); },
        [&] { return suite_singular(opt.quick ? 2000 : 10000, s + 7); },
        [&] { return suite_bessel(); },
        [&] { return suite_xi(); },
        [&] { return suite_eisenstein_lattice(10, s + 8); },
        [&] { return suite_eisenstein_functional(); },
        [&] {
            std::vector<TestFunction> phis = {TestFunction::constant(), TestFunction::eisenstein(cplx(0, 2), false),
                                              TestFunction::eisenstein(cplx(2, 0), true)};
            for (const auto& d : opt.maass) phis.push_back(TestFunction::maass(d));
            return suite_gamma_invariance(phis, opt.quick ? 200 : 1000, s + 9);
        },
        [&] { return suite_hecke(opt.maass); },
        [&] { return suite_spectral_roundtrip(s + 10); },
        [&] { return suite_two_route(opt.quick ? 2000 : 20000); },
        [&] { return suite_streaming(opt.quick ? 3000 : 20000); },
        [&] { return suite_determinism(opt.quick ? 3000 : 20000, TestFunction::eisenstein(cplx(0, 2), false)); },
    };
    std::vector<SuiteResult> out;
    for (auto& f : suites) {
        SuiteResult r;
        try {
            r = f();
        } catch (const std::exception& e) {
            r = {"suite", false, std::string("exception: ") + e.what(), 0};
        }
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cubic
