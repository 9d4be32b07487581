// Acceptance criteria 1-9; one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubic/enumerate.hpp"
#include "cubic/lseries.hpp"
#include "cubic/spectral.hpp"
#include "cubic/verify.hpp"

using namespace cubic;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Verdict from_suites(const std::vector<SuiteResult>& rs) {
    Verdict v{true, ""};
    for (const auto& r : rs) {
        v.pass = v.pass && r.passed;
        v.detail += (v.detail.empty() ? "" : " | ") + r.name + (r.passed ? " ok: " : " FAILED: ") + r.detail;
    }
    return v;
}

// Enumeration through 1.25e5 shared by criteria 2 and 3.
const std::vector<ClassRecord>& big_records(int threads) {
    static std::vector<ClassRecord> recs;
    if (recs.empty()) {
        EnumerationOptions opt;
        opt.threads = threads;
        opt.shards = threads;
        recs = enumerate_classes(125000, false, opt);
    }
    return recs;
}

double cumulative_irreducible(const std::vector<ClassRecord>& recs, std::int64_t X, int sign) {
    std::int64_t n = 0;
    for (const auto& r : recs)
        if (r.irreducible && (r.disc > 0) == (sign > 0) && std::abs(r.disc) <= X) ++n;
    return double(n);
}

Verdict criterion1() {
    const auto r = suite_oracle(300);
    return {r.passed && r.seconds <= 60, r.detail + fmt(", %.1f s (limit 60 s)", r.seconds)};
}

Verdict criterion2(int threads) {
    const auto& recs = big_records(threads);
    const std::vector<double> grid = {1e3, 1e4, 1e5};
    const auto rep = decay_experiment(grid, recs, 125000, TestFunction::constant(), {}, Lattice::Full, threads);
    const bool exp_ok = rep.N_plus.slope >= 0.9 && rep.N_plus.slope <= 1.1 && rep.N_minus.slope >= 0.9 &&
                        rep.N_minus.slope <= 1.1;
    const double cp = std::numbers::pi * std::numbers::pi / 72, cm = std::numbers::pi * std::numbers::pi / 24;
    const double sp = cumulative_irreducible(recs, 100000, 1) / 1e5, sm = cumulative_irreducible(recs, 100000, -1) / 1e5;
    const auto gl2 = fuse_gl2(recs);
    const double gp = cumulative_irreducible(gl2, 100000, 1) / 1e5, gm = cumulative_irreducible(gl2, 100000, -1) / 1e5;
    auto within = [](double v, double c) { return std::abs(v / c - 1) <= 0.10; };
    const bool dav_ok = within(sp, cp) && within(sm, cm);
    std::string d = "N+ exponent " + fmt("%.4f", rep.N_plus.slope) + fmt(" +- %.4f", rep.N_plus.stderr_) +
                    ", N- exponent " + fmt("%.4f", rep.N_minus.slope) + fmt(" +- %.4f", rep.N_minus.stderr_) +
                    (exp_ok ? " (in [0.9, 1.1])" : " (OUTSIDE [0.9, 1.1])") + "; irreducible SL2 classes / X at 1e5: " +
                    fmt("+ %.5f", sp) + fmt(" (%+.1f%%", 100 * (sp / cp - 1)) + fmt(" vs %.5f)", cp) +
                    fmt(", - %.5f", sm) + fmt(" (%+.1f%%", 100 * (sm / cm - 1)) + fmt(" vs %.5f)", cm) +
                    "; GL2 classes: " + fmt("+ %.5f", gp) + fmt(", - %.5f", gm) + " (tolerance 10%)";
    return {exp_ok && dav_ok, d};
}

Verdict criterion3(int threads) {
    const auto& recs = big_records(threads);
    const std::vector<double> grid = {1e3, 1e4, 1e5};
    const auto rep = decay_experiment(grid, recs, 125000, TestFunction::eisenstein(cplx(0, 2), false), {},
                                      Lattice::Full, threads);
    bool ok = true;
    std::string d;
    for (const auto* t : {&rep.raw, &rep.averaged}) {
        const auto& lo = t->rows.front();
        const auto& hi = t->rows.back();
        for (int sign : {1, -1}) {
            const double r0 = std::abs(sign > 0 ? lo.S_plus : lo.S_minus) / (sign > 0 ? lo.N_plus : lo.N_minus);
            const double r1 = std::abs(sign > 0 ? hi.S_plus : hi.S_minus) / (sign > 0 ? hi.N_plus : hi.N_minus);
            const bool halved = r1 < 0.5 * r0;
            ok = ok && halved;
            d += (d.empty() ? "" : "; ") + t->mode + (sign > 0 ? " +" : " -") + fmt(": |S|/N %.3e", r0) +
                 fmt(" -> %.3e", r1) + fmt(" (ratio %.2f", r1 / r0) + (halved ? ", halved)" : ", NOT halved)");
        }
    }
    d += fmt("; |S+| slope raw %.2f", rep.S_plus_raw.slope) + fmt(", averaged %.2f", rep.S_plus_averaged.slope) +
         fmt("; |S-| slope %.2f", rep.S_minus_raw.slope);
    return {ok, d};
}

Verdict criterion4() {
    return from_suites({suite_disc_invariance(100000, 41), suite_pairing_involution(100000, 42),
                        suite_homomorphism(100000, 43)});
}

Verdict criterion5() {
    return from_suites({suite_bessel(), suite_xi(), suite_eisenstein_lattice(10, 51), suite_eisenstein_functional()});
}

Verdict criterion6(const std::vector<MaassFormData>& maass) {
    std::vector<TestFunction> phis = {TestFunction::eisenstein(cplx(0, 2), false),
                                      TestFunction::eisenstein(cplx(2, 0), true)};
    for (const auto& d : maass) phis.push_back(TestFunction::maass(d));
    return from_suites({suite_gamma_invariance(phis, 1000, 61), suite_shape_invariance(1000, 62)});
}

Verdict criterion7() { return from_suites({suite_singular(10000, 71)}); }

Verdict criterion8(const std::vector<MaassFormData>& maass) { return from_suites({suite_hecke(maass)}); }

Verdict criterion9() { return from_suites({suite_determinism(20000, TestFunction::eisenstein(cplx(0, 2), false))}); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> expect_red, only;
    std::vector<std::string> maass_files;
    int threads = 1;
    app.add_option("--expect-red", expect_red, "criteria known to fail")->delimiter(',');
    app.add_option("--only", only, "run a subset")->delimiter(',');
    app.add_option("--maass-file", maass_files, "coefficient files used as ingested data");
    app.add_option("--threads", threads)->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::vector<MaassFormData> maass;
    for (const auto& f : maass_files) maass.push_back(read_coefficient_file(f));

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"oracle equivalence", criterion1},
        {"linear growth", [&] { return criterion2(threads); }},
        {"equidistribution trend", [&] { return criterion3(threads); }},
        {"exact invariance", criterion4},
        {"automorphic numerics", criterion5},
        {"Gamma-invariance", [&] { return criterion6(maass); }},
        {"singular round trip", criterion7},
        {"Hecke", [&] { return criterion8(maass); }},
        {"determinism", criterion9},
    };
    const double limits[] = {60, 600, 900, 0, 0, 0, 0, 0, 0};
    const std::set<int> red(expect_red.begin(), expect_red.end());
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (limits[i] > 0 && secs > limits[i]) {
            v.pass = false;
            v.detail += fmt("; runtime over the %.0f s limit", limits[i]);
        }
        const bool expected_red = red.count(id) > 0;
        std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ["
                  << fmt("%.1f s", secs) << "]" << (expected_red && !v.pass ? "  (expected red)" : "") << "\n    "
                  << v.detail << std::endl;
        if (v.pass == expected_red) {
            ++unexpected;
            if (expected_red) std::cout << "    criterion " << id << " passed but is listed in --expect-red\n";
        }
    }
    std::cout << (unexpected == 0 ? "acceptance: as expected" : "acceptance: UNEXPECTED RESULTS") << "\n";
    return unexpected == 0 ? 0 : 1;
}
