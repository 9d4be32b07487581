#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cubic/automorphic.hpp"
#include "cubic/enumerate.hpp"
#include "cubic/shapes.hpp"

namespace cubic {

// psi: 0 outside [alpha, beta], 1 on [alpha_p, beta_p], e^(-1/t) ramps between.
struct SmoothCutoff {
    double alpha = 0.5, alpha_p = 0.75, beta_p = 1.0, beta = 1.25;

    SmoothCutoff() = default;
    SmoothCutoff(double a, double ap, double bp, double b);
    double operator()(double r) const;
    std::string describe() const;
};

enum class Lattice { Full, Dual };
const char* to_string(Lattice l);
const char* to_string(AveragingMode m);

// Fixed-shape binary tree sum; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// phi at the shape of each record. Averaged mode takes the mean over the
// stabilizer orbit of x+ (disc > 0); both modes agree for disc < 0.
struct PhiValues {
    std::vector<cplx> raw, averaged;
    const std::vector<cplx>& get(AveragingMode m) const { return m == AveragingMode::Raw ? raw : averaged; }
};
PhiValues phi_values(const std::vector<ClassRecord>& records, const TestFunction& phi, int threads = 1);

// a_phi(m) for every m covered by an enumeration.
class TwistedCoefficients {
  public:
    // records must be sorted by record_less and cover 0 < |disc| <= max_disc.
    TwistedCoefficients(const std::vector<ClassRecord>& records, const std::vector<cplx>& phi, std::int64_t max_disc);

    std::int64_t max_disc() const { return max_disc_; }
    // Zero when there are no classes; ShortfallError beyond max_disc.
    cplx operator()(std::int64_t m) const;

  private:
    std::int64_t max_disc_;
    std::map<std::int64_t, cplx> a_;
};

cplx a_phi(std::int64_t m, const std::vector<ClassRecord>& records, const std::vector<cplx>& phi);

cplx weyl_sum(double X, const TwistedCoefficients& a, const SmoothCutoff& psi, int sign);

struct PartialL {
    cplx value;
    cplx half_value;  // same sum truncated at M / 2
    bool certified = false;
    std::string tail_note;
};
PartialL partial_L(cplx s, std::int64_t M, const TwistedCoefficients& a, int sign);

// Enumerates band by band and accumulates while going; never holds all records.
PartialL partial_L_streaming(cplx s, std::int64_t M, const TestFunction& phi, Lattice lattice, int sign,
                             AveragingMode mode, const EnumerationOptions& opt = {}, std::int64_t band = 10000);

enum class DualReading { Plain, A, B };
struct GPhi {
    cplx value;
    double tail_bound = 0;  // infinite when Re x <= 0.12 (no certified bound)
    std::int64_t terms = 0;
};
GPhi g_phi(cplx x, const MaassFormData& data, std::int64_t T, DualReading reading);

struct WeylRow {
    double X = 0;
    cplx S_plus, S_minus;
    double N_plus = 0, N_minus = 0;
};

struct WeylSumTable {
    std::vector<WeylRow> rows;
    std::string phi, cutoff, mode, lattice, data_hash;
};
void write_csv(std::ostream& os, const WeylSumTable& t);
std::string to_json(const WeylSumTable& t);

WeylSumTable weyl_table(const std::vector<double>& X_grid, const std::vector<ClassRecord>& records,
                        std::int64_t max_disc, const PhiValues& phi, const TestFunction& phi_spec,
                        const SmoothCutoff& psi, Lattice lattice, AveragingMode mode);

struct SlopeFit {
    double slope = 0, stderr_ = 0;
};
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct DecayReport {
    WeylSumTable raw, averaged;
    SlopeFit N_plus, N_minus;
    SlopeFit S_plus_raw, S_minus_raw, S_plus_averaged, S_minus_averaged;
};
DecayReport decay_experiment(const std::vector<double>& X_grid, const std::vector<ClassRecord>& records,
                             std::int64_t max_disc, const TestFunction& phi, const SmoothCutoff& psi, Lattice lattice,
                             int threads = 1);

// git blob id (SHA-1 of "blob <len>\0" + bytes) of the enumeration CSV.
std::string data_hash(const std::vector<ClassRecord>& records);

}  // namespace cubic
