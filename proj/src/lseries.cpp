#include "cubic/lseries.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace cubic {

SmoothCutoff::SmoothCutoff(double a, double ap, double bp, double b) : alpha(a), alpha_p(ap), beta_p(bp), beta(b) {
    if (!(0 < a && a < ap && ap < bp && bp < b))
        throw DomainError("cutoff needs 0 < alpha < alpha' < beta' < beta");
}

namespace {

double smoothstep(double t) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    const double h0 = std::exp(-1 / t), h1 = std::exp(-1 / (1 - t));
    return h0 / (h0 + h1);
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
T tree_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const auto& x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return tree_sum(v.subspan(0, h)) + tree_sum(v.subspan(h));
}

}  // namespace

double SmoothCutoff::operator()(double r) const {
    if (r <= alpha || r >= beta) return 0;
    if (r < alpha_p) return smoothstep((r - alpha) / (alpha_p - alpha));
    if (r <= beta_p) return 1;
    return smoothstep((beta - r) / (beta - beta_p));
}

std::string SmoothCutoff::describe() const {
    return "smooth[" + fmt17(alpha) + "," + fmt17(alpha_p) + "," + fmt17(beta_p) + "," + fmt17(beta) + "]";
}

const char* to_string(Lattice l) { return l == Lattice::Full ? "full" : "dual"; }
const char* to_string(AveragingMode m) { return m == AveragingMode::Raw ? "raw" : "averaged"; }

double pairwise_sum(std::span<const double> v) { return tree_sum(v); }
cplx pairwise_sum(std::span<const cplx> v) { return tree_sum(v); }

PhiValues phi_values(const std::vector<ClassRecord>& records, const TestFunction& phi, int threads) {
    PhiValues out;
    out.raw.resize(records.size());
    out.averaged.resize(records.size());
    if (phi.is_constant()) {
        std::fill(out.raw.begin(), out.raw.end(), cplx(1));
        std::fill(out.averaged.begin(), out.averaged.end(), cplx(1));
        return out;
    }
    auto work = [&](std::size_t i) {
        const ShapeResult sh = shape(records[i].rep, AveragingMode::Averaged);
        std::vector<cplx> vals;
        for (const auto& p : sh.orbit) vals.push_back(phi.at(p));
        out.raw[i] = sh.orbit.front() == sh.point ? vals.front() : phi.at(sh.point);
        out.averaged[i] = pairwise_sum(std::span<const cplx>(vals)) / double(vals.size());
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < records.size(); ++i) work(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < records.size(); i += threads) work(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

TwistedCoefficients::TwistedCoefficients(const std::vector<ClassRecord>& records, const std::vector<cplx>& phi,
                                         std::int64_t max_disc)
    : max_disc_(max_disc) {
    if (records.size() != phi.size()) throw DomainError("phi values do not match the records");
    std::vector<cplx> terms;
    for (std::size_t i = 0; i < records.size();) {
        const std::int64_t m = records[i].disc;
        if (i > 0 && record_less(records[i], records[i - 1])) throw DomainError("records are not sorted");
        if (std::abs(m) > max_disc) throw DomainError("record beyond the stated enumeration range");
        terms.clear();
        for (; i < records.size() && records[i].disc == m; ++i) terms.push_back(phi[i] / double(records[i].stabilizer_order));
        a_[m] = pairwise_sum(std::span<const cplx>(terms));
    }
}

cplx TwistedCoefficients::operator()(std::int64_t m) const {
    if (m == 0) throw DomainError("a_phi: m must be nonzero");
    if (std::abs(m) > max_disc_)
        throw ShortfallError("a_phi: enumeration covers |disc| <= " + std::to_string(max_disc_) + ", need " +
                                 std::to_string(std::abs(m)),
                             std::abs(m));
    auto it = a_.find(m);
    return it == a_.end() ? cplx(0) : it->second;
}

cplx a_phi(std::int64_t m, const std::vector<ClassRecord>& records, const std::vector<cplx>& phi) {
    std::vector<cplx> terms;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].disc == m) terms.push_back(phi[i] / double(records[i].stabilizer_order));
    return pairwise_sum(std::span<const cplx>(terms));
}

cplx weyl_sum(double X, const TwistedCoefficients& a, const SmoothCutoff& psi, int sign) {
    if (!(X > 0)) throw DomainError("weyl_sum: X must be positive");
    const auto hi = std::int64_t(std::floor(psi.beta * X));
    if (hi > a.max_disc())
        throw ShortfallError("weyl_sum: enumeration must reach |disc| <= " + std::to_string(hi) + " (have " +
                                 std::to_string(a.max_disc()) + ")",
                             hi);
    const auto lo = std::max<std::int64_t>(1, std::int64_t(std::ceil(psi.alpha * X)));
    std::vector<cplx> terms;
    for (std::int64_t m = lo; m <= hi; ++m) {
        const double w = psi(double(m) / X);
        if (w != 0) terms.push_back(w * a(sign > 0 ? m : -m));
    }
    return pairwise_sum(std::span<const cplx>(terms));
}

namespace {

void certify(PartialL& r, cplx s) {
    r.certified = s.real() > 4;
    r.tail_note = r.certified ? "absolutely convergent (Re s > 4)" : "uncertified (Re s <= 4)";
}

cplx dirichlet_term(cplx a, std::int64_t m, cplx s) { return a * std::exp(-s * std::log(double(m))); }

}  // namespace

PartialL partial_L(cplx s, std::int64_t M, const TwistedCoefficients& a, int sign) {
    if (M < 1) throw DomainError("partial_L: M must be positive");
    if (M > a.max_disc()) throw ShortfallError("partial_L: enumeration does not reach M", M);
    std::vector<cplx> terms;
    for (std::int64_t m = 1; m <= M; ++m) terms.push_back(dirichlet_term(a(sign > 0 ? m : -m), m, s));
    PartialL r;
    r.value = pairwise_sum(std::span<const cplx>(terms));
    r.half_value = pairwise_sum(std::span<const cplx>(terms).subspan(0, std::size_t(M / 2)));
    certify(r, s);
    return r;
}

PartialL partial_L_streaming(cplx s, std::int64_t M, const TestFunction& phi, Lattice lattice, int sign,
                             AveragingMode mode, const EnumerationOptions& opt, std::int64_t band) {
    if (M < 1 || band < 1) throw DomainError("partial_L_streaming: M and band must be positive");
    PartialL r;
    cplx total = 0, half = 0;
    for (std::int64_t lo = 0; lo < M; lo += band) {
        const std::int64_t hi = std::min(M, lo + band);
        auto recs = enumerate_band(lo, hi, lattice == Lattice::Dual, opt);
        std::erase_if(recs, [&](const ClassRecord& c) { return (c.disc > 0) != (sign > 0); });
        const auto vals = phi_values(recs, phi, opt.threads);
        const TwistedCoefficients a(recs, vals.get(mode), hi);
        std::vector<cplx> terms, half_terms;
        for (std::int64_t m = lo + 1; m <= hi; ++m) {
            const cplx t = dirichlet_term(a(sign > 0 ? m : -m), m, s);
            terms.push_back(t);
            if (m <= M / 2) half_terms.push_back(t);
        }
        total += pairwise_sum(std::span<const cplx>(terms));
        half += pairwise_sum(std::span<const cplx>(half_terms));
    }
    r.value = total;
    r.half_value = half;
    certify(r, s);
    return r;
}

GPhi g_phi(cplx x, const MaassFormData& data, std::int64_t T, DualReading reading) {
    if (!(x.real() > -0.2)) throw DomainError("g_phi: needs Re x > -1/4 + 0.05");
    if (T < 1) throw DomainError("g_phi: T must be positive");
    const std::int64_t need = reading == DualReading::B ? 3 * T : T;
    if (std::size_t(need) > data.size())
        throw ShortfallError("g_phi: coefficient table too short; need N >= " + std::to_string(need), need);
    const double dil = reading == DualReading::Plain ? 1 : 3;
    std::vector<cplx> terms;
    for (std::int64_t l = 1; l <= T; ++l)
        for (std::int64_t m = 1; l * m <= T; ++m) {
            const double rho = data.rho(std::size_t(reading == DualReading::B ? 3 * l * m : l * m));
            terms.push_back(rho * std::exp(-(1.0 + x) * std::log(double(l)) - (1.0 + 3.0 * x) * std::log(dil * m)));
        }
    GPhi g;
    g.value = pairwise_sum(std::span<const cplx>(terms));
    g.terms = std::int64_t(terms.size());
    // sum over lm > T of 2 (c lm)^0.12 l^(-1-s) (dil m)^(-1-3s), c = 3 for reading B
    const double sig = x.real();
    const double pa = 0.12 - 1 - sig, pb = 0.12 - 1 - 3 * sig;
    if (pa >= -1 || pb >= -1) {
        g.tail_bound = std::numeric_limits<double>::infinity();
        return g;
    }
    auto tail_from = [](double p, double L0) {  // sum_{l >= L0} l^p, L0 >= 1
        return std::pow(L0, p) + std::pow(L0, p + 1) / (-p - 1);
    };
    double tail = 0;
    for (std::int64_t m = 1; m <= T; ++m) tail += std::pow(double(m), pb) * tail_from(pa, double(T / m + 1));
    tail += tail_from(pa, 1) * std::pow(double(T), pb + 1) / (-pb - 1);
    const double c = reading == DualReading::B ? std::pow(3.0, 0.12) : 1.0;
    g.tail_bound = 2 * c * std::pow(dil, -1 - 3 * sig) * tail;
    return g;
}

void write_csv(std::ostream& os, const WeylSumTable& t) {
    os << "# phi=" << t.phi << "\n# cutoff=" << t.cutoff << "\n# mode=" << t.mode << "\n# lattice=" << t.lattice
       << "\n# data_hash=" << t.data_hash << "\n# S columns hold real parts; see the JSON report for imaginary parts\n";
    os << "X,S_plus,S_minus,N_plus,N_minus\n";
    for (const auto& r : t.rows)
        os << fmt17(r.X) << ',' << fmt17(r.S_plus.real()) << ',' << fmt17(r.S_minus.real()) << ','
           << fmt17(r.N_plus) << ',' << fmt17(r.N_minus) << '\n';
}

std::string to_json(const WeylSumTable& t) {
    nlohmann::ordered_json j;
    j["metadata"] = {{"phi", t.phi}, {"cutoff", t.cutoff}, {"mode", t.mode}, {"lattice", t.lattice},
                     {"data_hash", t.data_hash}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows)
        j["rows"].push_back({{"X", r.X},
                             {"S_plus", {r.S_plus.real(), r.S_plus.imag()}},
                             {"S_minus", {r.S_minus.real(), r.S_minus.imag()}},
                             {"N_plus", r.N_plus},
                             {"N_minus", r.N_minus}});
    return j.dump(2);
}

WeylSumTable weyl_table(const std::vector<double>& X_grid, const std::vector<ClassRecord>& records,
                        std::int64_t max_disc, const PhiValues& phi, const TestFunction& phi_spec,
                        const SmoothCutoff& psi, Lattice lattice, AveragingMode mode) {
    const TwistedCoefficients a(records, phi.get(mode), max_disc);
    const TwistedCoefficients n(records, std::vector<cplx>(records.size(), 1.0), max_disc);
    WeylSumTable t;
    t.phi = phi_spec.describe();
    t.cutoff = psi.describe();
    t.mode = to_string(mode);
    t.lattice = to_string(lattice);
    t.data_hash = data_hash(records);
    for (double X : X_grid) {
        WeylRow r;
        r.X = X;
        r.S_plus = weyl_sum(X, a, psi, +1);
        r.S_minus = weyl_sum(X, a, psi, -1);
        r.N_plus = weyl_sum(X, n, psi, +1).real();
        r.N_minus = weyl_sum(X, n, psi, -1).real();
        t.rows.push_back(r);
    }
    return t;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_loglog: need at least two points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("fit_loglog: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += lx[i], my += ly[i];
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
    SlopeFit f;
    f.slope = sxy / sxx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ly[i] - my - f.slope * (lx[i] - mx);
            rss += e * e;
        }
        f.stderr_ = std::sqrt(rss / double(n - 2) / sxx);
    }
    return f;
}

DecayReport decay_experiment(const std::vector<double>& X_grid, const std::vector<ClassRecord>& records,
                             std::int64_t max_disc, const TestFunction& phi, const SmoothCutoff& psi, Lattice lattice,
                             int threads) {
    const PhiValues vals = phi_values(records, phi, threads);
    DecayReport rep;
    rep.raw = weyl_table(X_grid, records, max_disc, vals, phi, psi, lattice, AveragingMode::Raw);
    rep.averaged = weyl_table(X_grid, records, max_disc, vals, phi, psi, lattice, AveragingMode::Averaged);
    auto col = [&](const WeylSumTable& t, auto get) {
        std::vector<double> v;
        for (const auto& r : t.rows) v.push_back(get(r));
        return v;
    };
    const auto Xs = col(rep.raw, [](const WeylRow& r) { return r.X; });
    rep.N_plus = fit_loglog(Xs, col(rep.raw, [](const WeylRow& r) { return r.N_plus; }));
    rep.N_minus = fit_loglog(Xs, col(rep.raw, [](const WeylRow& r) { return r.N_minus; }));
    auto absfit = [&](const WeylSumTable& t, bool plus) {
        auto y = col(t, [plus](const WeylRow& r) { return std::abs(plus ? r.S_plus : r.S_minus); });
        if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0); })) return SlopeFit{};
        return fit_loglog(Xs, y);
    };
    rep.S_plus_raw = absfit(rep.raw, true);
    rep.S_minus_raw = absfit(rep.raw, false);
    rep.S_plus_averaged = absfit(rep.averaged, true);
    rep.S_minus_averaged = absfit(rep.averaged, false);
    return rep;
}

std::string data_hash(const std::vector<ClassRecord>& records) {
    std::ostringstream os;
    write_records_csv(os, records);
    const std::string body = os.str();
    const std::string blob = "blob " + std::to_string(body.size()) + std::string(1, '\0') + body;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw InternalError("SHA-1 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace cubic
