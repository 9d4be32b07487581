#include "cubic/enumerate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "cubic/reduction.hpp"
#include "cubic/shapes.hpp"

namespace cubic {

bool record_less(const ClassRecord& x, const ClassRecord& y) {
    if (x.disc != y.disc) return x.disc < y.disc;
    return x.rep < y.rep;
}

ClassRecord make_record(const IntegralCubicForm& f) {
    ClassRecord r;
    r.disc = checked::narrow(disc(f));
    r.rep = f;
    r.stabilizer_order = stabilizer_order(f);
    r.in_dual = in_dual_lattice(f);
    r.irreducible = is_irreducible(f);
    return r;
}

namespace {

struct WorkItem {
    int sign;
    std::int64_t a, b;
};

std::int64_t ceil_div(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if (n % d != 0 && ((n < 0) == (d < 0))) ++q;
    return q;
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) --q;
    return q;
}

std::int64_t isqrt(std::int64_t n) {
    std::int64_t r = std::int64_t(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

class BandScanner {
  public:
    BandScanner(std::int64_t lo, std::int64_t hi, bool dual)
        : lo_(lo), hi_(hi), dual_(dual), pos_(reduced_bound_box(hi, +1)), neg_(reduced_bound_box(hi, -1)) {}

    std::vector<WorkItem> items() const {
        std::vector<WorkItem> v;
        for (int sign : {+1, -1}) {
            const BoundBox& box = sign > 0 ? pos_ : neg_;
            for (std::int64_t b = 1; b <= box.leading_zero.b; ++b) v.push_back({sign, 0, b});
            for (std::int64_t a = 1; a <= box.leading_nonzero.a; ++a)
                for (std::int64_t b = -box.leading_nonzero.b; b <= box.leading_nonzero.b; ++b)
                    v.push_back({sign, a, b});
        }
        return v;
    }

    void run(const WorkItem& w, std::vector<IntegralCubicForm>& out) const {
        if (dual_ && w.b % 3 != 0) return;
        if (w.sign > 0) {
            if (w.a == 0)
                positive_leading_zero(w.b, out);
            else
                positive(w.a, w.b, out);
        } else {
            if (w.a == 0)
                negative_leading_zero(w.b, out);
            else
                negative(w.a, w.b, out);
        }
    }

  private:
    bool in_band(i128 D, int sign) const {
        const i128 m = sign > 0 ? D : -D;
        return m > lo_ && m <= hi_;
    }

    void emit(const IntegralCubicForm& f, std::vector<IntegralCubicForm>& out) const {
        out.push_back(reduce(f).canonical);
    }

    void positive(std::int64_t a, std::int64_t b, std::vector<IntegralCubicForm>& out) const {
        const std::int64_t pmax = isqrt(hi_);
        const std::int64_t c0 = ceil_div(b * b - pmax, 3 * a), c1 = floor_div(b * b - 1, 3 * a);
        for (std::int64_t c = c0; c <= c1; ++c) {
            if (dual_ && c % 3 != 0) continue;
            const std::int64_t P = b * b - 3 * a * c;
            const std::int64_t d0 = ceil_div(b * c - P, 9 * a), d1 = floor_div(b * c + P, 9 * a);
            for (std::int64_t d = d0; d <= d1; ++d) {
                if (c * c - 3 * b * d < P) continue;
                const IntegralCubicForm f{a, b, c, d};
                if (in_band(disc(f), +1)) emit(f, out);
            }
        }
    }

    void positive_leading_zero(std::int64_t b, std::vector<IntegralCubicForm>& out) const {
        // D = b^2 (c^2 - 4 b d), reduced Hessian: |c| <= b, c^2 - 3 b d >= b^2.
        for (std::int64_t c = -b; c <= b; ++c) {
            if (dual_ && c % 3 != 0) continue;
            const std::int64_t d0 = floor_div(c * c - hi_ / (b * b) - 1, 4 * b) - 1;
            const std::int64_t d1 = floor_div(c * c - 1, 4 * b) + 1;
            for (std::int64_t d = d0; d <= d1; ++d) {
                if (c * c - 3 * b * d < b * b) continue;
                const IntegralCubicForm f{0, b, c, d};
                if (in_band(disc(f), +1)) emit(f, out);
            }
        }
    }

    void negative_leading_zero(std::int64_t b, std::vector<IntegralCubicForm>& out) const {
        // |D| = b^2 (4 b d - c^2), reduced root point: |c| <= b <= d.
        for (std::int64_t c = -b; c <= b; ++c) {
            if (dual_ && c % 3 != 0) continue;
            const std::int64_t d0 = std::max(b, floor_div(lo_ / (b * b) + c * c, 4 * b) - 1);
            const std::int64_t d1 = floor_div(hi_ / (b * b) + c * c, 4 * b) + 1;
            for (std::int64_t d = d0; d <= d1; ++d) {
                const IntegralCubicForm f{0, b, c, d};
                const i128 D = disc(f);
                if (!in_band(D, -1)) continue;
                if (is_reduced(covariant_point(f), 1e-9)) emit(f, out);
            }
        }
    }

    // d with -hi <= D(d) < -lo, D(d) = -27 a^2 d^2 + beta d + gamma.
    void negative(std::int64_t a, std::int64_t b, std::vector<IntegralCubicForm>& out) const {
        const BoundBox& box = neg_;
        const double da = double(a), db = double(b);
        const std::int64_t dmax = box.leading_nonzero.d;
        for (std::int64_t c = -box.leading_nonzero.c; c <= box.leading_nonzero.c; ++c) {
            if (dual_ && c % 3 != 0) continue;
            const double dc = double(c);
            const double beta = 18 * da * db * dc - 4 * db * db * db;
            const double gamma = db * db * dc * dc - 4 * da * dc * dc * dc;
            const double A = 27 * da * da;
            // Outer interval: A d^2 - beta d - gamma - hi <= 0.
            const double disc_hi = beta * beta + 4 * A * (gamma + double(hi_));
            if (disc_hi < 0) continue;
            const double s_hi = std::sqrt(disc_hi);
            std::int64_t d0 = std::int64_t(std::floor((beta - s_hi) / (2 * A))) - 1;
            std::int64_t d1 = std::int64_t(std::ceil((beta + s_hi) / (2 * A))) + 1;
            d0 = std::max(d0, -dmax);
            d1 = std::min(d1, dmax);
            // Inner gap where D >= -lo is skipped.
            std::int64_t g0 = d1 + 1, g1 = d1;
            const double disc_lo = beta * beta + 4 * A * (gamma + double(lo_));
            if (lo_ > 0 && disc_lo > 0) {
                const double s_lo = std::sqrt(disc_lo);
                g0 = std::int64_t(std::ceil((beta - s_lo) / (2 * A))) + 1;
                g1 = std::int64_t(std::floor((beta + s_lo) / (2 * A))) - 1;
            }
            for (std::int64_t d = d0; d <= d1; ++d) {
                if (d >= g0 && d <= g1) {
                    d = g1;
                    continue;
                }
                const IntegralCubicForm f{a, b, c, d};
                const i128 D = disc(f);
                if (!in_band(D, -1)) continue;
                if (is_reduced(covariant_point(f), 1e-9)) emit(f, out);
            }
        }
    }

    std::int64_t lo_, hi_;
    bool dual_;
    BoundBox pos_, neg_;
};

void sort_unique(std::vector<IntegralCubicForm>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<ClassRecord> to_records(const std::vector<IntegralCubicForm>& reps, bool dual) {
    std::vector<ClassRecord> out;
    out.reserve(reps.size());
    for (const auto& f : reps) {
        if (dual && !in_dual_lattice(f)) continue;
        out.push_back(make_record(f));
    }
    std::sort(out.begin(), out.end(), record_less);
    return out;
}

}  // namespace

std::vector<ClassRecord> enumerate_band(std::int64_t lo, std::int64_t hi, bool dual, const EnumerationOptions& opt) {
    if (lo < 0 || hi < 1 || lo >= hi) throw DomainError("enumerate: invalid discriminant band");
    if (opt.shards < 1 || opt.threads < 1) throw DomainError("enumerate: shards and threads must be positive");
    const BandScanner scanner(lo, hi, dual);
    const auto items = scanner.items();
    const int shards = opt.shards;
    std::vector<std::vector<IntegralCubicForm>> found(shards);
    auto run_shard = [&](int s) {
        for (std::size_t i = s; i < items.size(); i += shards) scanner.run(items[i], found[s]);
        sort_unique(found[s]);
    };
    const int threads = std::min(opt.threads, shards);
    if (threads <= 1) {
        for (int s = 0; s < shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (int s = t; s < shards; s += threads) run_shard(s);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::vector<IntegralCubicForm> all;
    for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
    sort_unique(all);
    return to_records(all, dual);
}

std::vector<ClassRecord> enumerate_classes(std::int64_t X, bool dual, const EnumerationOptions& opt,
                                           EnumerationReport* report) {
    if (X < 1) throw DomainError("enumerate_classes: X must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ClassRecord> out;
    // Bands bound the working set and make the resource ceiling meaningful.
    const std::int64_t band = 100000;
    for (std::int64_t lo = 0; lo < X; lo += band) {
        auto part = enumerate_band(lo, std::min(X, lo + band), dual, opt);
        out.insert(out.end(), part.begin(), part.end());
        if (opt.max_records > 0 && std::int64_t(out.size()) > opt.max_records)
            throw ResourceError("enumerate_classes: record ceiling exceeded; completed |disc| <= " +
                                    std::to_string(lo),
                                lo);
    }
    std::sort(out.begin(), out.end(), record_less);
    if (report) {
        report->max_disc = X;
        report->dual = dual;
        report->positive = std::count_if(out.begin(), out.end(), [](const ClassRecord& r) { return r.disc > 0; });
        report->negative = std::int64_t(out.size()) - report->positive;
        report->shards = opt.shards;
        report->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return out;
}

std::vector<ClassRecord> brute_force_classes(std::int64_t X, bool dual) {
    if (X < 1 || X > 10000) throw DomainError("brute_force_classes: X must be in [1, 10^4]");
    std::vector<IntegralCubicForm> reps;
    for (int sign : {+1, -1}) {
        const BoundBox box = reduced_bound_box(X, sign);
        auto scan = [&](std::int64_t a, const CoefficientBox& cb) {
            for (std::int64_t b = -cb.b; b <= cb.b; ++b)
                for (std::int64_t c = -cb.c; c <= cb.c; ++c)
                    for (std::int64_t d = -cb.d; d <= cb.d; ++d) {
                        const IntegralCubicForm f{a, b, c, d};
                        if (dual && !in_dual_lattice(f)) continue;
                        const i128 D = disc(f);
                        if (D == 0 || (D > 0) != (sign > 0)) continue;
                        if ((D > 0 ? D : -D) > X) continue;
                        reps.push_back(reduce(f).canonical);
                    }
        };
        scan(0, box.leading_zero);
        for (std::int64_t a = -box.leading_nonzero.a; a <= box.leading_nonzero.a; ++a)
            if (a != 0) scan(a, box.leading_nonzero);
        sort_unique(reps);
    }
    return to_records(reps, dual);
}

std::map<std::int64_t, ClassNumber> class_numbers(const std::vector<ClassRecord>& records) {
    std::map<std::int64_t, ClassNumber> out;
    for (const auto& r : records) {
        auto& e = out[r.disc];
        e.h += 1;
        e.weighted += 1.0 / r.stabilizer_order;
        if (r.irreducible) e.h_irreducible += 1;
    }
    return out;
}

std::vector<ClassRecord> fuse_gl2(const std::vector<ClassRecord>& records) {
    std::vector<ClassRecord> out;
    for (const auto& r : records)
        if (gl2_canonical(r.rep) == r.rep) out.push_back(r);
    return out;
}

std::string record_csv_line(const ClassRecord& r) {
    std::ostringstream os;
    os << r.disc << ',' << r.rep.a << ',' << r.rep.b << ',' << r.rep.c << ',' << r.rep.d << ','
       << r.stabilizer_order << ',' << (r.in_dual ? 1 : 0) << ',' << (r.irreducible ? 1 : 0);
    return os.str();
}

void write_records_csv(std::ostream& os, const std::vector<ClassRecord>& records) {
    os << kRecordHeader << '\n';
    for (const auto& r : records) os << record_csv_line(r) << '\n';
}

namespace {

bool parse_record(const std::string& line, ClassRecord& r) {
    std::istringstream is(line);
    std::string tok;
    std::vector<std::int64_t> v;
    while (std::getline(is, tok, ',')) {
        std::size_t pos = 0;
        v.push_back(std::stoll(tok, &pos));
        if (pos != tok.size()) return false;
    }
    if (v.size() != 8) return false;
    r.disc = v[0];
    r.rep = {v[1], v[2], v[3], v[4]};
    r.stabilizer_order = int(v[5]);
    r.in_dual = v[6] != 0;
    r.irreducible = v[7] != 0;
    return true;
}

}  // namespace

std::vector<ClassRecord> read_records_csv(std::istream& is) {
    std::vector<ClassRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line == kRecordHeader) continue;
        ClassRecord r;
        try {
            if (!parse_record(line, r)) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError(ParseError::Kind::BadValue, "bad class record line: " + line);
        }
        out.push_back(r);
    }
    return out;
}

CheckpointResult enumerate_checkpointed(const std::string& path, std::int64_t X, bool dual,
                                        const EnumerationOptions& opt, std::int64_t band,
                                        const std::string& metadata) {
    namespace fs = std::filesystem;
    if (band < 1) throw DomainError("checkpoint band must be positive");
    const std::string lattice_line = std::string("# lattice=") + (dual ? "dual" : "full");
    const std::string marker = "# max_disc_completed=";
    CheckpointResult res;
    std::vector<ClassRecord> committed;
    std::int64_t done = 0;
    std::uintmax_t keep_bytes = 0;
    bool exists = fs::exists(path);
    if (exists) {
        std::ifstream in(path, std::ios::binary);
        std::string line;
        std::vector<ClassRecord> pending;
        std::uintmax_t offset = 0;
        bool lattice_seen = false;
        while (std::getline(in, line)) {
            offset += line.size() + 1;
            if (line.rfind(marker, 0) == 0) {
                done = std::stoll(line.substr(marker.size()));
                committed.insert(committed.end(), pending.begin(), pending.end());
                pending.clear();
                keep_bytes = offset;
            } else if (line.rfind("# lattice=", 0) == 0) {
                if (line != lattice_line) throw DomainError("checkpoint " + path + " was written for another lattice");
                lattice_seen = true;
                if (done == 0) keep_bytes = offset;
            } else if (line.empty() || line[0] == '#' || line == kRecordHeader) {
                if (done == 0) keep_bytes = offset;
            } else {
                ClassRecord r;
                if (!parse_record(line, r)) break;  // torn tail
                pending.push_back(r);
            }
        }
        if (!lattice_seen) throw DomainError("checkpoint " + path + " has no lattice header");
        in.close();
        fs::resize_file(path, keep_bytes);
    }
    res.resumed_from = done;
    if (done >= X) {
        res.no_op = true;
        for (const auto& r : committed)
            if ((r.disc > 0 ? r.disc : -r.disc) <= X) res.records.push_back(r);
        std::sort(res.records.begin(), res.records.end(), record_less);
        return res;
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open checkpoint " + path + " for writing");
    if (!exists) {
        if (!metadata.empty()) out << metadata;
        out << lattice_line << '\n' << kRecordHeader << '\n';
    }
    for (std::int64_t lo = done; lo < X;) {
        const std::int64_t hi = std::min(X, (lo / band + 1) * band);
        auto part = enumerate_band(lo, hi, dual, opt);
        for (const auto& r : part) out << record_csv_line(r) << '\n';
        out << marker << hi << '\n';
        out.flush();
        if (!out) throw Error("write failure on checkpoint " + path);
        committed.insert(committed.end(), part.begin(), part.end());
        lo = hi;
        if (opt.max_records > 0 && std::int64_t(committed.size()) > opt.max_records)
            throw ResourceError("record ceiling exceeded; checkpoint holds |disc| <= " + std::to_string(hi), hi);
    }
    std::sort(committed.begin(), committed.end(), record_less);
    res.records = std::move(committed);
    return res;
}

}  // namespace cubic
