#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

struct ClassRecord {
    std::int64_t disc = 0;
    IntegralCubicForm rep;
    int stabilizer_order = 1;
    bool in_dual = false;
    bool irreducible = false;

    bool operator==(const ClassRecord&) const = default;
};

// Sorted by disc, then rep.
bool record_less(const ClassRecord& x, const ClassRecord& y);

struct EnumerationOptions {
    int shards = 1;
    int threads = 1;
    std::int64_t max_records = 0;  // 0: unlimited
};

struct EnumerationReport {
    std::int64_t max_disc = 0;
    bool dual = false;
    std::int64_t positive = 0, negative = 0;
    double seconds = 0;
    int shards = 1;
};

// Classes with lo < |disc| <= hi.
std::vector<ClassRecord> enumerate_band(std::int64_t lo, std::int64_t hi, bool dual,
                                        const EnumerationOptions& opt = {});

std::vector<ClassRecord> enumerate_classes(std::int64_t X, bool dual, const EnumerationOptions& opt = {},
                                           EnumerationReport* report = nullptr);

// Scans the whole reduced bound box; oracle for X <= 10^4.
std::vector<ClassRecord> brute_force_classes(std::int64_t X, bool dual);

struct ClassNumber {
    std::int64_t h = 0;
    double weighted = 0;
    std::int64_t h_irreducible = 0;
};
std::map<std::int64_t, ClassNumber> class_numbers(const std::vector<ClassRecord>& records);

ClassRecord make_record(const IntegralCubicForm& canonical);

// GL2(Z) fusion: keeps one record per GL2(Z)-class (the least SL2 canonical form).
std::vector<ClassRecord> fuse_gl2(const std::vector<ClassRecord>& records);

// CSV: header "disc,a,b,c,d,stab,dual,irreducible"; '#' lines are metadata.
void write_records_csv(std::ostream& os, const std::vector<ClassRecord>& records);
std::string record_csv_line(const ClassRecord& r);
std::vector<ClassRecord> read_records_csv(std::istream& is);
inline constexpr const char* kRecordHeader = "disc,a,b,c,d,stab,dual,irreducible";

// Append-only checkpointed enumeration in bands of `band` discriminants. After
// each band the records are appended followed by "# max_disc_completed=<n>".
// On restart everything after the last marker is discarded. Returns the
// records through X.
struct CheckpointResult {
    std::vector<ClassRecord> records;
    std::int64_t resumed_from = 0;  // completed disc found on disk
    bool no_op = false;
};
CheckpointResult enumerate_checkpointed(const std::string& path, std::int64_t X, bool dual,
                                        const EnumerationOptions& opt = {}, std::int64_t band = 10000,
                                        const std::string& metadata = {});

}  // namespace cubic
