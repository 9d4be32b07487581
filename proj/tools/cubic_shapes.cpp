// cubic-shapes: enumeration, shapes, twisted sums and verification suites.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "cubic/enumerate.hpp"
#include "cubic/lseries.hpp"
#include "cubic/shapes.hpp"
#include "cubic/spectral.hpp"
#include "cubic/verify.hpp"

namespace fs = std::filesystem;
using namespace cubic;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kShortfall = 3, kVerify = 4, kNetwork = 5 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int threads = 1;
    int shards = 1;
    bool offline = false;
    std::string url_template = FetchOptions{}.url_template;
};

std::string g_command_line;

std::string metadata_block(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string s = "# cubic-shapes\n# command=" + g_command_line + "\n";
    for (const auto& [k, v] : kv) s += "# " + k + "=" + v + "\n";
    return s;
}

std::string fmt(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::int64_t parse_count(const std::string& s, const char* what) {
    double v = 0;
    try {
        std::size_t pos = 0;
        v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ConfigError(std::string("invalid ") + what + ": " + s);
    }
    if (!(v >= 1) || v > 1e12 || v != std::floor(v)) throw ConfigError(std::string(what) + " must be a positive integer");
    return std::int64_t(v);
}

double parse_real(const std::string& s, const std::string& whole) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("cannot parse complex number '" + whole + "'");
}

// "2", "2i", "-i", "0.5+3i", "1e-1-2.5i"
cplx parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    const std::string whole = s;
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.back() != 'i') return {parse_real(s, whole), 0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_real(re, whole), parse_real(im, whole)};
}

SmoothCutoff parse_cutoff(const std::string& s) {
    if (s.empty()) return {};
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 4) throw ConfigError("--cutoff expects alpha,alpha',beta',beta");
    try {
        return SmoothCutoff(v[0], v[1], v[2], v[3]);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

TestFunction parse_phi(const std::string& spec, const Common& c) {
    if (spec == "const") return TestFunction::constant();
    if (spec.rfind("eisenstein:", 0) == 0) {
        std::string rest = spec.substr(11);
        bool full = false;
        if (rest.size() > 5 && rest.substr(rest.size() - 5) == ":full") {
            full = true;
            rest.resize(rest.size() - 5);
        }
        try {
            return TestFunction::eisenstein(parse_complex(rest), full);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    if (spec.rfind("maass:", 0) == 0) {
        const std::string what = spec.substr(6);
        FetchOptions fo;
        fo.offline = c.offline;
        fo.url_template = c.url_template;
        if (fs::exists(what)) return TestFunction::maass(load(LocalFile{what}, fo));
        return TestFunction::maass(load(WebFetch{what, default_cache_dir()}, fo));
    }
    throw ConfigError("unknown --phi '" + spec + "' (const | eisenstein:<z>[:full] | maass:<file|label>)");
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(double(parse_count(item, "grid value")));
    if (v.empty()) throw ConfigError("empty X grid");
    return v;
}

void write_file(const std::string& path, const std::string& content) {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + path);
}

EnumerationOptions enum_opts(const Common& c) {
    if (c.threads < 1 || c.shards < 1) throw ConfigError("--threads and --shards must be positive");
    EnumerationOptions o;
    o.threads = c.threads;
    o.shards = c.shards;
    return o;
}

// Records through X: read from --records if given, otherwise enumerated. A
// records file states its coverage in a "# max_disc=" or
// "# max_disc_completed=" line.
std::vector<ClassRecord> obtain_records(const std::string& records_path, std::int64_t X, bool dual, const Common& c) {
    if (records_path.empty()) return enumerate_classes(X, dual, enum_opts(c));
    std::ifstream in(records_path);
    if (!in) throw ConfigError("cannot open " + records_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::int64_t covered = 0;
    static const std::regex cov(R"(# max_disc(?:_completed)?=([0-9]+))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), cov); it != std::sregex_iterator(); ++it)
        covered = std::max<std::int64_t>(covered, std::stoll((*it)[1].str()));
    if (text.find(std::string("# lattice=") + (dual ? "full" : "dual")) != std::string::npos)
        throw ConfigError(records_path + " was enumerated for the other lattice");
    if (covered < X)
        throw ShortfallError(records_path + " covers |disc| <= " + std::to_string(covered) + ", need " + std::to_string(X),
                             X);
    std::istringstream is(text);
    auto recs = read_records_csv(is);
    std::erase_if(recs, [&](const ClassRecord& r) { return std::abs(r.disc) > X; });
    std::sort(recs.begin(), recs.end(), record_less);
    return recs;
}

int cmd_enumerate(std::int64_t X, bool dual, std::string out, std::string ckpt, const Common& c) {
    if (out.empty()) out = std::string("classes_") + (dual ? "dual_" : "") + std::to_string(X) + ".csv";
    if (ckpt.empty()) ckpt = out + ".ckpt";
    // No command line here: the output must not depend on --shards or --threads.
    const std::string meta = std::string("# cubic-shapes enumerate\n# max_disc=") + std::to_string(X) + "\n";
    auto res = enumerate_checkpointed(ckpt, X, dual, enum_opts(c), 10000, meta);
    std::int64_t pos = 0, neg = 0;
    for (const auto& r : res.records) (r.disc > 0 ? pos : neg)++;
    if (res.no_op && fs::exists(out)) {
        std::cout << "up to date: checkpoint " << ckpt << " covers |disc| <= " << res.resumed_from << "\n";
    } else {
        std::ostringstream os;
        os << meta;
        write_records_csv(os, res.records);
        write_file(out, os.str());
        if (res.resumed_from > 0) std::cout << "resumed from |disc| <= " << res.resumed_from << "\n";
    }
    std::cout << "lattice " << (dual ? "dual" : "full") << ", 0 < |disc| <= " << X << ": " << pos << " positive, " << neg
              << " negative classes -> " << out << "\n";
    return kOk;
}

int cmd_shapes(std::int64_t X, bool dual, const std::string& records, std::string out, const Common& c) {
    const auto recs = obtain_records(records, X, dual, c);
    if (out.empty()) out = std::string("shapes_") + (dual ? "dual_" : "") + std::to_string(X) + ".csv";
    std::ostringstream os;
    os << metadata_block({{"max_disc", std::to_string(X)}, {"lattice", dual ? "dual" : "full"}, {"mode", "raw"}});
    os << "disc,a,b,c,d,x,y\n";
    for (const auto& r : recs) {
        const auto s = shape(r.rep);
        os << r.disc << ',' << r.rep.a << ',' << r.rep.b << ',' << r.rep.c << ',' << r.rep.d << ','
           << fmt(s.point.x, 12) << ',' << fmt(s.point.y, 12) << '\n';
    }
    write_file(out, os.str());
    std::cout << recs.size() << " shapes -> " << out << "\n";
    return kOk;
}

int cmd_weyl(const std::string& grid_s, const std::string& phi_s, bool dual, const std::string& mode_s,
             const std::string& cutoff_s, const std::string& records, std::string out, const Common& c) {
    const auto grid = parse_grid(grid_s);
    const SmoothCutoff psi = parse_cutoff(cutoff_s);
    if (mode_s != "raw" && mode_s != "averaged" && mode_s != "both")
        throw ConfigError("--mode must be raw, averaged or both");
    const TestFunction phi = parse_phi(phi_s, c);
    const auto X = std::int64_t(std::floor(psi.beta * *std::max_element(grid.begin(), grid.end())));
    const auto recs = obtain_records(records, X, dual, c);
    const Lattice lat = dual ? Lattice::Dual : Lattice::Full;
    const auto vals = phi_values(recs, phi, c.threads);
    if (out.empty()) out = "weyl";
    std::vector<AveragingMode> modes;
    if (mode_s != "averaged") modes.push_back(AveragingMode::Raw);
    if (mode_s != "raw") modes.push_back(AveragingMode::Averaged);
    for (auto mode : modes) {
        const auto t = weyl_table(grid, recs, X, vals, phi, psi, lat, mode);
        const std::string base = out + (modes.size() > 1 ? std::string("_") + to_string(mode) : "");
        std::ostringstream os;
        os << "# cubic-shapes\n# command=" << g_command_line << "\n";
        write_csv(os, t);
        write_file(base + ".csv", os.str());
        write_file(base + ".json", to_json(t) + "\n");
        std::cout << "mode " << to_string(mode) << " -> " << base << ".csv, " << base << ".json\n";
        for (const auto& r : t.rows)
            std::cout << "  X=" << fmt(r.X, 6) << " S+=" << fmt(r.S_plus.real(), 10) << (r.S_plus.imag() < 0 ? "" : "+")
                      << fmt(r.S_plus.imag(), 10) << "i S-=" << fmt(r.S_minus.real(), 10)
                      << (r.S_minus.imag() < 0 ? "" : "+") << fmt(r.S_minus.imag(), 10) << "i N+=" << fmt(r.N_plus, 10)
                      << " N-=" << fmt(r.N_minus, 10) << "\n";
    }
    return kOk;
}

int cmd_lseries(const std::string& s_str, std::int64_t M, const std::string& phi_s, bool dual, int sign,
                const std::string& mode_s, bool stream, const Common& c) {
    const cplx s = parse_complex(s_str);
    if (sign != 1 && sign != -1) throw ConfigError("--sign must be +1 or -1");
    if (mode_s != "raw" && mode_s != "averaged") throw ConfigError("--mode must be raw or averaged");
    const AveragingMode mode = mode_s == "raw" ? AveragingMode::Raw : AveragingMode::Averaged;
    const TestFunction phi = parse_phi(phi_s, c);
    const Lattice lat = dual ? Lattice::Dual : Lattice::Full;
    PartialL r;
    if (stream) {
        r = partial_L_streaming(s, M, phi, lat, sign, mode, enum_opts(c));
    } else {
        const auto recs = enumerate_classes(M, dual, enum_opts(c));
        const auto vals = phi_values(recs, phi, c.threads);
        r = partial_L(s, M, TwistedCoefficients(recs, vals.get(mode), M), sign);
    }
    std::cout << "phi=" << phi.describe() << " lattice=" << to_string(lat) << " sign=" << (sign > 0 ? "+" : "-")
              << " mode=" << to_string(mode) << "\n";
    std::cout << "L(s=" << s_str << ", M=" << M << ") = " << fmt(r.value.real(), 17) << " + " << fmt(r.value.imag(), 17)
              << "i\n";
    std::cout << "L(s, M/2)      = " << fmt(r.half_value.real(), 17) << " + " << fmt(r.half_value.imag(), 17) << "i\n";
    std::cout << "|difference|   = " << fmt(std::abs(r.value - r.half_value), 6) << "\n";
    std::cout << "tail: " << r.tail_note << "\n";
    return kOk;
}

int cmd_gphi(const std::string& x_str, const std::string& phi_s, std::int64_t T, const Common& c) {
    const cplx x = parse_complex(x_str);
    if (phi_s.rfind("maass:", 0) != 0) throw ConfigError("gphi needs --phi maass:<file|label>");
    const TestFunction phi = parse_phi(phi_s, c);
    const auto& data = *std::get<std::shared_ptr<const MaassFormData>>(phi.variant());
    for (auto [name, reading] : {std::pair{"plain", DualReading::Plain}, std::pair{"dual-A", DualReading::A},
                                 std::pair{"dual-B", DualReading::B}}) {
        try {
            const auto g = g_phi(x, data, T, reading);
            std::cout << name << ": " << fmt(g.value.real(), 17) << " + " << fmt(g.value.imag(), 17)
                      << "i  terms=" << g.terms << " tail<=" << fmt(g.tail_bound, 3) << "\n";
        } catch (const ShortfallError& e) {
            std::cout << name << ": " << e.what() << "\n";
            if (reading == DualReading::Plain) throw;
        }
    }
    return kOk;
}

int cmd_fetch(const std::string& label, const Common& c) {
    FetchOptions fo;
    fo.offline = c.offline;
    fo.url_template = c.url_template;
    const std::string dir = default_cache_dir();
    const auto d = fetch_remote(label, dir, fo);
    std::cout << "label " << label << ": t_phi=" << fmt(d.t_phi, 17) << " parity=" << (d.parity == Parity::Even ? "even" : "odd")
              << " N=" << d.size() << " hecke=" << fmt(hecke_check(d), 3) << " cached at " << cache_file(dir, label)
              << "\n";
    return kOk;
}

int cmd_verify(bool quick, bool convention_only, const std::vector<std::string>& maass_files) {
    if (convention_only) {
        const auto r = suite_convention(2000, 7);
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        return r.passed ? kOk : kVerify;
    }
    VerifyOptions opt;
    opt.quick = quick;
    for (const auto& f : maass_files) opt.maass.push_back(read_coefficient_file(f));
    bool all = true;
    run_verify(opt, [&](const SuiteResult& r) {
        all = all && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << fmt(r.seconds, 3) << " s]: " << r.detail
                  << std::endl;
    });
    std::cout << (all ? "verify: all suites passed" : "verify: FAILURES") << "\n";
    return all ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_command_line += (i ? " " : "") + std::string(argv[i]);
    CLI::App app{"Binary cubic form classes, their shapes, and automorphically twisted sums"};
    app.require_subcommand(1);
    Common c;
    auto common = [&](CLI::App* s) {
        s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
        s->add_option("--shards", c.shards, "enumeration shards")->check(CLI::PositiveNumber);
        s->add_flag("--offline", c.offline, "never touch the network");
        s->add_option("--url-template", c.url_template, "remote record URL; {label} is substituted");
    };

    std::string ls_mode = "averaged";
    std::string max_disc = "1000", out, ckpt, records, phi = "const", grid, mode = "both", cutoff, s_str = "5",
                x_str = "1", label, M_str = "1000", T_str = "100";
    bool dual = false, quick = false, convention = false, stream = false;
    int sign = 1;
    std::vector<std::string> maass_files;

    auto* en = app.add_subcommand("enumerate", "enumerate SL2(Z)-classes with 0 < |disc| <= X (checkpointed)");
    en->add_option("--max-disc", max_disc, "X")->required();
    en->add_flag("--dual", dual, "restrict to the dual lattice 3 | b, c");
    en->add_option("--out", out, "sorted CSV output");
    en->add_option("--checkpoint", ckpt, "checkpoint file (default <out>.ckpt)");
    common(en);

    auto* sh = app.add_subcommand("shapes", "fundamental-domain shape point of every class");
    sh->add_option("--max-disc", max_disc, "X")->required();
    sh->add_flag("--dual", dual);
    sh->add_option("--records", records, "reuse an enumeration CSV");
    sh->add_option("--out", out);
    common(sh);

    auto* we = app.add_subcommand("weyl", "smoothed twisted sums S(X) and counts N(X)");
    we->add_option("--max", grid, "X or comma-separated X grid")->required();
    we->add_option("--phi", phi, "const | eisenstein:<z>[:full] | maass:<file|label>");
    we->add_flag("--dual", dual);
    we->add_option("--mode", mode, "raw | averaged | both");
    we->add_option("--cutoff", cutoff, "alpha,alpha',beta',beta (default 0.5,0.75,1,1.25)");
    we->add_option("--records", records, "reuse an enumeration CSV");
    we->add_option("--out", out, "output prefix (writes .csv and .json)");
    common(we);

    auto* ls = app.add_subcommand("lseries", "truncated twisted Dirichlet series");
    ls->add_option("--s", s_str, "complex s");
    ls->add_option("--M", M_str, "truncation");
    ls->add_option("--phi", phi);
    ls->add_flag("--dual", dual);
    ls->add_option("--sign", sign, "+1 or -1");
    ls->add_option("--mode", ls_mode, "raw | averaged");
    ls->add_flag("--stream", stream, "accumulate band by band while enumerating");
    common(ls);

    auto* gp = app.add_subcommand("gphi", "double series over rho(l m) with both dual readings");
    gp->add_option("--x", x_str, "complex x");
    gp->add_option("--phi", phi, "maass:<file|label>")->required();
    gp->add_option("--T", T_str, "truncation l m <= T");
    common(gp);

    auto* fe = app.add_subcommand("fetch", "download and cache a Maass form record");
    fe->add_option("--label", label)->required();
    common(fe);

    auto* ve = app.add_subcommand("verify", "run the invariant suites");
    ve->add_flag("--quick", quick, "reduced sample sizes");
    ve->add_flag("--convention", convention, "only the half-plane convention self-test");
    ve->add_option("--maass-file", maass_files, "coefficient files to include")->check(CLI::ExistingFile);
    common(ve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*en) return cmd_enumerate(parse_count(max_disc, "--max-disc"), dual, out, ckpt, c);
        if (*sh) return cmd_shapes(parse_count(max_disc, "--max-disc"), dual, records, out, c);
        if (*we) return cmd_weyl(grid, phi, dual, mode, cutoff, records, out, c);
        if (*ls) return cmd_lseries(s_str, parse_count(M_str, "--M"), phi, dual, sign, ls_mode, stream, c);
        if (*gp) return cmd_gphi(x_str, phi, parse_count(T_str, "--T"), c);
        if (*fe) return cmd_fetch(label, c);
        if (*ve) return cmd_verify(quick, convention, maass_files);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ParseError& e) {
        std::cerr << "invalid data: " << e.what() << "\n";
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ShortfallError& e) {
        std::cerr << "data shortfall: " << e.what() << " (required " << e.required << ")\n";
        return kShortfall;
    } catch (const NetworkError& e) {
        std::cerr << "network: " << e.what() << "\n";
        return kNetwork;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
