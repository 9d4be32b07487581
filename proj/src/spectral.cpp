#include "cubic/spectral.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

namespace cubic {

namespace fs = std::filesystem;
using K = ParseError::Kind;

namespace {

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> out;
    while (!s.empty()) {
        auto nl = s.find('\n');
        auto line = s.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        if (nl == std::string_view::npos) break;
        s.remove_prefix(nl + 1);
    }
    return out;
}

double parse_double(std::string_view v, const std::string& what) {
    double x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ParseError(K::BadValue, "bad value for " + what + ": '" + std::string(v) + "'");
    return x;
}

std::string header_value(std::string_view line, std::string_view key, int lineno) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ParseError(K::MalformedHeader, "line " + std::to_string(lineno) + ": expected key=value");
    auto k = line.substr(0, eq);
    if (k != key) {
        if (k == "t_phi" || k == "parity" || k == "precision")
            throw ParseError(K::MalformedHeader, "line " + std::to_string(lineno) + ": expected key '" +
                                                     std::string(key) + "', found '" + std::string(k) + "'");
        throw ParseError(K::UnknownKey, "line " + std::to_string(lineno) + ": unknown key '" + std::string(k) + "'");
    }
    return std::string(line.substr(eq + 1));
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

MaassFormData parse_coefficient_file(std::string_view bytes) {
    auto lines = split_lines(bytes);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 4 || lines[0] != "#maass v1")
        throw ParseError(K::MalformedHeader, "expected '#maass v1' followed by t_phi, parity and precision lines");
    MaassFormData d;
    d.t_phi = parse_double(header_value(lines[1], "t_phi", 2), "t_phi");
    const auto par = header_value(lines[2], "parity", 3);
    if (par == "even")
        d.parity = Parity::Even;
    else if (par == "odd")
        d.parity = Parity::Odd;
    else
        throw ParseError(K::BadValue, "parity must be even or odd, got '" + par + "'");
    d.stated_precision = parse_double(header_value(lines[3], "precision", 4), "precision");
    for (std::size_t i = 4; i < lines.size(); ++i) {
        const auto line = lines[i];
        if (!line.empty() && line[0] == '#')
            throw ParseError(K::MalformedHeader, "line " + std::to_string(i + 1) + ": comment after header");
        auto sp = line.find(' ');
        if (sp == std::string_view::npos)
            throw ParseError(K::BadValue, "line " + std::to_string(i + 1) + ": expected '<n> <rho_n>'");
        std::int64_t n = 0;
        auto ns = line.substr(0, sp);
        auto [p, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
        if (ec != std::errc() || p != ns.data() + ns.size() || ns.empty())
            throw ParseError(K::BadValue, "line " + std::to_string(i + 1) + ": bad index");
        if (n != std::int64_t(d.coeffs.size()) + 1)
            throw ParseError(K::NonMonotoneIndex, "line " + std::to_string(i + 1) + ": index " + std::to_string(n) +
                                                      " where " + std::to_string(d.coeffs.size() + 1) +
                                                      " was expected (indices run 1, 2, 3, ...)");
        d.coeffs.push_back(parse_double(line.substr(sp + 1), "rho(" + std::to_string(n) + ")"));
    }
    validate(d);
    return d;
}

std::string serialize(const MaassFormData& d) {
    std::string s = "#maass v1\nt_phi=" + fmt17(d.t_phi) +
                    "\nparity=" + (d.parity == Parity::Even ? "even" : "odd") +
                    "\nprecision=" + fmt17(d.stated_precision) + "\n";
    for (std::size_t n = 1; n <= d.size(); ++n) s += std::to_string(n) + " " + fmt17(d.rho(n)) + "\n";
    return s;
}

MaassFormData read_coefficient_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open coefficient file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_coefficient_file(ss.str());
}

std::string default_cache_dir() {
    const char* e = std::getenv("CUBIC_SHAPES_CACHE");
    return e && *e ? e : "./.cache";
}

std::string cache_file(const std::string& cache_dir, const std::string& label) {
    std::string safe;
    for (char ch : label) safe += std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ? ch : '_';
    return (fs::path(cache_dir) / ("maass_" + safe + ".txt")).string();
}

MaassFormData parse_remote_payload(std::string_view body) {
    auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && body.substr(first).starts_with("#maass"))
        return parse_coefficient_file(body.substr(first));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(K::MalformedHeader, std::string("remote payload is neither a coefficient file nor JSON: ") +
                                                 e.what());
    }
    if (j.is_object() && j.contains("data")) {
        if (!j["data"].is_array() || j["data"].empty()) throw UnknownLabelError("remote database has no such record");
        j = j["data"][0];
    }
    auto num = [](const nlohmann::json& v, const char* what) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return parse_double(v.get<std::string>(), what);
        throw ParseError(K::BadValue, std::string("bad JSON value for ") + what);
    };
    if (!j.is_object() || !j.contains("spectral_parameter") || !j.contains("coefficients"))
        throw ParseError(K::MalformedHeader, "JSON record lacks spectral_parameter or coefficients");
    MaassFormData d;
    d.t_phi = num(j["spectral_parameter"], "spectral_parameter");
    const auto sym = j.value("symmetry", nlohmann::json(0));
    d.parity = num(sym, "symmetry") == 0 ? Parity::Even : Parity::Odd;
    if (j.contains("precision")) d.stated_precision = num(j["precision"], "precision");
    if (!j["coefficients"].is_array()) throw ParseError(K::BadValue, "coefficients must be an array");
    for (const auto& c : j["coefficients"]) d.coeffs.push_back(num(c, "coefficient"));
    validate(d);
    return d;
}

namespace {

std::string http_get(const std::string& url, int timeout) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("malformed URL " + url);
    auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client cli(origin);
    if (!cli.is_valid()) throw NetworkError("unsupported URL " + url);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_follow_location(true);
    auto res = cli.Get(path);
    if (!res) throw NetworkError("request to " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status == 404) throw UnknownLabelError("remote database has no record at " + url);
    if (res->status != 200) throw NetworkError("request to " + url + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

void write_atomically(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("cannot write cache file " + tmp);
        }
    }
    fs::rename(tmp, path);
}

}  // namespace

MaassFormData fetch_remote(const std::string& label, const std::string& cache_dir, const FetchOptions& opt) {
    const std::string path = cache_file(cache_dir, label);
    if (fs::exists(path)) {
        try {
            return read_coefficient_file(path);
        } catch (const ParseError& e) {
            std::cerr << "cache file " << path << " failed validation (" << e.what() << "); fetching again\n";
        }
    }
    if (opt.offline)
        throw NetworkError("offline mode and no valid cached data for Maass form '" + label + "' in " + cache_dir +
                           "; use an Eisenstein test function (--phi eisenstein:<z>) or a local coefficient file");
    std::string url = opt.url_template;
    const auto enc = httplib::detail::encode_query_param(label);
    for (auto pos = url.find("{label}"); pos != std::string::npos; pos = url.find("{label}", pos + enc.size()))
        url.replace(pos, 7, enc);
    const MaassFormData d = parse_remote_payload(http_get(url, opt.timeout_seconds));
    try {
        write_atomically(path, serialize(d));
    } catch (const std::exception& e) {
        std::cerr << "warning: " << e.what() << "; continuing without cache\n";
    }
    return d;
}

MaassFormData load(const SpectralSource& src, const FetchOptions& opt) {
    if (auto f = std::get_if<LocalFile>(&src)) return read_coefficient_file(f->path);
    if (auto w = std::get_if<WebFetch>(&src))
        return fetch_remote(w->label, w->cache_dir.empty() ? default_cache_dir() : w->cache_dir, opt);
    const auto& s = std::get<Synthetic>(src);
    return synthetic_maass(s.n, s.seed, s.t_phi, s.parity);
}

}  // namespace cubic
