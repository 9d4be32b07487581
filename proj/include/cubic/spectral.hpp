#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "cubic/automorphic.hpp"

namespace cubic {

// Coefficient file:
//   #maass v1
//   t_phi=<decimal>
//   parity=even|odd
//   precision=<decimal>
//   <n> <rho_n>      n = 1, 2, 3, ...
MaassFormData parse_coefficient_file(std::string_view bytes);
std::string serialize(const MaassFormData& data);

MaassFormData read_coefficient_file(const std::string& path);

struct LocalFile {
    std::string path;
};
struct WebFetch {
    std::string label;
    std::string cache_dir;
};
struct Synthetic {
    std::size_t n = 100;
    std::uint64_t seed = 1;
    double t_phi = 9.5;
    Parity parity = Parity::Even;
};
using SpectralSource = std::variant<LocalFile, WebFetch, Synthetic>;

struct FetchOptions {
    // "{label}" is replaced by the URL-encoded label.
    std::string url_template = "https://www.lmfdb.org/api/maass_newforms/?label={label}&_format=json";
    bool offline = false;
    int timeout_seconds = 30;
};

// $CUBIC_SHAPES_CACHE or ./.cache
std::string default_cache_dir();
std::string cache_file(const std::string& cache_dir, const std::string& label);

// Accepts either the coefficient file format or a JSON record with
// spectral_parameter, symmetry (0 even, 1 odd), coefficients and an optional
// precision; a {"data": [record]} envelope is unwrapped.
MaassFormData parse_remote_payload(std::string_view body);

MaassFormData fetch_remote(const std::string& label, const std::string& cache_dir, const FetchOptions& opt = {});

MaassFormData load(const SpectralSource& src, const FetchOptions& opt = {});

}  // namespace cubic
