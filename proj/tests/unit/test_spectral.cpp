#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <unistd.h>

#include "cubic/errors.hpp"
#include "cubic/spectral.hpp"

using namespace cubic;
namespace fs = std::filesystem;
using K = ParseError::Kind;

namespace {

const char* kMinimal = "#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1.0\n";

K kind_of(const std::string& text) {
    try {
        parse_coefficient_file(text);
    } catch (const ParseError& e) {
        return e.kind;
    }
    FAIL("no ParseError for:\n" << text);
    return K::BadValue;
}

std::string file_of(const MaassFormData& d) { return serialize(d); }

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cubic_spec_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Local stand-in for the remote database; counts requests.
struct FakeServer {
    httplib::Server srv;
    std::thread th;
    int port = 0;
    std::atomic<int> hits{0};
    std::string body;

    explicit FakeServer(std::string payload) : body(std::move(payload)) {
        srv.Get("/api", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            if (req.get_param_value("label") == "missing") {
                res.status = 404;
                return;
            }
            res.set_content(body, "application/json");
        });
        port = srv.bind_to_any_port("127.0.0.1");
        th = std::thread([this] { srv.listen_after_bind(); });
        srv.wait_until_ready();
    }
    ~FakeServer() {
        srv.stop();
        th.join();
    }
    FetchOptions options() const {
        FetchOptions o;
        o.url_template = "http://127.0.0.1:" + std::to_string(port) + "/api?label={label}";
        o.timeout_seconds = 5;
        return o;
    }
};

}  // namespace

TEST_CASE("minimal file") {
    const auto d = parse_coefficient_file(kMinimal);
    CHECK(d.t_phi == 9.5);
    CHECK(d.parity == Parity::Even);
    CHECK(d.stated_precision == 1e-12);
    CHECK(d.size() == 1);
    CHECK(d.rho(1) == 1.0);
}

TEST_CASE("round trip is exact") {
    for (std::uint64_t seed : {1u, 5u, 77u}) {
        const auto d = synthetic_maass(120, seed, 11.25, seed % 2 ? Parity::Odd : Parity::Even);
        CHECK(parse_coefficient_file(serialize(d)) == d);
    }
    const auto f = read_coefficient_file(std::string(CUBIC_TEST_DATA) + "/maass_level1_odd_9.53369.txt");
    CHECK(parse_coefficient_file(serialize(f)) == f);
}

TEST_CASE("each parse error kind") {
    CHECK(kind_of("maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1\n") == K::MalformedHeader);
    CHECK(kind_of("#maass v1\nparity=even\nt_phi=9.5\nprecision=1e-12\n1 1\n") == K::MalformedHeader);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nweight=0\n1 1\n") == K::UnknownKey);
    CHECK(kind_of("#maass v1\nt_phi=abc\nparity=even\nprecision=1e-12\n1 1\n") == K::BadValue);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=both\nprecision=1e-12\n1 1\n") == K::BadValue);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1\n3 0.5\n") == K::NonMonotoneIndex);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n2 1\n") == K::NonMonotoneIndex);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 0.9\n") == K::Normalization);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1\n2 50\n") == K::BoundViolation);
    // rho(4) must equal rho(2)^2 - 1
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1\n2 0.5\n3 0.1\n4 0.5\n") ==
          K::HeckeViolation);
    CHECK(kind_of("#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 1\n# trailing\n") == K::MalformedHeader);
}

TEST_CASE("hecke tolerance follows the stated precision") {
    const std::string base = "#maass v1\nt_phi=9.5\nparity=even\nprecision=";
    const std::string body = "\n1 1\n2 0.5\n3 0.1\n4 -0.74999\n";  // off by 1e-5
    CHECK(kind_of(base + "1e-12" + body) == K::HeckeViolation);
    CHECK_NOTHROW(parse_coefficient_file(base + "1e-5" + body));
}

TEST_CASE("JSON payloads") {
    const auto d = parse_remote_payload(
        R"({"data":[{"spectral_parameter":"9.5","symmetry":1,"precision":1e-12,"coefficients":[1,0.5,0.1,-0.75]}]})");
    CHECK(d.t_phi == 9.5);
    CHECK(d.parity == Parity::Odd);
    CHECK(d.size() == 4);
    CHECK_THROWS_AS(parse_remote_payload(R"({"data":[]})"), UnknownLabelError);
    CHECK_THROWS_AS(parse_remote_payload("<html>"), ParseError);
    CHECK(parse_remote_payload(kMinimal).t_phi == 9.5);
}

TEST_CASE("fetch: cache hit, corrupted cache and offline mode") {
    const auto data = synthetic_maass(40, 3);
    FakeServer server(file_of(data));
    const auto dir = scratch_dir("cache").string();
    const FetchOptions opt = server.options();

    CHECK(fetch_remote("1.1.1.1", dir, opt) == data);
    CHECK(server.hits == 1);
    CHECK(fs::exists(cache_file(dir, "1.1.1.1")));
    CHECK(fetch_remote("1.1.1.1", dir, opt) == data);
    CHECK(server.hits == 1);

    {
        std::ofstream out(cache_file(dir, "1.1.1.1"), std::ios::trunc);
        out << "#maass v1\nt_phi=9.5\nparity=even\nprecision=1e-12\n1 0.9\n";
    }
    CHECK(fetch_remote("1.1.1.1", dir, opt) == data);
    CHECK(server.hits == 2);
    CHECK(read_coefficient_file(cache_file(dir, "1.1.1.1")) == data);

    FetchOptions off = opt;
    off.offline = true;
    CHECK(fetch_remote("1.1.1.1", dir, off) == data);
    CHECK_THROWS_AS(fetch_remote("other", dir, off), NetworkError);
    CHECK(server.hits == 2);

    CHECK_THROWS_AS(fetch_remote("missing", dir, opt), UnknownLabelError);
    CHECK_FALSE(fs::exists(cache_file(dir, "missing")));
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("fetch: unreachable server") {
    FetchOptions opt;
    opt.url_template = "http://127.0.0.1:1/api?label={label}";
    opt.timeout_seconds = 2;
    CHECK_THROWS_AS(fetch_remote("x", scratch_dir("dead").string(), opt), NetworkError);
}

TEST_CASE("spectral sources") {
    const auto s = load(Synthetic{60, 4, 10.0, Parity::Odd});
    CHECK(s == synthetic_maass(60, 4, 10.0, Parity::Odd));
    const auto f = load(LocalFile{std::string(CUBIC_TEST_DATA) + "/maass_level1_even_13.77975.txt"});
    CHECK(f.parity == Parity::Even);
    CHECK(f.t_phi == doctest::Approx(13.779751351890738944));
    CHECK(cache_file("/c", "1.1/2:3") == "/c/maass_1.1_2_3.txt");
}
