#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "holo/io/pattern_csv.hpp"

using namespace holo;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path(name) {}
    TempFile(const std::string& name, const std::string& body) : path(name) {
        std::ofstream f(path);
        f << body;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("pattern grid round trip preserves the fields bit-exactly") {
    const auto p = element_over_reflector(0.37, 1.234, 91, 180);
    TempFile t("pg_rt.csv");
    save_pattern_grid(p, t.path);
    const auto q = load_pattern_grid(t.path);
    REQUIRE(q.n_theta() == p.n_theta());
    REQUIRE(q.n_phi() == p.n_phi());
    REQUIRE((q.e_theta == p.e_theta).all());
    REQUIRE((q.e_phi == p.e_phi).all());
    // axes pass through a fixed-point degree representation
    REQUIRE((q.theta_samples - p.theta_samples).abs().maxCoeff() < 1e-10);
    REQUIRE((q.phi_samples - p.phi_samples).abs().maxCoeff() < 1e-10);
}

TEST_CASE("translated pattern round trips too") {
    const auto p = translate_pattern(isotropic_pattern(21, 36), Vec3(0.3, -0.7, 1.1));
    TempFile t("pg_rt2.csv");
    save_pattern_grid(p, t.path);
    const auto q = load_pattern_grid(t.path);
    REQUIRE((q.e_theta == p.e_theta).all());
    REQUIRE((q.e_phi == p.e_phi).all());
}

TEST_CASE("header line must match exactly") {
    TempFile t("pg_hdr.csv", "theta,phi,re,im,re,im\n0.00,0.00,1,0,0,0\n");
    try {
        load_pattern_grid(t.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(e.line() == 1);
    }
}

TEST_CASE("NaN field values are data errors") {
    std::string body = std::string(pattern_csv_header) + "\n";
    body += "0.00,0.00,1,0,0,0\n0.00,180.00,1,0,0,0\n";
    body += "90.00,0.00,nan,0,0,0\n90.00,180.00,1,0,0,0\n";
    TempFile t("pg_nan.csv", body);
    REQUIRE_THROWS_AS(load_pattern_grid(t.path), data_error);
}

TEST_CASE("truncated theta block is a parse error") {
    std::string body = std::string(pattern_csv_header) + "\n";
    body += "0.00,0.00,1,0,0,0\n0.00,180.00,1,0,0,0\n";
    body += "90.00,0.00,1,0,0,0\n"; // second block missing a row
    TempFile t("pg_trunc.csv", body);
    REQUIRE_THROWS_AS(load_pattern_grid(t.path), parse_error);
}

TEST_CASE("rows out of grid order are format errors") {
    std::string body = std::string(pattern_csv_header) + "\n";
    body += "0.00,0.00,1,0,0,0\n0.00,180.00,1,0,0,0\n";
    body += "90.00,180.00,1,0,0,0\n90.00,0.00,1,0,0,0\n"; // phi swapped
    TempFile t("pg_order.csv", body);
    REQUIRE_THROWS_AS(load_pattern_grid(t.path), format_error);
}

TEST_CASE("descending theta blocks are format errors") {
    std::string body = std::string(pattern_csv_header) + "\n";
    body += "90.00,0.00,1,0,0,0\n90.00,180.00,1,0,0,0\n";
    body += "0.00,0.00,1,0,0,0\n0.00,180.00,1,0,0,0\n";
    TempFile t("pg_desc.csv", body);
    REQUIRE_THROWS_AS(load_pattern_grid(t.path), format_error);
}

TEST_CASE("short rows and empty files are parse errors") {
    TempFile empty("pg_empty.csv", "");
    REQUIRE_THROWS_AS(load_pattern_grid(empty.path), parse_error);
    TempFile header_only("pg_honly.csv", std::string(pattern_csv_header) + "\n");
    REQUIRE_THROWS_AS(load_pattern_grid(header_only.path), parse_error);
    TempFile short_row("pg_short.csv",
                       std::string(pattern_csv_header) + "\n0.00,0.00,1,0\n");
    REQUIRE_THROWS_AS(load_pattern_grid(short_row.path), parse_error);
    REQUIRE_THROWS_AS(load_pattern_grid("pg_missing.csv"), io_error);
}

TEST_CASE("windows line endings are tolerated") {
    std::string body = std::string(pattern_csv_header) + "\r\n";
    body += "0.00,0.00,1,0,0,0\r\n0.00,180.00,1,0,0,0\r\n";
    body += "90.00,0.00,1,0,0,0\r\n90.00,180.00,1,0,0,0\r\n";
    TempFile t("pg_crlf.csv", body);
    const auto p = load_pattern_grid(t.path);
    REQUIRE(p.n_theta() == 2);
    REQUIRE(p.n_phi() == 2);
}
