#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HOLO_CLI_PATH) + " " + args + " 2>cli_err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void put(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    f << body;
}

} // namespace

TEST_CASE("help succeeds, missing subcommand is a config error") {
    REQUIRE(run("--help >/dev/null") == 0);
    REQUIRE(run("") == 2);
    REQUIRE(run("frobnicate") == 2);
}

TEST_CASE("clarke sweep produces a reproducible CSV with the config embedded") {
    put("cli_clarke.json",
        R"({"count": 4, "spacings": [0.25, 0.5], "heights": [0.0, 0.5], "quadrature_nodes": 512})");
    REQUIRE(run("clarke --config cli_clarke.json --out cli_a.csv") == 0);
    REQUIRE(run("clarke --config cli_clarke.json --out cli_b.csv") == 0);
    const std::string a = slurp("cli_a.csv");
    REQUIRE(a == slurp("cli_b.csv"));
    REQUIRE(a.rfind("# config: ", 0) == 0);
    REQUIRE(a.find("# seed: 0") != std::string::npos);
    REQUIRE(a.find("spacing,h,spread_deg,diversity") != std::string::npos);
    // 2 spacings x 2 heights = 4 data rows
    int rows = 0;
    std::istringstream is(a);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#' && line[0] != 's') ++rows;
    REQUIRE(rows == 4);
    std::remove("cli_clarke.json");
    std::remove("cli_a.csv");
    std::remove("cli_b.csv");
}

TEST_CASE("seed flag changes the embedded seed") {
    put("cli_seed.json", R"({"count": 2, "spacings": [0.5], "quadrature_nodes": 256})");
    REQUIRE(run("clarke --config cli_seed.json --seed 99 --out cli_seed.csv") == 0);
    REQUIRE(slurp("cli_seed.csv").find("# seed: 99") != std::string::npos);
    std::remove("cli_seed.json");
    std::remove("cli_seed.csv");
}

TEST_CASE("unknown config keys are hard errors") {
    put("cli_typo.json", R"({"count": 4, "spacings": [0.5], "spacing": [0.5]})");
    REQUIRE(run("clarke --config cli_typo.json --out cli_t.csv") == 2);
    std::remove("cli_typo.json");
}

TEST_CASE("missing or malformed configs are config errors") {
    REQUIRE(run("clarke --config cli_nonexistent.json") == 2);
    put("cli_badjson.json", "{not json");
    REQUIRE(run("clarke --config cli_badjson.json") == 2);
    put("cli_missing_key.json", R"({"spacings": [0.5]})");
    REQUIRE(run("clarke --config cli_missing_key.json") == 2);
    std::remove("cli_badjson.json");
    std::remove("cli_missing_key.json");
}

TEST_CASE("capacity subcommand emits the full row schema in JSON too") {
    put("cli_cap.json",
        R"({"count": 3, "spacings": [0.5], "snr_db": [10.0, 20.0],)"
        R"( "trials": 50, "quadrature_nodes": 256, "seed": 7})");
    REQUIRE(run("capacity --config cli_cap.json --out cli_cap.csv") == 0);
    const std::string csv = slurp("cli_cap.csv");
    REQUIRE(csv.find("spacing,h,spread_deg,snr_db,diversity,capacity,ci95,seed") !=
            std::string::npos);
    REQUIRE(run("capacity --config cli_cap.json --format json --out cli_cap.json.out") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_cap.json.out"));
    REQUIRE(j.at("seed") == 7);
    REQUIRE(j.at("config").at("trials") == 50);
    REQUIRE(j.at("rows").size() == 2);
    std::remove("cli_cap.json");
    std::remove("cli_cap.csv");
    std::remove("cli_cap.json.out");
}

TEST_CASE("trials flag overrides the config") {
    put("cli_tr.json",
        R"({"count": 2, "spacings": [0.5], "snr_db": [10.0], "trials": 50,)"
        R"( "quadrature_nodes": 256})");
    REQUIRE(run("capacity --config cli_tr.json --trials 20 --format json --out cli_tr.out") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_tr.out"));
    REQUIRE(j.at("config").at("trials") == 20);
    std::remove("cli_tr.json");
    std::remove("cli_tr.out");
}

TEST_CASE("kronecker subcommand compares variants against the baseline") {
    put("cli_kron.json",
        R"({"variants": [{"name": "flat", "count": 3, "spacing": 0.4},)"
        R"( {"name": "raised", "count": 3, "spacing": 0.4, "height": 0.5}],)"
        R"( "snr_db": [10.0], "trials": 30})");
    REQUIRE(run("kronecker --config cli_kron.json --format json --out cli_kron.out") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_kron.out"));
    REQUIRE(j.at("rows").size() == 2);
    // baseline row reports zero increase over itself
    REQUIRE(std::stod(j.at("rows")[0][6].get<std::string>()) == 0.0);
    std::remove("cli_kron.json");
    std::remove("cli_kron.out");
}

TEST_CASE("gain subcommand reports gain against the planar limit") {
    put("cli_gain.json",
        R"({"variants": [{"name": "flat", "count": 5, "spacing": 0.5}],)"
        R"( "scan_deg": [0.0, 35.0]})");
    REQUIRE(run("gain --config cli_gain.json --format json --out cli_gain.out") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_gain.out"));
    REQUIRE(j.at("rows").size() == 2);
    // broadside gain equals the anchored limit
    const double g0 = std::stod(j.at("rows")[0][2].get<std::string>());
    const double l0 = std::stod(j.at("rows")[0][3].get<std::string>());
    REQUIRE(g0 == Catch::Approx(l0).margin(1e-9));
    std::remove("cli_gain.json");
    std::remove("cli_gain.out");
}

TEST_CASE("uma subcommand runs a small paired comparison") {
    put("cli_uma.json",
        R"({"scenario": {"dimensionality": "uma2d", "user_count": 15, "seed": 3},)"
        R"( "drops": 2, "capacity_trials": 20, "array": {"count": 3, "spacing": 0.4}})");
    REQUIRE(run("uma --config cli_uma.json --out cli_uma.csv") == 0);
    const std::string csv = slurp("cli_uma.csv");
    REQUIRE(csv.find("scenario,variant,diversity,capacity") != std::string::npos);
    REQUIRE(csv.find("uma2d,2d") != std::string::npos);
    REQUIRE(csv.find("uma2d,3d") != std::string::npos);
    // unknown scenario key is a config error
    put("cli_uma_bad.json", R"({"scenario": {"user_cont": 15}, "drops": 1})");
    REQUIRE(run("uma --config cli_uma_bad.json") == 2);
    std::remove("cli_uma.json");
    std::remove("cli_uma.csv");
    std::remove("cli_uma_bad.json");
}

TEST_CASE("parse-touchstone distinguishes parse errors from success") {
    put("cli_ok.s1p", "# GHz S RI R 50\n1 0.5 0\n");
    REQUIRE(run("parse-touchstone cli_ok.s1p >cli_ts.txt") == 0);
    const std::string out = slurp("cli_ts.txt");
    REQUIRE(out.find("ports: 1") != std::string::npos);
    REQUIRE(out.find("passive: yes") != std::string::npos);

    put("cli_bad.s1p", "# GHz S RI R 50\n1 zero 0\n");
    REQUIRE(run("parse-touchstone cli_bad.s1p >/dev/null") == 3);
    REQUIRE(run("parse-touchstone cli_gone.s1p >/dev/null") == 3);
    std::remove("cli_ok.s1p");
    std::remove("cli_bad.s1p");
    std::remove("cli_ts.txt");
    std::remove("cli_err.txt");
}
