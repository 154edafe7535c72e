#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// end-to-end tests against the installed binary
#ifndef OPNLAB_CLI
#error "OPNLAB_CLI must point at the opnlab binary"
#endif
#ifndef OPNLAB_GOLDEN_DIR
#error "OPNLAB_GOLDEN_DIR must point at tests/golden"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(OPNLAB_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name) {
    return read_file(std::string(OPNLAB_GOLDEN_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("verify: valid candidate, json payload") {
    auto res = run("verify --p 17 --k 1 --m 5 --format json");
    CHECK(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j["valid"] == true);
    CHECK(j["gap"]["gap"] == "8");
    CHECK(j["case"] == "Case4");
    CHECK(j["perfect"] == false);
    CHECK(j["n"] == "425");
}

TEST_CASE("verify: golden json output") {
    auto res = run("verify --p 17 --k 1 --m 5 --format json");
    CHECK(res.exit_code == 0);
    CHECK(res.out == golden("verify_17_1_5.json"));
}

TEST_CASE("verify: rejection exits 2 and names the defect") {
    auto res = run("verify --p 7 --k 1 --m 3 --format json");
    CHECK(res.exit_code == 2);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j["valid"] == false);
    CHECK(j["defects"][0] == "BadResidue");
}

TEST_CASE("verify: unparseable argument exits 64") {
    CHECK(run("verify --p 17 --k 1 --m abc").exit_code == 64);
}

TEST_CASE("classify: golden one-line outputs") {
    auto res = run("classify --p 61 --k 1 --m 9");
    CHECK(res.exit_code == 0);
    CHECK(res.out == "r=2 t=5 case=1 verdict=m<p^k\n");

    res = run("classify --p 13 --k 1 --m 7");
    CHECK(res.exit_code == 0);
    CHECK(res.out == "r=2 t=9 case=3 verdict=open sandwich=(4,9)\n");
}

TEST_CASE("classify: non-positive gap exits 2") {
    CHECK(run("classify --p 5 --k 1 --m 1").exit_code == 2);
}

TEST_CASE("scan: golden csv for the single-record range") {
    auto res = run("scan --m-max 3 --pk-max 5 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out == golden("scan_3_5.csv"));
}

TEST_CASE("scan: json single document") {
    auto res = run("scan --m-max 3 --pk-max 5 --format json");
    CHECK(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.out);
    REQUIRE(j["records"].size() == 1);
    CHECK(j["records"][0]["p"] == "5");
    CHECK(j["records"][0]["case"] == "Case4");
    CHECK(j["summary"]["total_candidates"] == 1);
    CHECK(j["summary"]["violations"].empty());
}

TEST_CASE("scan: invalid range exits 64") {
    CHECK(run("scan --m-max 0 --pk-max 5").exit_code == 64);
}

TEST_CASE("scan: unwritable output path exits 74") {
    CHECK(run("scan --m-max 3 --pk-max 5 --out /nonexistent-dir/r.csv").exit_code == 74);
}

TEST_CASE("scan: --out writes the records file") {
    std::string path = "cli_scan_out.csv";
    auto res = run("scan --m-max 9 --pk-max 100 --out " + path);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("total=") == 0);  // summary on stdout
    auto content = read_file(path);
    CHECK(content.find("p,k,m,pk,gap") == 0);
    std::remove(path.c_str());
}

TEST_CASE("sigma: profile with and without pretend primes") {
    auto res = run("sigma --n 45 --format json");
    CHECK(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j["sigma"] == "78");
    CHECK(j["deficiency"] == "12");
    CHECK(j["aliquot"] == "33");
    CHECK(j["abundancy"] == "26/15");

    res = run("sigma --n 198585576189 --pretend-prime 22021 --format json");
    CHECK(res.exit_code == 0);
    j = nlohmann::json::parse(res.out);
    CHECK(j["deficiency"] == "0");  // the Descartes spoof poses as perfect
}

TEST_CASE("nearest-square subcommand") {
    auto res = run("nearest-square --gap 40 --format json");
    CHECK(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j["q"] == "7");
    CHECK(j["surplus"] == "9");
    CHECK(j["gap_is_square"] == false);
}

TEST_CASE("usage error without subcommand") {
    CHECK(run("").exit_code == 64);
}
