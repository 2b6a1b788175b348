#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(E2ESPIN_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("e2espin_test_cli_" + name + ".json");
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("point prints a JSON report") {
    const Run r = run("point --theta-a 45 --theta-b -45");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["model"] == "pwba");
    CHECK(j["amplitudes"]["direct"]["re"].get<double>() == j["amplitudes"]["exchange"]["re"].get<double>());
    const fs::path cfg = write_config("anti", R"({"scenario": "antiparallel"})");
    const auto a = nlohmann::json::parse(run("point --config " + cfg.string() + " --theta-a 45 --theta-b -45").out);
    CHECK(a["concurrence"]["wootters"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scan writes CSV and PGM files") {
    const fs::path dir = fs::temp_directory_path() / "e2espin_test_cli_scan";
    fs::remove_all(dir);
    const fs::path cfg = write_config("scan", R"({"grid": {"theta_min_deg": 0, "theta_max_deg": 90, "step_deg": 30}})");
    const Run r = run("scan --config " + cfg.string() + " --output-dir " + dir.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "scan.csv"));
    CHECK(fs::exists(dir / "scan_tdcs.pgm"));
    CHECK(fs::exists(dir / "scan_bell_lhs.pgm"));
    fs::remove_all(dir);
}

TEST_CASE("bell-sim reports counts and an estimate") {
    const fs::path cfg = write_config("bell", R"({"scenario": "antiparallel"})");
    const Run r = run("bell-sim --config " + cfg.string() + " --theta-a 45 --theta-b -45 --n 20000 --seed 4");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["counts"].size() == 4);
    CHECK(std::abs(j["chsh_estimate"].get<double>() - j["chsh_exact"].get<double>()) <= 5 * j["chsh_stderr"].get<double>());
}

TEST_CASE("validate --quick succeeds") {
    const Run r = run("validate --quick");
    CHECK(r.code == 0);
    CHECK(r.out.find("all suites passed") != std::string::npos);
}

TEST_CASE("exit codes") {
    // usage and config errors
    CHECK(run("").code == 2);
    CHECK(run("point --theta-a 10").code == 2);
    CHECK(run("scan --model dwba").code == 2);
    CHECK(run("point --theta-a 10 --theta-b 20 --config " + write_config("bad", R"({"colour": 1})").string()).code == 2);
    CHECK(run("point --theta-a 10 --theta-b 20 --mc-samples 5").code == 2);
    // model errors
    CHECK(run("point --theta-a 200 --theta-b 20").code == 3);
    const fs::path par = write_config("par", R"({"scenario": "custom", "p1": [0, 0, 1], "p2": [0, 0, 1]})");
    CHECK(run("point --config " + par.string() + " --theta-a 40 --theta-b -40").code == 3);
    // a validation run whose Monte Carlo budget is too small fails its suites
    CHECK(run("validate --mc-samples 10").code == 4);
}
