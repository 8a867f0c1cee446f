#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run ppe(const std::string& args) {
    const std::string cmd = std::string(PPE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ppe_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("cli_steady_json") {
    const Run r = ppe("--json steady --model toy --N 1 --w 1");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["observables"]["Sz"].get<double>() == doctest::Approx(-2.0 / 8.5));
    CHECK(j["method"] == "dense-svd");
}

TEST_CASE("cli_steady_text_and_rho") {
    const Run r = ppe("steady --N 2 --w 0.5 --phi 1 --rho");
    CHECK(r.code == 0);
    CHECK(r.out.find("intensity") != std::string::npos);
    CHECK(r.out.find("rho") != std::string::npos);
}

TEST_CASE("cli_phase_routes_agree") {
    const json a = json::parse(ppe("--json steady --N 2 --w 2 --phi 1.2 --phase-in jump").out);
    const json b = json::parse(ppe("--json steady --N 2 --w 2 --phi 1.2 --phase-in observable").out);
    CHECK(a["observables"]["intensity"].get<double>() ==
          doctest::Approx(b["observables"]["intensity"].get<double>()).epsilon(1e-9));
}

TEST_CASE("cli_usage_errors") {
    CHECK(ppe("").code == 2);
    CHECK(ppe("steady --N x").code == 2);
    CHECK(ppe("steady --k-max 9").code == 2);
    CHECK(ppe("steady --model laser").code == 2);
    CHECK(ppe("steady --w -1").code == 2);
    CHECK(ppe("--help").code == 0);
}

TEST_CASE("cli_json_error_object") {
    const Run r = ppe("--json steady --model interacting --phi 1");
    CHECK(r.code == 2);
    const json j = json::parse(r.out);
    CHECK(j["error"]["type"] == "invalid-argument");
}

TEST_CASE("cli_degenerate_is_failure") {
    const Run r = ppe("--json steady --N 2 --w 0");
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["error"]["type"] == "failure");
}

TEST_CASE("cli_spectrum_outputs") {
    const fs::path dir = scratch("spectrum");
    const Run r = ppe("spectrum --N 1 --w 5 --per-mode --points 2001 --output " + (dir / "s.csv").string() +
                      " --svg " + (dir / "s.svg").string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("double") != std::string::npos);
    CHECK(r.out.find("mode_1") != std::string::npos);
    std::ifstream in(dir / "s.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("omega,S,mode_1", 0) == 0);
    CHECK(fs::exists(dir / "s.svg"));
    fs::remove_all(dir);
}

TEST_CASE("cli_spectrum_json") {
    const json j = json::parse(ppe("--json spectrum --N 1 --w 5 --phi 3.141592653589793 --points 1001").out);
    CHECK(j["peak_structure"] == "single");
    CHECK(j["S"].size() == 1001);
}

TEST_CASE("cli_sweep_and_classify") {
    const fs::path dir = scratch("sweep");
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << json{{"model", {{"model", "toy"}, {"N", 2}}},
                    {"axis1", {{"parameter", "w"}, {"min", 0.5}, {"max", 2.0}, {"count", 2}}},
                    {"axis2", {{"parameter", "phi"}, {"min", 0.0}, {"max", 3.0}, {"count", 2}}},
                    {"spectrum", {{"points", 801}}},
                    {"output", {{"directory", (dir / "out").string()}, {"name", "g"}}}};
    }
    const Run s = ppe("sweep --config " + (dir / "cfg.json").string());
    REQUIRE(s.code == 0);
    CHECK(fs::exists(dir / "out" / "g.csv"));
    CHECK(fs::exists(dir / "out" / "g.json"));

    const Run c = ppe("--json classify --input " + (dir / "out" / "g.json").string() +
                      " --epsilon-c 5 --ultranarrow 1000 --name relabelled");
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["counts"]["C UN"] == 4);
    CHECK(fs::exists(dir / "out" / "relabelled.csv"));

    std::ofstream(dir / "bad.json") << R"({"model": {"model": "toy"}, "axis1": {}})";
    CHECK(ppe("sweep --config " + (dir / "bad.json").string()).code == 2);
    CHECK(ppe("sweep --config /nonexistent.json").code == 2);
    fs::remove_all(dir);
}
