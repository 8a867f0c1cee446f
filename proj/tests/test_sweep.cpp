#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ppe/sweep.hpp"

using namespace ppe;
using namespace ppe::sweep;
namespace fs = std::filesystem;

namespace {

json small_config() {
    return json::parse(R"({
        "model": {"model": "toy", "N": 2},
        "axis1": {"parameter": "w", "scale": "log", "min": 0.5, "max": 5.0, "count": 3},
        "axis2": {"parameter": "phi", "min": 0.0, "max": 3.0, "count": 3},
        "spectrum": {"points": 1001},
        "output": {"formats": ["csv", "json", "svg"]}
    })");
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ppe_test_" + name + "_" + std::to_string(std::rand()));
    fs::remove_all(p);
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("axis_values") {
    const Axis lin{"w", Scale::Linear, 1.0, 3.0, 3};
    CHECK(lin.values() == std::vector<double>{1.0, 2.0, 3.0});
    const Axis lg{"w", Scale::Log, 0.1, 10.0, 3};
    const auto v = lg.values();
    CHECK(v[0] == doctest::Approx(0.1));
    CHECK(v[1] == doctest::Approx(1.0));
    CHECK(v[2] == doctest::Approx(10.0));
}

TEST_CASE("config_parses_defaults") {
    const SweepConfig c = parse_config(small_config());
    CHECK(c.model.model == ModelKind::ToyPhase);
    CHECK(c.model.n_unpumped == 2);
    CHECK(c.axis1.scale == Scale::Log);
    CHECK(c.axis2.scale == Scale::Linear);
    CHECK(c.point.k_max == 3);
    CHECK(c.point.spectrum.grid.points == 1001);
    CHECK(c.workers == 1);
}

TEST_CASE("config_rejects_bad_input") {
    auto rejects = [](const std::function<void(json&)>& edit) {
        json j = small_config();
        edit(j);
        CHECK_THROWS_AS(parse_config(j), InvalidArgument);
    };
    rejects([](json& j) { j["colour"] = "red"; });
    rejects([](json& j) { j["model"]["Nn"] = 3; });
    rejects([](json& j) { j["axis1"]["parameter"] = "N"; });
    rejects([](json& j) { j["axis2"]["parameter"] = "w"; });
    rejects([](json& j) { j["axis1"]["count"] = 1; });
    rejects([](json& j) { j["axis1"]["min"] = 0.0; });
    rejects([](json& j) { j["axis2"]["max"] = -1.0; });
    rejects([](json& j) {
        j["model"]["model"] = "interacting";
        j["axis2"]["min"] = 0.5;
    });
    rejects([](json& j) { j["output"]["formats"] = {"png"}; });
    rejects([](json& j) { j["observables"] = {{"k_max", 9}}; });
    rejects([](json& j) { j.erase("axis2"); });
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidArgument);
}

TEST_CASE("hp_model_config") {
    const ModelSpec s = parse_model(json::parse(R"({"model": "hp-toy", "N": 50})"));
    CHECK(s.basis == CollectiveBasis::HolsteinPrimakoff);
    CHECK(s.n_cut == 6);
    const ModelSpec back = parse_model(model_to_json(s));
    CHECK(back.n_cut == 6);
    CHECK(back.model == ModelKind::HPToy);
}

TEST_CASE("sweep_grid_and_csv") {
    const SweepResult r = run(parse_config(small_config()));
    REQUIRE(r.records.size() == 9);
    CHECK(r.failures() == 0);
    CHECK(r.records[0].axis1 == doctest::Approx(0.5));
    CHECK(r.records[1].axis1 == doctest::Approx(0.5));
    CHECK(r.records[1].axis2 == doctest::Approx(1.5));
    CHECK(r.records[3].axis1 == doctest::Approx(std::sqrt(2.5)));

    const std::string csv = to_csv(r);
    CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
    const CsvTable t = parse_csv(csv);
    CHECK(t.rows.size() == 9);
    CHECK(t.header.size() == 14);
    CHECK(t.column("g2") == 4);
    CHECK_THROWS_AS(t.column("g4"), InvalidArgument);
}

TEST_CASE("sweep_is_deterministic_across_workers") {
    SweepConfig one = parse_config(small_config());
    SweepConfig three = one;
    three.workers = 3;
    CHECK(to_csv(run(one)) == to_csv(run(three)));
}

TEST_CASE("json_roundtrip_and_relabel") {
    const SweepResult r = run(parse_config(small_config()));
    const SweepResult back = from_json(json::parse(to_json(r).dump()));
    CHECK(to_csv(back) == to_csv(r));

    const SweepResult wide = relabel(back, RegimeThresholds{10.0, 1e6});
    for (const SweepRecord& rec : wide.records) {
        CHECK(rec.point.label.statistics == Statistics::Coherent);
        CHECK(rec.point.label.width == Width::UltraNarrow);
    }
}

TEST_CASE("environment_overrides") {
    SweepConfig c = parse_config(small_config());
    setenv("PPE_OUTPUT_DIR", "/tmp/ppe_env_dir", 1);
    setenv("PPE_WORKERS", "4", 1);
    apply_environment(c);
    CHECK(c.output_directory == fs::path("/tmp/ppe_env_dir"));
    CHECK(c.workers == 4);
    setenv("PPE_WORKERS", "zero", 1);
    CHECK_THROWS_AS(apply_environment(c), InvalidArgument);
    unsetenv("PPE_OUTPUT_DIR");
    unsetenv("PPE_WORKERS");
}

TEST_CASE("outputs_written") {
    SweepConfig c = parse_config(small_config());
    c.output_directory = scratch_dir("outputs");
    c.output_name = "grid";
    const auto files = write_outputs(run(c));
    CHECK(files.size() == 5);
    for (const fs::path& f : files) CHECK(fs::exists(f));
    CHECK_FALSE(fs::exists(c.output_directory / "grid.csv.tmp"));
    const std::string svg = read_file(c.output_directory / "grid_regimes.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    fs::remove_all(c.output_directory);
}

TEST_CASE("number_formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("line_plot_from_table") {
    const CsvTable t = parse_csv("omega,S\n-1,0.5\n0,1\n1,0.5\n");
    const std::string svg = line_plot_svg(t, "spectrum");
    CHECK(svg.find("<polyline") != std::string::npos);
}
