#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppe/pipeline.hpp"

namespace ppe::sweep {

using json = nlohmann::json;

enum class Scale { Linear, Log };

struct Axis {
    std::string parameter;  ///< w | phi | V | kappa
    Scale scale = Scale::Linear;
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    std::vector<double> values() const;
};

struct SweepConfig {
    ModelSpec model;
    Axis axis1;
    Axis axis2;
    PointOptions point;
    std::filesystem::path output_directory = "ppe-output";
    std::string output_name = "sweep";
    std::vector<std::string> formats = {"csv", "json"};
    int workers = 1;
};

/// Parses and validates a config; unknown keys are rejected with InvalidArgument.
SweepConfig parse_config(const json& j);
SweepConfig load_config(const std::filesystem::path& path);

/// Applies PPE_OUTPUT_DIR and PPE_WORKERS when set.
void apply_environment(SweepConfig& config);

/// ModelSpec from the {"model", "N", "w", ...} object used by configs.
ModelSpec parse_model(const json& j);
json model_to_json(const ModelSpec& spec);

struct SweepRecord {
    double axis1;
    double axis2;
    PointRecord point;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRecord> records;  ///< row-major: axis1 outer, axis2 inner

    std::size_t failures() const;
};

/// Evaluates every grid point on a fixed pool of workers.
SweepResult run(const SweepConfig& config);

inline constexpr const char* kCsvHeader =
    "axis1,axis2,Sz,intensity,g2,g3,linewidth,peak_shift,peak_structure,statistics,width,method,condition,residual";

/// 17 significant digits; "nan"/"inf" for non-finite values.
std::string format_number(double x);

std::string to_csv(const SweepResult& result);
json to_json(const SweepResult& result);

/// Rebuilds a result from to_json output (solver-free).
SweepResult from_json(const json& j);

/// Re-labels every record under new thresholds without touching the solver.
SweepResult relabel(SweepResult result, const RegimeThresholds& thresholds);

/// Writes text to path via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

/// Writes the requested formats; returns the files written.
std::vector<std::filesystem::path> write_outputs(const SweepResult& result);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

/// Heatmaps drawn from the sweep CSV alone: categorical regime map or a
/// numeric column on a colour scale.
std::string regime_heatmap_svg(const CsvTable& table, const std::string& x_label, const std::string& y_label);
std::string numeric_heatmap_svg(const CsvTable& table, const std::string& column, bool log_scale,
                                const std::string& x_label, const std::string& y_label);

/// Line plot of the first column against the others of a CSV table.
std::string line_plot_svg(const CsvTable& table, const std::string& title);

}  // namespace ppe::sweep
