#include "ppe/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace ppe::sweep {

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument("bad value for '" + std::string(key) + "' in " + where);
    }
}

double number(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

void set_parameter(ModelSpec& spec, const std::string& name, double value) {
    if (name == "w") spec.w = value;
    else if (name == "phi") spec.phi = value;
    else if (name == "V") spec.V = value;
    else if (name == "kappa") spec.kappa = value;
    else throw InvalidArgument("unknown sweep parameter '" + name + "'");
}

Axis parse_axis(const json& j, const std::string& where) {
    check_keys(j, {"parameter", "scale", "min", "max", "count"}, where);
    Axis a;
    a.parameter = get_or<std::string>(j, "parameter", "", where);
    const std::string scale = get_or<std::string>(j, "scale", "linear", where);
    if (scale == "linear") a.scale = Scale::Linear;
    else if (scale == "log") a.scale = Scale::Log;
    else throw InvalidArgument(where + ".scale must be 'linear' or 'log'");
    if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
        throw InvalidArgument(where + " needs min, max and count");
    a.min = get_or<double>(j, "min", 0.0, where);
    a.max = get_or<double>(j, "max", 0.0, where);
    a.count = get_or<int>(j, "count", 0, where);
    static const std::set<std::string> names = {"w", "phi", "V", "kappa"};
    if (!names.count(a.parameter)) throw InvalidArgument(where + ".parameter must be one of w, phi, V, kappa");
    if (a.count < 2) throw InvalidArgument(where + ".count must be >= 2");
    if (!(a.max > a.min)) throw InvalidArgument(where + ".max must exceed min");
    if (a.scale == Scale::Log && !(a.min > 0.0)) throw InvalidArgument(where + ": log scale needs min > 0");
    return a;
}

json axis_to_json(const Axis& a) {
    return {{"parameter", a.parameter},
            {"scale", a.scale == Scale::Log ? "log" : "linear"},
            {"min", a.min},
            {"max", a.max},
            {"count", a.count}};
}

json config_to_json(const SweepConfig& c) {
    json spectrum = {{"points", c.point.spectrum.grid.points},
                     {"refine", c.point.spectrum.grid.refine},
                     {"condition_limit", c.point.spectrum.condition_limit}};
    if (c.point.spectrum.grid.half_width) spectrum["half_width"] = *c.point.spectrum.grid.half_width;
    return {{"model", model_to_json(c.model)},
            {"axis1", axis_to_json(c.axis1)},
            {"axis2", axis_to_json(c.axis2)},
            {"observables", {{"k_max", c.point.k_max}}},
            {"spectrum", spectrum},
            {"regimes", {{"epsilon_c", c.point.thresholds.epsilon_c}, {"ultranarrow", c.point.thresholds.ultranarrow}}},
            {"output", {{"directory", c.output_directory.string()}, {"name", c.output_name}, {"formats", c.formats}}},
            {"parallelism", {{"workers", c.workers}}}};
}

std::string label_column(const PointRecord& p) {
    return p.failed ? "failed" : to_string(p.width.structure);
}

}  // namespace

std::vector<double> Axis::values() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / (count - 1);
        out[k] = scale == Scale::Linear ? min + t * (max - min)
                                        : std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    }
    out.front() = min;
    out.back() = max;
    return out;
}

ModelSpec parse_model(const json& j) {
    const std::string where = "model";
    check_keys(j, {"model", "N", "w", "phi", "V", "kappa", "basis", "n_cut"}, where);
    ModelSpec s;
    s.model = parse_model_kind(get_or<std::string>(j, "model", "toy", where));
    s.n_unpumped = get_or<int>(j, "N", 1, where);
    s.w = get_or<double>(j, "w", 1.0, where);
    s.phi = get_or<double>(j, "phi", 0.0, where);
    s.V = get_or<double>(j, "V", 0.0, where);
    s.kappa = get_or<double>(j, "kappa", 0.0, where);
    const std::string fallback = s.model == ModelKind::HPToy ? "hp" : "dicke";
    const std::string basis = get_or<std::string>(j, "basis", fallback, where);
    if (basis == "dicke") s.basis = CollectiveBasis::Dicke;
    else if (basis == "hp") s.basis = CollectiveBasis::HolsteinPrimakoff;
    else throw InvalidArgument("model.basis must be 'dicke' or 'hp'");
    s.n_cut = get_or<int>(j, "n_cut", s.basis == CollectiveBasis::HolsteinPrimakoff ? 6 : 0, where);
    return s;
}

json model_to_json(const ModelSpec& s) {
    json j = {{"model", to_string(s.model)}, {"N", s.n_unpumped}, {"w", s.w},       {"phi", s.phi},
              {"V", s.V},                    {"kappa", s.kappa},  {"basis", s.basis == CollectiveBasis::Dicke ? "dicke" : "hp"}};
    if (s.basis == CollectiveBasis::HolsteinPrimakoff) j["n_cut"] = s.n_cut;
    return j;
}

SweepConfig parse_config(const json& j) {
    check_keys(j, {"model", "axis1", "axis2", "observables", "spectrum", "regimes", "output", "parallelism"}, "config");
    if (!j.contains("model") || !j.contains("axis1") || !j.contains("axis2"))
        throw InvalidArgument("config needs model, axis1 and axis2");
    SweepConfig c;
    c.model = parse_model(j.at("model"));
    c.axis1 = parse_axis(j.at("axis1"), "axis1");
    c.axis2 = parse_axis(j.at("axis2"), "axis2");
    if (c.axis1.parameter == c.axis2.parameter) throw InvalidArgument("axis parameters must differ");

    if (j.contains("observables")) {
        const json& o = j.at("observables");
        check_keys(o, {"k_max"}, "observables");
        c.point.k_max = get_or<int>(o, "k_max", 3, "observables");
        if (c.point.k_max < 2 || c.point.k_max > 6) throw InvalidArgument("observables.k_max must be in 2..6");
    }
    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        check_keys(s, {"half_width", "points", "refine", "condition_limit"}, "spectrum");
        if (s.contains("half_width") && !s.at("half_width").is_null())
            c.point.spectrum.grid.half_width = get_or<double>(s, "half_width", 0.0, "spectrum");
        c.point.spectrum.grid.points = get_or<int>(s, "points", 4001, "spectrum");
        c.point.spectrum.grid.refine = get_or<bool>(s, "refine", true, "spectrum");
        c.point.spectrum.condition_limit = get_or<double>(s, "condition_limit", kDefectiveCondition, "spectrum");
        if (c.point.spectrum.grid.points < 5) throw InvalidArgument("spectrum.points must be >= 5");
    }
    if (j.contains("regimes")) {
        const json& r = j.at("regimes");
        check_keys(r, {"epsilon_c", "ultranarrow"}, "regimes");
        c.point.thresholds.epsilon_c = get_or<double>(r, "epsilon_c", 0.1, "regimes");
        c.point.thresholds.ultranarrow = get_or<double>(r, "ultranarrow", 2.5, "regimes");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"directory", "name", "formats"}, "output");
        c.output_directory = get_or<std::string>(o, "directory", "ppe-output", "output");
        c.output_name = get_or<std::string>(o, "name", "sweep", "output");
        c.formats = get_or<std::vector<std::string>>(o, "formats", {"csv", "json"}, "output");
        for (const auto& f : c.formats)
            if (f != "csv" && f != "json" && f != "svg") throw InvalidArgument("unknown output format '" + f + "'");
    }
    if (j.contains("parallelism")) {
        const json& p = j.at("parallelism");
        check_keys(p, {"workers"}, "parallelism");
        c.workers = get_or<int>(p, "workers", 1, "parallelism");
        if (c.workers < 1) throw InvalidArgument("parallelism.workers must be >= 1");
    }

    ModelSpec probe = c.model;
    set_parameter(probe, c.axis1.parameter, c.axis1.min);
    set_parameter(probe, c.axis2.parameter, c.axis2.min);
    probe.validate();
    return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j);
}

void apply_environment(SweepConfig& config) {
    if (const char* dir = std::getenv("PPE_OUTPUT_DIR"); dir && *dir) config.output_directory = dir;
    if (const char* workers = std::getenv("PPE_WORKERS"); workers && *workers) {
        char* end = nullptr;
        const long n = std::strtol(workers, &end, 10);
        if (*end != '\0' || n < 1) throw InvalidArgument("PPE_WORKERS must be a positive integer");
        config.workers = static_cast<int>(n);
    }
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const SweepRecord& r) { return r.point.failed; }));
}

SweepResult run(const SweepConfig& config) {
    const std::vector<double> a1 = config.axis1.values();
    const std::vector<double> a2 = config.axis2.values();
    SweepResult result;
    result.config = config;
    result.records.resize(a1.size() * a2.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < result.records.size(); k = next++) {
            const double v1 = a1[k / a2.size()];
            const double v2 = a2[k % a2.size()];
            ModelSpec spec = config.model;
            set_parameter(spec, config.axis1.parameter, v1);
            set_parameter(spec, config.axis2.parameter, v2);
            result.records[k] = {v1, v2, evaluate_point(spec, config.point)};
        }
    };
    const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(result.records.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return result;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : result.records) {
        const PointRecord& p = r.point;
        auto g = [&](int k) {
            auto it = p.observables.g.find(k);
            return it == p.observables.g.end() || p.failed ? std::nan("") : it->second;
        };
        const double nan = std::nan("");
        out << format_number(r.axis1) << ',' << format_number(r.axis2) << ','
            << format_number(p.failed ? nan : p.observables.sz) << ','
            << format_number(p.failed ? nan : p.observables.intensity) << ',' << format_number(g(2)) << ','
            << format_number(g(3)) << ',' << format_number(p.width.linewidth) << ','
            << format_number(p.width.peak_shift) << ',' << label_column(p) << ',' << to_string(p.label.statistics)
            << ',' << (p.failed ? "failed" : to_string(p.label.width)) << ',' << p.method << ','
            << format_number(p.condition) << ',' << format_number(p.residual) << '\n';
    }
    return out.str();
}

json to_json(const SweepResult& result) {
    json records = json::array();
    for (const auto& r : result.records) {
        const PointRecord& p = r.point;
        json g = json::object();
        for (const auto& [k, v] : p.observables.g) g[std::to_string(k)] = v;
        json rec = {{"axis1", r.axis1},
                    {"axis2", r.axis2},
                    {"Sz", p.observables.sz},
                    {"intensity", p.observables.intensity},
                    {"intensity_underflow", p.observables.intensity_underflow},
                    {"g", g},
                    {"linewidth", p.width.linewidth},
                    {"peak_shift", p.width.peak_shift},
                    {"peak_structure", to_string(p.width.structure)},
                    {"statistics", to_string(p.label.statistics)},
                    {"width", to_string(p.label.width)},
                    {"label", p.label.short_label()},
                    {"method", p.method},
                    {"condition", p.condition},
                    {"residual", p.residual},
                    {"warnings", p.warnings},
                    {"failed", p.failed}};
        if (p.failed) rec["error"] = p.error;
        records.push_back(std::move(rec));
    }
    return {{"config", config_to_json(result.config)}, {"records", std::move(records)}};
}

SweepResult from_json(const json& j) {
    try {
        SweepResult out;
        out.config = parse_config(j.at("config"));
        for (const json& r : j.at("records")) {
            SweepRecord rec{number(r.at("axis1")), number(r.at("axis2")), {}};
            PointRecord& p = rec.point;
            p.spec = out.config.model;
            set_parameter(p.spec, out.config.axis1.parameter, rec.axis1);
            set_parameter(p.spec, out.config.axis2.parameter, rec.axis2);
            p.observables.sz = number(r.at("Sz"));
            p.observables.intensity = number(r.at("intensity"));
            p.observables.intensity_underflow = r.at("intensity_underflow").get<bool>();
            for (const auto& [k, v] : r.at("g").items()) p.observables.g[std::stoi(k)] = number(v);
            p.width = {number(r.at("linewidth")), number(r.at("peak_shift")),
                       parse_peak_structure(r.at("peak_structure").get<std::string>())};
            p.label.statistics = parse_statistics(r.at("statistics").get<std::string>());
            p.label.width = parse_width(r.at("width").get<std::string>());
            p.method = r.at("method").get<std::string>();
            p.condition = number(r.at("condition"));
            p.residual = number(r.at("residual"));
            p.warnings = r.at("warnings").get<std::vector<std::string>>();
            p.failed = r.at("failed").get<bool>();
            if (p.failed) p.error = r.value("error", "");
            out.records.push_back(std::move(rec));
        }
        return out;
    } catch (const json::exception& e) {
        throw InvalidArgument("malformed sweep result: " + std::string(e.what()));
    }
}

SweepResult relabel(SweepResult result, const RegimeThresholds& thresholds) {
    result.config.point.thresholds = thresholds;
    for (auto& r : result.records) {
        PointRecord& p = r.point;
        if (p.failed) continue;
        const double g2 = p.observables.intensity_underflow ? std::nan("") : p.observables.g_at(2);
        RegimeLabel label = classify(g2, p.width.linewidth, result.config.model.n_unpumped, thresholds);
        label.peak_shift = p.width.peak_shift;
        label.sz = p.observables.sz;
        label.intensity = p.observables.intensity;
        p.label = label;
    }
    return result;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::filesystem::path> write_outputs(const SweepResult& result) {
    const auto& c = result.config;
    std::vector<std::filesystem::path> written;
    auto has = [&](const char* f) { return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end(); };
    const std::filesystem::path base = c.output_directory / c.output_name;
    const std::string csv = to_csv(result);
    if (has("csv")) {
        written.push_back(base.string() + ".csv");
        write_atomic(written.back(), csv);
    }
    if (has("json")) {
        written.push_back(base.string() + ".json");
        write_atomic(written.back(), to_json(result).dump(2) + "\n");
    }
    if (has("svg")) {
        const CsvTable table = parse_csv(csv);
        const std::string x = c.axis2.parameter, y = c.axis1.parameter;
        written.push_back(base.string() + "_regimes.svg");
        write_atomic(written.back(), regime_heatmap_svg(table, x, y));
        written.push_back(base.string() + "_g2.svg");
        write_atomic(written.back(), numeric_heatmap_svg(table, "g2", true, x, y));
        written.push_back(base.string() + "_linewidth.svg");
        write_atomic(written.back(), numeric_heatmap_svg(table, "linewidth", true, x, y));
    }
    return written;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return static_cast<int>(k);
    throw InvalidArgument("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) throw InvalidArgument("ragged CSV row: " + line);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

namespace {

double parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return std::stod(s);
}

struct Layout {
    std::vector<double> xs, ys;  // sorted unique axis values
    double left = 70, top = 40, cell_w, cell_h, plot_w = 480, plot_h = 480;
};

Layout layout(const CsvTable& t) {
    Layout l;
    std::set<double> x, y;
    const int cx = t.column("axis2"), cy = t.column("axis1");
    for (const auto& r : t.rows) {
        x.insert(parse_cell(r[cx]));
        y.insert(parse_cell(r[cy]));
    }
    l.xs.assign(x.begin(), x.end());
    l.ys.assign(y.begin(), y.end());
    l.cell_w = l.plot_w / std::max<std::size_t>(1, l.xs.size());
    l.cell_h = l.plot_h / std::max<std::size_t>(1, l.ys.size());
    return l;
}

std::string header_svg(double width, double height) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s.str();
}

std::string axes_svg(const Layout& l, const std::string& x_label, const std::string& y_label) {
    std::ostringstream s;
    s << "<rect x=\"" << l.left << "\" y=\"" << l.top << "\" width=\"" << l.plot_w << "\" height=\"" << l.plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto tick = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return std::string(buf);
    };
    const double bottom = l.top + l.plot_h;
    if (!l.xs.empty()) {
        s << "<text x=\"" << l.left << "\" y=\"" << bottom + 16 << "\">" << tick(l.xs.front()) << "</text>\n";
        s << "<text x=\"" << l.left + l.plot_w << "\" y=\"" << bottom + 16 << "\" text-anchor=\"end\">"
          << tick(l.xs.back()) << "</text>\n";
    }
    if (!l.ys.empty()) {
        s << "<text x=\"" << l.left - 4 << "\" y=\"" << bottom << "\" text-anchor=\"end\">" << tick(l.ys.front())
          << "</text>\n";
        s << "<text x=\"" << l.left - 4 << "\" y=\"" << l.top + 10 << "\" text-anchor=\"end\">" << tick(l.ys.back())
          << "</text>\n";
    }
    s << "<text x=\"" << l.left + l.plot_w / 2 << "\" y=\"" << bottom + 32 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
    s << "<text x=\"" << 20 << "\" y=\"" << l.top + l.plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << l.top + l.plot_h / 2 << ")\">" << y_label << "</text>\n";
    return s.str();
}

std::string color_scale(double t) {
    // dark blue → teal → yellow
    t = std::clamp(t, 0.0, 1.0);
    const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const int seg = t < 0.5 ? 0 : 1;
    const double u = t < 0.5 ? t / 0.5 : (t - 0.5) / 0.5;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[seg][0] + u * (stops[seg + 1][0] - stops[seg][0])),
                  static_cast<int>(stops[seg][1] + u * (stops[seg + 1][1] - stops[seg][1])),
                  static_cast<int>(stops[seg][2] + u * (stops[seg + 1][2] - stops[seg][2])));
    return buf;
}

template <class F>
void for_each_cell(const CsvTable& t, const Layout& l, F&& f) {
    const int cx = t.column("axis2"), cy = t.column("axis1");
    for (const auto& r : t.rows) {
        const double x = parse_cell(r[cx]), y = parse_cell(r[cy]);
        const auto ix = std::lower_bound(l.xs.begin(), l.xs.end(), x) - l.xs.begin();
        const auto iy = std::lower_bound(l.ys.begin(), l.ys.end(), y) - l.ys.begin();
        const double px = l.left + ix * l.cell_w;
        const double py = l.top + l.plot_h - (iy + 1) * l.cell_h;
        f(r, px, py);
    }
}

}  // namespace

std::string regime_heatmap_svg(const CsvTable& t, const std::string& x_label, const std::string& y_label) {
    static const std::map<std::string, std::string> colors = {
        {"bunched ultranarrow", "#d62728"}, {"bunched narrow", "#ff7f0e"},   {"bunched broad", "#ffbb78"},
        {"coherent ultranarrow", "#2ca02c"}, {"coherent narrow", "#98df8a"}, {"coherent broad", "#bcbd22"},
        {"quantum ultranarrow", "#1f77b4"},  {"quantum narrow", "#6baed6"},  {"quantum broad", "#c6dbef"}};
    const Layout l = layout(t);
    const int cs = t.column("statistics"), cw = t.column("width");
    std::ostringstream s;
    s << header_svg(l.left + l.plot_w + 200, l.top + l.plot_h + 50);
    std::set<std::string> seen;
    for_each_cell(t, l, [&](const std::vector<std::string>& r, double px, double py) {
        const std::string key = r[cs] + " " + r[cw];
        auto it = colors.find(key);
        seen.insert(key);
        s << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << l.cell_w + 0.5 << "\" height=\""
          << l.cell_h + 0.5 << "\" fill=\"" << (it == colors.end() ? "#999999" : it->second) << "\"/>\n";
    });
    s << axes_svg(l, x_label, y_label);
    double ly = l.top;
    for (const auto& key : seen) {
        auto it = colors.find(key);
        s << "<rect x=\"" << l.left + l.plot_w + 15 << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
          << (it == colors.end() ? "#999999" : it->second) << "\"/>\n";
        s << "<text x=\"" << l.left + l.plot_w + 32 << "\" y=\"" << ly + 11 << "\">" << key << "</text>\n";
        ly += 18;
    }
    s << "</svg>\n";
    return s.str();
}

std::string numeric_heatmap_svg(const CsvTable& t, const std::string& column, bool log_scale,
                                const std::string& x_label, const std::string& y_label) {
    const Layout l = layout(t);
    const int c = t.column(column);
    auto transform = [&](double v) { return log_scale ? (v > 0 ? std::log10(v) : std::nan("")) : v; };
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : t.rows) {
        const double v = transform(parse_cell(r[c]));
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::ostringstream s;
    s << header_svg(l.left + l.plot_w + 200, l.top + l.plot_h + 50);
    for_each_cell(t, l, [&](const std::vector<std::string>& r, double px, double py) {
        const double v = transform(parse_cell(r[c]));
        const std::string fill =
            std::isfinite(v) ? color_scale(hi > lo ? (v - lo) / (hi - lo) : 0.5) : std::string("#999999");
        s << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << l.cell_w + 0.5 << "\" height=\""
          << l.cell_h + 0.5 << "\" fill=\"" << fill << "\"/>\n";
    });
    s << axes_svg(l, x_label, y_label);
    const std::string name = log_scale ? "log10 " + column : column;
    s << "<text x=\"" << l.left + l.plot_w + 15 << "\" y=\"" << l.top + 12 << "\">" << name << "</text>\n";
    for (int k = 0; k <= 10; ++k) {
        const double u = 1.0 - k / 10.0;
        s << "<rect x=\"" << l.left + l.plot_w + 15 << "\" y=\"" << l.top + 20 + k * 20 << "\" width=\"20\" height=\"20\" fill=\""
          << color_scale(u) << "\"/>\n";
    }
    if (std::isfinite(lo)) {
        s << "<text x=\"" << l.left + l.plot_w + 40 << "\" y=\"" << l.top + 34 << "\">" << format_number(hi).substr(0, 8)
          << "</text>\n";
        s << "<text x=\"" << l.left + l.plot_w + 40 << "\" y=\"" << l.top + 234 << "\">" << format_number(lo).substr(0, 8)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string line_plot_svg(const CsvTable& t, const std::string& title) {
    if (t.header.size() < 2) throw InvalidArgument("line plot needs at least two columns");
    const double left = 70, top = 40, w = 640, h = 400;
    std::vector<std::vector<double>> cols(t.header.size());
    for (const auto& r : t.rows)
        for (std::size_t k = 0; k < r.size(); ++k) cols[k].push_back(parse_cell(r[k]));
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (double x : cols[0]) xlo = std::min(xlo, x), xhi = std::max(xhi, x);
    for (std::size_t k = 1; k < cols.size(); ++k)
        for (double y : cols[k])
            if (std::isfinite(y)) ylo = std::min(ylo, y), yhi = std::max(yhi, y);
    if (!(xhi > xlo)) xhi = xlo + 1;
    if (!(yhi > ylo)) yhi = ylo + 1;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
    std::ostringstream s;
    s << header_svg(left + w + 160, top + h + 50);
    s << "<text x=\"" << left + w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    if (ylo < 0 && yhi > 0) {
        const double y0 = top + h - (0 - ylo) / (yhi - ylo) * h;
        s << "<line x1=\"" << left << "\" y1=\"" << y0 << "\" x2=\"" << left + w << "\" y2=\"" << y0
          << "\" stroke=\"#bbbbbb\"/>\n";
    }
    for (std::size_t k = 1; k < cols.size(); ++k) {
        s << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << palette[(k - 1) % 7] << "\" points=\"";
        for (std::size_t i = 0; i < cols[0].size(); ++i) {
            if (!std::isfinite(cols[k][i])) continue;
            s << left + (cols[0][i] - xlo) / (xhi - xlo) * w << ',' << top + h - (cols[k][i] - ylo) / (yhi - ylo) * h
              << ' ';
        }
        s << "\"/>\n";
        s << "<text x=\"" << left + w + 10 << "\" y=\"" << top + 14 * k << "\" fill=\"" << palette[(k - 1) % 7] << "\">"
          << t.header[k] << "</text>\n";
    }
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left << "\" y=\"" << top + h + 16 << "\">" << format_number(xlo).substr(0, 8) << "</text>\n";
    s << "<text x=\"" << left + w << "\" y=\"" << top + h + 16 << "\" text-anchor=\"end\">"
      << format_number(xhi).substr(0, 8) << "</text>\n";
    s << "<text x=\"" << left + w / 2 << "\" y=\"" << top + h + 32 << "\" text-anchor=\"middle\">" << t.header[0]
      << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace ppe::sweep
