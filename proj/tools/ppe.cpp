// ppe: steady states, spectra, sweeps and oracle checks from the command line.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ppe/oracles.hpp"
#include "ppe/pipeline.hpp"
#include "ppe/sweep.hpp"

namespace {

using ppe::sweep::json;
using ppe::sweep::format_number;

struct ModelFlags {
    std::string model = "toy";
    int n = 1;
    double w = 1.0;
    double phi = 0.0;
    double V = 0.0;
    double kappa = 0.0;
    std::string basis;
    int n_cut = 6;

    void add(CLI::App* app) {
        app->add_option("--model", model, "toy | hp-toy | interacting | collective-pump | auxiliary")
            ->capture_default_str();
        app->add_option("--N", n, "number of unpumped atoms")->capture_default_str();
        app->add_option("--w", w, "pump rate (units of Gamma)")->capture_default_str();
        app->add_option("--phi", phi, "relative phase in [0, 2pi)")->capture_default_str();
        app->add_option("--V", V, "exchange coupling (interacting model)")->capture_default_str();
        app->add_option("--kappa", kappa, "auxiliary readout rate")->capture_default_str();
        app->add_option("--basis", basis, "dicke | hp (default: hp for hp-toy, else dicke)");
        app->add_option("--n-cut", n_cut, "Fock cutoff on the hp basis")->capture_default_str();
    }

    ppe::ModelSpec spec() const {
        json j = {{"model", model}, {"N", n}, {"w", w}, {"phi", phi}, {"V", V}, {"kappa", kappa}};
        if (!basis.empty()) j["basis"] = basis;
        ppe::ModelSpec s = ppe::sweep::parse_model(j);
        if (s.basis == ppe::CollectiveBasis::HolsteinPrimakoff) s.n_cut = n_cut;
        s.validate();
        return s;
    }
};

json observables_json(const ppe::ObservableSet& o) {
    json g = json::object();
    for (const auto& [k, v] : o.g) g[std::to_string(k)] = v;
    return {{"Sz", o.sz}, {"intensity", o.intensity}, {"g", g}, {"intensity_underflow", o.intensity_underflow},
            {"phi_obs", o.phi_obs}};
}

int run_steady(const ModelFlags& flags, int k_max, const std::string& phase_in, bool print_rho, bool as_json) {
    const ppe::ModelSpec spec = flags.spec();
    const ppe::SteadyState ss = ppe::solve_steady_state(spec);
    ppe::ObservableSet obs;
    if (phase_in == "observable") {
        ppe::ModelSpec base = spec;
        base.phi = 0.0;
        ppe::SteadyState ss0 = ppe::solve_steady_state(base);
        obs = ppe::evaluate(ss0, k_max, ppe::PhaseIn::Observable, spec.phi);
    } else {
        obs = ppe::evaluate(ss, k_max, ppe::PhaseIn::Jump);
    }
    if (as_json) {
        json out = {{"model", ppe::sweep::model_to_json(spec)},
                    {"observables", observables_json(obs)},
                    {"residual", ss.residual_norm},
                    {"min_eigenvalue", ss.min_eigenvalue},
                    {"method", ss.method}};
        if (print_rho) {
            json rows = json::array();
            for (int i = 0; i < ss.rho.rows(); ++i) {
                json row = json::array();
                for (int j = 0; j < ss.rho.cols(); ++j) row.push_back({ss.rho(i, j).real(), ss.rho(i, j).imag()});
                rows.push_back(row);
            }
            out["rho"] = rows;
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << spec.describe() << '\n';
    std::cout << "Sz         " << format_number(obs.sz) << '\n';
    std::cout << "intensity  " << format_number(obs.intensity) << '\n';
    for (const auto& [k, v] : obs.g) std::cout << "g" << k << "         " << format_number(v) << '\n';
    if (obs.intensity_underflow) std::cout << "warning    intensity underflow, g undefined\n";
    std::cout << "residual   " << format_number(ss.residual_norm) << " (" << ss.method << ")\n";
    if (print_rho) {
        std::cout << "rho (solver basis: pumped spin (up, down) x collective, ascending m)\n";
        for (int i = 0; i < ss.rho.rows(); ++i) {
            for (int j = 0; j < ss.rho.cols(); ++j) {
                char buf[64];
                std::snprintf(buf, sizeof buf, " %+.6f%+.6fi", ss.rho(i, j).real(), ss.rho(i, j).imag());
                std::cout << buf;
            }
            std::cout << '\n';
        }
    }
    return 0;
}

int run_spectrum(const ModelFlags& flags, bool per_mode, int points, double half_width, const std::string& output,
                 const std::string& svg, bool as_json) {
    const ppe::ModelSpec spec = flags.spec();
    const ppe::SteadyState ss = ppe::solve_steady_state(spec);
    ppe::SpectrumOptions opts;
    opts.grid.points = points;
    opts.grid.per_mode = per_mode;
    if (half_width > 0.0) opts.grid.half_width = half_width;
    const ppe::SpectrumResult r = ppe::emission_spectrum(spec, ss, opts);

    std::ostringstream table;
    table << "omega,S";
    for (std::size_t k = 0; k < r.per_mode.size(); ++k) table << ",mode_" << k + 1;
    table << '\n';
    for (Eigen::Index i = 0; i < r.omega.size(); ++i) {
        table << format_number(r.omega(i)) << ',' << format_number(r.values(i));
        for (const auto& m : r.per_mode) table << ',' << format_number(m.partial(i));
        table << '\n';
    }
    if (!svg.empty()) {
        ppe::sweep::write_atomic(svg, ppe::sweep::line_plot_svg(ppe::sweep::parse_csv(table.str()), spec.describe()));
    }
    json modes = json::array();
    for (std::size_t k = 0; k < r.per_mode.size(); ++k) {
        const auto& m = r.per_mode[k];
        modes.push_back({{"mode", k + 1},
                         {"lambda", {m.eigenvalue.real(), m.eigenvalue.imag()}},
                         {"residue", {m.residue.real(), m.residue.imag()}}});
    }
    json summary = {{"model", ppe::sweep::model_to_json(spec)},
                    {"linewidth", r.linewidth},
                    {"peak_shift", r.peak_shift},
                    {"peak_structure", ppe::to_string(r.structure)},
                    {"method", r.method},
                    {"condition", r.condition},
                    {"modes", modes},
                    {"warnings", r.warnings}};
    if (!output.empty()) {
        ppe::sweep::write_atomic(output, table.str());
        if (as_json) {
            std::cout << summary.dump(2) << '\n';
        } else {
            std::cout << spec.describe() << '\n';
            std::cout << "linewidth       " << format_number(r.linewidth) << '\n';
            std::cout << "peak shift      " << format_number(r.peak_shift) << '\n';
            std::cout << "peak structure  " << ppe::to_string(r.structure) << '\n';
            std::cout << "method          " << r.method << " (condition " << format_number(r.condition) << ")\n";
            for (const auto& m : modes)
                std::cout << "mode_" << m["mode"].get<int>() << "  lambda = " << format_number(m["lambda"][0].get<double>())
                          << (m["lambda"][1].get<double>() < 0 ? " - " : " + ")
                          << format_number(std::abs(m["lambda"][1].get<double>())) << "i   c = "
                          << format_number(m["residue"][0].get<double>())
                          << (m["residue"][1].get<double>() < 0 ? " - " : " + ")
                          << format_number(std::abs(m["residue"][1].get<double>())) << "i\n";
            for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
        }
    } else {
        if (as_json) {
            summary["omega"] = std::vector<double>(r.omega.data(), r.omega.data() + r.omega.size());
            summary["S"] = std::vector<double>(r.values.data(), r.values.data() + r.values.size());
            std::cout << summary.dump(2) << '\n';
        } else {
            std::cout << table.str();
        }
    }
    return 0;
}

int run_sweep(const std::string& path, bool as_json) {
    ppe::sweep::SweepConfig config = ppe::sweep::load_config(path);
    ppe::sweep::apply_environment(config);
    const ppe::sweep::SweepResult result = ppe::sweep::run(config);
    const auto files = ppe::sweep::write_outputs(result);
    const std::size_t failures = result.failures();
    if (as_json) {
        json out = {{"records", result.records.size()}, {"failures", failures}, {"files", json::array()}};
        for (const auto& f : files) out["files"].push_back(f.string());
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << result.records.size() << " points, " << failures << " failed\n";
        for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
        for (const auto& r : result.records)
            if (r.point.failed)
                std::cerr << "failed at (" << format_number(r.axis1) << ", " << format_number(r.axis2)
                          << "): " << r.point.error << '\n';
    }
    return failures == 0 ? 0 : 1;
}

int run_classify(const std::string& input, double epsilon, double ultranarrow, const std::string& directory,
                 const std::string& name, bool as_json) {
    std::ifstream in(input);
    if (!in) throw ppe::InvalidArgument("cannot open " + input);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ppe::InvalidArgument("input is not valid JSON: " + std::string(e.what()));
    }
    ppe::sweep::SweepResult result = ppe::sweep::relabel(ppe::sweep::from_json(j), {epsilon, ultranarrow});
    if (!directory.empty()) result.config.output_directory = directory;
    result.config.output_name = name;
    const auto files = ppe::sweep::write_outputs(result);
    std::map<std::string, int> counts;
    for (const auto& r : result.records) counts[r.point.failed ? "failed" : r.point.label.short_label()]++;
    if (as_json) {
        json out = {{"counts", counts}, {"files", json::array()}};
        for (const auto& f : files) out["files"].push_back(f.string());
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& [label, n] : counts) std::cout << label << "  " << n << '\n';
        for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    }
    return 0;
}

int run_oracles(bool as_json) {
    const auto reports = ppe::oracle::run_all();
    int failed = 0;
    json rows = json::array();
    for (const auto& r : reports) {
        failed += !r.passed;
        rows.push_back({{"case_id", r.case_id},
                        {"quantity", r.quantity},
                        {"reference", {r.reference.real(), r.reference.imag()}},
                        {"computed", {r.computed.real(), r.computed.imag()}},
                        {"abs_error", r.abs_error},
                        {"rel_error", r.rel_error},
                        {"tolerance", r.tolerance},
                        {"passed", r.passed}});
        if (!as_json) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "abs %.3e rel %.3e tol %.1e", r.abs_error, r.rel_error, r.tolerance);
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.case_id << " | " << r.quantity << " | " << buf << '\n';
        }
    }
    if (as_json) std::cout << json{{"reports", rows}, {"failed", failed}}.dump(2) << '\n';
    else std::cout << reports.size() - failed << "/" << reports.size() << " oracle comparisons passed\n";
    return failed == 0 ? 0 : 1;
}

void report_error(bool as_json, const std::string& type, const std::string& message) {
    if (as_json) std::cout << json{{"error", {{"type", type}, {"message", message}}}}.dump() << '\n';
    else std::cerr << "error: " << message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partially pumped emitter simulator"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output (also for errors)");

    ModelFlags steady_flags, spectrum_flags;
    int k_max = 3;
    std::string phase_in = "jump";
    bool print_rho = false;
    auto* steady = app.add_subcommand("steady", "steady-state observables for one parameter point");
    steady_flags.add(steady);
    steady->add_option("--k-max", k_max, "highest g(k) evaluated")->capture_default_str()->check(CLI::Range(2, 6));
    steady->add_option("--phase-in", phase_in, "jump | observable")->check(CLI::IsMember({"jump", "observable"}));
    steady->add_flag("--rho", print_rho, "print the density matrix");

    bool per_mode = false;
    int points = 4001;
    double half_width = 0.0;
    std::string output, svg;
    auto* spectrum = app.add_subcommand("spectrum", "emission spectrum S(omega) with linewidth");
    spectrum_flags.add(spectrum);
    spectrum->add_flag("--per-mode", per_mode, "add one column per contributing Liouvillian mode");
    spectrum->add_option("--points", points, "grid points")->capture_default_str()->check(CLI::Range(5, 10000000));
    spectrum->add_option("--half-width", half_width, "grid half-width (default 5(w + N + 1))");
    spectrum->add_option("--output", output, "write the (omega, S) table to this CSV file");
    spectrum->add_option("--svg", svg, "write a line plot of the table");

    std::string config_path;
    auto* sweep = app.add_subcommand("sweep", "evaluate a two-axis parameter grid from a JSON config");
    sweep->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);

    std::string input, directory, name = "classified";
    double epsilon = 0.1, ultranarrow = 2.5;
    auto* classify = app.add_subcommand("classify", "re-label a sweep result under new thresholds");
    classify->add_option("--input", input, "sweep JSON written by `sweep`")->required()->check(CLI::ExistingFile);
    classify->add_option("--epsilon-c", epsilon, "coherent band half-width")->capture_default_str();
    classify->add_option("--ultranarrow", ultranarrow, "ultranarrow cutoff")->capture_default_str();
    classify->add_option("--output-dir", directory, "output directory (default: from the input config)");
    classify->add_option("--name", name, "output file stem")->capture_default_str();

    bool all = false;
    auto* oracle = app.add_subcommand("oracle-check", "run the oracle comparison suite");
    oracle->add_flag("--all", all, "run every oracle case (the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (as_json && e.get_exit_code() != 0) {
            report_error(true, "usage", e.what());
            return 2;
        }
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*steady) return run_steady(steady_flags, k_max, phase_in, print_rho, as_json);
        if (*spectrum) return run_spectrum(spectrum_flags, per_mode, points, half_width, output, svg, as_json);
        if (*sweep) return run_sweep(config_path, as_json);
        if (*classify) return run_classify(input, epsilon, ultranarrow, directory, name, as_json);
        if (*oracle) return run_oracles(as_json);
    } catch (const ppe::InvalidArgument& e) {
        report_error(as_json, "invalid-argument", e.what());
        return 2;
    } catch (const ppe::Error& e) {
        report_error(as_json, "failure", e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error(as_json, "failure", e.what());
        return 1;
    }
    return 2;
}
