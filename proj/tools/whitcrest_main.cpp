// Command-line front end: identities, kernel, solve, asymptotics, verify,
// report.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "whitcrest/asymptotics.hpp"
#include "whitcrest/kernels.hpp"
#include "whitcrest/profile_io.hpp"
#include "whitcrest/residual_verifier.hpp"
#include "whitcrest/special_functions.hpp"
#include "whitcrest/wave_solver.hpp"

namespace {

using namespace whitcrest;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string fmt(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void log_resolved_config(const CLI::App* sub) {
    std::cerr << "# " << sub->get_name() << " resolved config:";
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const std::string& r : opt->results()) value += (value.empty() ? "" : ";") + r;
        } else {
            value = opt->get_default_str();
        }
        if (value.empty()) value = "<unset>";
        std::cerr << " " << opt->get_name() << "=" << value;
    }
    std::cerr << "\n";
}

solver::WaveFamily parse_family(const std::string& name) {
    if (name == "whitham") return solver::WaveFamily::Unidirectional;
    if (name == "bidirectional") return solver::WaveFamily::Bidirectional;
    throw CLI::ValidationError("--family", "must be 'whitham' or 'bidirectional'");
}

json report_to_json(const specfun::IdentityReport& r) {
    json j;
    j["name"] = r.name;
    j["computed"] = r.computed;
    j["expected_lo"] = r.expected_lo;
    j["expected_hi"] = r.expected_hi;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["informational"] = r.informational;
    return j;
}

std::string identity_table(const std::vector<specfun::IdentityReport>& reports) {
    std::ostringstream out;
    out << "name                                 computed            expected            "
           "tol       status\n";
    for (const auto& r : reports) {
        std::string expected = r.expected_lo == r.expected_hi
                                   ? fmt(r.expected_lo)
                                   : "[" + fmt(r.expected_lo) + "," + fmt(r.expected_hi) + "]";
        char line[256];
        std::snprintf(line, sizeof(line), "%-36s %-19s %-19s %-9s %s\n", r.name.c_str(),
                      fmt(r.computed).c_str(), expected.c_str(), fmt(r.tolerance, "%.2g").c_str(),
                      r.informational ? "info" : (r.passed ? "PASS" : "FAIL"));
        out << line;
    }
    return out.str();
}

int run_identities(bool as_json, const std::string& out_path,
                   const quad::QuadratureConfig& cfg) {
    std::vector<specfun::IdentityReport> reports = specfun::run_identity_suite(cfg);
    bool all_passed = true;
    for (const auto& r : reports)
        if (!r.informational && !r.passed) all_passed = false;

    std::string payload;
    if (as_json) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(report_to_json(r));
        payload = arr.dump(2) + "\n";
    } else {
        payload = identity_table(reports);
    }
    if (out_path.empty())
        std::cout << payload;
    else
        io::atomic_write(out_path, payload);
    std::cout << (all_passed ? "PASS" : "FAIL") << ": identity suite ("
              << reports.size() << " checks)\n";
    return all_passed ? 0 : 1;
}

int run_kernel(const std::string& family, bool scaled, double x_min, double x_max,
               int samples, int series_pairs, const std::string& out_path) {
    kernels::KernelSpec spec;
    if (family == "whitham")
        spec = scaled ? kernels::KernelSpec::whitham_scaled() : kernels::KernelSpec::whitham();
    else if (family == "bidirectional")
        spec = scaled ? kernels::KernelSpec::bidirectional_scaled()
                      : kernels::KernelSpec::bidirectional();
    else
        throw CLI::ValidationError("--family", "must be 'whitham' or 'bidirectional'");

    std::ostringstream csv;
    csv << "x,K_closed,K_series,K_numeric,S,R,abs_err\n";
    for (int i = 0; i < samples; ++i) {
        const double x = x_min * std::pow(x_max / x_min, samples > 1 ? double(i) / (samples - 1) : 0.0);
        // K_closed: closed form for the bidirectional kernel, the
        // tail-corrected series evaluation for the Whitham kernel.
        const double closed = kernels::value(spec, x);
        const double ratio = spec.scale; // series helper returns the unscaled kernel
        const double series =
            ratio * kernels::kernel_whitham_series_accelerated(x, series_pairs);
        const double series_col =
            spec.family == kernels::Family::Whitham ? series : closed;
        const double numeric = kernels::kernel_numeric_from_symbol(spec, x);
        const double s_part = kernels::singular_part(spec, x);
        const double r_part = kernels::regular_part(spec, x);
        csv << fmt(x, "%.10g") << "," << fmt(closed) << "," << fmt(series_col) << ","
            << fmt(numeric) << "," << fmt(s_part) << "," << fmt(r_part) << ","
            << fmt(std::abs(series_col - numeric), "%.3e") << "\n";
    }
    if (out_path.empty())
        std::cout << csv.str();
    else
        io::atomic_write(out_path, csv.str());
    return 0;
}

int run_solve(const std::string& family_name, solver::SolverConfig cfg,
              const std::string& out_path, const std::string& history_path) {
    const solver::WaveFamily family = parse_family(family_name);
    solver::ContinuationResult result = solver::solve_highest(family, cfg);

    io::write_profile_json(result.final, out_path);
    if (!history_path.empty()) io::atomic_write(history_path, io::history_to_csv(result.history));

    const double gap = solver::height_max(family, result.final.speed_c) -
                       result.final.crest_height();
    std::cout << "wave: family=" << family_name << " N=" << result.final.n_modes()
              << " c=" << fmt(result.final.speed_c) << " crest=" << fmt(result.final.crest_height())
              << " gap=" << fmt(gap, "%.3e") << " residual=" << fmt(result.final.residual_norm, "%.3e")
              << " steps=" << result.history.size() << "\n";
    std::cout << "profile written to " << out_path << "\n";
    return 0;
}

struct FitRow {
    std::string quantity;
    double window_lo, window_hi;
    double extrapolated, uncertainty, target, rel_tol;
    double raw_innermost;
    bool passed;
};

std::string fits_to_csv(const std::vector<FitRow>& rows) {
    std::ostringstream out;
    out << "quantity,window_lo,window_hi,extrapolated,uncertainty,raw_innermost,"
           "paper_target,rel_tol,status\n";
    for (const FitRow& r : rows) {
        out << r.quantity << "," << fmt(r.window_lo, "%.6g") << "," << fmt(r.window_hi, "%.6g")
            << "," << fmt(r.extrapolated) << "," << fmt(r.uncertainty, "%.3e") << ","
            << fmt(r.raw_innermost) << "," << fmt(r.target) << "," << fmt(r.rel_tol, "%.2g")
            << "," << (r.passed ? "PASS" : "FAIL") << "\n";
    }
    return out.str();
}

int run_asymptotics(const std::string& in_path, const std::string& report_path,
                    double max_gap) {
    const solver::WaveProfile profile = io::read_profile_json(in_path);
    const asym::RescaledProfile r = asym::rescale(profile, max_gap);
    const bool uni = profile.family == solver::WaveFamily::Unidirectional;

    const asym::Quantity vq =
        uni ? asym::Quantity::ValueHomogeneous : asym::Quantity::ValueLogarithmic;
    const asym::AsymptoticFit value_fit = asym::fit_limit_default(r, vq);
    const asym::AsymptoticFit deriv_fit = asym::derivative_limits(r);

    const double value_tol = uni ? 0.02 : 0.05;
    const double deriv_tol = uni ? 0.03 : 0.07;

    std::vector<FitRow> rows;
    auto add = [&rows](const asym::AsymptoticFit& f, double target, double tol) {
        rows.push_back({asym::quantity_name(f.quantity), f.x_min, f.x_max, f.extrapolated,
                        f.uncertainty, target, tol, f.raw_innermost,
                        std::abs(f.extrapolated - target) <= tol * std::abs(target)});
    };
    add(value_fit, asym::quantity_target(vq), value_tol);
    add(deriv_fit, asym::quantity_target(deriv_fit.quantity), deriv_tol);

    // Corollary constant at the surface-profile level.
    const double corollary = asym::corollary_constant(
        value_fit.extrapolated, profile.family, asym::CorollaryLevel::SurfaceElevation,
        profile.speed_c);
    const double corollary_target = uni ? std::sqrt(kPi / 8.0) : 1.0 / (3.0 * kPi);
    rows.push_back({uni ? "(phi(0)-phi)/|x|^1/2" : "(phi(0)-phi)/(|x|log(1/|x|))",
                    value_fit.x_min, value_fit.x_max, corollary, value_fit.uncertainty,
                    corollary_target, value_tol, 0.0,
                    std::abs(corollary - corollary_target) <= value_tol * corollary_target});

    const std::string csv = fits_to_csv(rows);
    if (report_path.empty())
        std::cout << csv;
    else
        io::atomic_write(report_path, csv);

    bool all = true;
    for (const FitRow& row : rows) all = all && row.passed;
    std::cout << (all ? "PASS" : "FAIL") << ": asymptotic fits (" << rows.size() << " rows)\n";
    return all ? 0 : 1;
}

int run_verify(const std::string& in_path, int points, double threshold, double max_gap) {
    const solver::WaveProfile profile = io::read_profile_json(in_path);
    const asym::RescaledProfile r = asym::rescale(profile, max_gap);

    bool all = true;
    std::printf("x,lhs,rhs,rel_residual,status\n");
    for (int i = 1; i <= points; ++i) {
        const double x = profile.period * i / (4.0 * points);
        const verify::CondensedResidual res = verify::condensed_residual(r, x);
        const bool ok = res.rel_residual <= threshold;
        all = all && ok;
        std::printf("%.6g,%.12g,%.12g,%.3e,%s\n", res.x, res.lhs, res.rhs, res.rel_residual,
                    ok ? "PASS" : "FAIL");
    }
    std::printf("%s: condensed-formulation residuals at %d points (threshold %.1e)\n",
                all ? "PASS" : "FAIL", points, threshold);
    return all ? 0 : 1;
}

int run_report(const std::vector<std::string>& inputs) {
    struct Row {
        std::string source, name;
        double computed, target, tolerance;
        bool passed;
    };
    std::vector<Row> rows;

    for (const std::string& path : inputs) {
        if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
            std::ifstream in(path);
            if (!in) throw Error("cannot open '" + path + "'");
            json arr;
            in >> arr;
            for (const json& j : arr) {
                Row row;
                row.source = path;
                row.name = j.at("name").get<std::string>();
                row.computed = j.at("computed").get<double>();
                row.target = 0.5 * (j.at("expected_lo").get<double>() +
                                    j.at("expected_hi").get<double>());
                if (!std::isfinite(row.target)) row.target = j.at("expected_lo").get<double>();
                row.tolerance = j.at("tolerance").get<double>();
                row.passed = j.at("passed").get<bool>() || j.value("informational", false);
                rows.push_back(row);
            }
        } else {
            std::ifstream in(path);
            if (!in) throw Error("cannot open '" + path + "'");
            std::string line;
            std::getline(in, line); // header
            std::vector<std::string> header;
            {
                std::stringstream ss(line);
                std::string cell;
                while (std::getline(ss, cell, ',')) header.push_back(cell);
            }
            auto col = [&header](const std::string& name) {
                for (std::size_t i = 0; i < header.size(); ++i)
                    if (header[i] == name) return static_cast<int>(i);
                return -1;
            };
            const int c_q = col("quantity"), c_e = col("extrapolated"),
                      c_t = col("paper_target"), c_tol = col("rel_tol"), c_s = col("status");
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::vector<std::string> cells;
                std::stringstream ss(line);
                std::string cell;
                while (std::getline(ss, cell, ',')) cells.push_back(cell);
                if (c_q < 0 || c_s < 0 || c_s >= static_cast<int>(cells.size())) continue;
                Row row;
                row.source = path;
                row.name = cells[c_q];
                row.computed = c_e >= 0 ? std::stod(cells[c_e]) : 0.0;
                row.target = c_t >= 0 ? std::stod(cells[c_t]) : 0.0;
                row.tolerance = c_tol >= 0 ? std::stod(cells[c_tol]) : 0.0;
                row.passed = cells[c_s] == "PASS";
                rows.push_back(row);
            }
        }
    }
    if (rows.empty()) throw CLI::ValidationError("report", "no rows found in the input files");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.passed < b.passed; });
    bool all = true;
    std::printf("%-40s %-16s %-16s %-9s %s\n", "target", "computed", "expected", "tol",
                "status");
    for (const Row& row : rows) {
        all = all && row.passed;
        std::printf("%-40s %-16s %-16s %-9s %s\n", row.name.c_str(),
                    fmt(row.computed).c_str(), fmt(row.target).c_str(),
                    fmt(row.tolerance, "%.2g").c_str(), row.passed ? "PASS" : "FAIL");
    }
    std::printf("%s: %zu targets consolidated from %zu files\n", all ? "PASS" : "FAIL",
                rows.size(), inputs.size());
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady waves of the Whitham equations and their crest asymptotics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");

    // identities
    auto* identities = app.add_subcommand("identities", "verify the integral identities");
    bool id_json = false;
    std::string id_out;
    double id_rel_tol = 1e-10;
    identities->add_flag("--json", id_json, "emit machine-readable JSON");
    identities->add_option("--out", id_out, "write the table to this file");
    identities->add_option("--rel-tol", id_rel_tol, "quadrature relative tolerance");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "tabulate kernel evaluations as CSV");
    std::string k_family = "whitham", k_out;
    bool k_scaled = false;
    double k_xmin = 0.1, k_xmax = 5.0;
    int k_samples = 25, k_pairs = 2000;
    kernel->add_option("--family", k_family, "whitham | bidirectional")->capture_default_str();
    kernel->add_flag("--scaled", k_scaled, "use the canonical scaling (singular part H or L)");
    kernel->add_option("--x-min", k_xmin, "")->capture_default_str();
    kernel->add_option("--x-max", k_xmax, "")->capture_default_str();
    kernel->add_option("--samples", k_samples, "log-spaced sample count")->capture_default_str();
    kernel->add_option("--series-pairs", k_pairs, "merged pairs in the series column")
        ->capture_default_str();
    kernel->add_option("--out", k_out, "write CSV here instead of stdout");

    // solve
    auto* solve = app.add_subcommand("solve", "trace the branch to a near-highest wave");
    std::string s_family = "whitham", s_out = "profile.json", s_history;
    solver::SolverConfig scfg;
    solve->add_option("--family", s_family, "whitham | bidirectional")->capture_default_str();
    solve->add_option("--modes", scfg.modes, "final cosine mode count N")->capture_default_str();
    solve->add_option("--continuation-modes", scfg.continuation_modes,
                      "mode count while tracing the branch")
        ->capture_default_str();
    solve->add_option("--stop-gap", scfg.stop_gap, "stop when height_max - mu < this")
        ->capture_default_str();
    solve->add_option("--period", scfg.period, "wave period")->capture_default_str();
    solve->add_option("--newton-tol", scfg.newton_tol, "")->capture_default_str();
    solve->add_option("--out", s_out, "profile JSON path")->capture_default_str();
    solve->add_option("--history", s_history, "branch history CSV path");

    // asymptotics
    auto* asy = app.add_subcommand("asymptotics", "fit the crest limits of a profile");
    std::string a_in, a_report;
    double a_max_gap = 1e-3;
    asy->add_option("--in", a_in, "profile JSON")->required();
    asy->add_option("--report", a_report, "fits CSV path");
    asy->add_option("--max-gap", a_max_gap, "largest admissible relative crest gap")
        ->capture_default_str();

    // verify
    auto* ver = app.add_subcommand("verify", "condensed-formulation residuals of a profile");
    std::string v_in;
    int v_points = 8;
    double v_threshold = 1e-4, v_max_gap = 1e-3;
    ver->add_option("--in", v_in, "profile JSON")->required();
    ver->add_option("--points", v_points, "sample count on (0, P/4]")->capture_default_str();
    ver->add_option("--threshold", v_threshold, "relative residual threshold")
        ->capture_default_str();
    ver->add_option("--max-gap", v_max_gap, "largest admissible relative crest gap")
        ->capture_default_str();

    // report
    auto* rep = app.add_subcommand("report", "consolidate identity/fit files into one table");
    std::vector<std::string> r_inputs;
    rep->add_option("inputs", r_inputs, "identity JSON and fits CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (identities->parsed()) {
            log_resolved_config(identities);
            quad::QuadratureConfig cfg;
            cfg.rel_tol = id_rel_tol;
            return run_identities(id_json, id_out, cfg);
        }
        if (kernel->parsed()) {
            log_resolved_config(kernel);
            return run_kernel(k_family, k_scaled, k_xmin, k_xmax, k_samples, k_pairs, k_out);
        }
        if (solve->parsed()) {
            log_resolved_config(solve);
            return run_solve(s_family, scfg, s_out, s_history);
        }
        if (asy->parsed()) {
            log_resolved_config(asy);
            return run_asymptotics(a_in, a_report, a_max_gap);
        }
        if (ver->parsed()) {
            log_resolved_config(ver);
            return run_verify(v_in, v_points, v_threshold, v_max_gap);
        }
        if (rep->parsed()) {
            log_resolved_config(rep);
            if (r_inputs.empty()) {
                std::cerr << "report: at least one input file is required\n";
                return 2;
            }
            return run_report(r_inputs);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
