#include "curvemom/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"
#include "curvemom/svg_plot.hpp"

namespace fs = std::filesystem;

namespace curvemom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// Keeps dB figures JSON-numeric through perfect matches.
double jdb(double v) { return std::max(v, -400.0); }

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

void finish_out(std::ofstream& out, const fs::path& path) {
    if (!out) throw Error("failed while writing " + path.string());
}

std::string ground_name(GroundModel g) {
    return g == GroundModel::InfinitePEC ? "pec-infinite" : "free-space";
}

double best_return_loss(const FrequencyResponse& resp) {
    double best = 0;
    for (const ResponseEntry& e : resp.entries)
        best = std::min(best, return_loss_db(s11(e.z_in, resp.z0)));
    return best;
}

std::vector<double> sweep_rl_column(const std::vector<SweepPoint>& sweep, double z0) {
    std::vector<double> col(sweep.size(), kNaN);
    for (std::size_t i = 0; i < sweep.size(); ++i)
        if (sweep[i].ok && !sweep[i].port_z.empty())
            col[i] = return_loss_db(s11(sweep[i].port_z[0], z0));
    return col;
}

void write_overlay_csv(const fs::path& path, const std::string& x_label,
                       const std::vector<double>& x,
                       const std::vector<std::pair<std::string, std::vector<double>>>& cols) {
    std::ofstream out = open_out(path);
    out << x_label;
    for (const auto& c : cols) out << ',' << c.first;
    out << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << g9(x[i]);
        for (const auto& c : cols) out << ',' << g9(c.second[i]);
        out << '\n';
    }
    finish_out(out, path);
}

void render_overlay_svg(const fs::path& path, const std::string& x_label,
                        const std::vector<double>& x,
                        const std::vector<std::pair<std::string, std::vector<double>>>& cols,
                        bool polar, const std::string& title) {
    std::vector<PlotSeries> series;
    for (const auto& c : cols) series.push_back({c.first, x, c.second});
    write_svg(path.string(), polar ? polar_plot_svg(series, title)
                                   : line_plot_svg(series, x_label, title));
}

std::vector<std::pair<std::string, std::vector<double>>> cut_columns(
    const FarFieldPattern& a, const std::string& la, const FarFieldPattern& b,
    const std::string& lb, std::vector<double>* theta_deg) {
    std::vector<CutPoint> ca = pattern_cut(a, 0.0);
    std::vector<CutPoint> cb = pattern_cut(b, 0.0);
    theta_deg->clear();
    std::vector<double> va, vb;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        theta_deg->push_back(ca[i].theta * 180.0 / kPi);
        va.push_back(ca[i].rg_dbi);
        vb.push_back(cb[i].rg_dbi);
    }
    return {{la, va}, {lb, vb}};
}

SweepReport run_sweep(const RunConfig& cfg, const std::string& parameter,
                      const std::vector<double>& values, bool best_by_bandwidth) {
    validate_config(cfg);
    if (values.empty()) throw ConfigError("sweep values list is empty");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");

    fs::create_directories(cfg.out_dir);
    std::vector<double> grid = frequency_grid(cfg);

    SweepReport rep;
    rep.parameter = parameter;
    std::vector<std::pair<std::string, std::vector<double>>> rl_cols;
    for (double v : values) {
        SweepRecord rec;
        rec.param_value = v;
        CurvedMonopoleParams geom = cfg.geom;
        if (parameter == "kappa")
            geom.kappa = v;
        else
            geom.L_straight = v;
        std::string tag = parameter + "_" + g6(v);
        try {
            DesignRun run = run_design(cfg, geom);
            rec.ok = true;
            rec.best_rl_db = run.best_rl_db;
            rec.resonant_freq_hz = run.resonant_freq_hz;
            rec.bandwidth_hz = run.band.bandwidth;
            rec.peak_rg_dbi = run.peak_rg_dbi;
            rec.failed_points = run.failed_points;
            rec.low_tip =
                geom.theta_curved() > kPi && tip_position(geom).z < geom.L_straight;
            rl_cols.emplace_back(tag + "_db", sweep_rl_column(run.sweep, cfg.z0));
            if (has_format(cfg, "csv"))
                write_response_csv((fs::path(cfg.out_dir) / (tag + ".csv")).string(),
                                   run.response);
            if (has_format(cfg, "s1p"))
                write_touchstone((fs::path(cfg.out_dir) / (tag + ".s1p")).string(),
                                 run.response);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
            rl_cols.emplace_back(tag + "_db", std::vector<double>(grid.size(), kNaN));
        }
        rep.records.push_back(rec);
    }

    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const SweepRecord& r = rep.records[i];
        if (!r.ok) continue;
        if (rep.best_index < 0) {
            rep.best_index = static_cast<std::ptrdiff_t>(i);
            continue;
        }
        const SweepRecord& b = rep.records[rep.best_index];
        bool better = best_by_bandwidth ? r.bandwidth_hz > b.bandwidth_hz
                                        : r.best_rl_db < b.best_rl_db;
        if (better) rep.best_index = static_cast<std::ptrdiff_t>(i);
    }

    std::string stem = "sweep_" + parameter;
    if (has_format(cfg, "csv")) {
        write_overlay_csv(fs::path(cfg.out_dir) / (stem + "_rl.csv"), "freq_hz", grid, rl_cols);
        std::ofstream out = open_out(fs::path(cfg.out_dir) / (stem + "_summary.csv"));
        out << parameter << ",best_rl_db,resonant_freq_hz,bandwidth_hz,peak_rg_dbi,low_tip,ok\n";
        for (const SweepRecord& r : rep.records)
            out << g9(r.param_value) << ',' << g9(jdb(r.best_rl_db)) << ','
                << g9(r.resonant_freq_hz) << ',' << g9(r.bandwidth_hz) << ','
                << g9(r.peak_rg_dbi) << ',' << (r.low_tip ? 1 : 0) << ',' << (r.ok ? 1 : 0)
                << '\n';
        finish_out(out, fs::path(cfg.out_dir) / (stem + "_summary.csv"));
    }
    if (has_format(cfg, "json")) {
        fs::path path = fs::path(cfg.out_dir) / (stem + "_report.json");
        std::ofstream out = open_out(path);
        out << "{\n  \"parameter\": \"" << parameter << "\",\n";
        if (rep.best_index >= 0)
            out << "  \"best_value\": " << g9(rep.records[rep.best_index].param_value) << ",\n";
        else
            out << "  \"best_value\": null,\n";
        out << "  \"records\": [\n";
        for (std::size_t i = 0; i < rep.records.size(); ++i) {
            const SweepRecord& r = rep.records[i];
            out << "    {\"value\": " << g9(r.param_value) << ", \"ok\": "
                << (r.ok ? "true" : "false") << ", \"error\": \"" << json_escape(r.error)
                << "\", \"best_rl_db\": " << g9(jdb(r.best_rl_db))
                << ", \"resonant_freq_hz\": " << g9(r.resonant_freq_hz)
                << ", \"bandwidth_hz\": " << g9(r.bandwidth_hz)
                << ", \"peak_rg_dbi\": " << g9(r.peak_rg_dbi)
                << ", \"low_tip\": " << (r.low_tip ? "true" : "false")
                << ", \"failed_points\": " << r.failed_points << "}"
                << (i + 1 < rep.records.size() ? "," : "") << "\n";
        }
        out << "  ]\n}\n";
        finish_out(out, path);
    }
    if (has_format(cfg, "svg"))
        render_overlay_svg(fs::path(cfg.out_dir) / (stem + "_rl.svg"), "freq_hz", grid, rl_cols,
                           false, "return loss, dB");
    write_manifest(cfg, stem);
    return rep;
}

void write_compare_json(const fs::path& path, const CompareReport& rep) {
    std::ofstream out = open_out(path);
    auto block = [&](const DesignSummary& d) {
        out << "{\"best_rl_db\": " << g9(jdb(d.best_rl_db)) << ", \"resonant_freq_hz\": "
            << g9(d.resonant_freq_hz) << ", \"bandwidth_hz\": " << g9(d.bandwidth_hz)
            << ", \"peak_rg_dbi\": " << g9(d.peak_rg_dbi) << "}";
    };
    out << "{\n  \"straight\": ";
    block(rep.straight);
    out << ",\n  \"curved\": ";
    block(rep.curved);
    out << ",\n  \"delta_peak_rg_db\": " << g9(rep.delta_peak_rg_db)
        << ",\n  \"delta_peak_rg_ratio\": " << g9(rep.delta_peak_rg_ratio)
        << ",\n  \"delta_bandwidth_hz\": " << g9(rep.delta_bandwidth_hz) << "\n}\n";
    finish_out(out, path);
}

}  // namespace

void validate_config(const RunConfig& cfg) {
    if (!(cfg.freq_start > 0) || !(cfg.freq_stop > cfg.freq_start))
        throw ConfigError("frequency grid needs 0 < start < stop");
    if (cfg.freq_points < 2) throw ConfigError("frequency grid needs at least 2 points");
    if (cfg.n_elements < 1) throw ConfigError("array needs at least one element");
    if (!(cfg.spacing > 0)) throw ConfigError("array spacing must be positive");
    if (!(cfg.steer_theta_deg >= 0 && cfg.steer_theta_deg <= 90))
        throw ConfigError("steering angle must lie in [0, 90] degrees");
    if (cfg.threshold_db >= 0) throw ConfigError("bandwidth threshold must be negative");
    if (!(cfg.z0 > 0)) throw ConfigError("reference impedance must be positive");
    if (cfg.out_dir.empty()) throw ConfigError("output directory must be set");
    for (const std::string& f : cfg.formats)
        if (f != "csv" && f != "s1p" && f != "json" && f != "svg")
            throw ConfigError("unknown output format '" + f + "'");
}

std::vector<double> frequency_grid(const RunConfig& cfg) {
    std::vector<double> grid(cfg.freq_points);
    for (std::size_t i = 0; i < cfg.freq_points; ++i)
        grid[i] = cfg.freq_start +
                  i * (cfg.freq_stop - cfg.freq_start) / (cfg.freq_points - 1);
    return grid;
}

bool has_format(const RunConfig& cfg, const std::string& fmt) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

DesignRun run_design(const RunConfig& cfg, const CurvedMonopoleParams& geom) {
    DesignRun run;
    run.model = build_curved_monopole(geom);
    run.sweep = input_impedance_sweep(run.model, frequency_grid(cfg), cfg.ground);
    for (const SweepPoint& pt : run.sweep)
        if (!pt.ok) ++run.failed_points;
    run.response = make_response(run.sweep, cfg.z0);
    if (run.response.entries.empty()) {
        std::string first = run.sweep.empty() ? "empty grid" : run.sweep.front().error;
        throw SolverError("every sweep point failed; first error: " + first);
    }
    run.band = extract_bandwidth(run.response, geom.f_c, cfg.threshold_db);
    run.resonant_freq_hz = resonant_frequency(run.response, geom.f_c);
    run.best_rl_db = best_return_loss(run.response);

    BasisSet bases = build_bases(run.model, cfg.ground);
    Eigen::MatrixXcd Z = fill_impedance_matrix(run.model, bases, Frequency{geom.f_c});
    SolveResult sol = solve_currents(Z, run.model, bases, Frequency{geom.f_c});
    PatternOptions opts;
    opts.z0 = cfg.z0;
    run.pattern = compute_pattern(sol, run.model, bases, opts);
    run.peak_rg_dbi = pattern_peak(run.pattern).rg_dbi;
    return run;
}

bool SweepReport::partial_failure() const {
    for (const SweepRecord& r : records)
        if (!r.ok || r.failed_points > 0) return true;
    return false;
}

SweepReport cmd_sweep_kappa(const RunConfig& cfg) {
    return run_sweep(cfg, "kappa", cfg.kappa_values, true);
}

SweepReport cmd_sweep_straight(const RunConfig& cfg) {
    return run_sweep(cfg, "l_straight", cfg.l_straight_values, false);
}

CompareReport cmd_compare(const RunConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);

    CurvedMonopoleParams straight_geom = cfg.geom;
    straight_geom.kappa = 0;
    DesignRun rs = run_design(cfg, straight_geom);
    DesignRun rc = run_design(cfg, cfg.geom);

    CompareReport rep;
    rep.straight = {rs.best_rl_db, rs.resonant_freq_hz, rs.band.bandwidth, rs.peak_rg_dbi};
    rep.curved = {rc.best_rl_db, rc.resonant_freq_hz, rc.band.bandwidth, rc.peak_rg_dbi};
    rep.delta_peak_rg_db = rc.peak_rg_dbi - rs.peak_rg_dbi;
    rep.delta_peak_rg_ratio = ratio_from_db(rep.delta_peak_rg_db);
    rep.delta_bandwidth_hz = rc.band.bandwidth - rs.band.bandwidth;
    rep.failed_points = rs.failed_points + rc.failed_points;

    std::vector<double> grid = frequency_grid(cfg);
    std::vector<std::pair<std::string, std::vector<double>>> rl_cols = {
        {"straight_db", sweep_rl_column(rs.sweep, cfg.z0)},
        {"curved_db", sweep_rl_column(rc.sweep, cfg.z0)}};
    std::vector<double> theta_deg;
    auto cut_cols = cut_columns(rs.pattern, "straight_dbi", rc.pattern, "curved_dbi", &theta_deg);

    fs::path dir(cfg.out_dir);
    if (has_format(cfg, "csv")) {
        write_overlay_csv(dir / "rl_overlay.csv", "freq_hz", grid, rl_cols);
        write_overlay_csv(dir / "cut_overlay.csv", "theta_deg", theta_deg, cut_cols);
        write_pattern_csv((dir / "pattern_straight.csv").string(), rs.pattern);
        write_pattern_csv((dir / "pattern_curved.csv").string(), rc.pattern);
    }
    if (has_format(cfg, "s1p")) {
        write_touchstone((dir / "straight.s1p").string(), rs.response);
        write_touchstone((dir / "curved.s1p").string(), rc.response);
    }
    if (has_format(cfg, "json")) write_compare_json(dir / "compare.json", rep);
    if (has_format(cfg, "svg")) {
        render_overlay_svg(dir / "rl_overlay.svg", "freq_hz", grid, rl_cols, false,
                           "return loss, dB");
        render_overlay_svg(dir / "cut_overlay.svg", "theta_deg", theta_deg, cut_cols, true,
                           "realized gain, dBi");
    }
    write_manifest(cfg, "compare");
    return rep;
}

ArrayCompareReport cmd_array(const RunConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);

    ArrayLayout curved{cfg.geom, cfg.n_elements, cfg.spacing};
    ArrayLayout straight = curved;
    straight.element.kappa = 0;
    SteeringSpec spec{cfg.steer_theta_deg * kPi / 180.0, 0.0, {}};
    Frequency f{cfg.geom.f_c};
    PatternOptions opts;
    opts.z0 = cfg.z0;

    ArrayResult as = solve_array(straight, spec, f, cfg.ground, opts);
    ArrayResult ac = solve_array(curved, spec, f, cfg.ground, opts);
    ElevationReport es = elevation_report(as, kPi / 4);
    ElevationReport ec = elevation_report(ac, kPi / 4);

    ArrayCompareReport rep;
    rep.gain_at_steer_straight_dbi = as.gain_at_steering;
    rep.gain_at_steer_curved_dbi = ac.gain_at_steering;
    rep.delta_gain_db = ac.gain_at_steering - as.gain_at_steering;
    rep.backlobe_straight_dbi = es.backlobe_dbi;
    rep.backlobe_curved_dbi = ec.backlobe_dbi;

    std::vector<double> theta_deg;
    auto cut_cols = cut_columns(as.pattern, "straight_dbi", ac.pattern, "curved_dbi", &theta_deg);

    fs::path dir(cfg.out_dir);
    if (has_format(cfg, "csv")) {
        write_overlay_csv(dir / "array_cut_overlay.csv", "theta_deg", theta_deg, cut_cols);
        auto elev_csv = [&](const fs::path& path, const ElevationReport& er) {
            std::ofstream out = open_out(path);
            out << "theta_deg,rg_dbi\n";
            for (const ElevationRow& row : er.rows)
                out << g9(row.theta * 180.0 / kPi) << ',' << g9(row.rg_dbi) << '\n';
            finish_out(out, path);
        };
        elev_csv(dir / "array_elevation_straight.csv", es);
        elev_csv(dir / "array_elevation_curved.csv", ec);
        write_pattern_csv((dir / "array_pattern_straight.csv").string(), as.pattern);
        write_pattern_csv((dir / "array_pattern_curved.csv").string(), ac.pattern);
    }
    if (has_format(cfg, "json")) {
        write_array_report_json((dir / "array_straight.json").string(), straight, as);
        write_array_report_json((dir / "array_curved.json").string(), curved, ac);
        fs::path path = dir / "array_compare.json";
        std::ofstream out = open_out(path);
        out << "{\n";
        out << "  \"gain_at_steer_straight_dbi\": " << g9(rep.gain_at_steer_straight_dbi)
            << ",\n";
        out << "  \"gain_at_steer_curved_dbi\": " << g9(rep.gain_at_steer_curved_dbi) << ",\n";
        out << "  \"delta_gain_db\": " << g9(rep.delta_gain_db) << ",\n";
        out << "  \"backlobe_straight_dbi\": " << g9(rep.backlobe_straight_dbi) << ",\n";
        out << "  \"backlobe_curved_dbi\": " << g9(rep.backlobe_curved_dbi) << "\n";
        out << "}\n";
        finish_out(out, path);
    }
    if (has_format(cfg, "svg"))
        render_overlay_svg(dir / "array_cut_overlay.svg", "theta_deg", theta_deg, cut_cols, true,
                           "realized gain, dBi");
    write_manifest(cfg, "array");
    return rep;
}

void cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir) {
    if (csv_paths.empty()) throw ConfigError("plot needs at least one CSV input");
    fs::create_directories(out_dir);
    for (const std::string& p : csv_paths) {
        CsvTable table = read_csv_table(p);
        std::string stem = fs::path(p).stem().string();
        std::string svg = (table.x_label == "theta_deg")
                              ? polar_plot_svg(table.series, stem)
                              : line_plot_svg(table.series, table.x_label, stem);
        write_svg((fs::path(out_dir) / (stem + ".svg")).string(), svg);
    }
}

void cmd_export_nec(const RunConfig& cfg, const std::string& filename) {
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);
    WireModel model = build_curved_monopole(cfg.geom);
    fs::path path = fs::path(cfg.out_dir) / filename;
    std::ofstream out = open_out(path);
    out << export_nec_cards(model);
    finish_out(out, path);
    write_manifest(cfg, "export-nec");
}

void write_manifest(const RunConfig& cfg, const std::string& command) {
    fs::create_directories(cfg.out_dir);
    fs::path path = fs::path(cfg.out_dir) / "manifest.json";
    std::ofstream out = open_out(path);
    out << "{\n";
    out << "  \"command\": \"" << json_escape(command) << "\",\n";
    out << "  \"geometry\": {\"f_c_hz\": " << g9(cfg.geom.f_c) << ", \"l_ref_m\": "
        << g9(cfg.geom.L_ref) << ", \"l_straight_m\": " << g9(cfg.geom.L_straight)
        << ", \"kappa_per_m\": " << g9(cfg.geom.kappa) << ", \"wire_radius_m\": "
        << g9(cfg.geom.wire_radius) << ", \"segments_per_wavelength\": "
        << g9(cfg.geom.segments_per_wavelength) << "},\n";
    out << "  \"kappa_values\": [";
    for (std::size_t i = 0; i < cfg.kappa_values.size(); ++i)
        out << (i ? ", " : "") << g9(cfg.kappa_values[i]);
    out << "],\n";
    out << "  \"l_straight_values\": [";
    for (std::size_t i = 0; i < cfg.l_straight_values.size(); ++i)
        out << (i ? ", " : "") << g9(cfg.l_straight_values[i]);
    out << "],\n";
    out << "  \"frequency\": {\"start_hz\": " << g9(cfg.freq_start) << ", \"stop_hz\": "
        << g9(cfg.freq_stop) << ", \"points\": " << cfg.freq_points << "},\n";
    out << "  \"ground\": \"" << ground_name(cfg.ground) << "\",\n";
    out << "  \"out_dir\": \"" << json_escape(cfg.out_dir) << "\",\n";
    out << "  \"formats\": [";
    for (std::size_t i = 0; i < cfg.formats.size(); ++i)
        out << (i ? ", " : "") << '"' << json_escape(cfg.formats[i]) << '"';
    out << "],\n";
    out << "  \"array\": {\"n_elements\": " << cfg.n_elements << ", \"spacing_m\": "
        << g9(cfg.spacing) << ", \"steer_theta_deg\": " << g9(cfg.steer_theta_deg) << "},\n";
    out << "  \"threshold_db\": " << g9(cfg.threshold_db) << ",\n";
    out << "  \"z0_ohm\": " << g9(cfg.z0) << "\n";
    out << "}\n";
    finish_out(out, path);
}

}  // namespace curvemom
