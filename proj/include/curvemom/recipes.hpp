#pragma once

#include <string>
#include <vector>

#include "curvemom/array.hpp"
#include "curvemom/farfield.hpp"
#include "curvemom/geometry.hpp"
#include "curvemom/mom.hpp"
#include "curvemom/rf_metrics.hpp"

namespace curvemom {

struct RunConfig {
    CurvedMonopoleParams geom;
    std::vector<double> kappa_values{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> l_straight_values{1.0, 1.5, 2.0, 2.5, 3.0};
    double freq_start = 12e6;
    double freq_stop = 18e6;
    std::size_t freq_points = 61;
    GroundModel ground = GroundModel::InfinitePEC;
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "s1p", "json", "svg"};
    std::size_t n_elements = 12;
    double spacing = 9.0;
    double steer_theta_deg = 30.0;
    double threshold_db = -10.0;
    double z0 = 50.0;
};

void validate_config(const RunConfig& cfg);
std::vector<double> frequency_grid(const RunConfig& cfg);
bool has_format(const RunConfig& cfg, const std::string& fmt);

// One design evaluated end to end: impedance sweep over the grid plus the pattern at
// the design frequency.
struct DesignRun {
    WireModel model;
    std::vector<SweepPoint> sweep;
    FrequencyResponse response;
    BandwidthReport band;
    double best_rl_db = 0;
    double resonant_freq_hz = 0;
    double peak_rg_dbi = 0;
    FarFieldPattern pattern;
    std::size_t failed_points = 0;
};

DesignRun run_design(const RunConfig& cfg, const CurvedMonopoleParams& geom);

struct SweepRecord {
    double param_value = 0;
    bool ok = false;
    std::string error;
    double best_rl_db = 0;
    double resonant_freq_hz = 0;
    double bandwidth_hz = 0;
    double peak_rg_dbi = 0;
    bool low_tip = false;
    std::size_t failed_points = 0;
};

struct SweepReport {
    std::string parameter;
    std::vector<SweepRecord> records;
    std::ptrdiff_t best_index = -1;

    bool partial_failure() const;
};

// Return-loss sweep over kappa_values at fixed L_straight; best = widest band.
SweepReport cmd_sweep_kappa(const RunConfig& cfg);

// Return-loss sweep over l_straight_values at fixed kappa; best = deepest match.
SweepReport cmd_sweep_straight(const RunConfig& cfg);

struct DesignSummary {
    double best_rl_db = 0;
    double resonant_freq_hz = 0;
    double bandwidth_hz = 0;
    double peak_rg_dbi = 0;
};

struct CompareReport {
    DesignSummary straight;
    DesignSummary curved;
    double delta_peak_rg_db = 0;
    double delta_peak_rg_ratio = 1;
    double delta_bandwidth_hz = 0;
    std::size_t failed_points = 0;
};

// Curved design vs the straight reference of the same total length, same mesh rules.
CompareReport cmd_compare(const RunConfig& cfg);

struct ArrayCompareReport {
    double gain_at_steer_straight_dbi = 0;
    double gain_at_steer_curved_dbi = 0;
    double delta_gain_db = 0;
    double backlobe_straight_dbi = 0;
    double backlobe_curved_dbi = 0;
};

ArrayCompareReport cmd_array(const RunConfig& cfg);

// Renders each CSV to <out_dir>/<stem>.svg; theta_deg tables become polar cuts.
void cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir);

void cmd_export_nec(const RunConfig& cfg, const std::string& filename);

// Config echo; the only place run identity lives, data files stay byte-deterministic.
void write_manifest(const RunConfig& cfg, const std::string& command);

}  // namespace curvemom
