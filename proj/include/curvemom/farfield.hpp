#pragma once

#include <string>
#include <vector>

#include "curvemom/geometry.hpp"
#include "curvemom/mom.hpp"

namespace curvemom {

struct Direction {
    double theta = 0;  // radians from +z
    double phi = 0;    // radians from +x
};

struct EField {
    cplx e_theta{0, 0};
    cplx e_phi{0, 0};
};

struct PatternOptions {
    double theta_step_deg = 1.0;
    double phi_step_deg = 2.0;
    double z0 = 50.0;
};

// Far-zone field samples at 1 m reference distance, phase-referenced to the origin.
// Row-major over (theta, phi).
struct FarFieldPattern {
    std::vector<double> theta;  // radians, ascending
    std::vector<double> phi;    // radians, ascending, [0, 2pi]
    std::vector<cplx> e_theta;
    std::vector<cplx> e_phi;
    double frequency_hz = 0;
    double radiated_power = 0;
    double accepted_power = 0;
    double mismatch_factor = 1;
    GroundModel ground = GroundModel::FreeSpace;

    std::size_t index(std::size_t it, std::size_t ip) const { return it * phi.size() + ip; }
};

struct GainGrids {
    std::vector<double> d_dbi;
    std::vector<double> g_dbi;
    std::vector<double> rg_dbi;
};

struct CutPoint {
    double theta = 0;
    double rg_dbi = 0;
};

struct PatternPeak {
    double rg_dbi = 0;
    double theta = 0;
    double phi = 0;
};

// Radiation integral over the solved basis currents, images included for InfinitePEC.
EField radiated_field(const SolveResult& result, const WireModel& model, const BasisSet& bases,
                      Direction dir);

// Full hemisphere (PEC) or sphere (free space) grid plus radiated/accepted power and
// the port mismatch factor at z0.
FarFieldPattern compute_pattern(const SolveResult& result, const WireModel& model,
                                const BasisSet& bases, PatternOptions opts = {});

// U = (|E_theta|^2 + |E_phi|^2) / (2 eta); D = 4 pi U / P_rad; lossless gain = D;
// realized gain = gain * mismatch.
GainGrids directivity_gain(const FarFieldPattern& pattern);

// Per-port reflection mismatch 1 - sum|b|^2 / sum|a|^2 against a real z0.
double mismatch_factor(const SolveResult& result, double z0);

// Theta profile of realized gain at fixed phi, linear interpolation between phi samples.
std::vector<CutPoint> pattern_cut(const FarFieldPattern& pattern, double phi);

// |P_rad - P_in| / P_in.
double power_balance(const SolveResult& result, const FarFieldPattern& pattern);

PatternPeak pattern_peak(const FarFieldPattern& pattern);

void write_pattern_csv(const std::string& path, const FarFieldPattern& pattern);
void write_pattern_summary_json(const std::string& path, const FarFieldPattern& pattern);

// dB helper clamped at -400 so symmetry nulls stay finite in reports.
double db10(double ratio);

}  // namespace curvemom
