#pragma once

#include <string>
#include <vector>

#include "curvemom/farfield.hpp"
#include "curvemom/geometry.hpp"
#include "curvemom/mom.hpp"

namespace curvemom {

struct SteeringSpec {
    double theta0 = 0;  // radians from zenith
    double phi0 = 0;
    std::vector<double> amplitudes;  // empty = uniform 1.0
};

struct ArrayResult {
    SteeringSpec spec;
    SolveResult solve;
    std::vector<cplx> active_impedances;  // V_n / I_n per driven port
    FarFieldPattern pattern;
    double gain_at_steering = 0;  // realized gain dBi at (theta0, phi0)
};

// Progressive-phase port voltages: amp_n * exp(-j k n d sin(theta0) cos(phi0)).
std::vector<cplx> steering_weights(const ArrayLayout& layout, const SteeringSpec& spec,
                                   Frequency f);

// One coupled solve of the full multi-element model with steering weights as the
// excitation.
ArrayResult solve_array(const ArrayLayout& layout, const SteeringSpec& spec, Frequency f,
                        GroundModel ground, PatternOptions opts = {});

cplx array_factor(const ArrayLayout& layout, const SteeringSpec& spec, Frequency f,
                  Direction dir);

// Isolated-element pattern times |AF|^2 / sum(amp^2): the coupling-free estimate of
// array directivity, with its grid peak.
struct PatternMultEstimate {
    double peak_dbi = 0;
    double peak_theta = 0;
    double peak_phi = 0;
};

PatternMultEstimate pattern_mult_estimate(const ArrayLayout& layout, const SteeringSpec& spec,
                                          Frequency f, GroundModel ground,
                                          PatternOptions opts = {});

struct ElevationRow {
    double theta = 0;
    double rg_dbi = 0;
};

// Realized-gain elevation table at phi = phi0 up to theta_max, plus the level at the
// steered beam's mirror direction (theta0, phi0 + 180 deg).
struct ElevationReport {
    std::vector<ElevationRow> rows;
    double backlobe_dbi = 0;
};

ElevationReport elevation_report(const ArrayResult& result, double theta_max);

// Strongest pattern maximum outside the array-factor main lobe, dB relative to the
// peak. The main lobe is the band |sin(theta)cos(phi) - u0| <= lambda/(N d), the
// first-null width of the uniform linear array, so equal-level grating lobes are
// never mistaken for the main beam.
double secondary_lobe_level_db(const ArrayResult& result, const ArrayLayout& layout,
                               Frequency f);

void write_array_report_json(const std::string& path, const ArrayLayout& layout,
                             const ArrayResult& result);

}  // namespace curvemom
