#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "curvemom/mom.hpp"

namespace curvemom {

struct ResponseEntry {
    double freq_hz = 0;
    cplx z_in{0, 0};
};

struct FrequencyResponse {
    std::vector<ResponseEntry> entries;
    double z0 = 50.0;
};

struct BandwidthReport {
    double f_low = 0;
    double f_high = 0;
    double bandwidth = 0;
    double threshold_db = -10.0;
    bool contains_fc = false;
};

cplx s11(cplx z_in, double z0);

// 20 log10 |s|; -inf for a perfect match.
double return_loss_db(cplx s);

// Power-ratio equivalent of a dB figure.
inline double ratio_from_db(double db) { return std::pow(10.0, db / 10.0); }

double vswr(cplx s);

// Port-0 response from a sweep; failed points are skipped.
FrequencyResponse make_response(const std::vector<SweepPoint>& sweep, double z0);

// Contiguous band at or below threshold_db containing f_c, else the band with the
// deepest dip; edges linearly interpolated between samples. Empty band -> zeros.
BandwidthReport extract_bandwidth(const FrequencyResponse& resp, double f_c,
                                  double threshold_db = -10.0);

// Frequency of the Im(z_in) zero crossing nearest f_c (interpolated); falls back to
// the deepest-return-loss sample when the reactance never crosses zero.
double resonant_frequency(const FrequencyResponse& resp, double f_c);

std::string touchstone_text(const FrequencyResponse& resp);
void write_touchstone(const std::string& path, const FrequencyResponse& resp);

struct TouchstoneData {
    double z0 = 50.0;
    std::vector<std::pair<double, cplx>> s;
};

TouchstoneData parse_touchstone(const std::string& text);

void write_response_csv(const std::string& path, const FrequencyResponse& resp);

}  // namespace curvemom
