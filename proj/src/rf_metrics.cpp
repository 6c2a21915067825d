#include "curvemom/rf_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"

namespace curvemom {

namespace {

void validate(const FrequencyResponse& resp) {
    if (resp.entries.empty()) throw ConfigError("frequency response is empty");
    if (resp.z0 <= 0) throw ConfigError("reference impedance must be positive");
    for (std::size_t i = 1; i < resp.entries.size(); ++i)
        if (!(resp.entries[i].freq_hz > resp.entries[i - 1].freq_hz))
            throw ConfigError("frequencies must be strictly increasing");
}

// Return loss clamped to a finite floor so edge interpolation stays well defined
// through perfectly matched samples.
std::vector<double> clamped_rl(const FrequencyResponse& resp) {
    std::vector<double> rl(resp.entries.size());
    for (std::size_t i = 0; i < rl.size(); ++i)
        rl[i] = std::max(-400.0, return_loss_db(s11(resp.entries[i].z_in, resp.z0)));
    return rl;
}

struct Band {
    std::size_t i0, i1;
    double f_low, f_high, dip;
};

}  // namespace

cplx s11(cplx z_in, double z0) {
    if (z0 <= 0) throw ConfigError("reference impedance must be positive");
    cplx den = z_in + z0;
    if (std::abs(den) == 0) throw ConfigError("reflection coefficient pole at z_in = -z0");
    return (z_in - z0) / den;
}

double return_loss_db(cplx s) {
    double m = std::abs(s);
    if (m == 0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(m);
}

double vswr(cplx s) {
    double m = std::abs(s);
    if (m >= 1) return std::numeric_limits<double>::infinity();
    return (1 + m) / (1 - m);
}

FrequencyResponse make_response(const std::vector<SweepPoint>& sweep, double z0) {
    FrequencyResponse resp;
    resp.z0 = z0;
    for (const SweepPoint& pt : sweep)
        if (pt.ok && !pt.port_z.empty()) resp.entries.push_back({pt.freq_hz, pt.port_z[0]});
    return resp;
}

BandwidthReport extract_bandwidth(const FrequencyResponse& resp, double f_c,
                                  double threshold_db) {
    validate(resp);
    if (threshold_db >= 0) throw ConfigError("bandwidth threshold must be negative");
    std::vector<double> rl = clamped_rl(resp);
    const auto& e = resp.entries;

    std::vector<Band> bands;
    std::size_t i = 0;
    while (i < e.size()) {
        if (rl[i] > threshold_db) {
            ++i;
            continue;
        }
        std::size_t i0 = i;
        while (i + 1 < e.size() && rl[i + 1] <= threshold_db) ++i;
        std::size_t i1 = i;
        Band b{i0, i1, e[i0].freq_hz, e[i1].freq_hz, rl[i0]};
        for (std::size_t j = i0; j <= i1; ++j) b.dip = std::min(b.dip, rl[j]);
        if (i0 > 0) {
            double t = (threshold_db - rl[i0 - 1]) / (rl[i0] - rl[i0 - 1]);
            b.f_low = e[i0 - 1].freq_hz + t * (e[i0].freq_hz - e[i0 - 1].freq_hz);
        }
        if (i1 + 1 < e.size()) {
            double t = (threshold_db - rl[i1]) / (rl[i1 + 1] - rl[i1]);
            b.f_high = e[i1].freq_hz + t * (e[i1 + 1].freq_hz - e[i1].freq_hz);
        }
        bands.push_back(b);
        ++i;
    }

    BandwidthReport rep;
    rep.threshold_db = threshold_db;
    if (bands.empty()) return rep;

    const Band* pick = nullptr;
    for (const Band& b : bands)
        if (b.f_low <= f_c && f_c <= b.f_high) pick = &b;
    if (!pick) {
        pick = &bands[0];
        for (const Band& b : bands)
            if (b.dip < pick->dip) pick = &b;
    }
    rep.f_low = pick->f_low;
    rep.f_high = pick->f_high;
    rep.bandwidth = pick->f_high - pick->f_low;
    rep.contains_fc = pick->f_low <= f_c && f_c <= pick->f_high;
    return rep;
}

double resonant_frequency(const FrequencyResponse& resp, double f_c) {
    validate(resp);
    const auto& e = resp.entries;
    double best = 0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        double x0 = e[i].z_in.imag(), x1 = e[i + 1].z_in.imag();
        double f = 0;
        if (x0 == 0)
            f = e[i].freq_hz;
        else if (x0 * x1 < 0)
            f = e[i].freq_hz + (-x0 / (x1 - x0)) * (e[i + 1].freq_hz - e[i].freq_hz);
        else
            continue;
        if (!found || std::abs(f - f_c) < std::abs(best - f_c)) {
            best = f;
            found = true;
        }
    }
    if (e.back().z_in.imag() == 0 &&
        (!found || std::abs(e.back().freq_hz - f_c) < std::abs(best - f_c))) {
        best = e.back().freq_hz;
        found = true;
    }
    if (found) return best;
    std::vector<double> rl = clamped_rl(resp);
    std::size_t dip = std::min_element(rl.begin(), rl.end()) - rl.begin();
    return e[dip].freq_hz;
}

std::string touchstone_text(const FrequencyResponse& resp) {
    validate(resp);
    std::string out = "# Hz S RI R " + g9(resp.z0) + "\n";
    for (const ResponseEntry& e : resp.entries) {
        cplx s = s11(e.z_in, resp.z0);
        out += g9(e.freq_hz) + " " + f9(s.real()) + " " + f9(s.imag()) + "\n";
    }
    return out;
}

void write_touchstone(const std::string& path, const FrequencyResponse& resp) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << touchstone_text(resp);
    if (!out) throw Error("failed while writing " + path);
}

TouchstoneData parse_touchstone(const std::string& text) {
    TouchstoneData data;
    bool have_option = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto bang = line.find('!');
        if (bang != std::string::npos) line.erase(bang);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "#") {
            std::string unit, param, fmt, r;
            double z0 = 0;
            if (!(ls >> unit >> param >> fmt >> r >> z0) || unit != "Hz" || param != "S" ||
                fmt != "RI" || r != "R" || z0 <= 0)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": unsupported Touchstone option line");
            data.z0 = z0;
            have_option = true;
            continue;
        }
        double f = 0, re = 0, im = 0;
        try {
            f = std::stod(tok);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad frequency");
        }
        if (!(ls >> re >> im))
            throw ParseError("line " + std::to_string(lineno) + ": expected 'freq re im'");
        data.s.emplace_back(f, cplx{re, im});
    }
    if (!have_option) throw ParseError("missing Touchstone option line");
    return data;
}

void write_response_csv(const std::string& path, const FrequencyResponse& resp) {
    validate(resp);
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "freq_hz,re_zin,im_zin,s11_db\n";
    for (const ResponseEntry& e : resp.entries) {
        double rl = return_loss_db(s11(e.z_in, resp.z0));
        out << g9(e.freq_hz) << ',' << g9(e.z_in.real()) << ',' << g9(e.z_in.imag()) << ','
            << g9(rl) << '\n';
    }
    if (!out) throw Error("failed while writing " + path);
}

}  // namespace curvemom
