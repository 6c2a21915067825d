#include "curvemom/array.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"

namespace curvemom {

namespace {

std::vector<double> resolved_amplitudes(const ArrayLayout& layout, const SteeringSpec& spec) {
    std::vector<double> amps = spec.amplitudes;
    if (amps.empty()) amps.assign(layout.n_elements, 1.0);
    if (amps.size() != layout.n_elements)
        throw ConfigError("amplitude list length " + std::to_string(amps.size()) +
                          " does not match " + std::to_string(layout.n_elements) + " elements");
    for (double a : amps)
        if (!(a > 0)) throw ConfigError("steering amplitudes must be positive");
    return amps;
}

void validate_spec(const SteeringSpec& spec) {
    if (!(spec.theta0 >= 0 && spec.theta0 <= kPi / 2))
        throw ConfigError("steering theta0 must lie in [0, pi/2]");
}

double cut_value(const FarFieldPattern& pattern, double theta, double phi) {
    std::vector<CutPoint> cut = pattern_cut(pattern, phi);
    if (theta <= cut.front().theta) return cut.front().rg_dbi;
    if (theta >= cut.back().theta) return cut.back().rg_dbi;
    for (std::size_t i = 0; i + 1 < cut.size(); ++i) {
        if (theta <= cut[i + 1].theta) {
            double t = (theta - cut[i].theta) / (cut[i + 1].theta - cut[i].theta);
            return (1 - t) * cut[i].rg_dbi + t * cut[i + 1].rg_dbi;
        }
    }
    return cut.back().rg_dbi;
}

}  // namespace

std::vector<cplx> steering_weights(const ArrayLayout& layout, const SteeringSpec& spec,
                                   Frequency f) {
    validate_spec(spec);
    std::vector<double> amps = resolved_amplitudes(layout, spec);
    double k = wavenumber(f.hz);
    double u = std::sin(spec.theta0) * std::cos(spec.phi0);
    std::vector<cplx> w(layout.n_elements);
    for (std::size_t n = 0; n < w.size(); ++n)
        w[n] = amps[n] * std::exp(cplx(0, -k * n * layout.spacing * u));
    return w;
}

ArrayResult solve_array(const ArrayLayout& layout, const SteeringSpec& spec, Frequency f,
                        GroundModel ground, PatternOptions opts) {
    WireModel model = build_linear_array(layout);
    if (model.ports.size() != layout.n_elements)
        throw ConfigError("array element must expose exactly one feed port");
    std::vector<cplx> w = steering_weights(layout, spec, f);
    for (std::size_t n = 0; n < w.size(); ++n) model.ports[n].gap_voltage = w[n];

    BasisSet bases = build_bases(model, ground);
    Eigen::MatrixXcd Z = fill_impedance_matrix(model, bases, f);
    ArrayResult out;
    out.spec = spec;
    out.solve = solve_currents(Z, model, bases, f);
    out.active_impedances = out.solve.port_impedances;
    out.pattern = compute_pattern(out.solve, model, bases, opts);
    out.gain_at_steering = cut_value(out.pattern, spec.theta0, spec.phi0);
    return out;
}

cplx array_factor(const ArrayLayout& layout, const SteeringSpec& spec, Frequency f,
                  Direction dir) {
    std::vector<cplx> w = steering_weights(layout, spec, f);
    double k = wavenumber(f.hz);
    double u = std::sin(dir.theta) * std::cos(dir.phi);
    cplx af{0, 0};
    for (std::size_t n = 0; n < w.size(); ++n)
        af += w[n] * std::exp(cplx(0, k * n * layout.spacing * u));
    return af;
}

PatternMultEstimate pattern_mult_estimate(const ArrayLayout& layout, const SteeringSpec& spec,
                                          Frequency f, GroundModel ground, PatternOptions opts) {
    WireModel element = build_curved_monopole(layout.element);
    SolveResult iso = solve(element, f, ground);
    BasisSet bases = build_bases(element, ground);
    FarFieldPattern pat = compute_pattern(iso, element, bases, opts);
    if (!(pat.radiated_power > 0)) throw SolverError("degenerate element pattern");

    std::vector<double> amps = resolved_amplitudes(layout, spec);
    double norm = 0;
    for (double a : amps) norm += a * a;

    PatternMultEstimate best;
    best.peak_dbi = -500;
    for (std::size_t it = 0; it < pat.theta.size(); ++it) {
        for (std::size_t ip = 0; ip < pat.phi.size(); ++ip) {
            std::size_t i = pat.index(it, ip);
            double u = (std::norm(pat.e_theta[i]) + std::norm(pat.e_phi[i])) / (2.0 * kEta0);
            double d_elem = 4.0 * kPi * u / pat.radiated_power;
            cplx af = array_factor(layout, spec, f, {pat.theta[it], pat.phi[ip]});
            double est = db10(d_elem * std::norm(af) / norm);
            if (est > best.peak_dbi) {
                best.peak_dbi = est;
                best.peak_theta = pat.theta[it];
                best.peak_phi = pat.phi[ip];
            }
        }
    }
    return best;
}

ElevationReport elevation_report(const ArrayResult& result, double theta_max) {
    ElevationReport rep;
    std::vector<CutPoint> cut = pattern_cut(result.pattern, result.spec.phi0);
    for (const CutPoint& c : cut)
        if (c.theta <= theta_max + 1e-12) rep.rows.push_back({c.theta, c.rg_dbi});
    rep.backlobe_dbi = cut_value(result.pattern, result.spec.theta0, result.spec.phi0 + kPi);
    return rep;
}

double secondary_lobe_level_db(const ArrayResult& result, const ArrayLayout& layout,
                               Frequency f) {
    const FarFieldPattern& pattern = result.pattern;
    GainGrids g = directivity_gain(pattern);
    double lam = wavelength(f.hz);
    double u0 = std::sin(result.spec.theta0) * std::cos(result.spec.phi0);
    double du = lam / (layout.n_elements * layout.spacing);

    double peak = -500, worst = -500;
    for (std::size_t it = 0; it < pattern.theta.size(); ++it) {
        for (std::size_t ip = 0; ip < pattern.phi.size(); ++ip) {
            double v = g.rg_dbi[pattern.index(it, ip)];
            peak = std::max(peak, v);
            double u = std::sin(pattern.theta[it]) * std::cos(pattern.phi[ip]);
            if (std::abs(u - u0) > du) worst = std::max(worst, v);
        }
    }
    return worst - peak;
}

void write_array_report_json(const std::string& path, const ArrayLayout& layout,
                             const ArrayResult& result) {
    ElevationReport rep = elevation_report(result, kPi / 4);
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "{\n";
    out << "  \"n\": " << layout.n_elements << ",\n";
    out << "  \"spacing_m\": " << g9(layout.spacing) << ",\n";
    out << "  \"theta0_deg\": " << g9(result.spec.theta0 * 180.0 / kPi) << ",\n";
    out << "  \"gain_at_steer_dbi\": " << g9(result.gain_at_steering) << ",\n";
    out << "  \"active_z\": [";
    for (std::size_t i = 0; i < result.active_impedances.size(); ++i) {
        if (i) out << ",";
        out << "[" << g9(result.active_impedances[i].real()) << ","
            << g9(result.active_impedances[i].imag()) << "]";
    }
    out << "],\n";
    out << "  \"backlobe_dbi\": " << g9(rep.backlobe_dbi) << "\n";
    out << "}\n";
    if (!out) throw Error("failed while writing " + path);
}

}  // namespace curvemom
