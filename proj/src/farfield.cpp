#include "curvemom/farfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"
#include "curvemom/parallel.hpp"

namespace curvemom {

namespace {

using cvec3 = std::array<cplx, 3>;

struct RadPiece {
    Vec3 origin;
    Vec3 dir;
    double len = 0;
    double a = 0;
    double b = 0;
    cplx current{0, 0};
};

std::vector<RadPiece> collect_pieces(const SolveResult& result, const WireModel& model,
                                     const BasisSet& bases) {
    if (result.currents.size() != bases.bases.size())
        throw SolverError("solution does not match basis set");
    std::vector<RadPiece> out;
    bool image = bases.ground == GroundModel::InfinitePEC;
    for (std::size_t i = 0; i < bases.bases.size(); ++i) {
        cplx amp = result.currents[i];
        for (const BasisPiece& p : bases.bases[i].pieces) {
            const WireSegment& s = model.segments[p.seg];
            RadPiece rp{s.start, s.direction(), s.length(), p.a, p.b, amp};
            out.push_back(rp);
            if (image)
                out.push_back({rp.origin.mirrored(), rp.dir.mirrored(), rp.len, -rp.a, -rp.b, amp});
        }
    }
    return out;
}

EField field_at(const std::vector<RadPiece>& pieces, double k, Direction dir) {
    double st = std::sin(dir.theta), ct = std::cos(dir.theta);
    double sp = std::sin(dir.phi), cp = std::cos(dir.phi);
    Vec3 rhat{st * cp, st * sp, ct};
    Vec3 that{ct * cp, ct * sp, -st};
    Vec3 phat{-sp, cp, 0};

    const auto& x = gauss_nodes(7);
    const auto& w = gauss_weights(7);
    cvec3 n{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};
    for (const RadPiece& p : pieces) {
        cplx s{0, 0};
        for (std::size_t q = 0; q < x.size(); ++q) {
            Vec3 r = p.origin + p.dir * (p.len * x[q]);
            s += w[q] * (p.a + p.b * x[q]) * std::exp(cplx(0, k * rhat.dot(r)));
        }
        cplx amp = p.current * p.len * s;
        n[0] += amp * p.dir.x;
        n[1] += amp * p.dir.y;
        n[2] += amp * p.dir.z;
    }
    cplx nr = n[0] * rhat.x + n[1] * rhat.y + n[2] * rhat.z;
    cvec3 e;
    cplx pref = cplx(0, -1) * k * kEta0 / (4.0 * kPi);
    e[0] = pref * (n[0] - nr * rhat.x);
    e[1] = pref * (n[1] - nr * rhat.y);
    e[2] = pref * (n[2] - nr * rhat.z);
    return {e[0] * that.x + e[1] * that.y + e[2] * that.z,
            e[0] * phat.x + e[1] * phat.y + e[2] * phat.z};
}

std::vector<double> angle_axis(double max_deg, double step_deg) {
    if (step_deg <= 0) throw ConfigError("angle step must be positive");
    double n = max_deg / step_deg;
    auto count = static_cast<std::size_t>(std::lround(n));
    if (std::abs(n - static_cast<double>(count)) > 1e-9)
        throw ConfigError("angle step must divide the angular range");
    std::vector<double> out(count + 1);
    for (std::size_t i = 0; i <= count; ++i) out[i] = i * step_deg * kPi / 180.0;
    return out;
}

double trapezoid_weight(std::size_t i, const std::vector<double>& axis) {
    if (axis.size() < 2) throw ConfigError("angular grid needs at least two samples");
    if (i == 0) return 0.5 * (axis[1] - axis[0]);
    if (i + 1 == axis.size()) return 0.5 * (axis[i] - axis[i - 1]);
    return 0.5 * (axis[i + 1] - axis[i - 1]);
}

}  // namespace

double db10(double ratio) {
    if (!(ratio > 1e-40)) return -400.0;
    return 10.0 * std::log10(ratio);
}

EField radiated_field(const SolveResult& result, const WireModel& model, const BasisSet& bases,
                      Direction dir) {
    if (bases.ground == GroundModel::InfinitePEC && dir.theta > kPi / 2 + 1e-12)
        throw ConfigError("direction below the ground plane");
    auto pieces = collect_pieces(result, model, bases);
    return field_at(pieces, wavenumber(result.frequency.hz), dir);
}

double mismatch_factor(const SolveResult& result, double z0) {
    if (z0 <= 0) throw ConfigError("reference impedance must be positive");
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < result.port_voltages.size(); ++i) {
        cplx a = (result.port_voltages[i] + z0 * result.port_currents[i]) / (2.0 * std::sqrt(z0));
        cplx b = (result.port_voltages[i] - z0 * result.port_currents[i]) / (2.0 * std::sqrt(z0));
        sa += std::norm(a);
        sb += std::norm(b);
    }
    if (sa <= 0) throw SolverError("no incident power at any port");
    return 1.0 - sb / sa;
}

FarFieldPattern compute_pattern(const SolveResult& result, const WireModel& model,
                                const BasisSet& bases, PatternOptions opts) {
    FarFieldPattern pat;
    pat.ground = bases.ground;
    pat.frequency_hz = result.frequency.hz;
    double theta_max = (bases.ground == GroundModel::InfinitePEC) ? 90.0 : 180.0;
    pat.theta = angle_axis(theta_max, opts.theta_step_deg);
    pat.phi = angle_axis(360.0, opts.phi_step_deg);
    pat.e_theta.assign(pat.theta.size() * pat.phi.size(), cplx{0, 0});
    pat.e_phi.assign(pat.theta.size() * pat.phi.size(), cplx{0, 0});

    auto pieces = collect_pieces(result, model, bases);
    double k = wavenumber(result.frequency.hz);
    parallel_for(pat.theta.size(), [&](std::size_t it) {
        for (std::size_t ip = 0; ip < pat.phi.size(); ++ip) {
            EField e = field_at(pieces, k, {pat.theta[it], pat.phi[ip]});
            pat.e_theta[pat.index(it, ip)] = e.e_theta;
            pat.e_phi[pat.index(it, ip)] = e.e_phi;
        }
    });

    double prad = 0;
    for (std::size_t it = 0; it < pat.theta.size(); ++it) {
        double wt = trapezoid_weight(it, pat.theta) * std::sin(pat.theta[it]);
        for (std::size_t ip = 0; ip < pat.phi.size(); ++ip) {
            std::size_t idx = pat.index(it, ip);
            double u = (std::norm(pat.e_theta[idx]) + std::norm(pat.e_phi[idx])) / (2.0 * kEta0);
            prad += wt * trapezoid_weight(ip, pat.phi) * u;
        }
    }
    pat.radiated_power = prad;
    pat.accepted_power = result.input_power();
    pat.mismatch_factor = mismatch_factor(result, opts.z0);
    return pat;
}

GainGrids directivity_gain(const FarFieldPattern& pattern) {
    if (!(pattern.radiated_power > 0)) throw SolverError("degenerate pattern: no radiated power");
    GainGrids g;
    std::size_t n = pattern.e_theta.size();
    g.d_dbi.resize(n);
    g.g_dbi.resize(n);
    g.rg_dbi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = (std::norm(pattern.e_theta[i]) + std::norm(pattern.e_phi[i])) / (2.0 * kEta0);
        double d = 4.0 * kPi * u / pattern.radiated_power;
        g.d_dbi[i] = db10(d);
        g.g_dbi[i] = g.d_dbi[i];
        g.rg_dbi[i] = db10(d * pattern.mismatch_factor);
    }
    return g;
}

std::vector<CutPoint> pattern_cut(const FarFieldPattern& pattern, double phi) {
    double p = std::fmod(phi, 2.0 * kPi);
    if (p < 0) p += 2.0 * kPi;
    const auto& axis = pattern.phi;
    auto hi = std::upper_bound(axis.begin(), axis.end(), p);
    std::size_t ib = std::min<std::size_t>(axis.size() - 1, hi - axis.begin());
    std::size_t ia = ib == 0 ? 0 : ib - 1;
    double t = (ib == ia) ? 0.0 : (p - axis[ia]) / (axis[ib] - axis[ia]);
    GainGrids g = directivity_gain(pattern);
    std::vector<CutPoint> out(pattern.theta.size());
    for (std::size_t it = 0; it < pattern.theta.size(); ++it) {
        double a = g.rg_dbi[pattern.index(it, ia)];
        double b = g.rg_dbi[pattern.index(it, ib)];
        out[it] = {pattern.theta[it], (1.0 - t) * a + t * b};
    }
    return out;
}

double power_balance(const SolveResult& result, const FarFieldPattern& pattern) {
    double pin = result.input_power();
    if (!(pin > 0)) throw SolverError("non-positive input power");
    return std::abs(pattern.radiated_power - pin) / pin;
}

PatternPeak pattern_peak(const FarFieldPattern& pattern) {
    GainGrids g = directivity_gain(pattern);
    std::size_t best = 0;
    for (std::size_t i = 1; i < g.rg_dbi.size(); ++i)
        if (g.rg_dbi[i] > g.rg_dbi[best]) best = i;
    std::size_t it = best / pattern.phi.size();
    std::size_t ip = best % pattern.phi.size();
    return {g.rg_dbi[best], pattern.theta[it], pattern.phi[ip]};
}

void write_pattern_csv(const std::string& path, const FarFieldPattern& pattern) {
    GainGrids g = directivity_gain(pattern);
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "theta_deg,phi_deg,d_dbi,g_dbi,rg_dbi\n";
    for (std::size_t it = 0; it < pattern.theta.size(); ++it) {
        for (std::size_t ip = 0; ip < pattern.phi.size(); ++ip) {
            std::size_t i = pattern.index(it, ip);
            out << g9(pattern.theta[it] * 180.0 / kPi) << ',' << g9(pattern.phi[ip] * 180.0 / kPi)
                << ',' << g9(g.d_dbi[i]) << ',' << g9(g.g_dbi[i]) << ',' << g9(g.rg_dbi[i])
                << '\n';
        }
    }
    if (!out) throw Error("failed while writing " + path);
}

void write_pattern_summary_json(const std::string& path, const FarFieldPattern& pattern) {
    PatternPeak peak = pattern_peak(pattern);
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "{\n";
    out << "  \"peak_rg_dbi\": " << g9(peak.rg_dbi) << ",\n";
    out << "  \"peak_theta_deg\": " << g9(peak.theta * 180.0 / kPi) << ",\n";
    out << "  \"peak_phi_deg\": " << g9(peak.phi * 180.0 / kPi) << ",\n";
    out << "  \"p_rad_w\": " << g9(pattern.radiated_power) << ",\n";
    out << "  \"mismatch\": " << g9(pattern.mismatch_factor) << "\n";
    out << "}\n";
    if (!out) throw Error("failed while writing " + path);
}

}  // namespace curvemom
