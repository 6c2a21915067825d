#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "curvemom/array.hpp"
#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/farfield.hpp"
#include "curvemom/geometry.hpp"
#include "curvemom/mom.hpp"
#include "curvemom/rf_metrics.hpp"

namespace py = pybind11;
using namespace curvemom;

namespace {

GroundModel ground_from_name(const std::string& name) {
    if (name == "pec-infinite") return GroundModel::InfinitePEC;
    if (name == "free-space") return GroundModel::FreeSpace;
    throw ConfigError("unknown ground model '" + name + "'");
}

double pick_freq(const CurvedMonopoleParams& p, std::optional<double> freq_hz) {
    return freq_hz.value_or(p.f_c);
}

struct SolvedDesign {
    WireModel model;
    BasisSet bases;
    SolveResult result;
};

SolvedDesign solve_design(const CurvedMonopoleParams& p, double freq_hz, GroundModel ground) {
    SolvedDesign s;
    s.model = build_curved_monopole(p);
    s.bases = build_bases(s.model, ground);
    s.result = solve_currents(fill_impedance_matrix(s.model, s.bases, Frequency{freq_hz}),
                              s.model, s.bases, Frequency{freq_hz});
    return s;
}

FrequencyResponse response_from_lists(const std::vector<double>& freqs_hz,
                                      const std::vector<cplx>& z_in, double z0) {
    if (freqs_hz.size() != z_in.size())
        throw ConfigError("freqs and impedances must have the same length");
    FrequencyResponse resp;
    resp.z0 = z0;
    for (std::size_t i = 0; i < freqs_hz.size(); ++i)
        resp.entries.push_back({freqs_hz[i], z_in[i]});
    return resp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "thin-wire solver for a curved HF monopole and its linear array";

    py::register_exception<Error>(m, "CurvemomError");

    py::class_<CurvedMonopoleParams>(m, "Design")
        .def(py::init([](double f_c, double l_ref, double l_straight, double kappa,
                         double wire_radius, double segments_per_wavelength) {
                 CurvedMonopoleParams p;
                 p.f_c = f_c;
                 p.L_ref = l_ref;
                 p.L_straight = l_straight;
                 p.kappa = kappa;
                 p.wire_radius = wire_radius;
                 p.segments_per_wavelength = segments_per_wavelength;
                 return p;
             }),
             py::arg("f_c") = 15e6, py::arg("l_ref") = 4.67, py::arg("l_straight") = 2.0,
             py::arg("kappa") = 0.5, py::arg("wire_radius") = 0.01,
             py::arg("segments_per_wavelength") = 40)
        .def_readwrite("f_c", &CurvedMonopoleParams::f_c)
        .def_readwrite("l_ref", &CurvedMonopoleParams::L_ref)
        .def_readwrite("l_straight", &CurvedMonopoleParams::L_straight)
        .def_readwrite("kappa", &CurvedMonopoleParams::kappa)
        .def_readwrite("wire_radius", &CurvedMonopoleParams::wire_radius)
        .def_readwrite("segments_per_wavelength", &CurvedMonopoleParams::segments_per_wavelength)
        .def_property_readonly("l_curved", &CurvedMonopoleParams::L_curved)
        .def_property_readonly("theta_curved", &CurvedMonopoleParams::theta_curved)
        .def("__repr__", [](const CurvedMonopoleParams& p) {
            return "Design(f_c=" + std::to_string(p.f_c) + ", l_ref=" + std::to_string(p.L_ref) +
                   ", l_straight=" + std::to_string(p.L_straight) +
                   ", kappa=" + std::to_string(p.kappa) + ")";
        });

    m.def(
        "tip_position",
        [](const CurvedMonopoleParams& p) {
            Vec3 t = tip_position(p);
            return py::make_tuple(t.x, t.y, t.z);
        },
        py::arg("design"), "Closed-form tip of the monopole, meters.");

    m.def("reference_length", &reference_length, py::arg("f_c_hz"),
          "Quarter wavelength at the design frequency, meters.");

    m.def(
        "segment_count",
        [](const CurvedMonopoleParams& p) { return build_curved_monopole(p).segments.size(); },
        py::arg("design"));

    m.def(
        "input_impedance",
        [](const CurvedMonopoleParams& p, std::optional<double> freq_hz,
           const std::string& ground) {
            GroundModel g = ground_from_name(ground);
            double f = pick_freq(p, freq_hz);
            SolveResult r;
            {
                py::gil_scoped_release release;
                r = solve(build_curved_monopole(p), Frequency{f}, g);
            }
            return r.port_impedances.at(0);
        },
        py::arg("design"), py::arg("freq_hz") = std::nullopt,
        py::arg("ground") = "pec-infinite",
        "Feed-point impedance of the monopole, ohms.");

    m.def(
        "impedance_sweep",
        [](const CurvedMonopoleParams& p, const std::vector<double>& freqs_hz,
           const std::string& ground) {
            GroundModel g = ground_from_name(ground);
            WireModel model = build_curved_monopole(p);
            std::vector<SweepPoint> pts;
            {
                py::gil_scoped_release release;
                pts = input_impedance_sweep(model, freqs_hz, g);
            }
            py::list out;
            for (const SweepPoint& pt : pts) {
                py::dict d;
                d["freq_hz"] = pt.freq_hz;
                d["ok"] = pt.ok;
                d["z"] = pt.ok ? py::object(py::cast(pt.port_z.at(0)))
                               : py::object(py::none());
                d["error"] = pt.error;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("design"), py::arg("freqs_hz"), py::arg("ground") = "pec-infinite",
        "Per-frequency impedance; failures are reported, not raised.");

    m.def(
        "pattern_summary",
        [](const CurvedMonopoleParams& p, std::optional<double> freq_hz,
           const std::string& ground, double z0) {
            GroundModel g = ground_from_name(ground);
            double f = pick_freq(p, freq_hz);
            PatternOptions opts;
            opts.z0 = z0;
            FarFieldPattern pat;
            SolvedDesign s;
            {
                py::gil_scoped_release release;
                s = solve_design(p, f, g);
                pat = compute_pattern(s.result, s.model, s.bases, opts);
            }
            PatternPeak peak = pattern_peak(pat);
            py::dict d;
            d["peak_rg_dbi"] = peak.rg_dbi;
            d["peak_theta_deg"] = peak.theta * 180.0 / kPi;
            d["peak_phi_deg"] = peak.phi * 180.0 / kPi;
            d["radiated_power_w"] = pat.radiated_power;
            d["accepted_power_w"] = pat.accepted_power;
            d["mismatch_factor"] = pat.mismatch_factor;
            d["z_in"] = s.result.port_impedances.at(0);
            return d;
        },
        py::arg("design"), py::arg("freq_hz") = std::nullopt,
        py::arg("ground") = "pec-infinite", py::arg("z0") = 50.0,
        "Solve and integrate the far field; realized-gain peak and power balance.");

    m.def(
        "bandwidth",
        [](const std::vector<double>& freqs_hz, const std::vector<cplx>& z_in, double f_c,
           double z0, double threshold_db) {
            BandwidthReport rep =
                extract_bandwidth(response_from_lists(freqs_hz, z_in, z0), f_c, threshold_db);
            py::dict d;
            d["f_low_hz"] = rep.f_low;
            d["f_high_hz"] = rep.f_high;
            d["bandwidth_hz"] = rep.bandwidth;
            d["contains_fc"] = rep.contains_fc;
            return d;
        },
        py::arg("freqs_hz"), py::arg("z_in"), py::arg("f_c"), py::arg("z0") = 50.0,
        py::arg("threshold_db") = -10.0,
        "Return-loss bandwidth with linearly interpolated band edges.");

    m.def(
        "resonant_frequency",
        [](const std::vector<double>& freqs_hz, const std::vector<cplx>& z_in, double f_c,
           double z0) {
            return resonant_frequency(response_from_lists(freqs_hz, z_in, z0), f_c);
        },
        py::arg("freqs_hz"), py::arg("z_in"), py::arg("f_c"), py::arg("z0") = 50.0);

    m.def(
        "array_summary",
        [](const CurvedMonopoleParams& p, std::size_t n_elements, double spacing_m,
           double steer_theta_deg, std::optional<double> freq_hz, const std::string& ground) {
            GroundModel g = ground_from_name(ground);
            Frequency f{pick_freq(p, freq_hz)};
            ArrayLayout lay{p, n_elements, spacing_m};
            SteeringSpec spec{steer_theta_deg * kPi / 180.0, 0.0, {}};
            ArrayResult a;
            double lobe = 0;
            {
                py::gil_scoped_release release;
                a = solve_array(lay, spec, f, g);
                lobe = secondary_lobe_level_db(a, lay, f);
            }
            ElevationReport elev = elevation_report(a, kPi / 2);
            PatternPeak peak = pattern_peak(a.pattern);
            py::dict d;
            d["gain_at_steer_dbi"] = a.gain_at_steering;
            d["peak_rg_dbi"] = peak.rg_dbi;
            d["peak_theta_deg"] = peak.theta * 180.0 / kPi;
            d["peak_phi_deg"] = peak.phi * 180.0 / kPi;
            d["active_z"] = a.active_impedances;
            d["backlobe_dbi"] = elev.backlobe_dbi;
            d["secondary_lobe_db"] = lobe;
            return d;
        },
        py::arg("design"), py::arg("n_elements") = 12, py::arg("spacing_m") = 9.0,
        py::arg("steer_theta_deg") = 0.0, py::arg("freq_hz") = std::nullopt,
        py::arg("ground") = "pec-infinite",
        "One coupled solve of the linear array with progressive-phase steering.");

    m.def(
        "touchstone",
        [](const std::vector<double>& freqs_hz, const std::vector<cplx>& z_in, double z0) {
            return touchstone_text(response_from_lists(freqs_hz, z_in, z0));
        },
        py::arg("freqs_hz"), py::arg("z_in"), py::arg("z0") = 50.0,
        "One-port Touchstone text (Hz, S, real/imaginary).");

    m.def(
        "parse_touchstone",
        [](const std::string& text) {
            TouchstoneData data = curvemom::parse_touchstone(text);
            py::list rows;
            for (const auto& [f, s] : data.s) rows.append(py::make_tuple(f, s));
            py::dict d;
            d["z0"] = data.z0;
            d["s"] = std::move(rows);
            return d;
        },
        py::arg("text"));

    m.def(
        "export_nec",
        [](const CurvedMonopoleParams& p) { return export_nec_cards(build_curved_monopole(p)); },
        py::arg("design"), "NEC-style card deck for the design.");

    m.attr("speed_of_light") = kSpeedOfLight;
    m.attr("eta0") = kEta0;
}
