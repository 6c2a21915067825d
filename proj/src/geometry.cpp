#include "curvemom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"
#include "json.hpp"

namespace curvemom {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    double n = norm();
    if (n == 0.0) throw GeometryError("cannot normalize zero-length vector");
    return {x / n, y / n, z / n};
}

double reference_length(double f_c_hz) {
    if (!(f_c_hz > 0)) throw ConfigError("reference_length: frequency must be positive");
    return kSpeedOfLight / (4.0 * f_c_hz);
}

double curvature_from_radius(double r_curved_m) {
    if (!(r_curved_m > 0)) throw ConfigError("curvature_from_radius: radius must be positive");
    return 1.0 / r_curved_m;
}

double solve_arc_angle(double l_ref, double l_straight, double kappa) {
    if (l_straight < 0 || l_straight > l_ref)
        throw GeometryError("solve_arc_angle: need 0 <= L_straight <= L_ref");
    if (kappa < 0) throw ConfigError("solve_arc_angle: kappa must be >= 0");
    return kappa * (l_ref - l_straight);
}

Vec3 arc_point(double l_straight, double kappa, double alpha) {
    double r = 1.0 / kappa;
    double s = std::sin(alpha / 2.0);
    return {2.0 * r * s * s, 0.0, l_straight + r * std::sin(alpha)};
}

Vec3 tip_position(const CurvedMonopoleParams& p) {
    if (p.kappa == 0.0 || p.L_curved() == 0.0) return {0.0, 0.0, p.L_ref};
    return arc_point(p.L_straight, p.kappa, p.theta_curved());
}

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    // Standard closest-approach of two segments, clamped to the parameter square.
    Vec3 u = p1 - p0, v = q1 - q0, w = p0 - q0;
    double a = u.dot(u), b = u.dot(v), c = v.dot(v), d = u.dot(w), e = v.dot(w);
    double den = a * c - b * b;
    double s, t;
    if (den < 1e-14 * a * c || den == 0.0) {
        s = 0.0;
        t = (c > 0) ? e / c : 0.0;
    } else {
        s = (b * e - c * d) / den;
        t = (a * e - b * d) / den;
    }
    s = std::clamp(s, 0.0, 1.0);
    // Coordinate descent on the convex squared distance; a few rounds make the
    // clamped solution exact to machine precision for all edge/corner cases.
    for (int it = 0; it < 4; ++it) {
        t = (c > 0) ? std::clamp((e + b * s) / c, 0.0, 1.0) : 0.0;
        s = (a > 0) ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
    }
    Vec3 diff = (p0 + u * s) - (q0 + v * t);
    return diff.norm();
}

namespace {

constexpr double kJoinTol = 1e-9;

std::vector<std::size_t> build_junctions(const std::vector<WireSegment>& segs,
                                         std::size_t* node_count) {
    std::vector<std::size_t> nodes(2 * segs.size());
    std::vector<Vec3> coords;
    auto find_or_add = [&](const Vec3& p) -> std::size_t {
        for (std::size_t i = 0; i < coords.size(); ++i)
            if ((coords[i] - p).norm() <= kJoinTol) return i;
        coords.push_back(p);
        return coords.size() - 1;
    };
    for (std::size_t i = 0; i < segs.size(); ++i) {
        nodes[2 * i] = find_or_add(segs[i].start);
        nodes[2 * i + 1] = find_or_add(segs[i].end);
    }
    *node_count = coords.size();
    return nodes;
}

}  // namespace

WireModel make_wire_model(std::vector<WireSegment> segments, std::vector<FeedPort> ports) {
    if (segments.empty()) throw GeometryError("wire model needs at least one segment");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.length() > 0))
            throw GeometryError("segment " + std::to_string(i) + " has zero length");
        if (!(s.radius > 0))
            throw GeometryError("segment " + std::to_string(i) + " has non-positive radius");
        if (!(s.radius < s.length()))
            throw KernelValidityError("segment " + std::to_string(i) +
                                      ": radius must be smaller than segment length");
    }
    std::vector<bool> fed(segments.size(), false);
    for (const auto& p : ports) {
        if (p.segment_index >= segments.size())
            throw ConfigError("feed port segment index out of range");
        if (fed[p.segment_index]) throw ConfigError("more than one port on a segment");
        fed[p.segment_index] = true;
    }

    WireModel m;
    m.segments = std::move(segments);
    m.ports = std::move(ports);
    m.junction_nodes = build_junctions(m.segments, &m.node_count);

    // Overlap check: non-adjacent segments whose axes pass within the wire surfaces.
    for (std::size_t i = 0; i < m.segments.size(); ++i) {
        for (std::size_t j = i + 1; j < m.segments.size(); ++j) {
            bool adjacent = m.start_node(i) == m.start_node(j) || m.start_node(i) == m.end_node(j) ||
                            m.end_node(i) == m.start_node(j) || m.end_node(i) == m.end_node(j);
            if (adjacent) continue;
            double d = segment_distance(m.segments[i].start, m.segments[i].end,
                                        m.segments[j].start, m.segments[j].end);
            if (d < m.segments[i].radius + m.segments[j].radius)
                throw GeometryError("segments " + std::to_string(i) + " and " + std::to_string(j) +
                                    " overlap (axis distance " + g9(d) + " m)");
        }
    }
    return m;
}

double polyline_length(const WireModel& model) {
    double total = 0;
    for (const auto& s : model.segments) total += s.length();
    return total;
}

double min_clearance(const WireModel& model) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        for (std::size_t j = i + 1; j < model.segments.size(); ++j) {
            bool adjacent =
                model.start_node(i) == model.start_node(j) || model.start_node(i) == model.end_node(j) ||
                model.end_node(i) == model.start_node(j) || model.end_node(i) == model.end_node(j);
            if (adjacent) continue;
            best = std::min(best, segment_distance(model.segments[i].start, model.segments[i].end,
                                                   model.segments[j].start, model.segments[j].end));
        }
    }
    return best;
}

namespace {

void validate_params(const CurvedMonopoleParams& p) {
    if (!(p.f_c > 0)) throw ConfigError("f_c must be positive");
    if (!(p.L_ref > 0)) throw ConfigError("L_ref must be positive");
    if (p.L_straight < 0 || p.L_straight > p.L_ref)
        throw GeometryError("need 0 <= L_straight <= L_ref");
    if (p.kappa < 0) throw ConfigError("kappa must be >= 0");
    if (!(p.wire_radius > 0)) throw ConfigError("wire_radius must be positive");
    if (p.segments_per_wavelength < 10)
        throw ConfigError("segments_per_wavelength must be >= 10");
}

// Arc sampling step cap: chord/arc shortfall is ~(d_alpha)^2/24 per segment, so
// d_alpha <= 0.147 rad keeps the total polyline length within 0.1% of L_ref.
constexpr double kMaxArcStep = 0.147;

void append_straight(std::vector<WireSegment>* segs, const Vec3& a, const Vec3& b,
                     double seg_len, double radius) {
    double len = (b - a).norm();
    if (len == 0.0) return;
    auto n = static_cast<std::size_t>(std::ceil(len / seg_len));
    n = std::max<std::size_t>(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double t0 = static_cast<double>(i) / n, t1 = static_cast<double>(i + 1) / n;
        segs->push_back({a + (b - a) * t0, a + (b - a) * t1, radius});
    }
}

}  // namespace

WireModel build_curved_monopole(const CurvedMonopoleParams& p) {
    validate_params(p);
    double seg_len = wavelength(p.f_c) / p.segments_per_wavelength;
    std::vector<WireSegment> segs;

    // Straight base. Built in two sections (base + arc-section straight limit when
    // kappa == 0) so the node layout is continuous in kappa at kappa -> 0.
    Vec3 junction{0, 0, p.L_straight};
    if (p.L_straight > 0) append_straight(&segs, {0, 0, 0}, junction, seg_len, p.wire_radius);

    double l_arc = p.L_curved();
    if (l_arc > 0) {
        if (p.kappa == 0.0) {
            append_straight(&segs, junction, {0, 0, p.L_ref}, seg_len, p.wire_radius);
        } else {
            double theta = p.theta_curved();
            auto n = static_cast<std::size_t>(
                std::max(std::ceil(l_arc / seg_len), std::ceil(theta / kMaxArcStep)));
            n = std::max<std::size_t>(n, 1);
            Vec3 prev = junction;
            for (std::size_t i = 1; i <= n; ++i) {
                Vec3 next = arc_point(p.L_straight, p.kappa, theta * static_cast<double>(i) / n);
                segs.push_back({prev, next, p.wire_radius});
                prev = next;
            }
        }
    }
    if (segs.empty()) throw GeometryError("degenerate monopole: zero total length");
    for (const auto& s : segs)
        if (s.length() < 2.0 * p.wire_radius)
            throw KernelValidityError("mesh too coarse for the wire radius: a segment is shorter "
                                      "than 2 x radius; reduce segments_per_wavelength or radius");
    return make_wire_model(std::move(segs), {FeedPort{0, {1.0, 0.0}}});
}

WireModel build_straight_dipole(double length, double radius, std::size_t n_segments) {
    if (!(length > 0) || !(radius > 0)) throw ConfigError("dipole needs positive length and radius");
    if (n_segments < 2 || n_segments % 2 != 0)
        throw ConfigError("dipole segment count must be even and >= 2");
    std::vector<WireSegment> segs;
    for (std::size_t i = 0; i < n_segments; ++i) {
        double z0 = -length / 2 + length * static_cast<double>(i) / n_segments;
        double z1 = -length / 2 + length * static_cast<double>(i + 1) / n_segments;
        segs.push_back({{0, 0, z0}, {0, 0, z1}, radius});
    }
    // Gap at the start node of the middle segment, i.e. the dipole center.
    return make_wire_model(std::move(segs), {FeedPort{n_segments / 2, {1.0, 0.0}}});
}

WireModel build_linear_array(const ArrayLayout& layout) {
    if (layout.n_elements < 1) throw ConfigError("array needs n_elements >= 1");
    if (!(layout.spacing > 0)) throw ConfigError("array spacing must be positive");
    WireModel element = build_curved_monopole(layout.element);

    std::vector<WireSegment> segs;
    std::vector<FeedPort> ports;
    std::size_t per = element.segments.size();
    for (std::size_t e = 0; e < layout.n_elements; ++e) {
        Vec3 shift{layout.spacing * static_cast<double>(e), 0, 0};
        for (const auto& s : element.segments)
            segs.push_back({s.start + shift, s.end + shift, s.radius});
        for (const auto& prt : element.ports)
            ports.push_back({prt.segment_index + e * per, prt.gap_voltage});
    }
    WireModel m = make_wire_model(std::move(segs), std::move(ports));

    // Inter-element collision: factor-2 clearance on top of the hard overlap check.
    for (std::size_t i = 0; i < m.segments.size(); ++i) {
        for (std::size_t j = i + 1; j < m.segments.size(); ++j) {
            if (i / per == j / per) continue;
            double d = segment_distance(m.segments[i].start, m.segments[i].end,
                                        m.segments[j].start, m.segments[j].end);
            if (d < 2.0 * (m.segments[i].radius + m.segments[j].radius))
                throw GeometryError("array elements collide: spacing " + g9(layout.spacing) +
                                    " m leaves clearance " + g9(d) + " m between elements " +
                                    std::to_string(i / per) + " and " + std::to_string(j / per));
        }
    }
    return m;
}

std::string export_nec_cards(const WireModel& model) {
    std::ostringstream out;
    out << "CM curvemom wire model\nCE\n";
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const auto& s = model.segments[i];
        out << "GW " << (i + 1) << " 1 " << g6(s.start.x) << ' ' << g6(s.start.y) << ' '
            << g6(s.start.z) << ' ' << g6(s.end.x) << ' ' << g6(s.end.y) << ' ' << g6(s.end.z)
            << ' ' << g6(s.radius) << '\n';
    }
    bool grounded = false;
    for (const auto& s : model.segments)
        if (std::abs(s.start.z) <= kJoinTol || std::abs(s.end.z) <= kJoinTol) grounded = true;
    out << "GE " << (grounded ? 1 : 0) << '\n';
    for (const auto& p : model.ports)
        out << "EX 0 " << (p.segment_index + 1) << " 1 0 " << g6(p.gap_voltage.real()) << ' '
            << g6(p.gap_voltage.imag()) << '\n';
    out << "EN\n";
    return out.str();
}

WireModel import_nec_cards(const std::string& text) {
    std::vector<WireSegment> segs;
    std::vector<FeedPort> ports;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string card;
        ls >> card;
        if (card == "GW") {
            long tag, n;
            WireSegment s;
            ls >> tag >> n >> s.start.x >> s.start.y >> s.start.z >> s.end.x >> s.end.y >>
                s.end.z >> s.radius;
            if (!ls) throw ParseError("bad GW card at line " + std::to_string(lineno));
            segs.push_back(s);
        } else if (card == "EX") {
            long kind, tag, seg, opts;
            double re = 1, im = 0;
            ls >> kind >> tag >> seg >> opts >> re >> im;
            if (tag < 1) throw ParseError("bad EX card at line " + std::to_string(lineno));
            ports.push_back({static_cast<std::size_t>(tag - 1), {re, im}});
        }
    }
    if (segs.empty()) throw ParseError("no GW cards found");
    return make_wire_model(std::move(segs), std::move(ports));
}

std::string wire_model_to_json(const WireModel& model) {
    std::ostringstream out;
    out << "{\"segments\":[";
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const auto& s = model.segments[i];
        if (i) out << ',';
        out << "{\"start\":[" << g9(s.start.x) << ',' << g9(s.start.y) << ',' << g9(s.start.z)
            << "],\"end\":[" << g9(s.end.x) << ',' << g9(s.end.y) << ',' << g9(s.end.z)
            << "],\"radius\":" << g9(s.radius) << '}';
    }
    out << "],\"ports\":[";
    for (std::size_t i = 0; i < model.ports.size(); ++i) {
        const auto& p = model.ports[i];
        if (i) out << ',';
        out << "{\"segment_index\":" << p.segment_index << ",\"gap_voltage\":["
            << g9(p.gap_voltage.real()) << ',' << g9(p.gap_voltage.imag()) << "]}";
    }
    out << "]}";
    return out.str();
}

WireModel wire_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("wire model JSON: ") + e.what());
    }
    std::vector<WireSegment> segs;
    std::vector<FeedPort> ports;
    try {
        for (const auto& js : j.at("segments")) {
            WireSegment s;
            s.start = {js.at("start")[0], js.at("start")[1], js.at("start")[2]};
            s.end = {js.at("end")[0], js.at("end")[1], js.at("end")[2]};
            s.radius = js.at("radius");
            segs.push_back(s);
        }
        for (const auto& jp : j.at("ports")) {
            FeedPort p;
            p.segment_index = jp.at("segment_index");
            p.gap_voltage = {jp.at("gap_voltage")[0], jp.at("gap_voltage")[1]};
            ports.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("wire model JSON fields: ") + e.what());
    }
    return make_wire_model(std::move(segs), std::move(ports));
}

}  // namespace curvemom
