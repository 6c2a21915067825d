#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace curvemom {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    Vec3 normalized() const;
    // Mirror through the z = 0 ground plane.
    Vec3 mirrored() const { return {x, y, -z}; }
};

struct WireSegment {
    Vec3 start;
    Vec3 end;
    double radius = 0;

    double length() const { return (end - start).norm(); }
    Vec3 direction() const { return (end - start).normalized(); }
    Vec3 point(double t) const { return start + (end - start) * t; }
};

struct FeedPort {
    std::size_t segment_index = 0;
    std::complex<double> gap_voltage{1.0, 0.0};
};

// A polyline antenna: ordered segments plus feed ports. junction_nodes maps each
// segment endpoint (2*i for start of segment i, 2*i+1 for its end) to a node id;
// endpoints within 1e-9 m share a node.
struct WireModel {
    std::vector<WireSegment> segments;
    std::vector<FeedPort> ports;
    std::vector<std::size_t> junction_nodes;

    std::size_t node_count = 0;

    std::size_t start_node(std::size_t seg) const { return junction_nodes[2 * seg]; }
    std::size_t end_node(std::size_t seg) const { return junction_nodes[2 * seg + 1]; }
};

// Builds the junction map and checks all WireModel invariants (positive lengths,
// radius < length, at most one port per segment, no overlapping segments).
WireModel make_wire_model(std::vector<WireSegment> segments, std::vector<FeedPort> ports);

double polyline_length(const WireModel& model);

// Smallest axis-to-axis distance between non-adjacent segments, or a huge value
// for models with fewer than two segments. Used by collision checks.
double min_clearance(const WireModel& model);

// Distance between two 3-D segments (closed form on the clamped parameter square).
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

struct CurvedMonopoleParams {
    double f_c = 15e6;                  // design frequency, Hz
    double L_ref = 4.67;                // total wire length, m
    double L_straight = 2.0;            // straight-section length, m
    double kappa = 0.5;                 // curvature of the arc section, 1/m
    double wire_radius = 0.01;          // m
    double segments_per_wavelength = 40;

    double L_curved() const { return L_ref - L_straight; }
    double theta_curved() const { return kappa * L_curved(); }
};

struct ArrayLayout {
    CurvedMonopoleParams element;
    std::size_t n_elements = 12;
    double spacing = 9.0;  // center-to-center along x, m
};

// L_ref = c / (4 f_c).
double reference_length(double f_c_hz);

// kappa = 1 / R_curved.
double curvature_from_radius(double r_curved_m);

// theta_curved = kappa * (L_ref - L_straight); 0 in the straight limit.
double solve_arc_angle(double l_ref, double l_straight, double kappa);

// Point on the arc section at angle alpha in [0, theta_curved]:
// x = 2 R sin^2(alpha/2)  (stable form of R(1-cos alpha)),  z = L_straight + R sin(alpha).
Vec3 arc_point(double l_straight, double kappa, double alpha);

// Tip of the built monopole in closed form.
Vec3 tip_position(const CurvedMonopoleParams& p);

// Straight base along +z from the origin plus a tangent circular arc in the xz-plane.
// Feed port (1 V delta gap) on the lowest segment. Equal-arc-length sampling; the arc
// step is additionally capped so the polyline length stays within 0.1% of L_ref.
WireModel build_curved_monopole(const CurvedMonopoleParams& params);

// Center-fed straight dipole along z, centered at the origin: free-space oracle
// geometry. n_segments must be even so the feed lands at the center node.
WireModel build_straight_dipole(double length, double radius, std::size_t n_segments);

// n translated copies of the element at x = i * spacing, ports ordered by element.
WireModel build_linear_array(const ArrayLayout& layout);

// NEC-style card deck: one GW card per segment, GE, and an EX card per port.
std::string export_nec_cards(const WireModel& model);

// Parses a deck produced by export_nec_cards (round-trip check path).
WireModel import_nec_cards(const std::string& text);

// {"segments":[{"start":[x,y,z],"end":[x,y,z],"radius":r},...],"ports":[...]}
std::string wire_model_to_json(const WireModel& model);
WireModel wire_model_from_json(const std::string& text);

}  // namespace curvemom
