#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/geometry.hpp"

using namespace curvemom;

TEST_CASE("reference length and radius conversion") {
    CHECK(reference_length(15e6) == doctest::Approx(kSpeedOfLight / 60e6).epsilon(1e-15));
    CHECK(curvature_from_radius(2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(curvature_from_radius(0.0), ConfigError);
}

TEST_CASE("arc angle and tip closed forms match hand values") {
    CHECK(solve_arc_angle(4.67, 2.0, 0.5) == doctest::Approx(1.335).epsilon(1e-14));
    CHECK(solve_arc_angle(4.67, 4.67, 0.5) == doctest::Approx(0.0));

    CurvedMonopoleParams p;
    Vec3 tip = tip_position(p);
    CHECK(tip.x == doctest::Approx(1.5327652983362139).epsilon(1e-13));
    CHECK(tip.y == doctest::Approx(0.0));
    CHECK(tip.z == doctest::Approx(3.944657227781069).epsilon(1e-13));
}

TEST_CASE("arc point limits") {
    CHECK(arc_point(2.0, 0.5, 0.0).z == doctest::Approx(2.0));
    CHECK(arc_point(2.0, 0.5, 0.0).x == doctest::Approx(0.0));
    // Small-angle expansion: x ~ alpha^2 R / 2, z ~ L_s + R alpha.
    double a = 1e-6, R = 2.0;
    Vec3 q = arc_point(2.0, 0.5, a);
    CHECK(q.x == doctest::Approx(a * a * R / 2).epsilon(1e-9));
    CHECK(q.z == doctest::Approx(2.0 + R * a).epsilon(1e-12));
}

TEST_CASE("straight limit kappa -> 0 is continuous") {
    CurvedMonopoleParams p;
    p.kappa = 1e-9;
    Vec3 near = tip_position(p);
    p.kappa = 0.0;
    Vec3 straight = tip_position(p);
    CHECK(straight.x == doctest::Approx(0.0));
    CHECK(straight.z == doctest::Approx(p.L_ref));
    CHECK((near - straight).norm() < 1e-8);
}

TEST_CASE("built monopole starts at origin, keeps arc length, is tangent") {
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);
    REQUIRE(!m.segments.empty());
    CHECK(m.segments.front().start.norm() == doctest::Approx(0.0));
    CHECK(polyline_length(m) == doctest::Approx(p.L_ref).epsilon(1e-3));
    Vec3 tip = m.segments.back().end;
    CHECK((tip - tip_position(p)).norm() < 1e-6);

    // Junction of straight base and arc: directions agree (tangency).
    std::size_t j = 0;
    for (std::size_t i = 0; i < m.segments.size(); ++i)
        if (m.segments[i].end.z <= p.L_straight + 1e-9) j = i;
    Vec3 d0 = m.segments[j].direction();
    Vec3 d1 = m.segments[j + 1].direction();
    CHECK(d0.dot(d1) > std::cos(0.1));

    REQUIRE(m.ports.size() == 1);
    CHECK(m.ports[0].segment_index == 0);
}

TEST_CASE("segment count tracks segments_per_wavelength") {
    CurvedMonopoleParams p;
    p.kappa = 0;  // arc-step cap does not apply, so counts scale cleanly
    WireModel m40 = build_curved_monopole(p);
    p.segments_per_wavelength = 80;
    WireModel m80 = build_curved_monopole(p);
    CHECK(m80.segments.size() >= 2 * m40.segments.size() - 2);
    CHECK(m80.segments.size() <= 2 * m40.segments.size() + 4);
}

TEST_CASE("geometry validation rejects bad parameter sets") {
    CurvedMonopoleParams p;
    p.L_straight = 5.0;  // longer than L_ref
    CHECK_THROWS_AS(build_curved_monopole(p), GeometryError);

    CurvedMonopoleParams q;
    q.wire_radius = -1;
    CHECK_THROWS_AS(build_curved_monopole(q), ConfigError);

    CurvedMonopoleParams r;
    r.kappa = 4.0;  // arc curls back below ground
    CHECK_THROWS_AS(build_curved_monopole(r), GeometryError);
}

TEST_CASE("full-circle arcs are rejected as self-colliding") {
    CurvedMonopoleParams p;
    p.L_ref = 10.0;
    p.L_straight = 2.0;
    p.kappa = 2 * kPi / 8.0 * 1.05;  // theta_curved slightly over 2 pi
    CHECK_THROWS_AS(build_curved_monopole(p), GeometryError);
}

TEST_CASE("segment distance closed form") {
    // Parallel unit segments 3 apart.
    CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {0, 3, 0}, {1, 3, 0}) == doctest::Approx(3.0));
    // Skew: z-offset crossing.
    CHECK(segment_distance({0, 0, 0}, {2, 0, 0}, {1, -1, 1}, {1, 1, 1}) == doctest::Approx(1.0));
    // Clamped endpoints.
    CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {4, 0, 0}) == doctest::Approx(2.0));
    // Touching endpoints.
    CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 1, 0}) == doctest::Approx(0.0));
}

TEST_CASE("make_wire_model shares nodes and rejects overlap") {
    std::vector<WireSegment> segs = {{{0, 0, 0}, {0, 0, 1}, 0.01},
                                     {{0, 0, 1}, {0, 1, 1}, 0.01}};
    WireModel m = make_wire_model(segs, {{0, {1.0, 0.0}}});
    CHECK(m.node_count == 3);
    CHECK(m.end_node(0) == m.start_node(1));

    std::vector<WireSegment> overlap = {{{0, 0, 0}, {0, 0, 1}, 0.01},
                                        {{0, 0, 0.5}, {0, 0, 1.5}, 0.01}};
    CHECK_THROWS_AS(make_wire_model(overlap, {}), GeometryError);

    std::vector<WireSegment> zero = {{{0, 0, 0}, {0, 0, 0}, 0.01}};
    CHECK_THROWS_AS(make_wire_model(zero, {}), GeometryError);

    std::vector<WireSegment> fat = {{{0, 0, 0}, {0, 0, 0.005}, 0.01}};
    CHECK_THROWS_AS(make_wire_model(fat, {}), KernelValidityError);
}

TEST_CASE("dipole builder is center-fed and symmetric") {
    WireModel d = build_straight_dipole(10.0, 0.005, 20);
    CHECK(d.segments.size() == 20);
    CHECK(d.segments.front().start.z == doctest::Approx(-5.0));
    CHECK(d.segments.back().end.z == doctest::Approx(5.0));
    REQUIRE(d.ports.size() == 1);
    std::size_t fed = d.ports[0].segment_index;
    CHECK(d.segments[fed].start.z == doctest::Approx(0.0));
    CHECK_THROWS_AS(build_straight_dipole(10.0, 0.005, 7), ConfigError);
}

TEST_CASE("linear array translates along x with one port per element") {
    ArrayLayout lay;
    lay.n_elements = 3;
    lay.spacing = 9.0;
    WireModel m = build_linear_array(lay);
    WireModel e = build_curved_monopole(lay.element);
    CHECK(m.segments.size() == 3 * e.segments.size());
    CHECK(m.ports.size() == 3);
    Vec3 base1 = m.segments[e.segments.size()].start;
    CHECK(base1.x == doctest::Approx(9.0));
    CHECK(base1.z == doctest::Approx(0.0));
    CHECK(m.ports[1].segment_index == e.segments.size());
}

TEST_CASE("NEC card deck round-trips") {
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);
    std::string deck = export_nec_cards(m);
    CHECK(deck.rfind("CM", 0) == 0);
    CHECK(deck.find("\nGW 1 1 ") != std::string::npos);
    CHECK(deck.find("\nGE ") != std::string::npos);
    CHECK(deck.find("\nEX ") != std::string::npos);
    WireModel back = import_nec_cards(deck);
    REQUIRE(back.segments.size() == m.segments.size());
    double worst = 0;
    for (std::size_t i = 0; i < m.segments.size(); ++i) {
        worst = std::max(worst, (back.segments[i].start - m.segments[i].start).norm());
        worst = std::max(worst, (back.segments[i].end - m.segments[i].end).norm());
    }
    // Cards carry 6 significant digits, so meter-scale coordinates survive to ~1e-5.
    CHECK(worst < 1e-4);
    REQUIRE(back.ports.size() == 1);
    CHECK(back.ports[0].segment_index == m.ports[0].segment_index);
    CHECK_THROWS_AS(import_nec_cards("GW 1 1 bad line\n"), ParseError);
}

TEST_CASE("JSON round-trip preserves the model exactly") {
    CurvedMonopoleParams p;
    p.kappa = 0.75;
    WireModel m = build_curved_monopole(p);
    WireModel back = wire_model_from_json(wire_model_to_json(m));
    REQUIRE(back.segments.size() == m.segments.size());
    for (std::size_t i = 0; i < m.segments.size(); ++i) {
        CHECK((back.segments[i].start - m.segments[i].start).norm() == doctest::Approx(0.0));
        CHECK(back.segments[i].radius == doctest::Approx(m.segments[i].radius));
    }
    CHECK(back.ports.size() == m.ports.size());
    CHECK_THROWS_AS(wire_model_from_json("{\"segments\": oops"), ParseError);
}

TEST_CASE("min clearance sees only non-adjacent pairs") {
    std::vector<WireSegment> segs = {{{0, 0, 0}, {0, 0, 1}, 0.001},
                                     {{0, 0, 1}, {0, 0.5, 1}, 0.001},
                                     {{0, 0.5, 1}, {0, 0.5, 0.2}, 0.001}};
    WireModel m = make_wire_model(segs, {});
    CHECK(min_clearance(m) == doctest::Approx(0.5));
}
