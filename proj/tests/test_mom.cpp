#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/geometry.hpp"
#include "curvemom/mom.hpp"

using namespace curvemom;

namespace {

const double kFc = 15e6;
const double kLam = wavelength(kFc);

}  // namespace

TEST_CASE("gauss rules integrate polynomials exactly on [0,1]") {
    for (int n : {4, 7, 8, 16}) {
        const auto& x = gauss_nodes(n);
        const auto& w = gauss_weights(n);
        REQUIRE(x.size() == static_cast<std::size_t>(n));
        REQUIRE(w.size() == static_cast<std::size_t>(n));
        for (int k = 0; k < 2 * n; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
        }
        for (int i = 1; i < n; ++i) CHECK(x[i] > x[i - 1]);
    }
    CHECK_THROWS(gauss_nodes(3));
}

TEST_CASE("half-wave dipole matches a piecewise-sinusoidal reference solve") {
    WireModel d = build_straight_dipole(kLam / 2, kLam / 2000, 32);
    SolveResult r = solve(d, Frequency{kFc}, GroundModel::FreeSpace);
    REQUIRE(r.port_impedances.size() == 1);
    cplx z = r.port_impedances[0];
    // Independent piecewise-sinusoidal MoM run, same geometry: 83.206 + j45.182 ohm.
    cplx ref{83.206, 45.182};
    CHECK(std::abs(z - ref) / std::abs(ref) < 0.01);
}

TEST_CASE("impedance matrix is symmetric and the solve residual is tiny") {
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);
    BasisSet b = build_bases(m, GroundModel::InfinitePEC);
    Eigen::MatrixXcd Z = fill_impedance_matrix(m, b, Frequency{kFc});
    double asym = (Z - Z.transpose()).cwiseAbs().maxCoeff() / Z.cwiseAbs().maxCoeff();
    CHECK(asym < 1e-10);

    Eigen::VectorXcd v = excitation_vector(m, b);
    SolveResult r = solve_currents(Z, m, b, Frequency{kFc});
    Eigen::VectorXcd x(r.currents.size());
    for (std::size_t i = 0; i < r.currents.size(); ++i) x[static_cast<Eigen::Index>(i)] = r.currents[i];
    CHECK((Z * x - v).norm() / v.norm() < 1e-10);
}

TEST_CASE("monopole over PEC equals half the free-space dipole impedance") {
    CurvedMonopoleParams p;
    p.L_ref = kLam / 4;
    p.L_straight = kLam / 4;
    p.kappa = 0;
    p.wire_radius = kLam / 20000;
    WireModel mono = build_curved_monopole(p);
    cplx zm = solve(mono, Frequency{kFc}, GroundModel::InfinitePEC).port_impedances[0];

    WireModel dip = build_straight_dipole(kLam / 2, kLam / 20000, 2 * mono.segments.size());
    cplx zd = solve(dip, Frequency{kFc}, GroundModel::FreeSpace).port_impedances[0];

    CHECK(std::abs(zm - zd / 2.0) / std::abs(zd / 2.0) < 0.02);
    // Classical quarter-wave monopole ballpark.
    CHECK(std::abs(zm - cplx{36.5, 21.0}) / std::abs(cplx{36.5, 21.0}) < 0.10);
}

TEST_CASE("reciprocity: mutual term is symmetric under port swap") {
    // Two parallel short dipoles; drive one, read the open-circuit coupling through Z.
    std::vector<WireSegment> segs;
    double h = kLam / 20;
    for (int k = 0; k < 2; ++k) {
        double x0 = k * kLam / 10;
        segs.push_back({{x0, 0, -h}, {x0, 0, 0}, 1e-3});
        segs.push_back({{x0, 0, 0}, {x0, 0, h}, 1e-3});
    }
    WireModel m = make_wire_model(segs, {{0, {1.0, 0.0}}, {2, {1.0, 0.0}}});
    BasisSet b = build_bases(m, GroundModel::FreeSpace);
    REQUIRE(b.bases.size() == 2);
    Eigen::MatrixXcd Z = fill_impedance_matrix(m, b, Frequency{kFc});
    CHECK(std::abs(Z(0, 1) - Z(1, 0)) <= 1e-12 * std::abs(Z(0, 1)));
    CHECK(std::abs(Z(0, 1)) > 0.0);
}

TEST_CASE("single-basis solve inverts trivially") {
    WireModel d = build_straight_dipole(kLam / 20, kLam / 2000, 2);
    BasisSet b = build_bases(d, GroundModel::FreeSpace);
    REQUIRE(b.bases.size() == 1);
    Eigen::MatrixXcd Z(1, 1);
    Z(0, 0) = cplx{2.0, 0.0};
    SolveResult r = solve_currents(Z, d, b, Frequency{kFc});
    CHECK(std::abs(r.currents[0] - cplx{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(r.port_impedances[0] - cplx{2.0, 0.0}) < 1e-12);
    CHECK(r.input_power() == doctest::Approx(0.25));
}

TEST_CASE("basis layout: interior nodes, ground attachment, free ends") {
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);

    BasisSet free_b = build_bases(m, GroundModel::FreeSpace);
    BasisSet pec_b = build_bases(m, GroundModel::InfinitePEC);
    // PEC adds exactly one basis: the half triangle at the grounded base.
    CHECK(pec_b.bases.size() == free_b.bases.size() + 1);

    bool found_half = false;
    for (const auto& bf : pec_b.bases) {
        if (bf.pieces.size() == 1 && bf.pieces[0].seg == 0) {
            found_half = true;
            CHECK(bf.pieces[0].a == doctest::Approx(1.0));
            CHECK(bf.pieces[0].b == doctest::Approx(-1.0));
        } else {
            REQUIRE(bf.pieces.size() == 2);
            CHECK(bf.pieces[0].a == doctest::Approx(0.0));
            CHECK(bf.pieces[0].b == doctest::Approx(1.0));
            CHECK(bf.pieces[1].a == doctest::Approx(1.0));
            CHECK(bf.pieces[1].b == doctest::Approx(-1.0));
        }
    }
    CHECK(found_half);

    // No basis on the free tip.
    std::size_t tip_node = m.end_node(m.segments.size() - 1);
    CHECK(pec_b.node_basis[tip_node] == -1);
}

TEST_CASE("non-chain topologies are rejected") {
    // Two segments meeting start-to-start.
    std::vector<WireSegment> vee = {{{0, 0, 1}, {0, 0, 2}, 1e-3},
                                    {{0, 0, 1}, {0, 1, 1}, 1e-3}};
    WireModel mv = make_wire_model(vee, {});
    CHECK_THROWS_AS(build_bases(mv, GroundModel::FreeSpace), GeometryError);

    // Degree-3 junction.
    std::vector<WireSegment> tee = {{{0, 0, 0}, {0, 0, 1}, 1e-3},
                                    {{0, 0, 1}, {0, 0, 2}, 1e-3},
                                    {{0, 0, 1}, {0, 1, 1}, 1e-3}};
    WireModel mt = make_wire_model(tee, {});
    CHECK_THROWS_AS(build_bases(mt, GroundModel::FreeSpace), GeometryError);
}

TEST_CASE("kernel validity is enforced at fill time") {
    // Segments longer than lambda/10.
    WireModel coarse = build_straight_dipole(kLam, kLam / 2000, 4);
    BasisSet b = build_bases(coarse, GroundModel::FreeSpace);
    CHECK_THROWS_AS(fill_impedance_matrix(coarse, b, Frequency{kFc}), KernelValidityError);
    // Same model is fine at a low enough frequency.
    CHECK_NOTHROW(fill_impedance_matrix(coarse, b, Frequency{kFc / 10}));
}

TEST_CASE("excitation requires a basis at the gap") {
    // Free-space monopole: base node is a free end, so its gap has no basis.
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);
    BasisSet b = build_bases(m, GroundModel::FreeSpace);
    CHECK_THROWS_AS(excitation_vector(m, b), ConfigError);
}

TEST_CASE("sweep records failures per point instead of throwing") {
    CurvedMonopoleParams p;
    WireModel m = build_curved_monopole(p);
    // 90 MHz pushes the default mesh past lambda/10 per segment.
    std::vector<SweepPoint> pts = input_impedance_sweep(m, {kFc, 90e6}, GroundModel::InfinitePEC);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].ok);
    REQUIRE(pts[0].port_z.size() == 1);
    CHECK(!pts[1].ok);
    CHECK(!pts[1].error.empty());
}

TEST_CASE("free space and PEC image solves differ") {
    CurvedMonopoleParams p;
    p.L_ref = kLam / 4;
    p.L_straight = kLam / 4;
    p.kappa = 0;
    WireModel m = build_curved_monopole(p);
    // Grounded monopole in free space has no port basis; over PEC it solves.
    CHECK_THROWS_AS(solve(m, Frequency{kFc}, GroundModel::FreeSpace), ConfigError);
    CHECK_NOTHROW(solve(m, Frequency{kFc}, GroundModel::InfinitePEC));
}
