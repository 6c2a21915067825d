#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "curvemom/errors.hpp"
#include "curvemom/rf_metrics.hpp"

using namespace curvemom;

namespace {

// Real z giving a prescribed (negative real) s11 so return loss is exact by design.
cplx z_for_s(double s, double z0 = 50.0) { return cplx{z0 * (1 + s) / (1 - s), 0.0}; }

FrequencyResponse vee_response() {
    // Return loss in dB is piecewise linear in frequency: -4, -8, -12, -8, -4.
    FrequencyResponse resp;
    resp.z0 = 50.0;
    const double f[] = {14.0e6, 14.6e6, 15.0e6, 15.4e6, 16.0e6};
    const double rl[] = {-4, -8, -12, -8, -4};
    for (int i = 0; i < 5; ++i)
        resp.entries.push_back({f[i], z_for_s(std::pow(10.0, rl[i] / 20.0))});
    return resp;
}

}  // namespace

TEST_CASE("s11 closed forms") {
    CHECK(std::abs(s11({50, 0}, 50)) == doctest::Approx(0.0));
    CHECK(s11({0, 0}, 50).real() == doctest::Approx(-1.0));
    CHECK(s11({150, 0}, 50).real() == doctest::Approx(0.5));
    CHECK(s11({150, 0}, 50).imag() == doctest::Approx(0.0));
    CHECK_THROWS_AS(s11({50, 0}, -1), ConfigError);
    CHECK_THROWS_AS(s11({-50, 0}, 50), ConfigError);
}

TEST_CASE("return loss and vswr") {
    CHECK(return_loss_db(cplx{0.1, 0}) == doctest::Approx(-20.0));
    CHECK(std::isinf(return_loss_db(cplx{0, 0})));
    CHECK(return_loss_db(cplx{0, 0}) < 0);
    CHECK(vswr(cplx{1.0 / 3.0, 0}) == doctest::Approx(2.0));
    CHECK(std::isinf(vswr(cplx{1.0, 0})));
    CHECK(ratio_from_db(3.0103) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(ratio_from_db(-10.0) == doctest::Approx(0.1));
}

TEST_CASE("make_response keeps only successful sweep points") {
    std::vector<SweepPoint> sweep(3);
    sweep[0] = {14e6, {cplx{40, -5}}, true, ""};
    sweep[1] = {15e6, {}, false, "boom"};
    sweep[2] = {16e6, {cplx{60, 5}}, true, ""};
    FrequencyResponse resp = make_response(sweep, 50.0);
    REQUIRE(resp.entries.size() == 2);
    CHECK(resp.entries[0].freq_hz == 14e6);
    CHECK(resp.entries[1].freq_hz == 16e6);
}

TEST_CASE("bandwidth edges interpolate linearly in dB") {
    FrequencyResponse resp = vee_response();
    BandwidthReport rep = extract_bandwidth(resp, 15e6, -10.0);
    CHECK(rep.f_low == doctest::Approx(14.8e6).epsilon(1e-12));
    CHECK(rep.f_high == doctest::Approx(15.2e6).epsilon(1e-12));
    CHECK(rep.bandwidth == doctest::Approx(0.4e6).epsilon(1e-9));
    CHECK(rep.contains_fc);
    // Edges always bracketed by the sample grid.
    CHECK(rep.f_low >= resp.entries.front().freq_hz);
    CHECK(rep.f_high <= resp.entries.back().freq_hz);
}

TEST_CASE("stricter thresholds give nested bands on a unimodal dip") {
    FrequencyResponse resp = vee_response();
    BandwidthReport loose = extract_bandwidth(resp, 15e6, -6.0);
    BandwidthReport tight = extract_bandwidth(resp, 15e6, -11.0);
    CHECK(tight.bandwidth < loose.bandwidth);
    CHECK(tight.f_low >= loose.f_low);
    CHECK(tight.f_high <= loose.f_high);
}

TEST_CASE("no band below threshold reports zero width") {
    FrequencyResponse resp = vee_response();
    BandwidthReport rep = extract_bandwidth(resp, 15e6, -15.0);
    CHECK(rep.bandwidth == 0.0);
    CHECK(!rep.contains_fc);
}

TEST_CASE("band not containing f_c falls back to the deepest dip") {
    FrequencyResponse resp = vee_response();
    BandwidthReport rep = extract_bandwidth(resp, 19e6, -10.0);
    CHECK(!rep.contains_fc);
    CHECK(rep.f_low == doctest::Approx(14.8e6).epsilon(1e-12));
    CHECK(rep.f_high == doctest::Approx(15.2e6).epsilon(1e-12));
}

TEST_CASE("bandwidth input validation") {
    FrequencyResponse resp = vee_response();
    CHECK_THROWS_AS(extract_bandwidth(resp, 15e6, 3.0), ConfigError);
    FrequencyResponse empty;
    CHECK_THROWS_AS(extract_bandwidth(empty, 15e6, -10.0), ConfigError);
    FrequencyResponse dup = vee_response();
    dup.entries[1].freq_hz = dup.entries[0].freq_hz;
    CHECK_THROWS_AS(extract_bandwidth(dup, 15e6, -10.0), ConfigError);
}

TEST_CASE("resonant frequency interpolates the reactance zero crossing") {
    FrequencyResponse resp;
    resp.entries = {{14e6, {50, -20}}, {15e6, {50, -5}}, {16e6, {50, 10}}};
    // Crossing between 15 and 16 MHz at 5/15 of the step.
    CHECK(resonant_frequency(resp, 15e6) ==
          doctest::Approx(15e6 + 1e6 / 3.0).epsilon(1e-12));

    FrequencyResponse exact;
    exact.entries = {{14e6, {50, -20}}, {15e6, {50, 0}}, {16e6, {50, 10}}};
    CHECK(resonant_frequency(exact, 15.4e6) == doctest::Approx(15e6));

    // Purely real samples resonate everywhere; the one nearest f_c wins.
    FrequencyResponse real_all;
    real_all.entries = {{14e6, z_for_s(0.5)}, {15e6, z_for_s(0.1)}, {16e6, z_for_s(0.4)}};
    CHECK(resonant_frequency(real_all, 14.2e6) == doctest::Approx(14e6));

    // No reactance crossing at all: falls back to the deepest return-loss sample.
    FrequencyResponse off;
    off.entries = {{14e6, {50, 10}}, {15e6, {50, 5}}, {16e6, {50, 8}}};
    CHECK(resonant_frequency(off, 14e6) == doctest::Approx(15e6));
}

TEST_CASE("touchstone text is byte-stable") {
    FrequencyResponse resp;
    resp.z0 = 50.0;
    resp.entries = {{15e6, {50.0, 0.0}}};
    CHECK(touchstone_text(resp) == "# Hz S RI R 50\n15000000 0.000000000 0.000000000\n");

    FrequencyResponse resp2;
    resp2.entries = {{14e6, {30, -20}}, {15e6, {80, 35}}};
    std::string text = touchstone_text(resp2);
    std::istringstream lines(text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 3);
}

TEST_CASE("touchstone round-trips through the parser") {
    FrequencyResponse resp;
    resp.entries = {{14e6, {30, -20}}, {15e6, {50, 0}}, {16e6, {80, 35}}};
    TouchstoneData back = parse_touchstone(touchstone_text(resp));
    CHECK(back.z0 == 50.0);
    REQUIRE(back.s.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.s[i].first == doctest::Approx(resp.entries[i].freq_hz));
        CHECK(std::abs(back.s[i].second - s11(resp.entries[i].z_in, 50.0)) < 1e-9);
    }
}

TEST_CASE("touchstone parser rejects malformed input") {
    CHECK_THROWS_AS(parse_touchstone("15000000 0.1 0.2\n"), ParseError);  // no option line
    CHECK_THROWS_AS(parse_touchstone("# GHz S RI R 50\n"), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# Hz S MA R 50\n"), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# Hz S RI R 50\nnot_a_number 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# Hz S RI R 50\n15000000 0.1\n"), ParseError);
    // Comments are stripped.
    TouchstoneData ok = parse_touchstone("! header\n# Hz S RI R 50\n1e6 0.5 -0.5 ! tail\n");
    REQUIRE(ok.s.size() == 1);
    CHECK(ok.s[0].second == cplx{0.5, -0.5});
}

TEST_CASE("response csv carries the expected header and rows") {
    FrequencyResponse resp;
    resp.entries = {{15e6, {42.5, -7.25}}};
    const char* path = "test_rf_metrics_resp.csv";
    write_response_csv(path, resp);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "freq_hz,re_zin,im_zin,s11_db");
    CHECK(row.rfind("15000000,42.5,-7.25,", 0) == 0);
}
