import math

import pytest

import curvemom as cm


def test_design_defaults():
    d = cm.Design()
    assert d.f_c == 15e6
    assert d.l_ref == 4.67
    assert d.l_straight == 2.0
    assert d.kappa == 0.5
    assert d.l_curved == pytest.approx(2.67)
    assert d.theta_curved == pytest.approx(1.335)
    assert "kappa=0.5" in repr(d)


def test_tip_position_matches_closed_form():
    x, y, z = cm.tip_position(cm.Design())
    assert x == pytest.approx(1.5327652983362139, abs=1e-12)
    assert y == 0.0
    assert z == pytest.approx(3.944657227781069, abs=1e-12)


def test_reference_length():
    assert cm.reference_length(15e6) == pytest.approx(cm.speed_of_light / 60e6)


def test_segment_count_positive():
    assert cm.segment_count(cm.Design()) >= 9


def test_invalid_design_raises():
    with pytest.raises(cm.CurvemomError):
        cm.segment_count(cm.Design(l_straight=9.0))
    with pytest.raises(cm.CurvemomError):
        cm.input_impedance(cm.Design(), ground="dirt")


def test_input_impedance_is_physical():
    z = cm.input_impedance(cm.Design())
    assert z.real > 1.0
    assert abs(z) < 1e3


def test_impedance_sweep_reports_per_point():
    pts = cm.impedance_sweep(cm.Design(), [14e6, 15e6, 16e6])
    assert [p["freq_hz"] for p in pts] == [14e6, 15e6, 16e6]
    assert all(p["ok"] for p in pts)
    assert all(p["z"].real > 0 for p in pts)


def vee_response():
    rl_db = [-4.0, -8.0, -12.0, -8.0, -4.0]
    freqs = [14.0e6, 14.6e6, 15.0e6, 15.4e6, 16.0e6]
    z = [50.0 * (1 + 10 ** (rl / 20)) / (1 - 10 ** (rl / 20)) for rl in rl_db]
    return freqs, z


def test_bandwidth_interpolated_edges():
    freqs, z = vee_response()
    bw = cm.bandwidth(freqs, z, f_c=15e6)
    assert bw["f_low_hz"] == pytest.approx(14.8e6, rel=1e-12)
    assert bw["f_high_hz"] == pytest.approx(15.2e6, rel=1e-12)
    assert bw["bandwidth_hz"] == pytest.approx(400e3, rel=1e-12)
    assert bw["contains_fc"]


def test_resonant_frequency_interpolates_crossing():
    f = cm.resonant_frequency([14e6, 16e6], [50 - 10j, 50 + 10j], f_c=15e6)
    assert f == pytest.approx(15e6, rel=1e-12)


def test_touchstone_round_trip():
    freqs, z = vee_response()
    text = cm.touchstone(freqs, z)
    assert text.startswith("# Hz S RI R 50\n")
    parsed = cm.parse_touchstone(text)
    assert parsed["z0"] == 50.0
    for (f_in, z_in), (f_out, s_out) in zip(zip(freqs, z), parsed["s"]):
        assert f_out == pytest.approx(f_in, rel=1e-9)
        s_in = (z_in - 50) / (z_in + 50)
        assert abs(s_out - s_in) < 1e-9


def test_export_nec_deck_shape():
    deck = cm.export_nec(cm.Design())
    assert deck.startswith("CM")
    assert "\nGW 1 1 " in deck
    assert "\nGE 1\n" in deck
    assert "\nEX 0 1 1 0 1 0\n" in deck


def test_pattern_summary_power_balance():
    s = cm.pattern_summary(cm.Design())
    assert s["peak_theta_deg"] <= 90.0 + 1e-9
    assert 0 < s["mismatch_factor"] <= 1.0
    assert s["radiated_power_w"] <= s["accepted_power_w"] * (1 + 1e-4)
    assert abs(s["radiated_power_w"] / s["accepted_power_w"] - 1) < 0.02
    assert math.isfinite(s["peak_rg_dbi"])
    assert s["z_in"] == pytest.approx(cm.input_impedance(cm.Design()), rel=1e-9)


def test_array_summary_three_elements():
    s = cm.array_summary(cm.Design(), n_elements=3, steer_theta_deg=30.0)
    assert len(s["active_z"]) == 3
    assert s["peak_rg_dbi"] > 0.0
    assert s["gain_at_steer_dbi"] <= s["peak_rg_dbi"] + 1e-9
    assert s["backlobe_dbi"] <= s["peak_rg_dbi"] + 1e-9
    assert s["secondary_lobe_db"] < 0.0
