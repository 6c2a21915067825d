"""Thin-wire solver for a curved HF monopole and its linear array."""

from curvemom._core import (
    CurvemomError,
    Design,
    array_summary,
    bandwidth,
    export_nec,
    eta0,
    impedance_sweep,
    input_impedance,
    parse_touchstone,
    pattern_summary,
    reference_length,
    resonant_frequency,
    segment_count,
    speed_of_light,
    tip_position,
    touchstone,
)

__all__ = [
    "CurvemomError",
    "Design",
    "array_summary",
    "bandwidth",
    "export_nec",
    "eta0",
    "impedance_sweep",
    "input_impedance",
    "parse_touchstone",
    "pattern_summary",
    "reference_length",
    "resonant_frequency",
    "segment_count",
    "speed_of_light",
    "tip_position",
    "touchstone",
]
