"""Calibration of shape parameters onto [0,1] and binding to MIDI control
changes.

Each binding names a source parameter (height, width, major, minor, morph,
area, cx, cy), a curve (linear or inverted), and a MIDI channel/controller.
Calibration modes:

- manual: fixed [p_min, p_max]; must be non-degenerate at config load.
- auto_expand: range widens to include every observation; a still-degenerate
  range normalizes to 0 (silence-safe).
- guided: ranges produced by the two-phase capture protocol (mean of ~30
  "closed" frames -> p_min, mean of ~30 "open" frames -> p_max), then behaves
  like manual.

Controller numbers in the presets are conventional defaults only and fully
configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .midi import ControlEvent
from .shape import ShapeParams

SOURCES = ShapeParams.SOURCES
CURVES = ("linear", "inverted")
MODES = ("manual", "auto_expand", "guided")

# Sources measured in pixels get the 2-pixel guided-calibration span floor;
# the dimensionless morph gets a proportional one.
MIN_SPAN_PIXELS = 2.0
MIN_SPAN_MORPH = 0.02


class DegenerateRange(ValueError):
    pass


class CalibrationRejected(ValueError):
    pass


@dataclass
class Range:
    p_min: float
    p_max: float


@dataclass
class Calibration:
    mode: str = "auto_expand"
    ranges: dict[str, Range] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown calibration mode {self.mode!r}")
        self.ranges = {k: (v if isinstance(v, Range) else Range(*v))
                       for k, v in self.ranges.items()}
        if self.mode in ("manual", "guided"):
            for src, r in self.ranges.items():
                if r.p_min >= r.p_max:
                    raise DegenerateRange(
                        f"{src}: p_min {r.p_min} >= p_max {r.p_max}")

    def range_for(self, source: str) -> Range:
        if source not in self.ranges:
            if self.mode == "auto_expand":
                # Seed degenerate; expands on first observation.
                self.ranges[source] = Range(math.inf, -math.inf)
            else:
                raise DegenerateRange(f"no calibration range for {source!r}")
        return self.ranges[source]


def normalize(p: float, c: Calibration, source: str) -> float:
    """Clamp (p - p_min)/(p_max - p_min) to [0,1]. In auto_expand mode the
    range is first widened to include p; a degenerate range yields 0."""
    r = c.range_for(source)
    if c.mode == "auto_expand":
        r.p_min = min(r.p_min, p)
        r.p_max = max(r.p_max, p)
    span = r.p_max - r.p_min
    if span <= 0:
        return 0.0
    u = (p - r.p_min) / span
    return min(max(u, 0.0), 1.0)


def to_cc(u: float) -> int:
    """Quantize a unit value to a 7-bit controller value: floor(u*127 + 0.5)."""
    return int(math.floor(u * 127.0 + 0.5))


@dataclass
class Binding:
    source: str
    channel: int = 0
    controller: int = 1
    curve: str = "linear"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.curve not in CURVES:
            raise ValueError(f"unknown curve {self.curve!r}")
        if not (0 <= self.channel <= 15):
            raise ValueError(f"channel {self.channel} outside [0, 15]")
        if not (0 <= self.controller <= 127):
            raise ValueError(f"controller {self.controller} outside [0, 127]")


@dataclass
class MappingPreset:
    name: str
    bindings: list[Binding]

    def __post_init__(self):
        if not self.bindings:
            raise ValueError("preset needs at least one binding")


PRESETS: dict[str, MappingPreset] = {
    # Mouth height sweeps a resonant low-pass cutoff (wah-wah).
    "wah": MappingPreset("wah", [Binding("height", 0, 74)]),
    # Mouth width drives amplifier distortion level.
    "distortion": MappingPreset("distortion", [Binding("width", 0, 71)]),
    # Alternative width mapping: filter resonance chirp.
    "resonance": MappingPreset("resonance", [Binding("width", 0, 71)]),
    # Eccentricity morphs between [o]/[a]/[i] formant filters: round -> 0,
    # most eccentric -> 127.
    "vowel-morph": MappingPreset("vowel-morph", [Binding("morph", 0, 1)]),
    # Guitar setup: wah on height plus distortion on width.
    "duo": MappingPreset("duo", [Binding("height", 0, 74),
                                 Binding("width", 0, 71)]),
    # Opening the mouth pans complementary high/low filtered signals between
    # channels; the inverted pair always sums to 127.
    "pan-split": MappingPreset("pan-split", [Binding("height", 0, 10),
                                             Binding("height", 1, 10, "inverted")]),
}


def evaluate(bindings: list[Binding], values: dict[str, float],
             cal: Calibration, t_ms: float = 0.0) -> list[ControlEvent]:
    """One ControlEvent per binding from the given per-source values
    (typically the filtered shape channels)."""
    events = []
    for b in bindings:
        u = normalize(values[b.source], cal, b.source)
        cc = to_cc(u)
        # Invert after quantization so a linear/inverted pair on the same
        # source always sums to exactly 127.
        if b.curve == "inverted":
            cc = 127 - cc
        events.append(ControlEvent(t_ms, b.channel, b.controller, cc))
    return events


def guided_ranges(closed_means: dict[str, float],
                  open_means: dict[str, float]) -> dict[str, Range]:
    """Build calibration ranges from the two capture phases. Rejects a
    parameter whose span is below the floor (2 px for pixel-valued sources).
    Ranges are oriented so p_min < p_max even if 'open' decreased the value."""
    ranges = {}
    for src in closed_means:
        lo, hi = sorted((closed_means[src], open_means[src]))
        floor = MIN_SPAN_MORPH if src == "morph" else MIN_SPAN_PIXELS
        if hi - lo < floor:
            raise CalibrationRejected(
                f"{src}: span {hi - lo:.4g} below minimum {floor}")
        ranges[src] = Range(lo, hi)
    return ranges
