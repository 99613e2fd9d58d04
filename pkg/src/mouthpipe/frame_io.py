"""Frame sources: PPM images, the MVS1 raw-stream container, and synthetic
ellipse scenarios used for testing and benchmarking.

All frames are RGB24 (8 bits per channel). Timestamps are milliseconds since
stream start and strictly increase within one stream.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class FrameIOError(Exception):
    """Base class for frame source errors."""


class BadMagic(FrameIOError):
    pass


class BadHeader(FrameIOError):
    pass


class UnsupportedMaxval(FrameIOError):
    pass


class Truncated(FrameIOError):
    pass


class OutOfRange(FrameIOError):
    pass


@dataclass
class Frame:
    """One RGB24 raster. ``pixels`` is a (height, width, 3) uint8 array."""

    width: int
    height: int
    pixels: np.ndarray
    t_ms: float = 0.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )


MVS1_MAGIC = b"MVS1"
MVS1_HEADER = struct.Struct("<4sIIII")  # magic, width, height, fps_num, fps_den


def read_ppm(data: bytes) -> Frame:
    """Parse a binary (P6) PPM with maxval 255. t_ms is left at 0 for the
    caller to assign (typically sequence index / fps)."""
    if not data.startswith(b"P6"):
        raise BadMagic("not a P6 PPM")
    # Header: magic, width, height, maxval, separated by whitespace/comments.
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise BadHeader("truncated PPM header")
        tok = data[start:pos]
        if not tok.isdigit():
            raise BadHeader(f"non-numeric header field {tok!r}")
        fields.append(int(tok))
    pos += 1  # single whitespace after maxval
    width, height, maxval = fields
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval {maxval}, only 255 supported")
    need = width * height * 3
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise Truncated(f"payload {len(payload)} bytes, need {need}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return Frame(width, height, pixels.copy())


def write_ppm(f: Frame) -> bytes:
    """Serialize a frame as canonical P6 with single-whitespace header."""
    header = f"P6 {f.width} {f.height} 255\n".encode("ascii")
    return header + f.pixels.tobytes()


def read_raw_stream(data: bytes) -> Iterator[Frame]:
    """Iterate frames from an MVS1 raw stream.

    Header: b"MVS1", then little-endian u32 width, height, fps_numerator,
    fps_denominator. Frame k gets t_ms = 1000*k*den/num. A truncated final
    frame stops iteration with a Truncated error after yielding all whole
    frames.
    """
    if len(data) < MVS1_HEADER.size:
        raise BadMagic("stream shorter than MVS1 header")
    magic, width, height, num, den = MVS1_HEADER.unpack_from(data)
    if magic != MVS1_MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if num == 0 or den == 0:
        raise ZeroFps("fps numerator and denominator must be nonzero")
    frame_bytes = width * height * 3
    pos = MVS1_HEADER.size
    k = 0
    while pos + frame_bytes <= len(data):
        pixels = np.frombuffer(data[pos : pos + frame_bytes], dtype=np.uint8)
        yield Frame(width, height, pixels.reshape(height, width, 3).copy(),
                    t_ms=1000.0 * k * den / num)
        pos += frame_bytes
        k += 1
    if pos < len(data):
        raise Truncated(f"{len(data) - pos} trailing bytes after {k} whole frames")


class ZeroFps(FrameIOError):
    pass


def write_raw_stream(frames: Sequence[Frame], fps_num: int, fps_den: int = 1) -> bytes:
    if fps_num == 0 or fps_den == 0:
        raise ZeroFps("fps numerator and denominator must be nonzero")
    out = [MVS1_HEADER.pack(MVS1_MAGIC, frames[0].width if frames else 0,
                            frames[0].height if frames else 0, fps_num, fps_den)]
    for f in frames:
        out.append(f.pixels.tobytes())
    return b"".join(out)


# Default colours: the shadow satisfies the default segmentation predicate
# (sum < 3*i_min and r > r_max), the background does not.
DEFAULT_SHADOW = (60, 10, 10)
DEFAULT_BACKGROUND = (200, 160, 140)


@dataclass
class Keyframe:
    time_s: float
    center_x: float
    center_y: float
    semi_axis_a: float
    semi_axis_b: float
    rotation_rad: float = 0.0


@dataclass
class Scenario:
    """Synthetic moving-ellipse source. Keyframes are piecewise-linearly
    interpolated; a pixel is shadow-coloured iff its center lies inside the
    ellipse (no anti-aliasing, so a brute-force oracle is exact)."""

    width: int
    height: int
    fps: float
    duration_s: float
    keyframes: list[Keyframe]
    shadow_color: tuple[int, int, int] = DEFAULT_SHADOW
    background_color: tuple[int, int, int] = DEFAULT_BACKGROUND

    def __post_init__(self):
        self.keyframes = [kf if isinstance(kf, Keyframe) else Keyframe(*kf)
                          for kf in self.keyframes]
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        times = [kf.time_s for kf in self.keyframes]
        if any(t1 > t2 for t1, t2 in zip(times, times[1:])):
            raise ValueError("keyframe times must be nondecreasing")
        for kf in self.keyframes:
            if kf.time_s < 0 or kf.time_s > self.duration_s:
                raise ValueError("keyframe time outside [0, duration_s]")
            if kf.semi_axis_a < 0 or kf.semi_axis_b < 0:
                raise ValueError("semi-axes must be >= 0")

    @property
    def frame_count(self) -> int:
        return math.ceil(self.fps * self.duration_s)

    def ellipse_at(self, t: float) -> Keyframe:
        """Piecewise-linear interpolation of the keyframe track at time t.
        Clamps before the first / after the last keyframe."""
        kfs = self.keyframes
        if t <= kfs[0].time_s:
            return kfs[0]
        if t >= kfs[-1].time_s:
            return kfs[-1]
        for a, b in zip(kfs, kfs[1:]):
            if a.time_s <= t <= b.time_s:
                span = b.time_s - a.time_s
                w = 0.0 if span == 0 else (t - a.time_s) / span
                return Keyframe(
                    t,
                    a.center_x + w * (b.center_x - a.center_x),
                    a.center_y + w * (b.center_y - a.center_y),
                    a.semi_axis_a + w * (b.semi_axis_a - a.semi_axis_a),
                    a.semi_axis_b + w * (b.semi_axis_b - a.semi_axis_b),
                    a.rotation_rad + w * (b.rotation_rad - a.rotation_rad),
                )
        return kfs[-1]

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        d = json.loads(text)
        return cls(
            width=d["width"],
            height=d["height"],
            fps=d["fps"],
            duration_s=d["duration_s"],
            keyframes=[Keyframe(*kf) if isinstance(kf, list) else Keyframe(**kf)
                       for kf in d["keyframes"]],
            shadow_color=tuple(d.get("shadow_color", DEFAULT_SHADOW)),
            background_color=tuple(d.get("background_color", DEFAULT_BACKGROUND)),
        )

    def to_json(self) -> str:
        return json.dumps({
            "width": self.width,
            "height": self.height,
            "fps": self.fps,
            "duration_s": self.duration_s,
            "keyframes": [[kf.time_s, kf.center_x, kf.center_y,
                           kf.semi_axis_a, kf.semi_axis_b, kf.rotation_rad]
                          for kf in self.keyframes],
            "shadow_color": list(self.shadow_color),
            "background_color": list(self.background_color),
        }, indent=2)


def render_scenario(s: Scenario, k: int) -> Frame:
    """Render frame k of a scenario. Pixel (x, y) has its center at
    (x+0.5, y+0.5); it is shadow-coloured iff the center lies inside the
    interpolated ellipse. Deterministic: identical (s, k) give identical
    bytes."""
    if k < 0 or k >= s.frame_count:
        raise OutOfRange(f"frame {k} outside [0, {s.frame_count})")
    t = k / s.fps
    e = s.ellipse_at(t)
    pixels = np.empty((s.height, s.width, 3), dtype=np.uint8)
    pixels[:, :] = s.background_color
    if e.semi_axis_a > 0 and e.semi_axis_b > 0:
        ys, xs = np.mgrid[0 : s.height, 0 : s.width]
        dx = xs + 0.5 - e.center_x
        dy = ys + 0.5 - e.center_y
        c, sn = math.cos(e.rotation_rad), math.sin(e.rotation_rad)
        u = c * dx + sn * dy
        v = -sn * dx + c * dy
        inside = (u / e.semi_axis_a) ** 2 + (v / e.semi_axis_b) ** 2 <= 1.0
        pixels[inside] = s.shadow_color
    return Frame(s.width, s.height, pixels, t_ms=1000.0 * k / s.fps)


def scenario_frames(s: Scenario) -> Iterator[Frame]:
    for k in range(s.frame_count):
        yield render_scenario(s, k)
