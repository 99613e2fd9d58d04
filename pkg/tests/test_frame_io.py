import math

import numpy as np
import pytest

from mouthpipe.frame_io import (
    BadHeader, BadMagic, Frame, OutOfRange, Scenario, Truncated,
    UnsupportedMaxval, ZeroFps, read_ppm, read_raw_stream, render_scenario,
    write_ppm, write_raw_stream,
)
from oracles import ellipse_pixel_count


def test_read_ppm_basic():
    payload = bytes(range(24))
    f = read_ppm(b"P6 4 2 255\n" + payload)
    assert (f.width, f.height) == (4, 2)
    assert f.pixels.tobytes() == payload


def test_read_ppm_bad_magic():
    with pytest.raises(BadMagic):
        read_ppm(b"P5 4 2 255\n" + bytes(8))


def test_read_ppm_unsupported_maxval():
    with pytest.raises(UnsupportedMaxval):
        read_ppm(b"P6 2 2 65535\n" + bytes(12))


def test_read_ppm_bad_header():
    with pytest.raises(BadHeader):
        read_ppm(b"P6 four 2 255\n" + bytes(24))


def test_read_ppm_truncated():
    with pytest.raises(Truncated):
        read_ppm(b"P6 4 2 255\n" + bytes(10))


def test_read_ppm_comments_and_newlines():
    f = read_ppm(b"P6\n# a comment\n2 1\n255\n" + bytes(6))
    assert (f.width, f.height) == (2, 1)


def test_ppm_round_trip():
    rng = np.random.default_rng(7)
    px = rng.integers(0, 256, size=(5, 9, 3), dtype=np.uint8)
    data = write_ppm(Frame(9, 5, px))
    assert write_ppm(read_ppm(data)) == data


def test_raw_stream_single_frame():
    import struct
    header = struct.pack("<4sIIII", b"MVS1", 2, 1, 30, 1)
    frames = list(read_raw_stream(header + bytes(6)))
    assert len(frames) == 1
    assert frames[0].t_ms == 0.0
    assert (frames[0].width, frames[0].height) == (2, 1)


def test_raw_stream_truncated_final_frame():
    import struct
    header = struct.pack("<4sIIII", b"MVS1", 2, 1, 30, 1)
    it = read_raw_stream(header + bytes(9))
    assert next(it).t_ms == 0.0
    with pytest.raises(Truncated):
        next(it)


def test_raw_stream_ntsc_timestamp_value():
    import struct
    header = struct.pack("<4sIIII", b"MVS1", 1, 1, 30000, 1001)
    frames = list(read_raw_stream(header + bytes(6)))
    assert frames[1].t_ms == pytest.approx(1000 * 1001 / 30000)


def test_raw_stream_zero_fps():
    import struct
    header = struct.pack("<4sIIII", b"MVS1", 1, 1, 0, 1)
    with pytest.raises(ZeroFps):
        list(read_raw_stream(header))


def test_raw_stream_bad_magic():
    with pytest.raises(BadMagic):
        list(read_raw_stream(b"XXXX" + bytes(16)))


def test_raw_stream_round_trip():
    rng = np.random.default_rng(3)
    frames = [Frame(4, 3, rng.integers(0, 256, (3, 4, 3), dtype=np.uint8),
                    t_ms=1000.0 * k / 25) for k in range(5)]
    data = write_raw_stream(frames, 25)
    back = list(read_raw_stream(data))
    assert len(back) == 5
    for a, b in zip(frames, back):
        assert a.pixels.tobytes() == b.pixels.tobytes()
        assert a.t_ms == b.t_ms


def _scenario(**kw):
    defaults = dict(width=64, height=64, fps=10, duration_s=1.0,
                    keyframes=[(0.0, 32.0, 32.0, 10.0, 10.0, 0.0)])
    defaults.update(kw)
    return Scenario(**defaults)


def test_degenerate_ellipse_is_pure_background():
    s = _scenario(keyframes=[(0.0, 32.0, 32.0, 0.0, 0.0, 0.0)])
    f = render_scenario(s, 0)
    assert (f.pixels == np.array(s.background_color, dtype=np.uint8)).all()


def test_circle_pixel_count_matches_area():
    s = _scenario()
    f = render_scenario(s, 0)
    shadow = (f.pixels == np.array(s.shadow_color, dtype=np.uint8)).all(axis=2)
    count = int(shadow.sum())
    # within 3% of pi*r^2, and equal to the brute-force oracle exactly
    assert abs(count - math.pi * 100) <= 0.03 * math.pi * 100
    assert count == ellipse_pixel_count(64, 64, 32.0, 32.0, 10.0, 10.0)


def test_keyframe_interpolation_midpoint():
    s = _scenario(duration_s=1.0, keyframes=[
        (0.0, 32.0, 32.0, 5.0, 5.0, 0.0),
        (1.0, 32.0, 32.0, 15.0, 5.0, 0.0)])
    e = s.ellipse_at(0.5)
    assert e.semi_axis_a == pytest.approx(10.0)


def test_render_deterministic():
    s = _scenario(keyframes=[(0.0, 20.5, 30.25, 7.0, 4.0, 0.3)])
    assert render_scenario(s, 3).pixels.tobytes() == \
        render_scenario(s, 3).pixels.tobytes()


def test_every_pixel_is_shadow_or_background():
    s = _scenario(keyframes=[(0.0, 20.5, 30.25, 7.0, 4.0, 0.3)])
    f = render_scenario(s, 0)
    shadow = (f.pixels == np.array(s.shadow_color, np.uint8)).all(axis=2)
    bg = (f.pixels == np.array(s.background_color, np.uint8)).all(axis=2)
    assert (shadow | bg).all()


def test_out_of_range_frame_index():
    s = _scenario()
    with pytest.raises(OutOfRange):
        render_scenario(s, s.frame_count)


def test_scenario_json_round_trip():
    s = _scenario()
    s2 = Scenario.from_json(s.to_json())
    assert render_scenario(s2, 0).pixels.tobytes() == \
        render_scenario(s, 0).pixels.tobytes()
