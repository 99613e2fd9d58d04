import math

import numpy as np
import pytest

from mouthpipe.frame_io import Scenario, render_scenario
from mouthpipe.segmentation import Mask, SegmentationParams, largest_component, threshold
from mouthpipe.shape import blob_stats, shape_params
from oracles import moments_oracle


def _mask_from_coords(coords, w=32, h=32):
    bits = np.zeros((h, w), dtype=bool)
    for x, y in coords:
        bits[y, x] = True
    return Mask(w, h, bits)


def test_single_pixel():
    b = blob_stats(_mask_from_coords([(7, 3)]))
    assert b.centroid == (7.0, 3.0)
    assert b.cov == (0.0, 0.0, 0.0)
    assert b.lambda_major == 0.0 and b.lambda_minor == 0.0


def test_empty_mask_noblob():
    assert blob_stats(_mask_from_coords([])) is None


def test_horizontal_segment():
    # variance of 0..9 = (10^2 - 1)/12 = 8.25 (verified by moments_oracle)
    coords = [(x, 0) for x in range(10)]
    cx, cy, sxx, sxy, syy = moments_oracle(coords)
    assert sxx == pytest.approx(8.25)
    b = blob_stats(_mask_from_coords(coords))
    assert b.cov[0] == pytest.approx(sxx, abs=1e-12)
    assert b.cov[2] == pytest.approx(0.0, abs=1e-12)
    assert b.theta == pytest.approx(0.0)
    assert b.lambda_major == pytest.approx(8.25)


def test_solid_rectangle_covariance():
    coords = [(x, y) for x in range(10) for y in range(4)]
    cx, cy, sxx, sxy, syy = moments_oracle(coords)
    assert (sxx, syy) == (pytest.approx(8.25), pytest.approx(1.25))
    b = blob_stats(_mask_from_coords(coords))
    assert b.cov[0] == pytest.approx(8.25, abs=1e-9)
    assert b.cov[2] == pytest.approx(1.25, abs=1e-9)
    sp = shape_params(b)
    assert sp.width == pytest.approx(4 * math.sqrt(8.25), abs=1e-9)
    assert sp.height == pytest.approx(4 * math.sqrt(1.25), abs=1e-9)


def test_eigen_identities_random_blobs():
    rng = np.random.default_rng(23)
    for _ in range(100):
        bits = rng.random((24, 24)) < rng.uniform(0.05, 0.6)
        if not bits.any():
            continue
        b = blob_stats(Mask(24, 24, bits))
        sxx, sxy, syy = b.cov
        assert b.lambda_major + b.lambda_minor == pytest.approx(sxx + syy, abs=1e-9)
        assert b.lambda_major * b.lambda_minor == pytest.approx(
            sxx * syy - sxy * sxy, abs=1e-9)
        assert b.lambda_major >= b.lambda_minor >= 0
        assert -math.pi / 2 < b.theta <= math.pi / 2


def test_centroid_covariance_match_oracle():
    rng = np.random.default_rng(31)
    bits = rng.random((20, 20)) < 0.3
    ys, xs = np.nonzero(bits)
    coords = list(zip(xs.tolist(), ys.tolist()))
    cx, cy, sxx, sxy, syy = moments_oracle(coords)
    b = blob_stats(Mask(20, 20, bits))
    assert b.centroid[0] == pytest.approx(cx, abs=1e-9)
    assert b.centroid[1] == pytest.approx(cy, abs=1e-9)
    assert b.cov == (pytest.approx(sxx, abs=1e-9), pytest.approx(sxy, abs=1e-9),
                     pytest.approx(syy, abs=1e-9))


def test_translation_invariance():
    rng = np.random.default_rng(37)
    bits = np.zeros((40, 40), dtype=bool)
    bits[5:15, 8:20] = rng.random((10, 12)) < 0.7
    b1 = blob_stats(Mask(40, 40, bits))
    shifted = np.roll(np.roll(bits, 13, axis=0), 9, axis=1)
    b2 = blob_stats(Mask(40, 40, shifted))
    assert b2.centroid[0] - b1.centroid[0] == pytest.approx(9, abs=1e-9)
    assert b2.centroid[1] - b1.centroid[1] == pytest.approx(13, abs=1e-9)
    for v1, v2 in zip(b1.cov, b2.cov):
        assert v2 == pytest.approx(v1, abs=1e-9)
    assert b2.lambda_major == pytest.approx(b1.lambda_major, abs=1e-9)
    assert b2.lambda_minor == pytest.approx(b1.lambda_minor, abs=1e-9)
    sp1, sp2 = shape_params(b1), shape_params(b2)
    assert sp2.q == pytest.approx(sp1.q, abs=1e-9)


def _ellipse_shape(rot, a=22.0, b=11.0, size=96):
    s = Scenario(width=size, height=size, fps=1, duration_s=1.0,
                 keyframes=[(0.0, size / 2, size / 2, a, b, rot)])
    f = render_scenario(s, 0)
    mask = threshold(f, SegmentationParams())
    blob = largest_component(mask, 1)
    return shape_params(blob_stats(blob))


def test_rotation_invariance_of_axes():
    base = _ellipse_shape(0.0)
    assert base.area >= 500
    for i in range(8):
        rot = i * math.pi / 8
        sp = _ellipse_shape(rot)
        assert abs(sp.major - base.major) / base.major < 0.03
        assert abs(sp.minor - base.minor) / base.minor < 0.03


def test_width_height_not_rotation_invariant():
    # sanity check of the image-aligned extents: a 45-degree rotation of an
    # elongated blob changes width substantially
    base = _ellipse_shape(0.0)
    rot = _ellipse_shape(math.pi / 4)
    assert abs(rot.width - base.width) / base.width > 0.05


def test_q_and_m():
    circle = _ellipse_shape(0.0, a=15.0, b=15.0)
    assert circle.q == pytest.approx(1.0, abs=0.05)
    assert circle.m + circle.q == pytest.approx(1.0, abs=1e-12)

    line = blob_stats(_mask_from_coords([(x, 0) for x in range(10)]))
    sp = shape_params(line)
    assert sp.q == 0.0 and sp.m == 1.0

    point = shape_params(blob_stats(_mask_from_coords([(3, 3)])))
    assert point.q == 1.0 and point.m == 0.0


def test_projection_bound():
    rng = np.random.default_rng(41)
    for _ in range(50):
        bits = rng.random((24, 24)) < 0.25
        if not bits.any():
            continue
        sp = shape_params(blob_stats(Mask(24, 24, bits)))
        assert sp.minor <= sp.major + 1e-9
        assert sp.width <= sp.major * math.sqrt(2) + 1e-6
        assert sp.height <= sp.major * math.sqrt(2) + 1e-6
