import numpy as np
import pytest

from mouthpipe.frame_io import Frame
from mouthpipe.segmentation import Mask, SegmentationParams, largest_component, threshold
from oracles import largest_component_oracle, threshold_oracle


def _frame(pixels):
    px = np.asarray(pixels, dtype=np.uint8)
    return Frame(px.shape[1], px.shape[0], px)


def test_threshold_red_too_low():
    f = _frame([[[10, 10, 10]]])
    m = threshold(f, SegmentationParams(i_min=60, r_max=50))
    assert not m.bits[0, 0]


def test_threshold_selected():
    f = _frame([[[80, 20, 20]]])  # sum 120 < 180, red 80 > 50
    m = threshold(f, SegmentationParams(i_min=60, r_max=50))
    assert m.bits[0, 0]


def test_threshold_white_never_selected():
    f = _frame(np.full((4, 4, 3), 255))
    for i_min in (0, 100, 255):
        m = threshold(f, SegmentationParams(i_min=i_min, r_max=0))
        assert m.count() == 0


def test_threshold_matches_bruteforce_oracle():
    rng = np.random.default_rng(42)
    for _ in range(20):
        px = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
        i_min = int(rng.integers(0, 256))
        r_max = int(rng.integers(0, 256))
        m = threshold(_frame(px), SegmentationParams(i_min=i_min, r_max=r_max))
        oracle = np.array(threshold_oracle(px, i_min, r_max))
        assert (m.bits == oracle).all()


def test_threshold_monotonicity():
    rng = np.random.default_rng(5)
    px = rng.integers(0, 256, size=(12, 12, 3), dtype=np.uint8)
    f = _frame(px)
    lo = threshold(f, SegmentationParams(i_min=80, r_max=100)).bits
    hi_imin = threshold(f, SegmentationParams(i_min=120, r_max=100)).bits
    assert (hi_imin | lo == hi_imin).all()  # raising i_min never removes bits
    hi_rmax = threshold(f, SegmentationParams(i_min=80, r_max=150)).bits
    assert (hi_rmax & lo == hi_rmax).all()  # raising r_max never adds bits


def _mask(bits):
    b = np.asarray(bits, dtype=bool)
    return Mask(b.shape[1], b.shape[0], b)


def test_diagonal_pixels_are_one_component():
    m = _mask([[1, 0], [0, 1]])
    out = largest_component(m, 1)
    assert out.count() == 2


def test_largest_of_two_components():
    m = _mask([
        [1, 1, 1, 0, 0],
        [1, 1, 0, 0, 1],
        [0, 0, 0, 1, 1],
    ])
    out = largest_component(m, 1)
    assert out.count() == 5
    assert out.bits[0, 0] and not out.bits[1, 4]


def test_empty_mask_is_noblob():
    assert largest_component(_mask(np.zeros((3, 3))), 0) is None


def test_min_blob_px_rejects_small():
    m = _mask([[1, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert largest_component(m, 3) is None
    assert largest_component(m, 2).count() == 2


def test_tie_break_topmost_leftmost():
    # two 2-pixel components; the one whose first row-major pixel comes
    # first must win
    m = _mask([
        [0, 1, 0, 0],
        [0, 1, 0, 1],
        [0, 0, 0, 1],
    ])
    out = largest_component(m, 1)
    assert out.bits[0, 1] and out.bits[1, 1]
    assert not out.bits[1, 3]


def test_largest_component_matches_floodfill_oracle():
    rng = np.random.default_rng(11)
    for _ in range(30):
        density = rng.uniform(0.05, 0.5)
        bits = rng.random((16, 16)) < density
        m = _mask(bits)
        got = largest_component(m, 1)
        want = largest_component_oracle(bits.tolist(), 1)
        if want is None:
            assert got is None
        else:
            assert (got.bits == np.array(want)).all()


def test_largest_component_is_subset():
    rng = np.random.default_rng(13)
    bits = rng.random((20, 20)) < 0.3
    m = _mask(bits)
    out = largest_component(m, 1)
    assert (out.bits & ~m.bits).sum() == 0


def test_params_validation():
    with pytest.raises(ValueError):
        SegmentationParams(i_min=300).validate()
    with pytest.raises(ValueError):
        SegmentationParams(r_max=-1).validate()
