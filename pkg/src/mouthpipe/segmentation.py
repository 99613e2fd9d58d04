"""Mouth-shadow segmentation: colour/intensity thresholding followed by
largest-connected-region selection.

A pixel is selected iff its intensity is below i_min and its red component is
above r_max. Intensity is the arithmetic mean of R, G, B, compared exactly in
integers as r+g+b < 3*i_min so there is no rounding ambiguity. Note the
historical naming: r_max functions as a *lower* bound on red.

Connected-region analysis uses 8-connectivity: a diagonal line of shadow
pixels (e.g. at a mouth corner) should not split the blob.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

EIGHT_CONNECTED = np.ones((3, 3), dtype=np.uint8)

NoBlob = None  # largest_component returns None when no acceptable component


@dataclass
class SegmentationParams:
    i_min: int = 60
    r_max: int = 50
    min_blob_px: int = 10

    def validate(self):
        if not (0 <= self.i_min <= 255):
            raise ValueError(f"i_min {self.i_min} outside [0, 255]")
        if not (0 <= self.r_max <= 255):
            raise ValueError(f"r_max {self.r_max} outside [0, 255]")
        if self.min_blob_px < 0:
            raise ValueError("min_blob_px must be >= 0")


@dataclass
class Mask:
    """Binary bitmap; ``bits`` is a (height, width) bool array."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.height, self.width):
            raise ValueError(
                f"bits shape {self.bits.shape} != {self.height}x{self.width}")

    def count(self) -> int:
        return int(self.bits.sum())


def threshold(frame, p: SegmentationParams) -> Mask:
    """Bit set iff r+g+b < 3*i_min and r > r_max."""
    px = frame.pixels.astype(np.int32)
    r = px[:, :, 0]
    total = px.sum(axis=2)
    bits = (total < 3 * p.i_min) & (r > p.r_max)
    return Mask(frame.width, frame.height, bits)


def largest_component(m: Mask, min_blob_px: int = 0) -> Mask | None:
    """Keep only the largest 8-connected component of set bits.

    Returns None (NoBlob) if no component has >= min_blob_px pixels. Ties are
    broken deterministically: the component whose topmost-leftmost pixel comes
    first in row-major order wins.
    """
    labels, n = ndimage.label(m.bits, structure=EIGHT_CONNECTED)
    if n == 0:
        return None
    sizes = ndimage.sum_labels(np.ones_like(labels), labels, index=range(1, n + 1))
    best = int(sizes.max())
    if best < max(min_blob_px, 1):
        return None
    candidates = np.flatnonzero(sizes == best) + 1
    if len(candidates) == 1:
        winner = candidates[0]
    else:
        # First candidate pixel encountered in row-major order wins.
        flat = labels.ravel()
        hits = np.isin(flat, candidates)
        winner = flat[np.argmax(hits)]
    return Mask(m.width, m.height, labels == winner)
