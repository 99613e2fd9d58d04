"""Blob statistics by principal components analysis of segmented pixel
coordinates, and the derived control parameters.

Coordinates are pixel indices: x = column, y = row. The covariance is the
population covariance (divide by n) so a single pixel is well defined. The
2x2 eigenproblem is solved in closed form. Axis lengths use the solid-ellipse
convention: a uniform ellipse with semi-axis a has coordinate variance a^2/4,
so the full axis is 4*sqrt(lambda). That makes height/width/major/minor read
in pixels comparable to the blob's visual size.

Roundness q = sqrt(lambda_minor/lambda_major) is 1 for a circle and 0 for a
line; a zero-variance point blob is treated as maximally round (q=1). The
vowel-morph coordinate is m = 1-q, so [o] (round) maps to 0 and [i]
(eccentric) to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .segmentation import Mask


@dataclass
class BlobStats:
    n: int
    centroid: tuple[float, float]  # (cx, cy)
    cov: tuple[float, float, float]  # (sxx, sxy, syy)
    lambda_major: float
    lambda_minor: float
    theta: float  # major-axis orientation, radians in (-pi/2, pi/2]


@dataclass
class ShapeParams:
    height: float  # 4*sqrt(syy), image-aligned vertical extent
    width: float  # 4*sqrt(sxx), image-aligned horizontal extent
    major: float  # 4*sqrt(lambda_major), rotation-invariant
    minor: float  # 4*sqrt(lambda_minor)
    q: float  # roundness in [0,1]
    m: float  # morph coordinate, 1-q
    area: int  # pixel count
    centroid: tuple[float, float]

    # Names usable as mapping binding sources.
    SOURCES = ("height", "width", "major", "minor", "morph", "area", "cx", "cy")

    def source(self, name: str) -> float:
        if name == "morph":
            return self.m
        if name == "cx":
            return self.centroid[0]
        if name == "cy":
            return self.centroid[1]
        return float(getattr(self, name))

    @classmethod
    def zero(cls) -> "ShapeParams":
        return cls(0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0, (0.0, 0.0))


def blob_stats(m: Mask) -> BlobStats | None:
    """Centroid, population covariance, and eigen-decomposition of the set
    pixels. Returns None (NoBlob) on an empty mask."""
    ys, xs = np.nonzero(m.bits)
    n = len(xs)
    if n == 0:
        return None
    cx = float(xs.mean())
    cy = float(ys.mean())
    dx = xs - cx
    dy = ys - cy
    sxx = float((dx * dx).mean())
    syy = float((dy * dy).mean())
    sxy = float((dx * dy).mean())
    half_trace = (sxx + syy) / 2.0
    disc = math.sqrt(((sxx - syy) / 2.0) ** 2 + sxy * sxy)
    lam_major = half_trace + disc
    lam_minor = max(half_trace - disc, 0.0)
    theta = 0.5 * math.atan2(2.0 * sxy, sxx - syy)
    if theta <= -math.pi / 2:
        theta += math.pi
    return BlobStats(n, (cx, cy), (sxx, sxy, syy), lam_major, lam_minor, theta)


def shape_params(b: BlobStats) -> ShapeParams:
    sxx, _, syy = b.cov
    q = 1.0 if b.lambda_major == 0.0 else math.sqrt(b.lambda_minor / b.lambda_major)
    q = min(q, 1.0)
    return ShapeParams(
        height=4.0 * math.sqrt(syy),
        width=4.0 * math.sqrt(sxx),
        major=4.0 * math.sqrt(b.lambda_major),
        minor=4.0 * math.sqrt(b.lambda_minor),
        q=q,
        m=1.0 - q,
        area=b.n,
        centroid=b.centroid,
    )
