"""Independent brute-force oracles used by the test suite.

These deliberately avoid the library's vectorized code paths: plain Python
loops and BFS so results can be trusted as ground truth.
"""

import math
from collections import deque


def threshold_oracle(pixels, i_min, r_max):
    """Per-pixel predicate evaluation. pixels: (h, w, 3) array-like."""
    h, w = len(pixels), len(pixels[0])
    out = [[False] * w for _ in range(h)]
    for y in range(h):
        for x in range(w):
            r, g, b = (int(c) for c in pixels[y][x])
            out[y][x] = (r + g + b) < 3 * i_min and r > r_max
    return out


def largest_component_oracle(bits, min_blob_px):
    """BFS flood fill with 8-connectivity. Components are discovered in
    row-major order of their first pixel, so on a size tie the earlier
    discovery wins. Returns a bool grid or None."""
    h, w = len(bits), len(bits[0])
    seen = [[False] * w for _ in range(h)]
    best = None
    best_size = 0
    for y in range(h):
        for x in range(w):
            if not bits[y][x] or seen[y][x]:
                continue
            comp = []
            q = deque([(y, x)])
            seen[y][x] = True
            while q:
                cy, cx = q.popleft()
                comp.append((cy, cx))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < h and 0 <= nx < w and bits[ny][nx] \
                                and not seen[ny][nx]:
                            seen[ny][nx] = True
                            q.append((ny, nx))
            if len(comp) > best_size:  # strict: ties keep the earlier one
                best_size = len(comp)
                best = comp
    if best is None or best_size < max(min_blob_px, 1):
        return None
    out = [[False] * w for _ in range(h)]
    for y, x in best:
        out[y][x] = True
    return out


def moments_oracle(coords):
    """Centroid and population covariance by direct accumulation over (x, y)
    pixel coordinates."""
    n = len(coords)
    cx = sum(x for x, _ in coords) / n
    cy = sum(y for _, y in coords) / n
    sxx = sum((x - cx) ** 2 for x, _ in coords) / n
    syy = sum((y - cy) ** 2 for _, y in coords) / n
    sxy = sum((x - cx) * (y - cy) for x, y in coords) / n
    return cx, cy, sxx, sxy, syy


def ellipse_pixel_count(width, height, cx, cy, a, b, rot=0.0):
    """Brute-force point-in-ellipse count over pixel centers."""
    if a <= 0 or b <= 0:
        return 0
    count = 0
    c, s = math.cos(rot), math.sin(rot)
    for y in range(height):
        for x in range(width):
            dx, dy = x + 0.5 - cx, y + 0.5 - cy
            u = c * dx + s * dy
            v = -s * dx + c * dy
            if (u / a) ** 2 + (v / b) ** 2 <= 1.0:
                count += 1
    return count
