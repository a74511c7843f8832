"""Independent closed-form oracles used as expected values in the tests.

Nothing here imports the package: every value is derived from elementary
geometry so the tests never compare the implementation with itself.
"""
import math

import numpy as np

SQRT3 = math.sqrt(3.0)

# equilateral triangle inscribed in the unit circle: 2 sqrt(1 - t^2) = 1 at the
# chord height t* and 4t^2 + 2t - 2 = 0 at the slide height t'
DISK_T_STAR = SQRT3 / 2
DISK_T_PRIME = (-2 + math.sqrt(4 + 32)) / 8          # = 1/2
DISK_DIAMETER = SQRT3

# regular tetrahedron in the unit sphere: 3t^2 + 2t - 1 = 0 for the facet height
SPHERE_T_STAR = math.sqrt(2.0 / 3.0)
SPHERE_T_PRIME = (-2 + math.sqrt(4 + 12)) / 6        # = 1/3
SPHERE_DIAMETER = 2 * math.sqrt(6) / 3

# the doubled cone over the disk: unit facet at height (sqrt3 - 1)/sqrt3
CONE_T_STAR = (SQRT3 - 1) / SQRT3
EDGE_ANGLE = math.atan(1 / (SQRT3 - 1))
GENERATOR_ANGLE = math.pi / 4


def cone_gauge(x):
    """Gauge of conv((B2^2 x {0}) U {(0, 0, +-1)})."""
    x = np.asarray(x, dtype=float)
    return np.hypot(x[..., 0], x[..., 1]) + np.abs(x[..., 2])


def lp(x, p):
    return np.linalg.norm(np.asarray(x, dtype=float), ord=p, axis=-1)


def smoothed_cone_scale(eps):
    """Inscribed homothet of S in (doubled cone + eps B2) anchored at (0, 0, -1-eps).

    The facet vertex lies at radius s/sqrt3 and height -1 - eps + s h with
    h = (sqrt3 - 1)/sqrt3, on the offset lateral surface r - z = 1 + eps sqrt2.
    """
    h = CONE_T_STAR
    return eps * (math.sqrt(2) - 1) / (1 / SQRT3 - h)


def smoothed_cone_gauge_bisect(x, eps, iters=200):
    """Gauge of (doubled cone + eps B2) by bisection on the Euclidean distance to the cone."""

    def dist(q):
        r, w = math.hypot(q[0], q[1]), abs(q[2])
        if r + w <= 1:
            return 0.0
        # nearest point on the segment from (1, 0) to (0, 1) in the meridian plane
        s = min(1.0, max(0.0, ((1 - r) + w) / 2))
        return math.hypot(r - (1 - s), w - s)

    lo, hi = 0.0, 10.0 * (1 + np.linalg.norm(x))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if dist(np.asarray(x) / mid) <= eps:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
