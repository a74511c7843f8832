"""Gauge (Minkowski functional) primitives.

Every convex body in this package is an origin-symmetric convex body seen
through its gauge ``gauge(x) = min{lam >= 0 : x in lam * B}``, which is the
norm whose unit ball is ``B``.  All evaluators are vectorised over leading
axes: an input of shape ``(..., n)`` gives an output of shape ``(...)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IterationCapExceeded,
    NonFiniteInput,
    ZeroDirection,
)

BISECTION_CAP = 200


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerances, passed explicitly to every algorithm.

    root_tol   -- bisection convergence
    verify_tol -- acceptance threshold of certificates
    margin_tol -- strictness band used to certify ``D > 1``
    """

    root_tol: float = 1e-10
    verify_tol: float = 1e-7
    margin_tol: float = 1e-6

    def __post_init__(self):
        for name in ("root_tol", "verify_tol", "margin_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.root_tol > self.verify_tol:
            raise ValueError("root_tol must not exceed verify_tol")


DEFAULT_TOL = Tolerance()


def as_points(x, dim: int) -> np.ndarray:
    """Validate ``x`` as an array of points of dimension ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != dim:
        raise DimensionMismatch(
            f"expected points of dimension {dim}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("points must have finite coordinates")
    return arr


def bisect_monotone(feasible, lo, hi, tol, cap=BISECTION_CAP):
    """Vectorised bisection for the threshold of a monotone predicate.

    ``feasible(lam)`` must be False on ``lo`` and True on ``hi`` (elementwise)
    and monotone in between.  Returns the bracket midpoint once every bracket
    is narrower than ``tol * max(1, hi)``.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(cap):
        width = hi - lo
        active = width > tol * np.maximum(1.0, hi)
        if not np.any(active):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        ok = np.asarray(feasible(mid), dtype=bool)
        upd_hi = active & ok
        upd_lo = active & ~ok
        hi = np.where(upd_hi, mid, hi)
        lo = np.where(upd_lo, mid, lo)
    if np.any(hi - lo > tol * np.maximum(1.0, hi)):
        raise IterationCapExceeded(f"bisection did not converge in {cap} steps")
    return 0.5 * (lo + hi)


class GaugeBody:
    """An origin-symmetric convex body given by its gauge.

    Subclasses implement ``_gauge_rows`` on a validated ``(m, dim)`` array.
    """

    dim: int
    descriptor: str

    def __init__(self, dim: int, descriptor: str):
        if int(dim) < 1:
            raise ValueError("dimension must be a positive integer")
        self.dim = int(dim)
        self.descriptor = descriptor

    def _gauge_rows(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gauge(self, x):
        arr = as_points(x, self.dim)
        flat = arr.reshape(-1, self.dim)
        out = self._gauge_rows(flat).reshape(arr.shape[:-1])
        if out.ndim == 0:
            return float(out)
        return out

    def contains(self, x, slack: float = 0.0):
        return self.gauge(x) <= 1.0 + slack

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor!r}, dim={self.dim})"


class FunctionalBody(GaugeBody):
    """Body with a closed-form vectorised gauge ``func(pts) -> values``."""

    def __init__(self, dim: int, func: Callable[[np.ndarray], np.ndarray],
                 descriptor: str = "closed-form"):
        super().__init__(dim, descriptor)
        self._func = func

    def _gauge_rows(self, pts):
        return np.asarray(self._func(pts), dtype=float)


class OracleBody(GaugeBody):
    """Body known only through a membership oracle.

    ``r_inner * B2 <= B <= r_outer * B2`` must hold; the gauge is found by
    bisection on the scale with bracket ``[|x|/r_outer, |x|/r_inner]``.
    """

    def __init__(self, dim: int, member: Callable[[np.ndarray], np.ndarray],
                 r_inner: float, r_outer: float, descriptor: str = "oracle",
                 tol: Tolerance = DEFAULT_TOL):
        super().__init__(dim, descriptor)
        if not 0 < r_inner <= r_outer:
            raise ValueError("need 0 < r_inner <= r_outer")
        self._member = member
        self.r_inner = float(r_inner)
        self.r_outer = float(r_outer)
        self.tol = tol

    def _gauge_rows(self, pts):
        scale = np.max(np.abs(pts), axis=1)
        out = np.zeros(len(pts))
        nz = scale > 0
        if not np.any(nz):
            return out
        # bisect on unit-scaled rows: the tolerance becomes relative and tiny inputs do not underflow
        p = pts[nz] / scale[nz, None]
        norm2 = np.linalg.norm(p, axis=1)
        lo = norm2 / self.r_outer
        hi = norm2 / self.r_inner
        # lo is feasible only on the outer sphere itself; nudge it below
        lo = lo * (1.0 - 1e-12)

        def feasible(lam):
            return self._member(p / lam[:, None])

        out[nz] = bisect_monotone(feasible, lo, hi, self.tol.root_tol) * scale[nz]
        return out


class ScaledBody(GaugeBody):
    """The body whose gauge is ``factor * gauge_inner``, i.e. ``inner / factor``."""

    def __init__(self, inner: GaugeBody, factor: float):
        if not factor > 0:
            raise ValueError("factor must be positive")
        super().__init__(inner.dim, f"{factor}*{inner.descriptor}")
        self.inner = inner
        self.factor = float(factor)

    def _gauge_rows(self, pts):
        return self.factor * self.inner._gauge_rows(pts)


def lp_norm(pts: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(pts)
    if np.isinf(p):
        return a.max(axis=-1)
    if p == 1:
        return a.sum(axis=-1)
    if p == 2:
        return np.sqrt((a * a).sum(axis=-1))
    m = a.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    return m[..., 0] * ((a / safe) ** p).sum(axis=-1) ** (1.0 / p)


def lp_body(p: float, n: int) -> FunctionalBody:
    """Closed-form l_p ball (independent of the layered construction)."""
    if p < 1:
        raise ValueError("p < 1")
    return FunctionalBody(n, lambda pts: lp_norm(pts, p), descriptor=f"l{p}^{n}")


# operation-level API -------------------------------------------------------

def gauge(body: GaugeBody, x):
    return body.gauge(x)


def norm_dist(body: GaugeBody, x, y):
    x = as_points(x, body.dim)
    y = as_points(y, body.dim)
    return body.gauge(x - y)


def boundary_scale(body: GaugeBody, direction):
    """Rescale ``direction`` onto the boundary of ``body``."""
    d = as_points(direction, body.dim)
    g = np.asarray(body.gauge(d), dtype=float)
    if np.any(g <= 0):
        raise ZeroDirection("cannot scale the zero vector onto the boundary")
    return d / g[..., None]


def pairwise_distances(body: GaugeBody, points) -> np.ndarray:
    """Symmetric matrix of norm distances."""
    pts = as_points(points, body.dim)
    k = len(pts)
    out = np.zeros((k, k))
    if k < 2:
        return out
    i, j = np.triu_indices(k, 1)
    d = body.gauge(pts[i] - pts[j])
    out[i, j] = d
    out[j, i] = d
    return out


def diameter_finite(body: GaugeBody, points: Sequence) -> tuple[float, tuple[int, int]]:
    """Largest pairwise norm distance and one pair attaining it."""
    pts = as_points(points, body.dim)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("need a nonempty list of points")
    if len(pts) == 1:
        return 0.0, (0, 0)
    pairs = list(combinations(range(len(pts)), 2))
    i = np.array([a for a, _ in pairs])
    j = np.array([b for _, b in pairs])
    d = np.atleast_1d(body.gauge(pts[i] - pts[j]))
    best = int(np.argmax(d))
    return float(d[best]), pairs[best]
