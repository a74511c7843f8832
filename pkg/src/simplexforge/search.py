"""Derivative-free multistart search for equilateral point sets.

The objective for ``k`` points ``x_1..x_k`` with common distance ``c`` is

    sum_{i<j} (d_ij / c - 1)^2  [+ sum_i (gauge(x_i) - 1)^2  if boundary-constrained]

where ``c`` is the mean pairwise distance (free mode) or the target.  The
distance term is scale invariant, so collapsing all points onto one spot
is not rewarded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import pattern_search
from .gauge import GaugeBody, as_points, boundary_scale


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 32
    max_iters: int = 5000
    seed: int = 0
    boundary_constrained: bool = False
    target_distance: float | None = None
    residual_tol: float = 1e-8
    initial_step: float = 0.25
    min_step: float = 1e-13

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.target_distance is not None and not self.target_distance > 0:
            raise ValueError("target_distance must be positive")


@dataclass
class SearchResult:
    points: np.ndarray
    common_distance: float
    residual: float
    success: bool
    restart: int = -1
    history: list = field(default_factory=list)


def _pairs(k):
    return np.triu_indices(k, 1)


def evaluate(body: GaugeBody, points, opts: SearchOptions) -> tuple[float, float]:
    """``(common_distance, residual)`` recomputed from scratch."""
    pts = as_points(points, body.dim).reshape(-1, body.dim)
    i, j = _pairs(len(pts))
    d = np.atleast_1d(body.gauge(pts[i] - pts[j]))
    c = float(opts.target_distance) if opts.target_distance else float(d.mean())
    res = float(np.max(np.abs(d - c)))
    if opts.boundary_constrained:
        res += float(np.max(np.abs(np.atleast_1d(body.gauge(pts)) - 1.0)))
    return c, res


def _objective(body: GaugeBody, k: int, opts: SearchOptions):
    n = body.dim
    i, j = _pairs(k)

    def fun(batch):
        X = batch.reshape(len(batch), k, n)
        d = np.atleast_1d(body.gauge((X[:, i] - X[:, j]).reshape(-1, n))).reshape(len(batch), -1)
        if opts.target_distance:
            c = np.full(len(batch), float(opts.target_distance))
        else:
            c = d.mean(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = ((d / c[:, None] - 1.0) ** 2).sum(axis=1)
        f = np.where(c > 0, f, np.inf)
        if opts.boundary_constrained:
            g = np.atleast_1d(body.gauge(X.reshape(-1, n))).reshape(len(batch), k)
            f = f + ((g - 1.0) ** 2).sum(axis=1)
        return f

    return fun


def _start(body: GaugeBody, k: int, rng) -> np.ndarray:
    d = rng.normal(size=(k, body.dim))
    if k == 2:
        # any pair is equilateral; the antipodal one is the canonical certificate
        d[1] = -d[0]
    return boundary_scale(body, d)


def _size(points: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(points, axis=1))) or 1.0


def search_equilateral(body: GaugeBody, k: int, opts: SearchOptions = SearchOptions(),
                       warm_start=None) -> SearchResult:
    """Best equilateral ``k``-point configuration over deterministic restarts.

    Restart ``j`` draws its start from ``seed + j``.  Steps are relative to
    the size of the start configuration, so the run on the gauge ``2 gamma``
    is the run on ``gamma`` shrunk by one half.  A warm start, if given,
    is polished as an extra run and kept as a candidate itself, so the
    returned residual never exceeds the warm start's.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    fun = _objective(body, k, opts)
    candidates = []
    if warm_start is not None:
        w = as_points(warm_start, body.dim).reshape(k, body.dim)
        candidates.append((-2, w))
        size = _size(w)
        res = pattern_search(fun, w.ravel(), step=opts.initial_step * 1e-3 * size,
                             min_step=opts.min_step * size, max_iter=opts.max_iters)
        candidates.append((-1, res.x.reshape(k, body.dim)))
    history = []
    for r in range(opts.restarts):
        rng = np.random.default_rng(opts.seed + r)
        x0 = _start(body, k, rng)
        size = _size(x0)
        res = pattern_search(fun, x0.ravel(), step=opts.initial_step * size,
                             min_step=opts.min_step * size, max_iter=opts.max_iters)
        pts = res.x.reshape(k, body.dim)
        candidates.append((r, pts))
        c, resid = evaluate(body, pts, opts)
        history.append({"restart": r, "residual": resid, "iterations": res.iterations})
    best = None
    for r, pts in candidates:
        c, resid = evaluate(body, pts, opts)
        key = (resid, r)
        if best is None or key < best[0]:
            best = (key, pts, c)
    (resid, r), pts, c = best
    return SearchResult(np.asarray(pts), c, resid, resid <= opts.residual_tol and c > 0, r, history)


def lower_bound_e(body: GaugeBody, k_max: int, opts: SearchOptions = SearchOptions()):
    """Largest ``k <= k_max`` with a successful search, and its certificate."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    best_k, cert = 1, None
    for k in range(2, k_max + 1):
        res = search_equilateral(body, k, opts)
        if res.success:
            best_k, cert = k, res
    return best_k, cert
