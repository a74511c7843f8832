"""Root scanning and derivative-free minimisation helpers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IterationCapExceeded, NoRootFound
from .gauge import BISECTION_CAP

SCAN_POINTS = 1024


def first_crossing(func, a: float, b: float, tol: float, n_grid: int = SCAN_POINTS,
                   cap: int = BISECTION_CAP) -> float:
    """First sign change of ``func`` walking from ``a`` to ``b``.

    ``func`` is vectorised.  The grid scan locates the first cell where the
    function reaches zero from the side it starts on; bisection then refines
    it until the bracket is narrower than ``tol``.
    """
    grid = np.linspace(a, b, n_grid + 1)
    vals = np.asarray(func(grid), dtype=float)
    start = vals[0] > 0

    def changed(v):
        return (v <= 0) if start else (v >= 0)

    idx = np.flatnonzero(changed(vals))
    if len(idx) == 0:
        raise NoRootFound(f"no sign change on [{a}, {b}]")
    k = int(idx[0])
    if k == 0:
        return float(a)
    lo, hi = float(grid[k - 1]), float(grid[k])
    for _ in range(cap):
        if abs(hi - lo) <= tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        v = float(np.asarray(func(np.array([mid])))[0])
        if changed(v):
            hi = mid
        else:
            lo = mid
    raise IterationCapExceeded(f"bisection cap {cap} reached on [{a}, {b}]")


@dataclass
class PatternResult:
    x: np.ndarray
    f: float
    iterations: int
    step: float
    converged: bool


def _diagonal_dirs(d: int) -> np.ndarray:
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    v = np.zeros(d)
                    v[i], v[j] = si, sj
                    out.append(v / np.sqrt(2.0))
    return np.array(out).reshape(-1, d)


def pattern_search(fun, x0, step: float, min_step: float, max_iter: int = 5000,
                   diagonals: bool = False, f_target: float = -np.inf) -> PatternResult:
    """Compass search with complete polling, a momentum probe and step halving.

    ``fun`` maps an ``(m, d)`` batch to ``m`` objective values.  Each
    iteration polls ``x +- h e_i`` together with ``x + v`` where ``v`` is the
    last accepted displacement; the best improving candidate wins.  When
    nothing improves the diagonal directions are tried (if enabled) before
    the step is halved.  Stops once ``h < min_step``.
    """
    x = np.array(x0, dtype=float).ravel()
    d = x.size
    coord = np.vstack([np.eye(d), -np.eye(d)])
    diag = _diagonal_dirs(d) if diagonals and d > 1 else None
    fx = float(fun(x[None, :])[0])
    h = float(step)
    v = np.zeros(d)
    for it in range(1, max_iter + 1):
        if fx <= f_target:
            return PatternResult(x, fx, it, h, True)
        cand = x + h * coord
        probing = bool(np.any(v))
        if probing:
            cand = np.vstack([cand, x + v])
        f = np.asarray(fun(cand), dtype=float)
        k = int(np.argmin(f))
        momentum_won = probing and k == len(coord)
        if not f[k] < fx and diag is not None:
            cand = x + h * diag
            f = np.asarray(fun(cand), dtype=float)
            k = int(np.argmin(f))
            momentum_won = False
        if f[k] < fx:
            # a winning momentum probe doubles the pattern vector
            v = 2.0 * v if momentum_won else cand[k] - x
            x = cand[k]
            fx = float(f[k])
            continue
        v = np.zeros(d)
        h *= 0.5
        if h < min_step:
            return PatternResult(x, fx, it, h, True)
    return PatternResult(x, fx, max_iter, h, False)
