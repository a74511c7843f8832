"""Largest homothets of a simplex inside a body, and the cone-over-origin step.

Both routines reduce to minimising ``max_i gauge(c + w_i)`` over a
translation ``c``, a convex but non-smooth problem solved by pattern search
with diagonal polling.
"""
from __future__ import annotations

import numpy as np

from ._numeric import pattern_search
from .construction import Simplex
from .errors import NoRootFound, SolverStall
from .gauge import DEFAULT_TOL, GaugeBody, Tolerance, as_points, bisect_monotone
from .checks import verify_equilateral

MAX_ITER = 20000


def _template(template, dim):
    if isinstance(template, Simplex):
        template = template.vertices
    v = as_points(template, dim).reshape(-1, dim)
    if len(v) < 2:
        raise ValueError("template needs at least two vertices")
    return v


def _minimax_translation(body: GaugeBody, offsets: np.ndarray, lift, x0, step, tol):
    """Minimise ``max_i gauge(lift(c) + offsets_i)`` over ``c``; returns (c, value)."""
    k = len(offsets)

    def fun(cands):
        pts = lift(cands)[:, None, :] + offsets[None, :, :]
        return np.atleast_2d(body.gauge(pts.reshape(-1, body.dim))).reshape(-1, k).max(axis=1)

    res = pattern_search(fun, x0, step=step, min_step=tol, max_iter=MAX_ITER, diagonals=True)
    if not res.converged:
        raise SolverStall("translation search did not converge", best=(res.x, res.f))
    return res.x, res.f


def max_inscribed_homothet(body: GaugeBody, template, tol: Tolerance = DEFAULT_TOL):
    """Largest ``s`` such that a translate of ``s * template`` fits in ``body``.

    Returns ``(s, c)``: the homothet has vertices ``c + s * (v_i - centroid)``.
    By homogeneity of the gauge the fitting scale is ``1 / min_u max_i
    gauge(u + w_i)`` with ``w_i = v_i - centroid``, so one convex minimisation
    replaces the outer bisection on ``s``.
    """
    v = _template(template, body.dim)
    centroid = v.mean(axis=0)
    w = v - centroid
    spread = float(np.max(np.linalg.norm(w, axis=1)))
    if spread == 0:
        raise ValueError("degenerate template")
    u, m = _minimax_translation(body, w, lambda c: c, np.zeros(body.dim),
                                0.5 * spread, tol.root_tol * spread)
    s = 1.0 / m
    return float(s), s * u


def section_minimax(body: GaugeBody, offsets: np.ndarray, t: float, c0, tol: Tolerance):
    """``min_c max_i gauge((c + offsets_i, t))`` over translations inside the section."""
    n = body.dim
    scale = float(np.max(np.linalg.norm(offsets, axis=1))) or 1.0

    def lift(cands):
        out = np.empty((len(cands), n))
        out[:, :-1] = cands
        out[:, -1] = t
        return out

    full = np.column_stack([offsets, np.zeros(len(offsets))])
    return _minimax_translation(body, full, lift, c0, 0.25 * scale, tol.root_tol * scale)


def remark_cone_step(body: GaugeBody, facet, tol: Tolerance = DEFAULT_TOL) -> Simplex:
    """Cone over the origin of the unit-diameter maximal homothet of ``facet``.

    ``facet`` is a simplex in ``H = <e_1, ..., e_{n-1}>`` (given with ``n - 1``
    or ``n`` coordinates, the last one zero).  The body is assumed smooth and
    strictly convex by the caller.  ``t*`` is the height at which the maximal
    homothet of the facet inside the section at ``t`` has diameter one,
    i.e. the largest ``t`` where the unit-diameter homothet still fits.
    """
    n = body.dim
    v = np.asarray(facet.vertices if isinstance(facet, Simplex) else facet, dtype=float)
    if v.shape[-1] == n:
        v = v[:, :-1]
    v = as_points(v, n - 1).reshape(-1, n - 1)
    flat = np.column_stack([v, np.zeros(len(v))])
    i, j = np.triu_indices(len(v), 1)
    diam = float(np.max(body.gauge(flat[i] - flat[j])))
    w = (v - v.mean(axis=0)) / diam          # unit-diameter template

    axis = np.zeros(n)
    axis[-1] = 1.0
    t_end = 1.0 / body.gauge(axis)
    c0 = np.zeros(n - 1)

    c_bottom, h0 = section_minimax(body, w, 0.0, c0, tol)
    if h0 >= 1:
        raise NoRootFound("the central section holds no unit-diameter homothet (phi(0) <= 1)")
    _, h_end = section_minimax(body, w, t_end, c_bottom, tol)
    if h_end <= 1 + tol.verify_tol:
        raise NoRootFound("phi never reaches 1 before the section vanishes "
                          "(body not strictly convex along the axis)")

    state = {"c": c_bottom}

    def too_high(ts):
        out = []
        for t in np.atleast_1d(ts):
            c, h = section_minimax(body, w, float(t), state["c"], tol)
            if h <= 1:
                state["c"] = c
            out.append(h > 1)
        return np.array(out)

    t_star = float(bisect_monotone(too_high, np.array([0.0]), np.array([t_end]), tol.root_tol)[0])
    c_star, h_star = section_minimax(body, w, t_star, state["c"], tol)
    facet_pts = np.column_stack([(c_star + w) / h_star, np.full(len(w), t_star / h_star)])
    verts = np.vstack([np.zeros(n), facet_pts])
    simplex = Simplex.from_vertices(body, verts)
    report = verify_equilateral(verts, body, tol)
    if not report.passed:
        raise SolverStall(f"cone over the maximal homothet is not equilateral "
                          f"(residual {report.worst_residual:.3g})", best=simplex)
    return simplex
