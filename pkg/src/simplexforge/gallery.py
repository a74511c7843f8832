"""The doubled-cone counterexample and its smoothed variants.

``B = conv((B2^2 x {0}) U {(0, 0, +-1)})`` holds the equilateral triangle
``T`` (diameter sqrt(3)) in its central section and the unit triangle ``T*``
in the section at height ``(sqrt(3) - 1) / sqrt(3)``.  The cone
``S = conv({0} U T*)`` is an equilateral tetrahedron, but its edges at the
origin are steeper than the generators of ``B``, so no homothet of ``S`` has
all four vertices on the boundary.  After rounding, ``B + eps B2`` does admit
such homothets, but only tiny ones hugging the rounded lower apex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numeric import pattern_search
from .bodies import LayeredBody, SmoothedBody, cone_over, make_lp_ball
from .checks import _directions, verify_equilateral, verify_inscribed
from .errors import SolverStall
from .gauge import DEFAULT_TOL, GaugeBody, Tolerance, bisect_monotone, boundary_scale
from .inscribe import max_inscribed_homothet
from .report import FAIL, PASS, PropertyReport

SQRT3 = math.sqrt(3.0)
T_STAR_HEIGHT = (SQRT3 - 1.0) / SQRT3
EDGE_ANGLE = math.atan(1.0 / (SQRT3 - 1.0))
GENERATOR_ANGLE = math.pi / 4
SCALE_FLOOR = 1e-6
SPREAD_TOL = 1e-9
N_RADII = 40
N_ANGLES = 48
N_POLISH = 8


@dataclass
class RemarkInstances:
    body: LayeredBody
    T: np.ndarray
    T_star: np.ndarray
    S: np.ndarray
    eps: list = field(default_factory=list)
    smoothed: list = field(default_factory=list)


def remark_triangle() -> np.ndarray:
    return np.array([[SQRT3 / 2, -0.5, 0.0], [-SQRT3 / 2, -0.5, 0.0], [0.0, 1.0, 0.0]])


def build_remark_instances(eps_list=(0.2, 0.1, 0.05), tol: Tolerance = DEFAULT_TOL) -> RemarkInstances:
    eps = [float(e) for e in eps_list]
    if any(not 0 < e < 1 for e in eps):
        raise ValueError("smoothing radii must lie in (0, 1)")
    body = cone_over(make_lp_ball(2, 2, tol), tol=tol)
    T = remark_triangle()
    T_star = T / SQRT3 + np.array([0.0, 0.0, T_STAR_HEIGHT])
    S = np.vstack([np.zeros(3), T_star])
    smoothed = [SmoothedBody(body, e, tol=tol) for e in eps]
    return RemarkInstances(body, T, T_star, S, eps, smoothed)


def _diameter(body, pts):
    i, j = np.triu_indices(len(pts), 1)
    return float(np.max(body.gauge(pts[i] - pts[j])))


def exit_scales(body: GaugeBody, base: np.ndarray, dirs: np.ndarray, tol: Tolerance) -> np.ndarray:
    """``max{s >= 0 : gauge(base_m + s dirs_i) <= 1}`` for every base point and direction.

    ``base`` has shape ``(m, n)``, ``dirs`` shape ``(k, n)``; the result is ``(m, k)``.
    The base points lie on the boundary, so the admissible set of ``s`` is an
    interval starting at zero and bisection on "outside" is monotone.
    """
    m, k, n = len(base), len(dirs), body.dim
    P = np.repeat(base, k, axis=0)
    D = np.tile(dirs, (m, 1))
    reach = 2.0 * _outer(body) / np.linalg.norm(D, axis=1)

    def outside(s):
        return np.atleast_1d(body.gauge(P + s[:, None] * D)) > 1.0

    s = bisect_monotone(outside, np.zeros(m * k), reach, tol.root_tol)
    return s.reshape(m, k)


def _outer(body: GaugeBody) -> float:
    r = getattr(body, "r_outer", None)
    if r is not None:
        return float(r)
    if isinstance(body, LayeredBody):
        return body.outer_radius()
    return 1.0 / float(np.min(body.gauge(np.eye(body.dim))))


def inscribed_homothet_search(body: GaugeBody, template: np.ndarray, tol: Tolerance = DEFAULT_TOL,
                              n_radii: int = N_RADII, n_angles: int = N_ANGLES, n_polish: int = N_POLISH):
    """Largest homothet of ``template`` with every vertex on the boundary of ``body``.

    The template's first vertex is the anchor, placed on the lower half of
    the boundary at ``boundary_scale((w, -1))``.  For an anchor ``p`` each
    other vertex ``v_i`` leaves the body along the ray ``p + s (v_i - v_0)``
    at scale ``s_i``; the homothet of ratio ``s`` anchored at ``p`` is
    inscribed exactly when all ``s_i`` equal ``s``.  The relative spread of
    the ``s_i`` is scanned on a polar grid in ``w`` (log-spaced radii, so
    small basins near the axis are sampled) and the best cells are polished
    by pattern search.  Returns ``(scale, anchor, details)``; scale is 0 and
    anchor None when no polished start reaches a spread below ``SPREAD_TOL``.
    """
    v = np.asarray(template, dtype=float)
    dirs = v[1:] - v[0]
    n = body.dim

    def anchors(ws):
        return boundary_scale(body, np.column_stack([ws, -np.ones(len(ws))]))

    def scales(ws):
        return exit_scales(body, anchors(ws), dirs, tol)

    def spread(ws):
        s = scales(ws)
        mean = s.mean(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = (s.max(axis=1) - s.min(axis=1)) / mean
        return np.where(mean > SCALE_FLOOR, rel, np.inf)

    radii = np.concatenate([[0.0], np.geomspace(1e-4, 4.0, n_radii)])
    circle = _directions(n - 1, n_angles)
    grid = np.vstack([np.zeros((1, n - 1))] + [r * circle for r in radii[1:]])
    rad = np.concatenate([[0.0], np.repeat(radii[1:], len(circle))])
    f = spread(grid)
    order = [int(i) for i in np.argsort(f, kind="stable") if np.isfinite(f[i])][:n_polish]

    details = []
    best = (0.0, None)
    for i in order:
        step = max(0.5 * rad[i], 1e-4)
        res = pattern_search(spread, grid[i], step=step, min_step=1e-13, max_iter=4000)
        p = anchors(res.x[None, :])[0]
        s = scales(res.x[None, :])[0]
        details.append({"grid_spread": float(f[i]), "spread": float(res.f), "scale": float(s.mean()),
                        "anchor": p.tolist(), "converged": res.converged})
        if res.f <= SPREAD_TOL and s.min() > SCALE_FLOOR and s.mean() > best[0]:
            best = (float(s.mean()), p)
    return best[0], best[1], details


def verify_remark(inst: RemarkInstances, tol: Tolerance = DEFAULT_TOL) -> PropertyReport:
    """Checks (a)-(e) of the counterexample; each detail row carries its own verdict."""
    B = inst.body
    rows = []

    def add(name, ok, residual, **extra):
        rows.append({"check": name, "verdict": PASS if ok else FAIL, "residual": float(residual), **extra})

    for name, pts, target in (("T", inst.T, SQRT3), ("T*", inst.T_star, 1.0)):
        eq = verify_equilateral(pts, B, tol)
        ins = verify_inscribed(pts, B, tol)
        d = _diameter(B, pts)
        add(f"{name} equilateral, inscribed, D = {target:.12g}",
            eq.passed and ins.passed and abs(d - target) <= 1e-12,
            max(eq.worst_residual, ins.worst_residual, abs(d - target)), diameter=d)
    eq = verify_equilateral(inst.S, B, tol)
    ins = verify_inscribed(inst.S, B, tol)
    d = _diameter(B, inst.S)
    add("S equilateral with unit edge", eq.passed and abs(d - 1) <= tol.verify_tol,
        max(eq.worst_residual, abs(d - 1)), diameter=d,
        inscribed=ins.verdict, inscribed_witness=ins.witness)
    edge = inst.T_star[0]
    angle = math.atan2(math.hypot(edge[0], edge[1]), edge[2])
    add("edge-vertical angle exceeds generator angle", angle > GENERATOR_ANGLE,
        abs(angle - EDGE_ANGLE), angle=angle, generator_angle=GENERATOR_ANGLE)
    scale, anchor, _ = inscribed_homothet_search(B, inst.S, tol)
    fit, _ = max_inscribed_homothet(B, inst.S, tol)
    add("no inscribed homothet of S", scale < 1 - 1e-3, scale, best_inscribed_scale=scale,
        fitting_scale=fit)
    bad = [r for r in rows if r["verdict"] != PASS]
    worst = max(rows, key=lambda r: r["residual"] if r["verdict"] == FAIL else -1)
    return PropertyReport(FAIL if bad else PASS, worst["residual"] if bad else 0.0,
                          bad[0]["check"] if bad else "", rows, tolerance=tol.verify_tol,
                          note="fitting_scale is the largest translate that fits, "
                               "vertices not required on the boundary")


def smoothed_shrinkage(inst: RemarkInstances, tol: Tolerance = DEFAULT_TOL):
    """Largest inscribed homothet of S in each smoothed body.

    Returns ``(rows, report)``; each row is ``{eps, best_scale, touching_vertex}``
    where the touching vertex is the lowest vertex (the anchor).  The report
    asserts strictly decreasing scales and touching vertices within 1e-3 of
    the rounded apex ``(0, 0, -(1 + eps))``.
    """
    if any(a <= b for a, b in zip(inst.eps, inst.eps[1:])):
        raise ValueError("the smoothing radii must be listed in decreasing order")
    rows = []
    for eps, body in zip(inst.eps, inst.smoothed):
        scale, anchor, _ = inscribed_homothet_search(body, inst.S, tol)
        if anchor is None:
            raise SolverStall(f"no inscribed homothet found for eps = {eps}")
        rows.append({"eps": eps, "best_scale": scale, "touching_vertex": anchor.tolist()})
    checks = []
    for a, b in zip(rows, rows[1:]):
        checks.append({"check": f"scale({a['eps']}) > scale({b['eps']})",
                       "verdict": PASS if a["best_scale"] > b["best_scale"] else FAIL,
                       "residual": max(0.0, b["best_scale"] - a["best_scale"])})
    for r in rows:
        dist = float(np.linalg.norm(np.array(r["touching_vertex"]) - [0.0, 0.0, -(1 + r["eps"])]))
        checks.append({"check": f"touching vertex at eps = {r['eps']}",
                       "verdict": PASS if dist <= 1e-3 else FAIL, "residual": dist})
    bad = [c for c in checks if c["verdict"] != PASS]
    report = PropertyReport(FAIL if bad else PASS, max(c["residual"] for c in checks),
                            bad[0]["check"] if bad else "", checks, tolerance=1e-3)
    return rows, report


def shrinkage_closed_form(eps: float) -> float:
    """Scale of the inscribed homothet of S anchored at the rounded apex.

    The anchor is ``(0, 0, -1 - eps)`` and the facet vertices lie on the
    offset lateral surface ``r - z = 1 + eps sqrt(2)``.
    """
    return eps * (math.sqrt(2.0) - 1.0) * SQRT3 / (2.0 - SQRT3)
