"""Inductive construction of an inscribed equilateral simplex with diameter > 1.

Level by level, an equilateral ``(i-1)``-simplex ``T0`` inscribed in the
central section ``B cap H_{i-1}`` with diameter ``D0 > 1`` is lifted to an
equilateral ``i``-simplex inscribed in ``B cap H_i``.  Along the sweep
``t -> r(t) * T0 + t e_i`` the facet diameter ``phi(t) = r(t) * D0`` is
continuous and non-increasing, so exactly one of two branches applies:

* case 1, ``phi(t_max) <= 1``: find the smallest ``t*`` with ``phi(t*) = 1``;
  ``conv(0, T_{t*})`` has unit edges.  Its homothets whose facet sits in the
  section at height ``t`` are slid down ``t`` from ``t*`` to ``-t*`` until the
  apex meets the boundary at ``t'``.
* case 2, ``phi(t_max) > 1``: shrink the top-face facet to unit diameter by
  ``rho0``, then grow homothets first inside the top face and then down the
  sections until the apex meets the boundary.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ._numeric import first_crossing
from .bodies import LayeredBody, Profile
from .errors import DegenerateSimplex, NoRootFound, PreconditionViolated
from .gauge import DEFAULT_TOL, GaugeBody, Tolerance, as_points, pairwise_distances

CASE1 = "case1"
CASE2 = "case2"


@dataclass(frozen=True, eq=False)
class Simplex:
    """Vertex array with cached pairwise norm distances."""

    vertices: np.ndarray
    distances: np.ndarray
    diameter: float

    @classmethod
    def from_vertices(cls, body: GaugeBody, vertices, check_independent: bool = True,
                      rank_tol: float = 1e-9) -> "Simplex":
        v = as_points(vertices, body.dim)
        if v.ndim != 2 or len(v) < 1:
            raise ValueError("a simplex needs at least one vertex")
        if check_independent and len(v) > 1:
            edges = v[1:] - v[0]
            sv = np.linalg.svd(edges, compute_uv=False)
            if len(v) - 1 > body.dim or sv[-1] <= rank_tol * max(sv[0], 1.0):
                raise DegenerateSimplex("vertices are affinely dependent")
        dist = pairwise_distances(body, v)
        v.setflags(write=False)
        dist.setflags(write=False)
        return cls(v, dist, float(dist.max()) if len(v) > 1 else 0.0)

    @property
    def k(self) -> int:
        return len(self.vertices) - 1


@dataclass
class LevelRecord:
    level: int
    branch: str
    t0: float
    facet_diameter_before: float
    final_diameter: float
    t_star: float | None = None
    t_prime: float | None = None
    rho0: float | None = None
    phase: int | None = None
    parameter: float | None = None
    margins: dict = field(default_factory=dict)
    degenerate: bool = False


@dataclass
class ConstructionTrace:
    body: str
    levels: list = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.levels)

    @property
    def final_diameter(self) -> float:
        return self.levels[-1].final_diameter if self.levels else float("nan")

    def to_dict(self) -> dict:
        return {"body": self.body, "levels": [asdict(r) for r in self.levels]}


def _facet_array(template, dim: int) -> np.ndarray:
    if isinstance(template, Simplex):
        template = template.vertices
    return as_points(template, dim).reshape(-1, dim)


def _lift(facet: np.ndarray, scale: float, height: float) -> np.ndarray:
    return np.column_stack([scale * facet, np.full(len(facet), height)])


def _axis_gauge(body: LayeredBody, z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    pts = np.zeros((len(z), body.dim))
    pts[:, -1] = z
    return np.atleast_1d(body.gauge(pts))


def find_t_star(facet_diameter: float, profile: Profile, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest ``t`` with ``r(t) * facet_diameter = 1``."""
    T = profile.t_max
    if not facet_diameter > 1:
        raise NoRootFound(f"facet diameter {facet_diameter} is not > 1")
    if profile(T) * facet_diameter > 1:
        raise NoRootFound("phi(t_max) > 1: no unit-diameter section (case 2)")
    return first_crossing(lambda t: np.asarray(profile(t)) * facet_diameter - 1.0,
                          0.0, T, tol.root_tol)


def case1_slide(body: LayeredBody, facet_template, t_star: float,
                tol: Tolerance = DEFAULT_TOL) -> tuple[Simplex, float]:
    """Slide the unit simplex family down to the first inscribed member ``S_{t'}``."""
    facet = _facet_array(facet_template, body.dim - 1)
    prof = body.profile
    r_star = prof(t_star)

    def apex_z(t):
        t = np.asarray(t, dtype=float)
        return t - np.asarray(prof(np.abs(t))) / r_star * t_star

    def excess(t):
        return _axis_gauge(body, apex_z(t)) - 1.0

    margin = float(excess(np.array([-t_star]))[0])
    if margin < -tol.verify_tol:
        raise PreconditionViolated(
            body.dim,
            f"apex of the t = -t* member lies inside B (gauge {1 + margin:.6g} < 1): "
            f"2-intersection property fails (2t* = {2 * t_star:.6g}, t_max = {prof.t_max:.6g})",
            margin=margin,
        )
    if margin <= 0:
        t_prime = -t_star
    else:
        t_prime = first_crossing(excess, -t_star, t_star, tol.root_tol)
    verts = np.vstack([
        _lift(facet, prof(abs(t_prime)), t_prime),
        np.append(np.zeros(body.dim - 1), apex_z(t_prime)),
    ])
    return Simplex.from_vertices(body, verts), float(t_prime)


def case2_grow(body: LayeredBody, facet_template, tol: Tolerance = DEFAULT_TOL):
    """Grow homothets of the unit simplex over the shrunken top facet.

    Returns ``(simplex, phase, parameter, rho0)`` where ``parameter`` is the
    scale ``s`` in phase 1 and the height ``t`` in phase 2.
    """
    inner = body.inner
    facet = _facet_array(facet_template, body.dim - 1)
    prof = body.profile
    T = prof.t_max
    d0 = float(pairwise_distances(inner, facet).max())
    r_top = prof(T)
    phi_top = r_top * d0
    if not phi_top > 1:
        raise PreconditionViolated(body.dim, f"case 2 needs a top facet of diameter > 1, "
                                             f"got {phi_top:.6g}", margin=phi_top - 1)
    rho0 = 1.0 / phi_top
    base = rho0 * r_top            # template scale of the unit facet on the top face
    s_full = 1.0 / rho0

    def phase1_excess(s):
        return _axis_gauge(body, T - np.asarray(s) * T) - 1.0

    if phase1_excess(np.array([s_full]))[0] >= 0:
        s = first_crossing(phase1_excess, 1.0, s_full, tol.root_tol)
        verts = np.vstack([_lift(facet, s * base, T),
                           np.append(np.zeros(body.dim - 1), T - s * T)])
        return Simplex.from_vertices(body, verts), 1, float(s), float(rho0)

    def phase2_excess(t):
        t = np.asarray(t, dtype=float)
        return _axis_gauge(body, t - np.asarray(prof(t)) / base * T) - 1.0

    try:
        t = first_crossing(phase2_excess, T, 0.0, tol.root_tol)
    except NoRootFound:
        raise NoRootFound("case 2: apex never reached the boundary before t = 0") from None
    s = prof(t) / base
    verts = np.vstack([_lift(facet, prof(t), t),
                       np.append(np.zeros(body.dim - 1), t - s * T)])
    return Simplex.from_vertices(body, verts), 2, float(t), float(rho0)


def _construct_level(body: LayeredBody, facet: np.ndarray, tol: Tolerance,
                     final: bool) -> tuple[Simplex, LevelRecord]:
    level = body.dim
    prof = body.profile
    T = prof.t_max
    d0 = float(pairwise_distances(body.inner, facet).max())
    if d0 < 1 + tol.margin_tol:
        raise PreconditionViolated(level, f"facet diameter {d0:.12g} is not certified > 1",
                                   margin=d0 - 1, degenerate=d0 >= 1 - tol.verify_tol)
    if prof(T) * d0 <= 1:
        t_star = find_t_star(d0, prof, tol)
        simplex, t_prime = case1_slide(body, facet, t_star, tol)
        apex_margin = float(_axis_gauge(body, -2 * t_star)[0]) - 1.0
        rec = LevelRecord(level, CASE1, T, d0, simplex.diameter,
                          t_star=t_star, t_prime=t_prime)
    else:
        simplex, phase, param, rho0 = case2_grow(body, facet, tol)
        apex_margin = d0 - 1.0     # apex of the t = 0 member sits at height -D0 * t_max
        rec = LevelRecord(level, CASE2, T, d0, simplex.diameter,
                          rho0=rho0, phase=phase, parameter=param)
    diameter_margin = simplex.diameter - 1.0
    rec.margins = {"apex_outside_margin": apex_margin, "diameter_margin": diameter_margin}
    if diameter_margin < tol.margin_tol:
        rec.degenerate = True
        if not final:
            raise PreconditionViolated(
                level, f"diameter {simplex.diameter:.12g} is inside the margin band; "
                       "cannot continue the induction", margin=diameter_margin, degenerate=True)
    return simplex, rec


def planar_construct(body: LayeredBody, tol: Tolerance = DEFAULT_TOL):
    if not isinstance(body, LayeredBody) or body.dim != 2:
        raise ValueError("planar_construct needs a two-dimensional layered body")
    return _construct_level(body, np.array([[-1.0], [1.0]]), tol, final=True)


def construct(body: LayeredBody, tol: Tolerance = DEFAULT_TOL,
              trace: ConstructionTrace | None = None) -> tuple[Simplex, ConstructionTrace]:
    """Inscribed equilateral simplex with ``D > 1`` in a layered body.

    Raises PreconditionViolated at the first level where the induction step
    cannot be carried out; ``trace`` (if given) keeps the completed levels.
    """
    if not isinstance(body, LayeredBody):
        raise TypeError("construct needs a LayeredBody")
    if body.dim < 2:
        raise ValueError("construct needs dimension >= 2")
    if trace is None:
        trace = ConstructionTrace(body.descriptor)
    chain = body.chain()
    facet = np.array([[-1.0], [1.0]])      # [-e1, e1], inscribed in the base segment
    simplex = None
    for lvl in chain[1:]:
        simplex, rec = _construct_level(lvl, facet, tol, final=lvl is body)
        trace.levels.append(rec)
        facet = np.asarray(simplex.vertices)
    return simplex, trace
