"""Bodies with the intersection property, built as towers of section profiles.

A layered body of dimension ``n`` is either the base segment ``[-e1, e1]`` or
an inner body ``K`` of dimension ``n - 1`` together with a profile ``r`` on
``[0, t_max]``; its section at height ``t`` along ``e_n`` is ``r(|t|) * K``.
Every section parallel to ``H_{n-1} = <e1, ..., e_{n-1}>`` is therefore a
centred homothet of the central one, at every level of the tower.
"""
from __future__ import annotations

import json
from importlib import resources
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _backend
from ._kernels_py import KIND_CONE, KIND_LP, KIND_PRISM, KIND_TABLE
from .errors import InvalidProfile, MissingProjection
from .gauge import (
    DEFAULT_TOL,
    GaugeBody,
    Tolerance,
    as_points,
    bisect_monotone,
)
from .report import FAIL, PASS, PropertyReport

PROFILE_KINDS = ("lp", "cone", "prism", "table", "custom")


@dataclass(frozen=True, eq=False)
class Profile:
    """Section-ratio profile ``r: [0, t_max] -> [0, 1]``."""

    kind: str
    t_max: float = 1.0
    p: float = math.nan
    ts: tuple = ()
    rs: tuple = ()
    func: Callable | None = None

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise InvalidProfile(f"unknown profile kind {self.kind!r}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise InvalidProfile("t_max must be a positive real")

    # constructors -----------------------------------------------------
    @classmethod
    def lp(cls, p: float) -> "Profile":
        if not p >= 1:
            raise InvalidProfile("p < 1")
        return cls("lp", 1.0, p=float(p))

    @classmethod
    def cone(cls, t_max: float = 1.0) -> "Profile":
        return cls("cone", float(t_max))

    @classmethod
    def prism(cls, t_max: float = 1.0) -> "Profile":
        return cls("prism", float(t_max))

    @classmethod
    def table(cls, samples, t_max: float | None = None) -> "Profile":
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 2:
            raise InvalidProfile("samples must be a list of at least two [t, r] pairs")
        if not np.all(np.isfinite(arr)):
            raise InvalidProfile("samples must be finite")
        ts, rs = arr[:, 0], arr[:, 1]
        if np.any(np.diff(ts) <= 0):
            raise InvalidProfile("sample abscissae must be strictly increasing")
        if ts[0] != 0:
            raise InvalidProfile("samples must start at t = 0")
        if t_max is None:
            t_max = float(ts[-1])
        if not math.isclose(ts[-1], t_max, rel_tol=1e-12, abs_tol=1e-12):
            raise InvalidProfile("last sample must sit at t_max")
        return cls("table", float(t_max), ts=tuple(ts), rs=tuple(rs))

    @classmethod
    def custom(cls, func: Callable, t_max: float = 1.0) -> "Profile":
        return cls("custom", float(t_max), func=func)

    @classmethod
    def from_json(cls, path) -> "Profile":
        with open(path) as fh:
            doc = json.load(fh)
        try:
            return cls.table(doc["samples"], doc["t_max"])
        except KeyError as exc:
            raise InvalidProfile(f"profile file lacks field {exc}") from None

    # evaluation ----------------------------------------------------------
    def __call__(self, t):
        t = np.minimum(np.abs(np.asarray(t, dtype=float)), self.t_max)
        s = t / self.t_max
        if self.kind == "lp":
            if math.isinf(self.p):
                out = np.ones_like(s)
            else:
                out = np.clip(1.0 - s ** self.p, 0.0, None) ** (1.0 / self.p)
        elif self.kind == "cone":
            out = 1.0 - s
        elif self.kind == "prism":
            out = np.ones_like(s)
        elif self.kind == "table":
            out = np.interp(t, self.ts, self.rs)
        else:
            out = np.asarray(self.func(t), dtype=float) * np.ones_like(t)
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def tag(self) -> str:
        if self.kind == "lp":
            return f"lp({self.p:g})"
        return self.kind

    def kernel_code(self):
        """Encoding for the compiled kernel, or None for Python callables."""
        if self.kind == "lp":
            return KIND_LP
        if self.kind == "cone":
            return KIND_CONE
        if self.kind == "prism":
            return KIND_PRISM
        if self.kind == "table":
            return KIND_TABLE
        return None


def validate_profile(profile: Profile, grid_size: int = 65,
                     tol: Tolerance = DEFAULT_TOL) -> PropertyReport:
    """Check ``r(0) = 1``, monotone decrease and midpoint concavity on a grid."""
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    grid = np.linspace(0.0, profile.t_max, grid_size)
    if profile.kind == "table":
        grid = np.union1d(grid, np.asarray(profile.ts))
    r = np.asarray(profile(grid), dtype=float)
    eps = tol.verify_tol
    details = []

    if not np.all(np.isfinite(r)):
        return PropertyReport(FAIL, math.inf, "non-finite profile value", tolerance=eps)
    details.append({"check": "r(0)=1", "residual": abs(r[0] - 1.0)})
    details.append({"check": "range", "residual": float(max(0.0, -r.min(), r.max() - 1.0))})
    rise = np.diff(r)
    k = int(np.argmax(rise))
    details.append({"check": "non-increasing", "residual": float(max(0.0, rise[k])),
                    "at": [float(grid[k]), float(grid[k + 1])]})

    i, j = np.triu_indices(len(grid), 1)
    mids = 0.5 * (grid[i] + grid[j])
    deficit = 0.5 * (r[i] + r[j]) - np.asarray(profile(mids), dtype=float)
    w = int(np.argmax(deficit))
    details.append({"check": "midpoint-concave", "residual": float(max(0.0, deficit[w])),
                    "at": [float(grid[i[w]]), float(grid[j[w]])]})

    worst = max(details, key=lambda d: d["residual"])
    verdict = PASS if worst["residual"] <= eps else FAIL
    witness = worst["check"]
    if "at" in worst:
        witness += " on [{:.6g}, {:.6g}]".format(*worst["at"])
    return PropertyReport(verdict, float(worst["residual"]), witness, details, tolerance=eps)


class LayeredBody(GaugeBody):
    """Recursive profile tower; ``inner is None`` means the base segment."""

    def __init__(self, inner: "LayeredBody | None" = None, profile: Profile | None = None,
                 descriptor: str | None = None, tol: Tolerance = DEFAULT_TOL):
        if (inner is None) != (profile is None):
            raise ValueError("a layer needs both an inner body and a profile")
        dim = 1 if inner is None else inner.dim + 1
        super().__init__(dim, descriptor or ("seg" if inner is None else f"layer:{profile.tag}"))
        self.inner = inner
        self.profile = profile
        self.tol = tol
        self._encoding = self._encode()

    @property
    def is_base(self) -> bool:
        return self.inner is None

    @property
    def t_max(self) -> float:
        return 1.0 if self.is_base else self.profile.t_max

    def chain(self) -> list["LayeredBody"]:
        """Bodies ``B cap H_1, ..., B cap H_n`` from the base upwards."""
        out = []
        body = self
        while body is not None:
            out.append(body)
            body = body.inner
        return out[::-1]

    def profiles(self) -> list[Profile]:
        return [b.profile for b in self.chain()[1:]]

    def _encode(self):
        profs = self.profiles()
        codes = [p.kernel_code() for p in profs]
        if any(c is None for c in codes):
            return None
        tab_t, tab_r, off, ln = [], [], [], []
        for p in profs:
            off.append(len(tab_t))
            ln.append(len(p.ts))
            tab_t.extend(p.ts)
            tab_r.extend(p.rs)
        return (
            np.asarray(codes, dtype=np.int32),
            np.asarray([p.p if p.kind == "lp" else 0.0 for p in profs], dtype=float),
            np.asarray([p.t_max for p in profs], dtype=float),
            np.asarray(tab_t if tab_t else [0.0], dtype=float),
            np.asarray(tab_r if tab_r else [0.0], dtype=float),
            np.asarray(off, dtype=np.int32),
            np.asarray(ln, dtype=np.int32),
        )

    def _gauge_rows(self, pts):
        if self._encoding is not None:
            return _backend.tower_gauge(np.ascontiguousarray(pts), *self._encoding,
                                        self.tol.root_tol)
        if self.is_base:
            return np.abs(pts[:, 0])
        g = self.inner._gauge_rows(pts[:, :-1])
        z = np.abs(pts[:, -1])
        return _combine_custom(g, z, self.profile, self.tol.root_tol)

    def outer_radius(self) -> float:
        """Radius of a Euclidean ball containing the body."""
        return math.sqrt(sum(b.t_max ** 2 for b in self.chain()))

    def inner_radius(self) -> float:
        """Radius of a Euclidean ball inside the body (cross-polytope bound)."""
        return 1.0 / math.sqrt(sum(1.0 / b.t_max ** 2 for b in self.chain()))


def _combine_custom(g, z, profile: Profile, root_tol):
    T = profile.t_max
    zs = z / T
    out = np.where(z == 0, g, g + zs)
    out = np.where(g == 0, zs, out)
    todo = (z > 0) & (g > 0)
    if not np.any(todo):
        return out
    # the answer is homogeneous in (g, z); solving at unit scale makes root_tol relative
    scale = g[todo] + z[todo] / T
    gg, zz = g[todo] / scale, z[todo] / scale

    def feasible(lam):
        return lam * np.asarray(profile(np.minimum(zz / lam, T))) >= gg

    out[todo] = bisect_monotone(feasible, np.maximum(gg, zz / T), gg + zz / T, root_tol) * scale
    return out


# constructors ---------------------------------------------------------------

def segment(tol: Tolerance = DEFAULT_TOL) -> LayeredBody:
    return LayeredBody(descriptor="seg", tol=tol)


def extend_layer(inner: LayeredBody, profile: Profile, descriptor: str | None = None,
                 tol: Tolerance = DEFAULT_TOL) -> LayeredBody:
    report = validate_profile(profile, tol=tol)
    if not report.passed:
        raise InvalidProfile(f"profile rejected: {report.witness} "
                             f"(residual {report.worst_residual:.3g})")
    return LayeredBody(inner, profile, descriptor, tol)


def cone_over(inner: LayeredBody, t_max: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> LayeredBody:
    return extend_layer(inner, Profile.cone(t_max), f"cone:{inner.descriptor}", tol)


def prism_over(inner: LayeredBody, t_max: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> LayeredBody:
    return extend_layer(inner, Profile.prism(t_max), f"prism:{inner.descriptor}", tol)


def make_lp_ball(p: float, n: int, tol: Tolerance = DEFAULT_TOL) -> LayeredBody:
    """The l_p unit ball of dimension ``n`` as a tower of l_p profiles."""
    if not p >= 1:
        raise InvalidProfile("p < 1")
    if int(n) < 1:
        raise ValueError("dimension must be positive")
    body = segment(tol)
    prof = Profile.lp(p)
    for _ in range(int(n) - 1):
        body = extend_layer(body, prof, tol=tol)
    body.descriptor = f"lp:{p:g}:{int(n)}"
    return body


def section_ratio(body: LayeredBody, t: float) -> float:
    if body.is_base:
        raise ValueError("the base segment has no section profile")
    if abs(t) > body.t_max:
        raise ValueError(f"|t| = {abs(t)} exceeds t_max = {body.t_max}")
    return float(body.profile(abs(t)))


def layered_gauge(body: LayeredBody, x):
    return body.gauge(x)


# Euclidean projections ---------------------------------------------------------

def _is_l2_tower(body: LayeredBody) -> bool:
    return all(p.kind == "lp" and p.p == 2 and p.t_max == 1 for p in body.profiles())


def _is_box_tower(body: LayeredBody) -> bool:
    return all(p.kind == "prism" or (p.kind == "lp" and math.isinf(p.p))
               for p in body.profiles())


def _project_cone_meridian(rho, w, T):
    """Nearest point of the triangle ``rho, w >= 0, rho + w/T <= 1``."""
    inside = rho + w / T <= 1.0
    s = np.clip(((1.0 - rho) + w * T) / (1.0 + T * T), 0.0, 1.0)
    return np.where(inside, rho, 1.0 - s), np.where(inside, w, s * T)


def euclidean_projection(body: GaugeBody):
    """Nearest-point map onto ``body``, or None when no exact one is known."""
    if isinstance(body, LayeredBody):
        if _is_l2_tower(body):
            def proj(pts):
                nrm = np.linalg.norm(pts, axis=1, keepdims=True)
                return pts / np.maximum(1.0, nrm)
            return proj
        if _is_box_tower(body):
            bounds = np.array([b.t_max for b in body.chain()])
            return lambda pts: np.clip(pts, -bounds, bounds)
        if body.profile.kind == "cone" and _is_l2_tower(body.inner):
            T = body.profile.t_max

            def proj(pts):
                y = pts[:, :-1]
                z = pts[:, -1]
                rho = np.linalg.norm(y, axis=1)
                pr, pw = _project_cone_meridian(rho, np.abs(z), T)
                unit = y / np.where(rho > 0, rho, 1.0)[:, None]
                return np.column_stack([unit * pr[:, None], np.sign(z) * pw])
            return proj
    return None


# smoothed bodies ---------------------------------------------------------------

def _smoothed_cone_closed_form(pts, eps):
    """Gauge of (doubled cone over an l2 ball, t_max = 1) + eps * B2."""
    # the gauge is homogeneous; normalising keeps the squares below from underflowing
    scale = np.max(np.abs(pts), axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    pts = pts / safe[:, None]
    r = np.linalg.norm(pts[:, :-1], axis=1)
    w = np.abs(pts[:, -1])
    lam = (r + w) / (1.0 + eps * math.sqrt(2.0))
    a = 1.0 - eps * eps

    def vertex_root(u, v):
        disc = np.clip(eps * eps * u * u - a * v * v, 0.0, None)
        return (u - np.sqrt(disc)) / a

    out = lam
    out = np.where(r - w > lam, vertex_root(r, w), out)
    out = np.where(w - r > lam, vertex_root(w, r), out)
    return out * safe


class SmoothedBody(GaugeBody):
    """``core + epsilon * B2``: membership is Euclidean distance to the core <= epsilon."""

    def __init__(self, core: GaugeBody, epsilon: float, projection=None,
                 r_inner: float | None = None, r_outer: float | None = None,
                 tol: Tolerance = DEFAULT_TOL, descriptor: str | None = None):
        if not (math.isfinite(epsilon) and epsilon > 0):
            raise ValueError("epsilon must be a positive real")
        super().__init__(core.dim, descriptor or f"smoothed:{core.descriptor}:{epsilon:g}")
        self.core = core
        self.epsilon = float(epsilon)
        self.tol = tol
        self.projection = projection or euclidean_projection(core)
        if self.projection is None:
            raise MissingProjection(f"no Euclidean projection known for {core.descriptor}")
        if r_inner is None or r_outer is None:
            if not isinstance(core, LayeredBody):
                raise MissingProjection("rounding radii are required for non-layered cores")
            r_inner, r_outer = core.inner_radius(), core.outer_radius()
        self.r_inner = r_inner + self.epsilon
        self.r_outer = r_outer + self.epsilon
        self._closed_form = (
            isinstance(core, LayeredBody)
            and not core.is_base
            and core.profile.kind == "cone"
            and core.profile.t_max == 1.0
            and _is_l2_tower(core.inner)
            and self.epsilon < 1.0
        )

    def distance_to_core(self, x):
        pts = as_points(x, self.dim).reshape(-1, self.dim)
        return np.linalg.norm(pts - self.projection(pts), axis=1)

    def _bisection_gauge(self, pts):
        scale = np.max(np.abs(pts), axis=1)
        out = np.zeros(len(pts))
        nz = scale > 0
        if not np.any(nz):
            return out
        # solve for unit-scaled rows so tiny or huge inputs neither underflow nor overflow
        p = pts[nz] / scale[nz, None]
        norm2 = np.linalg.norm(p, axis=1)

        def feasible(lam):
            q = p / lam[:, None]
            return np.linalg.norm(q - self.projection(q), axis=1) <= self.epsilon

        lam = bisect_monotone(feasible, norm2 / self.r_outer * (1 - 1e-12),
                              norm2 / self.r_inner, self.tol.root_tol)
        out[nz] = lam * scale[nz]
        return out

    def _gauge_rows(self, pts):
        if self._closed_form:
            return _smoothed_cone_closed_form(pts, self.epsilon)
        return self._bisection_gauge(pts)


def smoothed_gauge(body: SmoothedBody, x):
    return body.gauge(x)


def shipped_profile_names() -> list[str]:
    """Names of the table profiles bundled with the package."""
    folder = resources.files("simplexforge").joinpath("profiles")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def shipped_profile_path(name: str):
    """Path of a bundled profile (``name`` with or without ``.json``), or None."""
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in shipped_profile_names():
        return None
    return resources.files("simplexforge").joinpath("profiles", stem + ".json")


__all__ = [
    "Profile", "LayeredBody", "SmoothedBody", "validate_profile", "segment",
    "extend_layer", "cone_over", "prism_over", "make_lp_ball", "section_ratio",
    "layered_gauge", "smoothed_gauge", "euclidean_projection", "shipped_profile_names",
    "shipped_profile_path",
]
