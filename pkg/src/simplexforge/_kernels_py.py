"""Pure NumPy implementation of the tower-gauge kernel.

This is the reference path and the fallback used when the compiled
``_ckernels`` extension is unavailable.  Both must agree to rounding.

A tower is encoded level by level (levels 2..n) in parallel arrays:

    kinds   int32   0 = lp, 1 = cone, 2 = prism, 3 = sampled table
    params  float   the exponent p for lp levels (inf allowed)
    tmax    float   half-height of the level
    tab_off int32   offset of the level's samples in tab_t / tab_r
    tab_len int32   number of samples (0 unless kind == 3)
"""
import numpy as np

KIND_LP, KIND_CONE, KIND_PRISM, KIND_TABLE = 0, 1, 2, 3
BISECTION_CAP = 200


def lp_combine(g, z, p):
    if np.isinf(p):
        return np.maximum(g, z)
    if p == 1:
        return g + z
    if p == 2:
        return np.hypot(g, z)
    m = np.maximum(g, z)
    safe = np.where(m > 0, m, 1.0)
    return m * ((g / safe) ** p + (z / safe) ** p) ** (1.0 / p)


def table_combine(g, z, ts, rs, root_tol):
    """Solve ``min{lam : lam * r(z/lam) >= g}`` by bisection, r piecewise linear.

    The bracket ``[max(g, z/t_max), g + z/t_max]`` has ratio at most 2, so a
    relative stopping rule converges in a few dozen halvings at any magnitude.
    """
    tmax = ts[-1]
    zs = z / tmax
    lo = np.maximum(g, zs)
    hi = g + zs
    out = hi.copy()
    trivial = (z == 0) | (g == 0)
    out = np.where(z == 0, g, out)
    out = np.where(g == 0, zs, out)
    todo = ~trivial
    if not np.any(todo):
        return out
    lo = lo[todo]
    hi = hi[todo]
    gg = g[todo]
    zz = z[todo]
    for _ in range(BISECTION_CAP):
        mid = 0.5 * (lo + hi)
        # stop once the bracket is relatively narrow or has no interior float left
        act = ((hi - lo) > root_tol * hi) & (mid > lo) & (mid < hi)
        if not np.any(act):
            break
        ok = mid * np.interp(np.minimum(zz / mid, tmax), ts, rs) >= gg
        hi = np.where(act & ok, mid, hi)
        lo = np.where(act & ~ok, mid, lo)
    else:
        mid = 0.5 * (lo + hi)
        if np.any(((hi - lo) > root_tol * hi) & (mid > lo) & (mid < hi)):
            raise RuntimeError("table gauge bisection exceeded its iteration cap")
    out[todo] = 0.5 * (lo + hi)
    return out


def tower_gauge(pts, kinds, params, tmax, tab_t, tab_r, tab_off, tab_len, root_tol):
    pts = np.asarray(pts, dtype=float)
    g = np.abs(pts[:, 0])
    for lvl in range(len(kinds)):
        z = np.abs(pts[:, lvl + 1])
        kind = kinds[lvl]
        T = tmax[lvl]
        if kind == KIND_LP:
            g = lp_combine(g, z / T, params[lvl])
        elif kind == KIND_CONE:
            g = g + z / T
        elif kind == KIND_PRISM:
            g = np.maximum(g, z / T)
        elif kind == KIND_TABLE:
            a = tab_off[lvl]
            b = a + tab_len[lvl]
            g = table_combine(g, z, np.asarray(tab_t[a:b]), np.asarray(tab_r[a:b]), root_tol)
        else:
            raise ValueError(f"unknown level kind {kind}")
    return g
