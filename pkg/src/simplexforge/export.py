"""Geometry export: SVG outlines for planar results, OBJ meshes for spatial ones."""
from __future__ import annotations

import numpy as np

from .document import write_atomic
from .errors import UnsupportedExport
from .gauge import GaugeBody, boundary_scale

SVG_SAMPLES = 512
MESH_AZIMUTH = 64
MESH_POLAR = 32
FORMATS = ("svg", "obj")


def _num(x: float) -> str:
    return repr(float(x))


def _simplices(document: dict, dim: int) -> list[dict]:
    found = [s for s in document["simplices"] if len(s["vertices"][0]) == dim]
    if not found:
        dims = sorted({len(s["vertices"][0]) for s in document["simplices"]})
        raise UnsupportedExport(f"unsupported dimension: document holds dimensions {dims}, "
                                f"export needs {dim}")
    return found


def body_outline(body: GaugeBody, samples: int = SVG_SAMPLES) -> np.ndarray:
    a = 2 * np.pi * np.arange(samples) / samples
    return boundary_scale(body, np.column_stack([np.cos(a), np.sin(a)]))


def body_mesh(body: GaugeBody, n_az: int = MESH_AZIMUTH, n_pol: int = MESH_POLAR):
    """UV-sphere sampling of the boundary: ``(vertices, faces)`` with 0-based faces."""
    theta = np.pi * np.arange(1, n_pol) / n_pol
    phi = 2 * np.pi * np.arange(n_az) / n_az
    T, P = np.meshgrid(theta, phi, indexing="ij")
    dirs = np.column_stack([(np.sin(T) * np.cos(P)).ravel(), (np.sin(T) * np.sin(P)).ravel(),
                            np.cos(T).ravel()])
    dirs = np.vstack([[0.0, 0.0, 1.0], dirs, [0.0, 0.0, -1.0]])
    verts = boundary_scale(body, dirs)
    top, bottom = 0, len(verts) - 1

    def idx(ring, j):
        return 1 + ring * n_az + j % n_az

    faces = []
    for j in range(n_az):
        faces.append((top, idx(0, j), idx(0, j + 1)))
        faces.append((bottom, idx(n_pol - 2, j + 1), idx(n_pol - 2, j)))
    for ring in range(n_pol - 2):
        for j in range(n_az):
            faces.append((idx(ring, j), idx(ring + 1, j), idx(ring + 1, j + 1), idx(ring, j + 1)))
    return verts, faces


def to_svg(document: dict, body: GaugeBody) -> str:
    if body.dim != 2:
        raise UnsupportedExport(f"unsupported dimension {body.dim} for svg (needs 2)")
    simplices = _simplices(document, 2)
    outline = body_outline(body)
    pts = np.vstack([outline] + [np.asarray(s["vertices"]) for s in simplices])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    x0, y0 = lo - pad
    w, h = hi - lo + 2 * pad
    # flip y so the picture has the usual orientation
    flip = f'transform="matrix(1 0 0 -1 0 {_num(2 * y0 + h)})"'
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}" width="512" height="512">',
        f'<g {flip} fill="none" stroke-width="{_num(w / 256)}">',
        '<polygon class="body" stroke="#555555" points="'
        + " ".join(f"{_num(x)},{_num(y)}" for x, y in outline) + '"/>',
    ]
    for s in simplices:
        v = s["vertices"]
        lines.append(f'<polygon class="simplex" stroke="#c0392b" data-label="{s["label"]}" points="'
                     + " ".join(f"{_num(x)},{_num(y)}" for x, y in v) + '"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"


def to_obj(document: dict, body: GaugeBody) -> str:
    if body.dim != 3:
        raise UnsupportedExport(f"unsupported dimension {body.dim} for obj (needs 3)")
    simplices = _simplices(document, 3)
    verts, faces = body_mesh(body)
    out = [f"# boundary of {body.descriptor}", "o body"]
    out += [f"v {_num(x)} {_num(y)} {_num(z)}" for x, y, z in verts]
    out += ["f " + " ".join(str(i + 1) for i in f) for f in faces]
    offset = len(verts)
    for s in simplices:
        v = s["vertices"]
        out.append(f"o {s['label'].replace(' ', '_')}")
        out += [f"v {_num(x)} {_num(y)} {_num(z)}" for x, y, z in v]
        k = len(v)
        if k == 2:
            out.append(f"l {offset + 1} {offset + 2}")
        elif k == 3:
            out.append(f"f {offset + 1} {offset + 2} {offset + 3}")
        else:
            for a in range(k):
                for b in range(a + 1, k):
                    for c in range(b + 1, k):
                        out.append(f"f {offset + a + 1} {offset + b + 1} {offset + c + 1}")
        offset += k
    return "\n".join(out) + "\n"


def export_geometry(document: dict, body: GaugeBody, fmt: str, path) -> None:
    if fmt == "svg":
        text = to_svg(document, body)
    elif fmt == "obj":
        text = to_obj(document, body)
    else:
        raise UnsupportedExport(f"unknown export format {fmt!r}")
    write_atomic(path, text)
