"""Result documents: assembly, canonical JSON, determinism hash and schema validation."""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import asdict, is_dataclass
from importlib import resources

import numpy as np

from . import __version__
from ._backend import BACKEND_NAME
from .gauge import Tolerance

SCHEMA_VERSION = "1.0"


def _clean(obj):
    """Plain JSON types; non-finite floats become null."""
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = asdict(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(doc: dict) -> str:
    # json renders floats with repr, the shortest string that round-trips
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def determinism_hash(doc: dict) -> str:
    core = {k: v for k, v in doc.items() if k not in ("timing", "determinism_hash")}
    payload = json.dumps(core, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(payload.encode()).hexdigest()


def simplex_entry(label: str, vertices, body, claims=("equilateral", "inscribed")) -> dict:
    v = np.asarray(vertices, dtype=float)
    common = diameter = None
    if len(v) > 1:
        i, j = np.triu_indices(len(v), 1)
        d = np.atleast_1d(body.gauge(v[i] - v[j]))
        common, diameter = float(d.mean()), float(d.max())
    return {"label": label, "vertices": v.tolist(), "common_distance": common,
            "diameter": diameter, "claims": list(claims)}


def new_document(subcommand: str, body: str | None, tol: Tolerance, **echo) -> dict:
    inp = {"subcommand": subcommand, "body": body, "tol": asdict(tol)}
    inp.update(echo)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "simplexforge", "version": __version__, "backend": BACKEND_NAME},
        "input": inp,
        "verdicts": {},
        "simplices": [],
        "traces": [],
        "reports": {},
        "residuals": {},
        "error": None,
        "timing": {"seconds": 0.0},
        "determinism_hash": "0" * 64,
    }


def finalize(doc: dict, seconds: float) -> dict:
    doc = _clean(doc)
    doc["timing"] = {"seconds": float(seconds)}
    doc["determinism_hash"] = determinism_hash(doc)
    return doc


def load_schema() -> dict:
    text = resources.files("simplexforge").joinpath("schema/result_document.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` breaks the shipped schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema())


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename over ``path``."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    validate(doc)
    return doc
