"""Command line interface.

Exit codes: 0 success, 1 the mathematics said no (failed property,
violated construction precondition, unsuccessful search), 2 usage error,
3 I/O error.  A result document is written on codes 0 and 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .bodies import (LayeredBody, Profile, SmoothedBody, extend_layer, make_lp_ball,
                     segment, cone_over, prism_over, shipped_profile_path)
from .checks import check_2_intersection, check_intersection_property, verify_equilateral, \
    verify_inscribed
from .construction import ConstructionTrace, construct
from .document import dumps, finalize, load, new_document, simplex_entry, validate, write_atomic
from .errors import (BodySpecError, MissingProjection, PreconditionViolated, SimplexForgeError,
                     UnsupportedExport)
from .export import FORMATS, export_geometry
from .gauge import DEFAULT_TOL, Tolerance
from .gallery import build_remark_instances, smoothed_shrinkage, verify_remark
from .report import FAIL, PASS, merge_verdicts
from .search import SearchOptions, search_equilateral

EXIT_OK, EXIT_MATH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SEED_ENV = "SIMPLEXFORGE_SEED"
DEFAULT_SEED = 0
DEFAULT_EPS = (0.2, 0.1, 0.05)
SUBCOMMANDS = ("construct", "verify", "search", "check", "gallery", "export")


# body specs ---------------------------------------------------------------

def _tokens(spec: str):
    out, pos = [], 0
    for part in spec.split(":"):
        out.append((part, pos))
        pos += len(part) + 1
    return out


def _number(tok, what):
    text, pos = tok
    try:
        value = float(text)
    except ValueError:
        raise BodySpecError(f"malformed number {text!r} for {what}", pos) from None
    if value != value:
        raise BodySpecError(f"malformed number {text!r} for {what}", pos)
    return value


def parse_body_spec(spec: str, tol: Tolerance = DEFAULT_TOL):
    """Build a body from ``lp:<p>:<n> | cone:<spec> | prism:<spec> |
    profile:<file.json>:<spec> | smoothed:<spec>:<eps> | seg``."""
    if not isinstance(spec, str) or not spec.strip():
        raise BodySpecError("empty body spec", 0)
    toks = _tokens(spec.strip())
    body, rest = _parse(toks, 0, tol)
    if rest != len(toks):
        text, pos = toks[rest]
        raise BodySpecError(f"unexpected trailing token {text!r}", pos)
    return body


def _need(toks, i, what):
    if i >= len(toks):
        end = toks[-1][1] + len(toks[-1][0])
        raise BodySpecError(f"missing {what}", end)
    return toks[i]


def _layered(body, tok, kind):
    if not isinstance(body, LayeredBody):
        raise BodySpecError(f"{kind} needs a layered inner body", tok[1])
    return body


def _parse(toks, i, tol):
    kind, pos = _need(toks, i, "body kind")
    if kind == "seg":
        return segment(tol), i + 1
    if kind == "lp":
        p = _number(_need(toks, i + 1, "p"), "p")
        n_tok = _need(toks, i + 2, "dimension")
        if p < 1:
            raise BodySpecError("p < 1", toks[i + 1][1])
        try:
            n = int(n_tok[0])
        except ValueError:
            raise BodySpecError(f"malformed dimension {n_tok[0]!r}", n_tok[1]) from None
        if n < 1:
            raise BodySpecError("dimension must be >= 1", n_tok[1])
        return make_lp_ball(p, n, tol), i + 3
    if kind in ("cone", "prism"):
        inner, j = _parse(toks, i + 1, tol)
        inner = _layered(inner, toks[i], kind)
        return (cone_over if kind == "cone" else prism_over)(inner, tol=tol), j
    if kind == "profile":
        ftok = _need(toks, i + 1, "profile file")
        inner, j = _parse(toks, i + 2, tol)
        inner = _layered(inner, toks[i], kind)
        path = ftok[0] if os.path.exists(ftok[0]) else shipped_profile_path(ftok[0])
        if path is None:
            raise BodySpecError(f"profile file {ftok[0]!r} not found", ftok[1])
        try:
            prof = Profile.from_json(path)
            body = extend_layer(inner, prof, tol=tol)
        except (OSError, ValueError) as exc:
            raise BodySpecError(f"bad profile {ftok[0]!r}: {exc}", ftok[1]) from None
        body.descriptor = ":".join(t for t, _ in toks[i:j])
        return body, j
    if kind == "smoothed":
        core, j = _parse(toks, i + 1, tol)
        eps = _number(_need(toks, j, "smoothing radius"), "smoothing radius")
        if not eps > 0:
            raise BodySpecError("smoothing radius must be > 0", toks[j][1])
        try:
            body = SmoothedBody(core, eps, tol=tol)
        except MissingProjection as exc:
            raise BodySpecError(str(exc), pos) from None
        body.descriptor = ":".join(t for t, _ in toks[i:j + 1])
        return body, j + 1
    raise BodySpecError(f"unknown body kind {kind!r}", pos)


# run configuration --------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    body: str | None = None
    tol: Tolerance = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    restarts: int = 32
    k: int | None = None
    eps: tuple = DEFAULT_EPS
    out: str | None = None
    export: str | None = None
    summary: str | None = None
    input: str | None = None
    boundary: bool = False
    extra: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


def _tolerance(value):
    if value is None:
        return DEFAULT_TOL
    try:
        return Tolerance(root_tol=min(DEFAULT_TOL.root_tol, value), verify_tol=value)
    except ValueError as exc:
        raise UsageError(f"--tol: {exc}") from None


def resolve_seed(flag, environ=os.environ) -> int:
    """Flag beats environment beats the default."""
    if flag is not None:
        return int(flag)
    env = environ.get(SEED_ENV)
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _eps_list(text):
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed eps list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty eps list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body spec, e.g. lp:2:3, cone:lp:2:2, smoothed:cone:lp:2:2:0.1")
    common.add_argument("--tol", type=float, help="verification tolerance")
    common.add_argument("--seed", type=int, help=f"random seed (overrides ${SEED_ENV})")
    common.add_argument("--restarts", type=int, default=32, help="search restarts")
    common.add_argument("--out", help="result document path (default: stdout)")
    common.add_argument("--export", choices=FORMATS, help="also write geometry next to --out")
    common.add_argument("--summary", help="CSV summary path")
    parser = argparse.ArgumentParser(
        prog="simplexforge",
        description="Inscribed equilateral simplices in normed spaces with layered unit balls.",
        epilog="exit codes: 0 success, 1 mathematical failure, 2 usage error, 3 I/O error")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("construct", parents=[common], help="inscribed equilateral simplex with D > 1")
    p = sub.add_parser("verify", parents=[common], help="re-check a result document or a point file")
    p.add_argument("input", help="result document, or JSON array of points (needs --body)")
    p = sub.add_parser("search", parents=[common], help="multistart equilateral set search")
    p.add_argument("--k", type=int, help="number of points (default dim + 1)")
    p.add_argument("--boundary", action="store_true", help="require every point on the boundary")
    sub.add_parser("check", parents=[common], help="intersection property certificates")
    p = sub.add_parser("gallery", parents=[common], help="the doubled cone counterexample")
    p.add_argument("--eps", type=_eps_list, default=DEFAULT_EPS, help="comma-separated radii")
    p = sub.add_parser("export", parents=[common], help="geometry from a result document")
    p.add_argument("input", help="result document")
    return parser


def config_from_args(args, environ=os.environ) -> RunConfig:
    if args.restarts is not None and args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    k = getattr(args, "k", None)
    if k is not None and k < 2:
        raise UsageError("--k must be >= 2")
    return RunConfig(subcommand=args.subcommand, body=args.body, tol=_tolerance(args.tol),
                     seed=resolve_seed(args.seed, environ), restarts=args.restarts, k=k,
                     eps=tuple(getattr(args, "eps", DEFAULT_EPS)), out=args.out,
                     export=args.export, summary=args.summary,
                     input=getattr(args, "input", None),
                     boundary=getattr(args, "boundary", False))


# subcommands --------------------------------------------------------------

def _body(cfg: RunConfig):
    if not cfg.body:
        raise UsageError(f"{cfg.subcommand} needs --body")
    return parse_body_spec(cfg.body, cfg.tol)


def _doc(cfg: RunConfig, **echo):
    return new_document(cfg.subcommand, cfg.body, cfg.tol, seed=cfg.seed, **echo)


def run_construct(cfg: RunConfig):
    body = _body(cfg)
    if not isinstance(body, LayeredBody) or body.dim < 2:
        raise UsageError("construct needs a layered body of dimension >= 2")
    doc = _doc(cfg)
    trace = ConstructionTrace(body.descriptor)
    try:
        simplex, trace = construct(body, cfg.tol, trace)
    except PreconditionViolated as exc:
        doc["traces"].append(trace.to_dict())
        doc["error"] = {"type": "PreconditionViolated", "message": str(exc), "level": exc.level,
                        "margin": exc.margin}
        doc["verdicts"]["construct"] = FAIL
        rep = check_2_intersection(body, cfg.tol)
        doc["reports"]["two_intersection"] = rep.to_dict()
        doc["verdicts"]["two_intersection"] = rep.verdict
        return doc, EXIT_MATH
    doc["traces"].append(trace.to_dict())
    doc["simplices"].append(simplex_entry("construct", simplex.vertices, body))
    eq = verify_equilateral(simplex, body, cfg.tol)
    ins = verify_inscribed(simplex, body, cfg.tol)
    margin = simplex.diameter - 1.0
    doc["reports"].update(equilateral=eq.to_dict(), inscribed=ins.to_dict())
    doc["verdicts"].update(equilateral=eq.verdict, inscribed=ins.verdict,
                           diameter_margin=PASS if margin >= cfg.tol.margin_tol else "degenerate")
    doc["residuals"].update(equilateral=eq.worst_residual, inscribed=ins.worst_residual,
                            diameter_margin=margin)
    doc["verdicts"]["construct"] = merge_verdicts(doc["verdicts"].values())
    return doc, EXIT_OK if doc["verdicts"]["construct"] == PASS else EXIT_MATH


def _verify_points(doc, label, pts, body, claims, tol):
    doc["simplices"].append(simplex_entry(label, pts, body, claims))
    for claim in claims:
        fn = verify_equilateral if claim == "equilateral" else verify_inscribed
        rep = fn(pts, body, tol)
        doc["reports"][f"{label}:{claim}"] = rep.to_dict()
        doc["verdicts"][f"{label}:{claim}"] = rep.verdict
        doc["residuals"][f"{label}:{claim}"] = rep.worst_residual


def run_verify(cfg: RunConfig):
    data = _read_json(cfg.input)
    if isinstance(data, dict) and "simplices" in data:
        validate(data)
        spec = cfg.body or data["input"].get("body")
        if not spec:
            raise UsageError("document has no body spec; pass --body")
        cfg.body = spec
        body = parse_body_spec(spec, cfg.tol)
        doc = _doc(cfg)
        for s in data["simplices"]:
            if s["claims"]:
                _verify_points(doc, s["label"], np.asarray(s["vertices"]), body, s["claims"], cfg.tol)
    else:
        body = _body(cfg)
        try:
            pts = np.asarray(data, dtype=float).reshape(-1, body.dim)
        except (TypeError, ValueError):
            raise UsageError(f"{cfg.input}: expected an array of {body.dim}-vectors") from None
        doc = _doc(cfg)
        _verify_points(doc, "points", pts, body, ["equilateral", "inscribed"], cfg.tol)
    verdict = merge_verdicts(doc["verdicts"].values())
    return doc, EXIT_OK if verdict == PASS else EXIT_MATH


def run_search(cfg: RunConfig):
    body = _body(cfg)
    k = cfg.k or body.dim + 1
    doc = _doc(cfg, restarts=cfg.restarts, k=k)
    doc["input"]["boundary"] = cfg.boundary
    opts = SearchOptions(restarts=cfg.restarts, seed=cfg.seed, boundary_constrained=cfg.boundary,
                         residual_tol=min(1e-8, cfg.tol.verify_tol))
    res = search_equilateral(body, k, opts)
    claims = ["equilateral", "inscribed"] if cfg.boundary else ["equilateral"]
    doc["simplices"].append(simplex_entry("search", res.points, body, claims if res.success else []))
    doc["residuals"]["search"] = res.residual
    doc["verdicts"]["search"] = PASS if res.success else FAIL
    doc["reports"]["search"] = {"verdict": doc["verdicts"]["search"], "worst_residual": res.residual,
                                "restart": res.restart, "history": res.history}
    return doc, EXIT_OK if res.success else EXIT_MATH


def run_check(cfg: RunConfig):
    body = _body(cfg)
    doc = _doc(cfg)
    reports = {"intersection": check_intersection_property(body, tol=cfg.tol)}
    if isinstance(body, LayeredBody) and body.dim >= 2:
        reports["two_intersection"] = check_2_intersection(body, cfg.tol)
    for name, rep in reports.items():
        doc["reports"][name] = rep.to_dict()
        doc["verdicts"][name] = rep.verdict
        doc["residuals"][name] = rep.worst_residual
    return doc, EXIT_OK if merge_verdicts(doc["verdicts"].values()) == PASS else EXIT_MATH


def run_gallery(cfg: RunConfig):
    if any(not 0 < e < 1 for e in cfg.eps):
        raise UsageError("--eps values must lie in (0, 1)")
    if any(a <= b for a, b in zip(cfg.eps, cfg.eps[1:])):
        raise UsageError("--eps must be strictly decreasing")
    cfg.body = cfg.body or "cone:lp:2:2"
    if cfg.body != "cone:lp:2:2":
        raise UsageError("gallery is fixed to the doubled cone cone:lp:2:2")
    inst = build_remark_instances(cfg.eps, cfg.tol)
    doc = _doc(cfg, eps=list(cfg.eps))
    rep = verify_remark(inst, cfg.tol)
    rows, shrink = smoothed_shrinkage(inst, cfg.tol)
    doc["simplices"] += [simplex_entry("T", inst.T, inst.body),
                         simplex_entry("T*", inst.T_star, inst.body),
                         simplex_entry("S", inst.S, inst.body, ["equilateral"])]
    doc["reports"].update(remark=rep.to_dict(), shrinkage=shrink.to_dict())
    doc["reports"]["shrinkage"]["table"] = rows
    doc["verdicts"].update(remark=rep.verdict, shrinkage=shrink.verdict)
    for r in rows:
        doc["residuals"][f"best_scale@{r['eps']!r}"] = r["best_scale"]
    return doc, EXIT_OK if merge_verdicts(doc["verdicts"].values()) == PASS else EXIT_MATH


def run_export(cfg: RunConfig):
    if not cfg.export:
        raise UsageError("export needs --export obj|svg")
    if not cfg.out:
        raise UsageError("export needs --out <geometry path>")
    data = load(cfg.input)
    spec = cfg.body or data["input"].get("body")
    if not spec:
        raise UsageError("document has no body spec; pass --body")
    export_geometry(data, parse_body_spec(spec, cfg.tol), cfg.export, cfg.out)
    return None, EXIT_OK


RUNNERS = {"construct": run_construct, "verify": run_verify, "search": run_search,
           "check": run_check, "gallery": run_gallery, "export": run_export}


# plumbing -----------------------------------------------------------------

def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def summary_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "name", "verdict", "value"])
    for name, verdict in sorted(doc["verdicts"].items()):
        value = doc["residuals"].get(name, doc["reports"].get(name, {}).get("worst_residual"))
        w.writerow(["verdict", name, verdict, repr(value)])
    for s in doc["simplices"]:
        w.writerow(["simplex", s["label"], "", repr(s["common_distance"])])
    return buf.getvalue()


def _geometry_path(out: str, fmt: str) -> str:
    stem, _ = os.path.splitext(out)
    return f"{stem}.{fmt}"


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    try:
        doc, code = RUNNERS[cfg.subcommand](cfg)
    except (UsageError, BodySpecError, UnsupportedExport) as exc:
        print(f"simplexforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"simplexforge: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"simplexforge: error: malformed JSON in {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimplexForgeError as exc:
        print(f"simplexforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    if doc is None:
        return code
    doc = finalize(doc, time.perf_counter() - start)
    validate(doc)
    text = dumps(doc)
    try:
        if cfg.out:
            write_atomic(cfg.out, text)
            if cfg.export:
                body = parse_body_spec(cfg.body, cfg.tol)
                export_geometry(doc, body, cfg.export, _geometry_path(cfg.out, cfg.export))
        else:
            stdout.write(text)
            if cfg.export:
                raise UsageError("--export needs --out")
        if cfg.summary:
            write_atomic(cfg.summary, summary_csv(doc))
    except (UsageError, UnsupportedExport) as exc:
        print(f"simplexforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"simplexforge: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"simplexforge {cfg.subcommand}: " + ", ".join(
        f"{k}={v}" for k, v in sorted(doc["verdicts"].items())), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"simplexforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
