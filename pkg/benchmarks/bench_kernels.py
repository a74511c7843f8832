"""Compare the compiled and NumPy tower-gauge kernels on a few layered bodies."""

from __future__ import annotations

import argparse
import time

import numpy as np

from simplexforge._backend import BACKENDS
from simplexforge.bodies import Profile, cone_over, extend_layer, make_lp_ball, shipped_profile_path


def bodies():
    table = Profile.from_json(shipped_profile_path("l3_sampled"))
    return {
        "lp:2:3": make_lp_ball(2, 3),
        "lp:1.5:6": make_lp_ball(1.5, 6),
        "cone:lp:2:2": cone_over(make_lp_ball(2, 2)),
        "profile:l3_sampled:lp:3:3": extend_layer(make_lp_ball(3, 3), table),
    }


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=100_000, help="Points per call.")
    parser.add_argument("--small", type=int, default=8, help="Points per call in the small-batch run.")
    parser.add_argument("--calls", type=int, default=2000, help="Calls in the small-batch run.")
    parser.add_argument("--repeats", type=int, default=5, help="Timing repeats (best is kept).")
    parser.add_argument("--seed", type=int, default=0, help="Seed for the sample points.")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    if "compiled" not in BACKENDS:
        print("compiled kernel not built; only the NumPy fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"large batches: {args.points} points per call")
    print(f"{'body':28s} {'backend':9s} {'seconds':>10s} {'Mpts/s':>8s} {'max diff':>10s}")
    for name, body in bodies().items():
        pts = rng.normal(size=(args.points, body.dim))
        enc = body._encode()
        ref = None
        for backend, mod in BACKENDS.items():
            def call():
                return mod.tower_gauge(pts, *enc, body.tol.root_tol)
            out = call()
            ref = out if ref is None else ref
            t = best_time(call, args.repeats)
            diff = float(np.max(np.abs(out - ref)))
            print(f"{name:28s} {backend:9s} {t:10.4f} {args.points / t / 1e6:8.2f} {diff:10.2e}")

    # pattern search and bisection call the kernel with a handful of points at a time
    print(f"\nsmall batches: {args.calls} calls of {args.small} points")
    print(f"{'body':28s} {'backend':9s} {'seconds':>10s} {'us/call':>8s}")
    for name, body in bodies().items():
        batches = [rng.normal(size=(args.small, body.dim)) for _ in range(args.calls)]
        enc = body._encode()
        for backend, mod in BACKENDS.items():
            def calls():
                for b in batches:
                    mod.tower_gauge(b, *enc, body.tol.root_tol)
            t = best_time(calls, args.repeats)
            print(f"{name:28s} {backend:9s} {t:10.4f} {t / args.calls * 1e6:8.2f}")


if __name__ == "__main__":
    main()
