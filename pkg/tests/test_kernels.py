import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplexforge import _backend, _kernels_py
from simplexforge.bodies import Profile, cone_over, extend_layer, make_lp_ball, prism_over, segment

compiled = pytest.mark.skipif("compiled" not in _backend.BACKENDS, reason="extension not built")

LEVELS = st.sampled_from(["lp1", "lp1.5", "lp2", "lp3", "lpinf", "cone", "prism", "table"])


def _profile(tag):
    if tag.startswith("lp"):
        return Profile.lp(float(tag[2:]))
    if tag == "cone":
        return Profile.cone()
    if tag == "prism":
        return Profile.prism(0.5)
    return Profile.table([[0, 1], [0.3, 0.95], [0.8, 0.6], [1.1, 0]])


def _tower(tags):
    body = segment()
    for tag in tags:
        body = extend_layer(body, _profile(tag))
    return body


@compiled
@settings(max_examples=60, deadline=None)
@given(tags=st.lists(LEVELS, min_size=1, max_size=5), seed=st.integers(0, 2**31))
def test_backends_agree(tags, seed):
    body = _tower(tags)
    pts = np.random.default_rng(seed).normal(size=(64, body.dim)) * 3
    enc = body._encode()
    a = _backend.BACKENDS["python"].tower_gauge(pts, *enc, 1e-12)
    b = _backend.BACKENDS["compiled"].tower_gauge(pts, *enc, 1e-12)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-12)


def test_python_kernel_matches_lp_formula(rng):
    body = make_lp_ball(1.5, 4)
    pts = rng.normal(size=(100, 4))
    out = _kernels_py.tower_gauge(pts, *body._encode(), 1e-12)
    assert np.allclose(out, np.linalg.norm(pts, ord=1.5, axis=1), rtol=1e-12)


def test_custom_profiles_bypass_the_kernel():
    body = extend_layer(make_lp_ball(2, 2), Profile.custom(lambda t: 1 - np.asarray(t) ** 2))
    assert body._encode() is None
    # r(t) = 1 - t^2 at |z| = 0.5 with inner gauge 0.75 gives lambda = 1
    assert body.gauge([0.75, 0, 0.5]) == pytest.approx(1.0, abs=1e-9)


def test_kernel_handles_zero_and_axis_points():
    for body in (cone_over(make_lp_ball(3, 2)), prism_over(segment()), make_lp_ball(math.inf, 3)):
        assert body.gauge(np.zeros(body.dim)) == 0
        e = np.zeros(body.dim)
        e[-1] = 2.0
        assert body.gauge(e) == pytest.approx(2.0 / body.t_max)


def test_pure_python_switch():
    env = dict(os.environ, SIMPLEXFORGE_PURE_PYTHON="1")
    code = "from simplexforge import _backend; print(_backend.BACKEND_NAME)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", sorted(_backend.BACKENDS))
def test_table_bisection_terminates_on_subnormals(name):
    body = extend_layer(make_lp_ball(2, 2), Profile.table([[0, 1], [0.5, 0.9], [1.5, 0]]))
    pts = np.array([[5e-324, 5e-324, 5e-324], [1e-310, 0, 1e-310]])
    out = _backend.BACKENDS[name].tower_gauge(pts, *body._encode(), 1e-12)
    assert np.all(out > 0) and np.all(np.isfinite(out))
