import math

import numpy as np
import pytest

from oracles import SPHERE_DIAMETER, SQRT3
from simplexforge.bodies import make_lp_ball
from simplexforge.construction import construct
from simplexforge.gauge import ScaledBody
from simplexforge.search import SearchOptions, evaluate, lower_bound_e, search_equilateral

BOUNDARY = SearchOptions(restarts=8, boundary_constrained=True)


def test_triangle_in_disk(disk):
    res = search_equilateral(disk, 3, BOUNDARY)
    assert res.success and res.residual < 1e-8
    assert res.common_distance == pytest.approx(SQRT3, abs=1e-4)


def test_tetrahedron_in_sphere(ball3):
    res = search_equilateral(ball3, 4, BOUNDARY)
    assert res.success
    assert res.common_distance == pytest.approx(SPHERE_DIAMETER, abs=1e-4)


def test_linf_square_corners():
    body = make_lp_ball(math.inf, 2)
    res = search_equilateral(body, 4, BOUNDARY)
    assert res.success and res.common_distance == pytest.approx(2.0, abs=1e-6)
    assert not search_equilateral(body, 5, SearchOptions(restarts=8)).success


def test_pair_is_antipodal():
    body = make_lp_ball(1, 3)
    res = search_equilateral(body, 2, BOUNDARY)
    assert res.success and res.common_distance == pytest.approx(2.0, abs=1e-12)


def test_reported_residual_is_recomputable(disk):
    res = search_equilateral(disk, 3, BOUNDARY)
    c, r = evaluate(disk, res.points, BOUNDARY)
    assert abs(r - res.residual) <= 1e-12 and c == res.common_distance


def test_warm_start_never_hurts(ball3):
    simplex, _ = construct(ball3)
    opts = SearchOptions(restarts=1, boundary_constrained=True, max_iters=50)
    _, start_resid = evaluate(ball3, simplex.vertices, opts)
    res = search_equilateral(ball3, 4, opts, warm_start=simplex.vertices)
    assert res.residual <= start_resid


def test_gauge_scaling(disk):
    a = search_equilateral(disk, 3, SearchOptions(restarts=3))
    b = search_equilateral(ScaledBody(disk, 2.0), 3, SearchOptions(restarts=3))
    assert np.allclose(b.points, a.points / 2, atol=1e-12)
    assert b.common_distance == pytest.approx(a.common_distance, rel=1e-12)
    # the same points measured with the doubled gauge are twice as far apart
    assert evaluate(ScaledBody(disk, 2.0), a.points, SearchOptions())[0] == \
        pytest.approx(2 * a.common_distance, rel=1e-12)


def test_search_is_deterministic(disk):
    opts = SearchOptions(restarts=4, seed=7)
    a = search_equilateral(disk, 3, opts)
    b = search_equilateral(disk, 3, opts)
    assert a.points.tobytes() == b.points.tobytes() and a.restart == b.restart


def test_target_distance(disk):
    res = search_equilateral(disk, 3, SearchOptions(restarts=4, target_distance=1.0))
    assert res.success and res.common_distance == 1.0


def test_lower_bound_examples(disk, doubled_cone):
    opts = SearchOptions(restarts=8)
    assert lower_bound_e(make_lp_ball(math.inf, 2), 5, opts)[0] == 4
    assert lower_bound_e(disk, 3, opts)[0] == 3
    k, cert = lower_bound_e(doubled_cone, 4, opts)
    assert k == 4 and cert.success


def test_option_validation(disk):
    with pytest.raises(ValueError):
        SearchOptions(restarts=0)
    with pytest.raises(ValueError):
        SearchOptions(residual_tol=0)
    with pytest.raises(ValueError):
        SearchOptions(target_distance=-1)
    with pytest.raises(ValueError):
        search_equilateral(disk, 1)
    with pytest.raises(ValueError):
        lower_bound_e(disk, 1)
