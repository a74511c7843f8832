import math

import numpy as np
import pytest

from oracles import CONE_T_STAR, EDGE_ANGLE, GENERATOR_ANGLE, SQRT3, smoothed_cone_scale
from simplexforge import gallery
from simplexforge.bodies import make_lp_ball
from simplexforge.gallery import (build_remark_instances, inscribed_homothet_search,
                                  shrinkage_closed_form, smoothed_shrinkage, verify_remark)


@pytest.fixture(scope="module")
def instances():
    return build_remark_instances()


def test_constants_match_oracles():
    assert gallery.T_STAR_HEIGHT == pytest.approx(CONE_T_STAR, abs=1e-15)
    assert gallery.EDGE_ANGLE == pytest.approx(EDGE_ANGLE, abs=1e-15)
    assert gallery.GENERATOR_ANGLE == pytest.approx(GENERATOR_ANGLE, abs=1e-15)
    assert EDGE_ANGLE == pytest.approx(0.9389, abs=1e-4)
    for eps in (0.2, 0.1, 0.05):
        assert shrinkage_closed_form(eps) == pytest.approx(smoothed_cone_scale(eps), rel=1e-14)


def test_instances_shape(instances):
    assert instances.S.shape == (4, 3) and np.allclose(instances.S[0], 0)
    assert np.allclose(instances.T_star[:, 2], CONE_T_STAR)
    assert len(instances.smoothed) == 3
    with pytest.raises(ValueError):
        build_remark_instances((0.2, 1.5))


def test_verify_remark_passes(instances):
    rep = verify_remark(instances)
    assert rep.passed, rep.witness
    rows = {r["check"][:2]: r for r in rep.details}
    assert rows["T "]["diameter"] == pytest.approx(SQRT3, abs=1e-12)
    assert rows["T*"]["diameter"] == pytest.approx(1.0, abs=1e-12)
    last = rep.details[-1]
    assert last["best_inscribed_scale"] < 1 - 1e-3
    assert last["fitting_scale"] == pytest.approx(SQRT3, abs=1e-6)


def test_inscribed_search_on_a_ball():
    """In the Euclidean ball every inscribed regular tetrahedron has edge 2 sqrt(6)/3."""
    ball = make_lp_ball(2, 3)
    tri = np.array([[SQRT3 / 2, -0.5, 0], [-SQRT3 / 2, -0.5, 0], [0, 1, 0]]) / SQRT3
    h = math.sqrt(2 / 3)
    S = np.vstack([np.zeros(3), tri + [0, 0, h]])
    scale, anchor, _ = inscribed_homothet_search(ball, S)
    assert scale == pytest.approx(2 * math.sqrt(6) / 3, abs=1e-8)
    assert np.linalg.norm(anchor) == pytest.approx(1.0, abs=1e-9)


def test_shrinkage_matches_closed_form(instances):
    rows, report = smoothed_shrinkage(instances)
    assert report.passed, report.witness
    for row in rows:
        assert row["best_scale"] == pytest.approx(smoothed_cone_scale(row["eps"]), abs=1e-8)
        assert np.allclose(row["touching_vertex"], [0, 0, -(1 + row["eps"])], atol=1e-6)


def test_shrinkage_requires_decreasing_eps():
    with pytest.raises(ValueError):
        smoothed_shrinkage(build_remark_instances((0.05, 0.1)))
