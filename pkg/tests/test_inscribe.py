import math

import numpy as np
import pytest

from oracles import SPHERE_T_STAR, SQRT3
from simplexforge.bodies import SmoothedBody, cone_over, make_lp_ball, prism_over
from simplexforge.checks import verify_equilateral, verify_inscribed
from simplexforge.errors import NoRootFound
from simplexforge.gallery import remark_triangle
from simplexforge.inscribe import max_inscribed_homothet, remark_cone_step

UNIT_TRIANGLE = remark_triangle()[:, :2] / SQRT3


def test_unit_triangle_in_disk(disk):
    s, c = max_inscribed_homothet(disk, UNIT_TRIANGLE)
    assert s == pytest.approx(SQRT3, abs=1e-8)
    assert np.allclose(c, 0, atol=1e-7)


def test_segment_in_square(square):
    s, _ = max_inscribed_homothet(square, [[0, 0], [1, 0]])
    assert s == pytest.approx(2.0, abs=1e-8)


def test_cone_simplex_fits_at_root_three(doubled_cone):
    tri = remark_triangle() / SQRT3 + [0, 0, (SQRT3 - 1) / SQRT3]
    S = np.vstack([np.zeros(3), tri])
    s, _ = max_inscribed_homothet(doubled_cone, S)
    assert s == pytest.approx(SQRT3, abs=1e-7)


def test_homothet_rejects_degenerate_template(disk):
    with pytest.raises(ValueError):
        max_inscribed_homothet(disk, [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        max_inscribed_homothet(disk, [[1, 1]])


def test_remark_step_on_the_ball(ball3):
    simplex = remark_cone_step(ball3, UNIT_TRIANGLE)
    facet = simplex.vertices[1:]
    # the facet sits at height t*/h*; the cone over the origin is equilateral
    assert np.allclose(simplex.vertices[0], 0)
    assert verify_equilateral(simplex.vertices, ball3).passed
    heights = facet[:, 2]
    assert np.ptp(heights) < 1e-9
    # unit-diameter triangle at height t* in the sphere, rescaled to the boundary
    h = math.hypot(1 / SQRT3, SPHERE_T_STAR)
    assert heights[0] == pytest.approx(SPHERE_T_STAR / h, abs=1e-7)
    assert verify_inscribed(facet, ball3).passed


def test_remark_step_refuses_the_cylinder():
    with pytest.raises(NoRootFound):
        remark_cone_step(prism_over(make_lp_ball(2, 2)), UNIT_TRIANGLE)


def test_remark_step_on_smoothed_cone(doubled_cone):
    body = SmoothedBody(doubled_cone, 0.1)
    simplex = remark_cone_step(body, UNIT_TRIANGLE)
    assert verify_equilateral(simplex.vertices, body).passed
    assert verify_inscribed(simplex.vertices[1:], body).passed
