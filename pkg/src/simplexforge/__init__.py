"""Inscribed equilateral simplices in normed spaces with layered unit balls."""

__version__ = "0.1.0"

from ._backend import BACKEND_NAME
from .bodies import (
    LayeredBody,
    Profile,
    SmoothedBody,
    cone_over,
    extend_layer,
    make_lp_ball,
    prism_over,
    segment,
    validate_profile,
)
from .checks import (
    check_2_intersection,
    check_intersection_property,
    verify_equilateral,
    verify_inscribed,
)
from .construction import Simplex, case1_slide, case2_grow, construct, find_t_star, planar_construct
from .errors import *  # noqa: F401,F403
from .gauge import (DEFAULT_TOL, FunctionalBody, GaugeBody, OracleBody, ScaledBody, Tolerance,
                    boundary_scale, diameter_finite, gauge, norm_dist)
from .inscribe import max_inscribed_homothet, remark_cone_step
from .report import PropertyReport
from .search import SearchOptions, SearchResult, lower_bound_e, search_equilateral
