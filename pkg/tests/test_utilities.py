import numpy as np
import pytest
from _helpers import base_point, model_params, resolvable, simplex_points
from hypothesis import assume, given
from hypothesis import strategies as st

from stratq.params import Scenario
from stratq.utilities import (
    SpecialCase,
    above_threshold_gain,
    below_threshold_gain,
    u_diff,
    u_inspect,
    u_inspect_from_moments,
    u_join,
    u_join_from_moments,
    u_special,
    utility_triple,
)


# values checked by hand from the defining expectations
@pytest.mark.parametrize(
    "R, C_I, strategy, fn, expected",
    [
        (1.5, 0.1, (1, 0), u_join, -0.230769230769),
        (1.5, 0.1, (1, 0), u_inspect, 0.053846153846),
        (1.5, 0.1, (1, 0), u_diff, -0.284615384615),
        (2.0, 0.2, (0, 1), u_inspect, 0.08125),
        (2.0, 0.2, (0, 1), u_join, 2 - 1 / 0.3),
        (4.0, 0.3, (0, 1), u_join, 4 - 10 / 3),
    ],
)
def test_frozen_values(R, C_I, strategy, fn, expected):
    assert fn(base_point(R, C_I), strategy) == pytest.approx(expected, abs=1e-11)


def test_triple():
    t = utility_triple(base_point(1.5, 0.1), (1, 0))
    assert t.u_balk == 0.0
    assert t.best() == t.u_inspect
    assert t.u_diff == pytest.approx(-0.284615384615, abs=1e-11)


def test_special_case_examples():
    p = base_point(1.5, 0.1)
    assert u_special(p, SpecialCase.JOIN_ALL_INSPECT) == pytest.approx(-0.230769230769, abs=1e-11)
    assert u_special(p, "inspect_no_inspectors", p_join=0.0) == pytest.approx(1.5 - 1.25 - 0.1)
    p2 = base_point(2.0, 0.2)
    pt = (2.0 * 0.8 - 1) / (2.0 * 0.5)
    assert u_special(p2, SpecialCase.JOIN_NO_INSPECTORS, p_join=pt) == pytest.approx(0.0, abs=1e-14)


@given(model_params(), simplex_points())
def test_closed_forms_match_moment_forms(p, s):
    assert u_join(p, s) == pytest.approx(u_join_from_moments(p, s), rel=1e-10, abs=1e-10)
    assert u_inspect(p, s) == pytest.approx(u_inspect_from_moments(p, s), rel=1e-10, abs=1e-10)


@given(model_params(), simplex_points())
def test_difference_formula(p, s):
    assert u_diff(p, s) == pytest.approx(u_join(p, s) - u_inspect(p, s), rel=1e-9, abs=1e-10)


@given(model_params(), st.floats(0.0, 1.0))
def test_special_cases_agree_with_general_forms(p, pj):
    assert u_join(p, (0, pj)) == pytest.approx(u_special(p, SpecialCase.JOIN_NO_INSPECTORS, pj), rel=1e-12)
    assert u_inspect(p, (0, pj)) == pytest.approx(u_special(p, SpecialCase.INSPECT_NO_INSPECTORS, pj), rel=1e-12, abs=1e-12)
    assert u_join(p, (1, 0)) == pytest.approx(u_special(p, SpecialCase.JOIN_ALL_INSPECT), rel=1e-10, abs=1e-12)
    assert u_inspect(p, (1, 0)) == pytest.approx(u_special(p, SpecialCase.INSPECT_ALL_INSPECT), rel=1e-10, abs=1e-12)
    # P_I -> 0 limit of the general form (the exact zero dispatches to the special case)
    if pj < 1.0:
        assert u_join(p, (1e-13, pj)) == pytest.approx(u_join(p, (0.0, pj)), rel=1e-8, abs=1e-9)


@given(model_params(), simplex_points())
def test_bracket_signs(p, s):
    assert below_threshold_gain(p, s) > 0
    k = p.R * p.mu / p.c_w
    if k == round(k):
        # place n_e + 1 only breaks even, so with little blind joining the gain can round to 0
        assert above_threshold_gain(p, s) <= 1e-12
    else:
        assert above_threshold_gain(p, s) < 0


def _crowding_moves(p, p_i, p_j, x):
    base = (p_i, p_j)
    return [(base, (p_i, p_j + x)), (base, (p_i + x, p_j)), (base, (p_i - x, p_j + x))]


@given(
    model_params(rho=(0.2, 0.95), k=(1.02, 8.0)),
    simplex_points(min_enter=0.2),
    st.floats(1e-3, 0.5),
)
def test_utilities_fall_with_crowding(p, s, x):
    """More entrants, or blind joiners in place of inspectors, lowers every utility."""
    p_i, p_j = s
    assume(resolvable(p, p_i, p_j, x))
    for fn in (u_join, u_inspect, u_diff):
        for a, b in _crowding_moves(p, p_i, p_j, x):
            if min(b) < 0 or sum(b) > 1:
                continue
            assert fn(p, a) > fn(p, b), (fn.__name__, a, b)


@given(model_params())
def test_join_positive_everywhere_iff_s1(p):
    # u_join is smallest at (0, 1), the longest-queue strategy
    grid = [(a, b) for a in np.linspace(0, 1, 6) for b in np.linspace(0, 1, 6) if a + b <= 1]
    smallest = min(u_join(p, s) for s in grid)
    assert (smallest > 0) == (p.scenario is Scenario.S1)
    if p.scenario is not Scenario.S1:
        assert u_join(p, (0, 1)) <= 0


@given(model_params())
def test_join_loses_to_all_inspectors_iff_s3(p):
    assert (u_join(p, (1, 0)) <= 0) == (p.scenario is Scenario.S3)
    if p.scenario is Scenario.S3:
        assert p.n_e == 1
