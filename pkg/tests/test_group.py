from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from homstruct.group import (
    DISPLAY_MISPRINTS,
    ORIGIN,
    SPACELIKE,
    TIMELIKE,
    TRIVIAL,
    GaussianRational,
    GroupPoint,
    action_connection,
    connection_from_action,
    double_cover,
    expansion_table,
    hopf_checks,
    killing_field,
    left_invariant,
    pi0,
    sample_points,
    su11_coords,
    su11_element,
    verify_expansion,
)
from homstruct.lie import DiagonalMetric

POINTS = sample_points(0, 16)
gauss = st.builds(GaussianRational, st.fractions(-5, 5, max_denominator=7), st.fractions(-5, 5, max_denominator=7))


# -- arithmetic and points ------------------------------------------------------------


@given(gauss, gauss, gauss)
def test_gaussian_field(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    if b != 0:
        assert (a / b) * b == a


def test_sample_points_start_at_origin_and_lie_on_hyperboloid():
    assert POINTS[0] == ORIGIN
    assert len(set(POINTS)) == 16
    for Z in POINTS:
        assert Z.z1.abs2() - Z.z2.abs2() == 1
    assert sample_points(0, 16) == POINTS


def test_seed_point_constraint():
    Z = GroupPoint.make(F(5, 4), F(3, 4))
    assert Z.z1.abs2() - Z.z2.abs2() == 1
    with pytest.raises(ValueError):
        GroupPoint.make(F(1, 2), 0)
    with pytest.raises(ValueError):
        sample_points(0, 0)


@given(st.integers(0, len(POINTS) - 1), st.integers(0, len(POINTS) - 1))
def test_products_stay_on_hyperboloid(i, j):
    P = POINTS[i] * POINTS[j]
    assert P.z1.abs2() - P.z2.abs2() == 1
    assert POINTS[i] * POINTS[i].inverse() == ORIGIN


# -- Killing fields ----------------------------------------------------------------------


def test_left_killing_field_at_origin():
    assert killing_field([1, 0, 0], "left", ORIGIN).coords() == [1, 0, 0]


def test_left_invariant_differs_from_left_killing_field():
    Z = POINTS[3]
    assert left_invariant([1, 0, 0], Z).coords() == [1, 0, 0]
    assert killing_field([1, 0, 0], "left", Z).coords() != [1, 0, 0]


def test_right_u1_generator_at_origin():
    assert killing_field("u1", "right", ORIGIN).coords() == [-1, 0, 0]


@given(st.lists(st.fractions(-3, 3, max_denominator=5), min_size=3, max_size=3))
def test_su11_coordinates_round_trip(c):
    assert su11_coords(su11_element(c)) == c


# -- expansion -----------------------------------------------------------------------------

TIMELIKE_G = [DiagonalMetric(-2, 1, 1), DiagonalMetric(-3, 2, 2)]
SPACELIKE_G = [DiagonalMetric(-3, 1, 3), DiagonalMetric(-2, 5, 2)]


def test_timelike_expansion_at_origin():
    g = DiagonalMetric(-2, 1, 1)
    table = expansion_table(TIMELIKE, g, 3)
    one, zero = GaussianRational(1), GaussianRational(0)
    assert [table.evaluate(0, k, one, zero) for k in range(3)] == [1, 0, 0]


@pytest.mark.parametrize("g", TIMELIKE_G)
@pytest.mark.parametrize("t", [F(3), F(-1, 2), F(7, 3)])
def test_timelike_expansion(g, t):
    res = verify_expansion(TIMELIKE, g, t, POINTS)
    assert res.ok, res.failures
    assert res.details["points_checked"] + res.details["points_skipped"] == 16


@pytest.mark.parametrize("g", SPACELIKE_G)
@pytest.mark.parametrize("t", [F(3), F(-1, 2), F(7, 3)])
def test_spacelike_expansion(g, t):
    res = verify_expansion(SPACELIKE, g, t, POINTS)
    assert res.ok, res.failures


@pytest.mark.parametrize("case, g", [(TIMELIKE, TIMELIKE_G[0]), (SPACELIKE, SPACELIKE_G[0])])
def test_literal_display_differs_exactly_in_known_slots(case, g):
    res = verify_expansion(case, g, F(3), POINTS, corrected=False)
    assert not res.ok
    assert tuple(res.details["mismatched"]) == tuple(sorted(DISPLAY_MISPRINTS[case]))


def test_expansion_rejects_degenerate_parameter():
    g = DiagonalMetric(-2, 1, 1)
    with pytest.raises(ValueError):
        verify_expansion(TIMELIKE, g, g.lam + 2 * g.mu, POINTS)
    with pytest.raises(ValueError):
        verify_expansion(TIMELIKE, DiagonalMetric(-2, 1, 3), 1, POINTS)


# -- connection from the action --------------------------------------------------------------


@pytest.mark.parametrize("t", [F(3), F(-2, 5)])
def test_timelike_connection_from_action(t):
    g = DiagonalMetric(-2, 1, 1)
    lam, mu = g.lam, g.mu
    res = connection_from_action(TIMELIKE, g, t)
    assert res.ok, res.failures
    gamma = action_connection(TIMELIKE, g, t)
    assert gamma[2][0][1] == (lam - t + 2 * mu) / mu


@pytest.mark.parametrize("t", [F(3), F(-2, 5)])
def test_spacelike_connection_from_action(t):
    g = DiagonalMetric(-3, 1, 3)
    mu, nu = g.mu, g.nu
    assert connection_from_action(SPACELIKE, g, t).ok
    assert action_connection(SPACELIKE, g, t)[0][1][2] == (mu + t - 2 * nu) / nu


def test_trivial_action_gives_flat_canonical_connection():
    g = DiagonalMetric(1, 2, 4)
    assert connection_from_action(TRIVIAL, g).ok
    assert all(x == 0 for plane in action_connection(TRIVIAL, g) for row in plane for x in row)


# -- fibrations and the double cover ---------------------------------------------------------


def test_pi0_at_origin():
    t, y1, y2 = pi0(GaussianRational(1), GaussianRational(0))
    assert (t, y1, y2) == (F(1, 2), 0, 0)


@pytest.mark.parametrize("which", ["pi0", "pi1", "piplus", "doublecover"])
def test_hopf_checks(which):
    res = hopf_checks(which, POINTS)
    assert res.ok, res.failures


def test_double_cover_kernel_and_identity():
    assert double_cover(ORIGIN) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    minus = GroupPoint(-ORIGIN.z1, -ORIGIN.z2)
    assert double_cover(minus) == double_cover(ORIGIN)


def test_unknown_hopf_check_rejected():
    with pytest.raises(ValueError):
        hopf_checks("pi9", POINTS)
