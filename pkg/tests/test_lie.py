from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_rationals, positive_rationals
from homstruct.exact import Tensor
from homstruct.lie import (
    SU11,
    Connection,
    DiagonalMetric,
    StructureConstants,
    closed_form_connection,
    closed_form_curvature,
    covariant_derivative,
    curvature,
    canonical_connection,
    kk_correspondence,
    koszul_connection,
    levi_civita,
    space_form_curvature,
    torsion,
)

FRAME = range(3)
metrics = st.builds(DiagonalMetric, nonzero_rationals(), positive_rationals(), positive_rationals())


def test_su11_brackets():
    e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert SU11.bracket(e[0], e[1]) == [0, 0, 2]
    assert SU11.bracket(e[1], e[2]) == [-2, 0, 0]
    assert SU11.bracket(e[2], e[0]) == [0, 2, 0]
    assert SU11.is_valid()


def test_corrupted_bracket_table_breaks_jacobi():
    c = {idx: v for idx, v in SU11.c.items()}
    c[(0, 0, 1)] = F(1)
    c[(0, 1, 0)] = F(-1)
    bad = StructureConstants(Tensor.from_function("udd", lambda *i: c[i]))
    assert bad.jacobi_violations()
    assert not bad.antisymmetry_violations()


def test_degenerate_metric_rejected():
    with pytest.raises(ValueError):
        DiagonalMetric(0, 1, 1)
    with pytest.raises(ValueError):
        DiagonalMetric.checked(-1, -1, 1)


def test_koszul_at_unit_lorentzian_metric():
    conn = levi_civita(DiagonalMetric(-1, 1, 1))
    assert conn.apply(0, 1) == [0, 0, 1]
    assert conn.apply(1, 0) == [0, 0, -1]
    assert conn.apply(0, 0) == [0, 0, 0]


def test_koszul_example_component():
    conn = levi_civita(DiagonalMetric(1, 2, 4))
    assert conn.apply(2, 1)[0] == 3
    assert conn.form(0, 1) == [0, 0, 3]


@given(metrics)
def test_levi_civita_is_torsion_free_and_metric(g):
    conn = levi_civita(g)
    assert torsion(conn, SU11).is_zero()
    assert covariant_derivative(conn, g.tensor()).is_zero()
    assert conn.apply(0, 0) == [0, 0, 0]


@given(metrics)
def test_connection_matches_closed_forms(g):
    assert levi_civita(g).gamma == closed_form_connection(g)


@given(metrics)
def test_curvature_matches_closed_forms(g):
    assert curvature(levi_civita(g), SU11).r == closed_form_curvature(g)


@given(metrics)
def test_curvature_symmetries(g):
    R = curvature(levi_civita(g), SU11)
    low = R.lowered(g)
    for i, j, k, l in product(FRAME, repeat=4):
        assert R.r[l, i, j, k] == -R.r[l, j, i, k]
        assert low[i, j, k, l] == low[k, l, i, j]
        assert low[i, j, k, l] == -low[i, j, l, k]
        assert low[i, j, k, l] + low[j, k, i, l] + low[k, i, j, l] == 0


def test_unit_lorentzian_metric_has_curvature_minus_one():
    g = DiagonalMetric(-1, 1, 1)
    R = curvature(levi_civita(g), SU11)
    assert R.endomorphism(0, 1)[0][1] == -1  # R(X0,X1)X1 = -X0
    assert R.r == space_form_curvature(g, -1)


@given(positive_rationals())
def test_symmetric_metrics_are_space_forms(m):
    g = DiagonalMetric(-m, m, m)
    assert curvature(levi_civita(g), SU11).r == space_form_curvature(g, -1 / m)


def test_flat_connection_has_zero_curvature():
    flat = Connection(Tensor.zeros("udd"))
    assert curvature(flat, StructureConstants.abelian()).r.is_zero()


def test_example_curvature_coefficient():
    lam, mu, nu = F(1), F(2), F(4)
    R = curvature(levi_civita(DiagonalMetric(lam, mu, nu)), SU11)
    expected = lam / nu + 2 * mu / nu - 2 + mu**2 / (lam * nu) + 2 * mu / lam - 3 * nu / lam
    assert R.endomorphism(0, 1)[0][1] == expected


def test_symmetric_space_is_locally_symmetric():
    g = DiagonalMetric(-1, 1, 1)
    conn = levi_civita(g)
    assert covariant_derivative(conn, curvature(conn, SU11).r).is_zero()


@given(metrics, st.lists(st.integers(-3, 3), min_size=27, max_size=27))
def test_skew_torsion_keeps_metricity(g, vals):
    # S(X,Y,Z) skew in the last two slots
    raw = Tensor("ddd", [F(v) for v in vals])
    S = Tensor.from_function("ddd", lambda i, j, k: raw[i, j, k] - raw[i, k, j])
    conn = canonical_connection(levi_civita(g), S, g)
    assert covariant_derivative(conn, g.tensor()).is_zero()


def test_covariant_derivative_rejects_rank_five():
    with pytest.raises(ValueError):
        covariant_derivative(levi_civita(DiagonalMetric(1, 1, 1)), Tensor.zeros("ddddd"))


def test_kk_riemannian_example():
    p = kk_correspondence(1, 1, 1, 4)
    assert (p.a, p.b, p.c, p.d) == (1, 0, 0, 0)
    assert p.riemannian and p.nondegenerate


def test_kk_lorentzian_example():
    p = kk_correspondence(-1, 1, 1, 4)
    assert (p.a, p.b, p.c, p.d) == (-1, 0, 2, 0)
    assert p.nondegenerate and not p.riemannian


@given(nonzero_rationals(), positive_rationals(), positive_rationals(), positive_rationals())
def test_kk_fiber_coefficient(lam, mu, nu, kappa):
    p = kk_correspondence(lam, mu, nu, kappa)
    assert p.b == 0
    assert (p.d == 0) == (mu == nu)
    assert p.a + p.c == mu


def test_kk_rejects_nonpositive_kappa():
    with pytest.raises(ValueError):
        kk_correspondence(1, 1, 1, 0)
