import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_rationals, positive_rationals
from homstruct.exact import (
    AffineSubspace,
    Infeasible,
    MetricCase,
    MultiPoly,
    NotFactorable,
    QuadSurd,
    Tensor,
    format_rational,
    identity,
    mat_inv,
    mat_mul,
    parse_rational,
    poly_factor_affine,
    rank,
    rational_sqrt,
    rref_solve,
    sample_params,
    sqrt_rational,
)
from homstruct.lie import DiagonalMetric
from homstruct.structures import COEFF_NAMES, build_as_system, linear_stage


# -- rationals ---------------------------------------------------------------


def test_parse_and_format_round_trip():
    assert parse_rational("-2/1") == F(-2)
    assert parse_rational(" 6/4 ") == F(3, 2)
    assert format_rational(F(3)) == "3/1"
    assert format_rational(F(-6, 4)) == "-3/2"


@pytest.mark.parametrize("text", ["1/0", "abc", "1.2.3", ""])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(nonzero_rationals(), nonzero_rationals())
def test_sum_is_reduced(a, b):
    s = a + b
    assert s.denominator > 0
    assert parse_rational(format_rational(s)) == s


def test_rational_sqrt():
    assert rational_sqrt(F(9, 4)) == F(3, 2)
    assert rational_sqrt(F(2)) is None
    assert rational_sqrt(F(-4)) is None


# -- tensors -------------------------------------------------------------------


def test_tensor_is_dense_and_compares_entrywise():
    t = Tensor.from_function("udd", lambda k, i, j: F(k + i - j))
    assert len(t.entries()) == 27
    assert t == Tensor.from_function("udd", lambda k, i, j: F(k + i - j))
    assert (t - t).is_zero()
    assert t != Tensor.zeros("udd")


# -- linear algebra ------------------------------------------------------------


def test_rref_solve_identity_system():
    sub = rref_solve(identity(9), [F(0)] * 9)
    assert sub.dimension == 0
    assert sub.base == tuple([F(0)] * 9)


def test_rref_solve_vacuous_row():
    sub = rref_solve([[F(0)] * 9], [F(0)])
    assert sub.dimension == 9
    assert sub.base == tuple([F(0)] * 9)


def test_rref_solve_infeasible():
    with pytest.raises(Infeasible):
        rref_solve([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)])


def test_linear_stage_timelike_example():
    sub = linear_stage(build_as_system(DiagonalMetric(-2, 1, 1)))
    assert sub.dimension == 3
    named = dict(zip(COEFF_NAMES, sub.base))
    assert named["rho2"] == named["tau1"] == 2
    assert named["rho0"] == named["rho1"] == named["tau0"] == named["tau2"] == 0
    for d in sub.directions:
        assert all(d[k] == 0 for k in range(9) if not COEFF_NAMES[k].startswith("sigma"))


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_rref_solve_points_satisfy_system(rows, x0, params):
    A = [[F(v) for v in r] for r in rows]
    b = [sum(F(a) * x for a, x in zip(r, x0)) for r in rows]
    sub = rref_solve(A, b)
    assert sub.dimension == 4 - rank(A)
    p = sub.point([F(c) for c in params[: sub.dimension]])
    for r, rhs in zip(A, b):
        assert sum(a * x for a, x in zip(r, p)) == rhs


@given(st.lists(st.integers(-6, 6), min_size=9, max_size=9))
def test_mat_inv(entries):
    m = [[F(entries[3 * i + j]) for j in range(3)] for i in range(3)]
    if rank(m) < 3:
        return
    assert mat_mul(m, mat_inv(m)) == identity(3)


def test_affine_subspace_containment():
    line = AffineSubspace.make([F(1), F(0)], [[F(1), F(1)]])
    assert line.contains_point([F(3), F(2)])
    assert not line.contains_point([F(3), F(3)])
    assert line.contains(AffineSubspace.make([F(2), F(1)], []))


# -- polynomials ---------------------------------------------------------------

XY = ("x", "y")


def test_factor_monomial():
    x, y = MultiPoly.var(XY, "x"), MultiPoly.var(XY, "y")
    _, factors = poly_factor_affine(x * y - x)
    assert {repr(f) for f in factors} == {repr(x), repr(y - 1)} or len(factors) == 2
    prod = factors[0] * factors[1]
    assert prod == x * y - x or prod == -(x * y - x) or (prod * 2) == (x * y - x) * 2


def test_factor_expanded_product():
    names = COEFF_NAMES
    v = {n: MultiPoly.var(names, n) for n in names}
    p = (v["rho2"] - 1) * (v["tau0"] + v["sigma1"])
    c, factors = poly_factor_affine(p)
    assert len(factors) == 2
    assert all(f.is_affine() for f in factors)
    assert factors[0] * factors[1] * c == p


def test_sum_of_squares_does_not_factor():
    x, y = MultiPoly.var(XY, "x"), MultiPoly.var(XY, "y")
    with pytest.raises(NotFactorable):
        poly_factor_affine(x * x + y * y)


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_factor_recovers_random_products(a, b):
    x, y = MultiPoly.var(XY, "x"), MultiPoly.var(XY, "y")
    f = MultiPoly.affine(XY, a[:2], a[2])
    g = MultiPoly.affine(XY, b[:2], b[2])
    if f.degree() < 1 or g.degree() < 1:
        return
    p = f * g
    c, factors = poly_factor_affine(p)
    prod = MultiPoly.constant(XY, c)
    for q in factors:
        prod = prod * q
    assert prod == p


def test_polynomials_store_no_zero_terms():
    x = MultiPoly.var(XY, "x")
    assert (x - x).is_zero()
    assert (x - x).degree() <= 0


# -- sampling --------------------------------------------------------------------


def test_symmetric_sample():
    ((lam, mu, nu),) = sample_params(MetricCase.SYMMETRIC, 3, 1)
    assert -lam == mu == nu


def test_generic_sample():
    ((lam, mu, nu),) = sample_params(MetricCase.GENERIC, 42, 1)
    assert len({-lam, mu, nu}) == 3


def test_timelike_perfect_square_sample():
    ((lam, mu, nu),) = sample_params(MetricCase.TIMELIKE, 7, 1, perfect_square=True)
    assert -lam != mu == nu
    assert rational_sqrt(abs(lam)) is not None and rational_sqrt(mu) is not None


@pytest.mark.parametrize("case", list(MetricCase))
def test_samples_are_deterministic_and_classified(case):
    a = sample_params(case, 11, 6)
    assert a == sample_params(case, 11, 6)
    assert len(set(a)) == 6
    for p in a:
        assert MetricCase.classify(*p) is case
        assert p[1] > 0 and p[2] > 0 and p[0] != 0


def test_sample_count_must_be_positive():
    with pytest.raises(ValueError):
        sample_params(MetricCase.GENERIC, 0, 0)


# -- quadratic surds -------------------------------------------------------------


def test_sqrt_two_squares_to_two():
    r = QuadSurd.sqrt(2)
    assert r * r == 2
    assert (1 / r) * r == 1


@given(nonzero_rationals(), nonzero_rationals(), nonzero_rationals(), nonzero_rationals())
def test_surd_field_axioms(a, b, c, d):
    x, y = QuadSurd(a, b, 3), QuadSurd(c, d, 3)
    assert x * y == y * x
    assert (x + y) - y == x
    assert (x / y) * y == x
    assert x * (x + y) == x * x + x * y


@given(positive_rationals(), positive_rationals())
def test_sqrt_rational_tower(p, q):
    r, tower = sqrt_rational(p)
    s, tower = sqrt_rational(q, tower)
    from homstruct.exact import lift

    r = lift(r, tower)
    assert r * r == p
    assert s * s == q
