from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import positive_rationals
from homstruct.exact import MetricCase, sample_params
from homstruct.lie import DiagonalMetric
from homstruct.reductive import (
    LEMMA_CASES,
    build_transvection_algebra,
    check_jacobi,
    check_reductive,
    check_torsion_reconstruction,
    holonomy_algebra,
    lemma_decomposition,
    null_swap_certificate,
    so22,
    su11_plus_center,
    verify_decomposition_case,
)
from homstruct.structures import (
    Family,
    catalog_family,
    displayed_decomposition_check,
    excluded_parameter,
    families_for,
    hatted_basis_check,
    table2_c_value,
    table2_certificate,
)

HOLONOMY_DIMS = {
    Family.S0: 0,
    Family.SLAMBDA: 1,
    Family.SMU: 1,
    Family.SNU: 1,
    Family.SNULL_MINUS: 1,
    Family.SNULL_PLUS: 1,
    Family.SVOL: 3,
}
ISOMETRY_DIMS = {Family.S0: 3, Family.SLAMBDA: 4, Family.SMU: 4, Family.SNU: 4,
                 Family.SNULL_MINUS: 4, Family.SNULL_PLUS: 4, Family.SVOL: 6}
ts = st.fractions(-12, 12, max_denominator=7)


def family_instance(fam, g, t):
    return catalog_family(fam, g) if fam is Family.S0 else catalog_family(fam, g, t)


# -- holonomy ----------------------------------------------------------------------


@pytest.mark.parametrize("case", list(MetricCase))
def test_s0_holonomy_is_trivial(case):
    g = DiagonalMetric(*sample_params(case, 9, 1)[0])
    assert holonomy_algebra(g, catalog_family(Family.S0, g)).dimension == 0


def test_slambda_holonomy_generator():
    g = DiagonalMetric(-2, 1, 1)
    hol = holonomy_algebra(g, catalog_family(Family.SLAMBDA, g, 3))
    assert hol.dimension == 1 and hol.skew and hol.closed
    (gen,) = hol.basis
    # proportional to theta1 x X2 - theta2 x X1
    k = gen[2][1]
    assert k != 0 and gen == [[0, 0, 0], [0, 0, -k], [0, k, 0]]


def test_svol_holonomy_is_full():
    g = DiagonalMetric(-1, 1, 1)
    assert holonomy_algebra(g, catalog_family(Family.SVOL, g, 3)).dimension == 3


@pytest.mark.parametrize("case", list(MetricCase))
@given(seed=st.integers(0, 5000), t=ts)
def test_holonomy_dimension_table(case, seed, t):
    g = DiagonalMetric(*sample_params(case, seed, 1)[0])
    for fam in families_for(case):
        if fam is not Family.S0 and t == excluded_parameter(fam, g):
            continue
        S = family_instance(fam, g, t)
        hol = holonomy_algebra(g, S)
        assert hol.dimension == HOLONOMY_DIMS[fam], fam
        assert hol.dimension + 3 == ISOMETRY_DIMS[fam]
        assert hol.skew


# -- transvection algebras ----------------------------------------------------------


@pytest.mark.parametrize("case", list(MetricCase))
@given(seed=st.integers(0, 5000), t=ts)
def test_transvection_algebras_are_reductive_lie_algebras(case, seed, t):
    g = DiagonalMetric(*sample_params(case, seed, 1)[0])
    for fam in families_for(case):
        if fam is not Family.S0 and t == excluded_parameter(fam, g):
            continue
        S = family_instance(fam, g, t)
        P = build_transvection_algebra(g, S)
        assert check_jacobi(P).ok, fam
        assert check_reductive(P).ok, fam
        assert check_torsion_reconstruction(P, g, S).ok, fam


def test_slambda_transvection_brackets():
    lam, mu, t = F(-2), F(1), F(5)
    g = DiagonalMetric(lam, mu, mu)
    P = build_transvection_algebra(g, catalog_family(Family.SLAMBDA, g, t))
    # basis (U, X0, X1, X2) with U = R~(X1,X2) / (2(lam + 2mu - t)/mu)
    assert P.names == ("U0", "X0", "X1", "X2")
    assert P.m_part(P.table[1][2]) == [0, 0, (t - lam) / mu]
    h_gen = holonomy_algebra(g, catalog_family(Family.SLAMBDA, g, t)).basis[0]
    scale = h_gen[2][1] / 2  # U = 2(theta1 x X2 - theta2 x X1)
    assert P.table[2][3] == [-(lam + 2 * mu - t) / mu / scale, F(-2), 0, 0]


def test_smu_transvection_brackets():
    lam, mu, nu, t = F(-3), F(2), F(3), F(1)
    g = DiagonalMetric(lam, mu, nu)
    S = catalog_family(Family.SMU, g, t)
    h_gen = holonomy_algebra(g, S).basis[0]
    P = build_transvection_algebra(g, S)
    scale = h_gen[0][2] / 2  # U = 2(theta2 x X0 + theta0 x X2)
    assert P.table[3][1] == [-(2 * nu - mu - t) / nu / scale, 0, F(2), 0]


def test_s0_transvection_is_su11():
    g = DiagonalMetric(1, 2, 4)
    P = build_transvection_algebra(g, catalog_family(Family.S0, g))
    assert P.h == ()
    assert P.table[0][1] == [0, 0, 2] and P.table[1][2] == [-2, 0, 0] and P.table[2][0] == [0, 2, 0]


def test_corrupted_table_fails_jacobi():
    g = DiagonalMetric(-2, 1, 1)
    P = build_transvection_algebra(g, catalog_family(Family.SLAMBDA, g, 3))
    assert check_jacobi(P).ok
    entry = list(P.table[0][2])
    entry[3] = -entry[3]  # X2 coefficient of [U, X1]
    res = check_jacobi(P.with_table_entry(0, 2, entry))
    assert not res.ok and res.failures


def test_su11_and_so22_pass_jacobi():
    assert check_jacobi(su11_plus_center()).ok
    assert check_jacobi(so22()).ok


@given(positive_rationals(), ts)
def test_hatted_bases(m, t):
    g = DiagonalMetric(-2 * m, m, m)
    if t != excluded_parameter(Family.SLAMBDA, g):
        assert hatted_basis_check(Family.SLAMBDA, g, t).ok
        assert displayed_decomposition_check(Family.SLAMBDA, g, t).ok
    g = DiagonalMetric(-m, 3 * m, m)
    if t != excluded_parameter(Family.SMU, g):
        assert hatted_basis_check(Family.SMU, g, t).ok
        assert displayed_decomposition_check(Family.SMU, g, t).ok


# -- symmetric-space lemma ----------------------------------------------------------


@pytest.mark.parametrize("case_id", LEMMA_CASES)
def test_lemma_cases(case_id):
    res = verify_decomposition_case(case_id, c=F(1, 3))
    assert res.ok, res.failures


def test_case_iv_has_no_curvature_generated_isotropy():
    res = verify_decomposition_case("iv")
    assert res.ok
    assert res.details["curvature_generated_dim"] == 0 and res.details["h_dim"] == 2


@pytest.mark.parametrize(
    "case_id, params",
    [
        ("general", {"c0": 2, "c1": 3, "c2": 4}),
        ("general", {"c0": -1, "c1": 5, "c2": 12}),
        ("timelike-gen", {"c0": 5, "c1": 3}),
        ("spacelike-gen", {"c0": 3, "c1": 5}),
        ("null-plus", {}),
        ("null-minus", {}),
        ("two-dim", {}),
    ],
)
def test_lemma_proof_relations(case_id, params):
    res = verify_decomposition_case(case_id, **params)
    assert res.ok, res.failures


def test_lemma_rejects_irrational_radical():
    with pytest.raises(ValueError, match="perfect square"):
        verify_decomposition_case("general", c0=1, c1=1, c2=1)


@settings(max_examples=10)
@given(st.fractions(-5, 5, max_denominator=6))
def test_null_swap_is_an_isometric_isomorphism(c):
    assert null_swap_certificate(c).ok


@pytest.mark.parametrize("fam", [Family.SVOL, Family.SLAMBDA, Family.SMU,
                                 Family.SNULL_MINUS, Family.SNULL_PLUS])
@settings(max_examples=10)
@given(m=positive_rationals(), t=st.fractions(1, 9, max_denominator=5))
def test_table2_certificates(fam, m, t):
    g = DiagonalMetric(-m, m, m)
    if t == excluded_parameter(fam, g):
        return
    assert table2_certificate(fam, g, t).ok
    assert not table2_certificate(fam, g, t, table2_c_value(fam, g, t) + 1).ok


def test_table2_c_values():
    g = DiagonalMetric(-2, 2, 2)
    assert table2_c_value(Family.SVOL, g, 4) == F(1, 2)
    assert table2_c_value(Family.SNULL_MINUS, g, 1) == F(1, 2)
    assert table2_c_value(Family.SNULL_PLUS, g, 1) == F(-1, 2)


def test_lemma_decomposition_rejects_unknown_case():
    with pytest.raises(ValueError):
        lemma_decomposition("vi")
