import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import positive_rationals
from homstruct.exact import MetricCase, sample_params
from homstruct.lie import DiagonalMetric
from homstruct.reductive import canonical_curvature
from homstruct.structures import (
    CERTIFIED,
    COEFF_NAMES,
    ExcludedParameterWarning,
    Family,
    build_as_system,
    canonical_tensors,
    catalog_family,
    catalog_violations,
    excluded_parameter,
    exchange_certificate,
    families_for,
    linear_stage,
    match_components,
    match_point,
    metricity_residual,
    null_flip_certificate,
    sample_component,
    solve_structures,
    structure_tensor,
)

CASES = list(MetricCase)


def metric_of(case, seed):
    return DiagonalMetric(*sample_params(case, seed, 1)[0])


def coeffs(**named):
    return tuple(F(named.get(n, 0)) for n in COEFF_NAMES)


def test_structure_tensor_is_skew_in_last_slots():
    S = structure_tensor([F(k + 1) for k in range(9)])
    for i in range(3):
        for j in range(3):
            for k in range(3):
                assert S[i, j, k] == -S[i, k, j]


def test_wedge_ansatz_is_metric():
    g = DiagonalMetric(-3, 2, 5)
    assert metricity_residual(g, [F(k - 4) for k in range(9)]).is_zero()


# -- linear stage ----------------------------------------------------------------


def test_linear_stage_pins_s0_on_generic_example():
    g = DiagonalMetric(1, 2, 4)
    sub = linear_stage(build_as_system(g))
    assert sub.dimension == 0
    assert sub.base == coeffs(rho2=-3, sigma0=7, tau1=1)
    assert sub.base == catalog_family(Family.S0, g).coeffs


def test_linear_stage_vacuous_on_symmetric_unit_metric():
    sys = build_as_system(DiagonalMetric(-1, 1, 1))
    assert linear_stage(sys).dimension == 9


# -- branch solve ----------------------------------------------------------------


def test_timelike_example_has_single_line():
    g = DiagonalMetric(-2, 1, 1)
    (comp,) = solve_structures(g)
    assert comp.status == CERTIFIED and comp.dimension == 1
    assert comp.contains_point(coeffs(rho2=2, tau1=2, sigma0=F(5, 3)))
    assert not comp.contains_point(coeffs(rho2=2, tau1=2, sigma1=1))


def test_generic_example_is_single_point():
    (comp,) = solve_structures(DiagonalMetric(1, 2, 4))
    assert comp.dimension == 0
    assert comp.subspace.base == coeffs(rho2=-3, sigma0=7, tau1=1)


@pytest.fixture(scope="module")
def symmetric_solution():
    g = DiagonalMetric(-1, 1, 1)
    return g, build_as_system(g), solve_structures(g)


def test_symmetric_components_cover_catalog(symmetric_solution):
    g, sys, comps = symmetric_solution
    for fam in families_for(MetricCase.SYMMETRIC):
        for t in (F(2), F(3), F(-2, 7)):
            S = catalog_family(fam, g, t) if fam is not Family.S0 else catalog_family(fam, g)
            assert any(c.contains_point(S.coeffs) for c in comps), fam
    assert all(sys.satisfied_by(c.subspace.base) for c in comps if c.status == CERTIFIED)


def test_symmetric_points_all_solve_and_match(symmetric_solution):
    g, sys, comps = symmetric_solution
    rng = random.Random(5)
    for comp in comps:
        for _ in range(3):
            p = sample_component(comp, rng)
            assert p is not None
            assert sys.satisfied_by(p)
            assert match_point(p, g).ok


def test_component_output_independent_of_run(symmetric_solution):
    g, _, comps = symmetric_solution
    again = solve_structures(g)
    assert [c.subspace for c in again] == [c.subspace for c in comps]


@pytest.mark.parametrize("case", CASES)
def test_match_components_pass(case):
    g = metric_of(case, 17)
    sys = build_as_system(g)
    report = match_components(solve_structures(g), g, system=sys)
    assert report.ok, report.failures
    assert not report.missing


def test_match_detects_a_missing_family():
    g = DiagonalMetric(-2, 1, 1)
    report = match_components([], g)
    assert not report.ok
    assert report.missing == [Family.S0, Family.SLAMBDA]


# -- catalog ------------------------------------------------------------------------


@pytest.mark.parametrize("case", CASES)
@settings(max_examples=16)
@given(seed=st.integers(0, 10_000), t=st.fractions(-20, 20, max_denominator=12))
def test_catalog_solves_the_system(case, seed, t):
    g = metric_of(case, seed)
    sys = build_as_system(g)
    for fam in families_for(case):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExcludedParameterWarning)
            S = catalog_family(fam, g, t) if fam is not Family.S0 else catalog_family(fam, g)
        assert sys.satisfied_by(S.coeffs), fam
        _, dR, dS = canonical_tensors(g, S.coeffs)
        assert dR.is_zero() and dS.is_zero()


def test_catalog_rejects_wrong_case():
    with pytest.raises(ValueError):
        catalog_family(Family.SVOL, DiagonalMetric(-2, 1, 1), 1)
    with pytest.raises(ValueError):
        catalog_family(Family.SLAMBDA, DiagonalMetric(-2, 1, 1))


def test_excluded_parameter_warns():
    with pytest.warns(ExcludedParameterWarning):
        catalog_family(Family.SLAMBDA, DiagonalMetric(-2, 1, 1), 0)


@pytest.mark.parametrize(
    "family, metric",
    [
        (Family.SLAMBDA, (-2, 1, 1)),
        (Family.SMU, (-1, 4, 1)),
        (Family.SNU, (-1, 1, 4)),
    ],
)
def test_degenerations_to_s0(family, metric):
    g = DiagonalMetric(*metric)
    t = excluded_parameter(family, g)
    with pytest.warns(ExcludedParameterWarning):
        S = catalog_family(family, g, t)
    assert S.coeffs == catalog_family(Family.S0, g).coeffs


def test_svol_zero_is_zero_tensor():
    assert structure_tensor(catalog_family(Family.SVOL, DiagonalMetric(-1, 1, 1), 0).coeffs).is_zero()


# -- canonical connections -------------------------------------------------------------


@given(positive_rationals(), positive_rationals(), st.fractions(-10, 10, max_denominator=9))
def test_slambda_canonical_connection(m, lam_abs, t):
    g = DiagonalMetric(-lam_abs, m, m)
    lam, mu = g.lam, g.mu
    S = catalog_family(Family.SLAMBDA, g, t) if t != lam + 2 * mu else None
    if S is None:
        return
    conn, _, _ = canonical_tensors(g, S.coeffs)
    assert conn.form(1, 2) == [-(lam + 2 * mu - t) / mu, 0, 0]
    R = canonical_curvature(g, S)
    k = 2 * (lam + 2 * mu - t) / mu
    # R(X1,X2) = k (theta1 x X2 - theta2 x X1)
    assert R.endomorphism(1, 2) == [[0, 0, 0], [0, 0, -k], [0, k, 0]]


@given(positive_rationals(), positive_rationals(), st.fractions(-10, 10, max_denominator=9))
def test_smu_canonical_connection(m, mu, t):
    g = DiagonalMetric(-m, mu, m)
    nu = g.nu
    if t == 2 * nu - mu or mu == m:
        return
    S = catalog_family(Family.SMU, g, t)
    conn, _, _ = canonical_tensors(g, S.coeffs)
    assert conn.form(0, 2) == [0, -(2 * nu - mu - t) / nu, 0]
    k = 2 * (2 * nu - mu - t) / nu
    # R(X2,X0) = k (theta2 x X0 + theta0 x X2)
    assert canonical_curvature(g, S).endomorphism(2, 0) == [[0, 0, k], [0, 0, 0], [k, 0, 0]]


@pytest.mark.parametrize("case", CASES)
def test_s0_canonical_connection_is_flat(case):
    g = metric_of(case, 3)
    S = catalog_family(Family.S0, g)
    conn, _, _ = canonical_tensors(g, S.coeffs)
    assert conn.gamma.is_zero()
    assert canonical_curvature(g, S).r.is_zero()


@given(positive_rationals(), st.fractions(0, 10, max_denominator=9))
def test_svol_canonical_curvature(m, t):
    g = DiagonalMetric(-m, m, m)
    if t == m:
        return
    S = catalog_family(Family.SVOL, g, t)
    R = canonical_curvature(g, S)
    raised = -(m - t) * (m + t) / m**2
    assert R.component(0, 1, 0, 1) == R.component(0, 2, 0, 2) == R.component(1, 2, 1, 2) == raised
    # the lowered sectional value g(R(X1,X2)X2, X1)
    assert R.lowered(g)[1, 2, 2, 1] == -(m - t) * (m + t) / m


# -- certificates -----------------------------------------------------------------------


@given(positive_rationals(), st.fractions(-10, 10, max_denominator=9).filter(lambda x: x != 0))
def test_null_flip_certificate(m, t):
    assert null_flip_certificate(DiagonalMetric(-m, m, m), t).ok


@given(positive_rationals(), positive_rationals(), st.fractions(-10, 10, max_denominator=9))
def test_exchange_certificate(m, mu, t):
    if t == 2 * m - mu:
        return
    assert exchange_certificate(DiagonalMetric(-m, mu, m), t).ok


# -- corrupted catalog diagnostics ---------------------------------------------------------


def test_catalog_violations_empty_for_correct_catalog():
    g = DiagonalMetric(-2, 1, 1)
    assert catalog_violations(Family.SLAMBDA, g, 3, solve_structures(g)) == []


def test_catalog_violations_names_corrupted_coefficient(monkeypatch):
    import homstruct.structures as st_mod

    real = st_mod._family_coeffs

    def corrupted(name, g, t):
        c = real(name, g, t)
        if name is Family.SLAMBDA:
            c[7] = c[7] + 1  # tau1
        return c

    g = DiagonalMetric(-2, 1, 1)
    comps = solve_structures(g)
    monkeypatch.setattr(st_mod, "_family_coeffs", corrupted)
    assert catalog_violations(Family.SLAMBDA, g, 3, comps) == [("tau1", F(3), F(2))]
