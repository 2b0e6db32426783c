"""Homogeneous structures S on (SU(1,1), g): the catalog of families, the
Ambrose-Singer system nabla~R = nabla~S = 0 for constant coefficients, an
exact branch-and-factor solver and the matching of its components against
the catalog.
"""

from __future__ import annotations

import enum
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    AffineSubspace,
    Infeasible,
    MetricCase,
    MultiPoly,
    NotFactorable,
    Tensor,
    poly_factor_affine,
    random_rational,
    rational_sqrt,
    rref_solve,
)
from .lie import (
    SU11,
    DiagonalMetric,
    canonical_connection,
    covariant_derivative,
    curvature,
    levi_civita,
)

COEFF_NAMES = ("rho0", "rho1", "rho2", "sigma0", "sigma1", "sigma2", "tau0", "tau1", "tau2")
# (i, j) slots of the wedge carried by each block: rho -> (0,1), sigma -> (1,2), tau -> (2,0)
_WEDGE_SLOTS = ((0, 1), (1, 2), (2, 0))


class Family(str, enum.Enum):
    S0 = "S0"
    SLAMBDA = "Slambda"
    SMU = "Smu"
    SNU = "Snu"
    SVOL = "Svol"
    SNULL_MINUS = "SnullMinus"
    SNULL_PLUS = "SnullPlus"
    RAW = "Raw"


FAMILY_CASES = {
    Family.S0: set(MetricCase),
    Family.SLAMBDA: {MetricCase.TIMELIKE, MetricCase.SYMMETRIC},
    Family.SMU: {MetricCase.SPACELIKE_NU, MetricCase.SYMMETRIC},
    Family.SNU: {MetricCase.SPACELIKE_MU, MetricCase.SYMMETRIC},
    Family.SVOL: {MetricCase.SYMMETRIC},
    Family.SNULL_MINUS: {MetricCase.SYMMETRIC},
    Family.SNULL_PLUS: {MetricCase.SYMMETRIC},
}

ONE_PARAMETER = (
    Family.SLAMBDA,
    Family.SMU,
    Family.SNU,
    Family.SVOL,
    Family.SNULL_MINUS,
    Family.SNULL_PLUS,
)


def families_for(case: MetricCase) -> list[Family]:
    return [f for f in Family if f is not Family.RAW and case in FAMILY_CASES[f]]


def structure_tensor(coeffs: Sequence) -> Tensor:
    """(0,3) tensor S(X_i, X_j, X_k) of rho x th0^th1 + sigma x th1^th2 + tau x th2^th0."""
    if len(coeffs) != 9:
        raise ValueError("nine coefficients expected")
    zero = coeffs[0] - coeffs[0]
    data = {}
    for block, (a, b) in enumerate(_WEDGE_SLOTS):
        for i in range(3):
            v = coeffs[3 * block + i]
            data[(i, a, b)] = v
            data[(i, b, a)] = -v
    return Tensor.from_function("ddd", lambda i, j, k: data.get((i, j, k), zero))


@dataclass(frozen=True)
class HomogeneousStructure:
    coeffs: tuple
    family: Family = Family.RAW
    t: Fraction | None = None

    def tensor(self) -> Tensor:
        return structure_tensor(self.coeffs)

    def named(self) -> dict:
        return dict(zip(COEFF_NAMES, self.coeffs))


def _family_coeffs(name: Family, g: DiagonalMetric, t: Fraction) -> list:
    lam, mu, nu = g.diag
    z = Fraction(0)
    c = [z] * 9
    if name is Family.S0:
        c[2], c[3], c[7] = -(lam - mu + nu), lam + mu + nu, -(lam + mu - nu)
    elif name is Family.SLAMBDA:
        c[2], c[3], c[7] = -lam, t, -lam
    elif name is Family.SMU:
        c[2], c[3], c[7] = mu, mu, t
    elif name is Family.SNU:
        c[2], c[3], c[7] = t, nu, nu
    elif name is Family.SVOL:
        c[2], c[3], c[7] = t, t, t
    elif name in (Family.SNULL_MINUS, Family.SNULL_PLUS):
        sign = 1 if name is Family.SNULL_MINUS else -1
        c[2] = mu
        c[3] = mu + sign * t
        c[4] = t
        c[6] = -t
        c[7] = mu - sign * t
    else:
        raise ValueError(f"no closed form for {name}")
    return c


def excluded_parameter(name: Family, g: DiagonalMetric) -> Fraction | None:
    """Family parameter at which the structure collapses (or is disallowed)."""
    lam, mu, nu = g.diag
    return {
        Family.SLAMBDA: lam + 2 * mu,
        Family.SMU: 2 * nu - mu,
        Family.SNU: 2 * mu - nu,
        Family.SVOL: mu,
        Family.SNULL_MINUS: Fraction(0),
        Family.SNULL_PLUS: Fraction(0),
    }.get(name)


class ExcludedParameterWarning(UserWarning):
    pass


def catalog_family(name, g: DiagonalMetric, t=None) -> HomogeneousStructure:
    name = Family(name)
    if name is Family.RAW:
        raise ValueError("Raw is not a catalog family")
    case = MetricCase.classify(*g.diag)
    if case not in FAMILY_CASES[name]:
        raise ValueError(f"{name.value} is not defined for the {case.value} metric case")
    if name is Family.S0:
        return HomogeneousStructure(tuple(_family_coeffs(name, g, Fraction(0))), name, None)
    if t is None:
        raise ValueError(f"{name.value} needs a parameter t")
    t = Fraction(t)
    if t == excluded_parameter(name, g):
        warnings.warn(
            f"{name.value}(t) at the excluded value t = {t}", ExcludedParameterWarning, stacklevel=2
        )
    return HomogeneousStructure(tuple(_family_coeffs(name, g, t)), name, t)


def family_subspace(name, g: DiagonalMetric) -> AffineSubspace:
    """The catalog family as an affine subset of Q^9 (a point for S0)."""
    name = Family(name)
    base = _family_coeffs(name, g, Fraction(0))
    if name is Family.S0:
        return AffineSubspace.make(base, [])
    one = _family_coeffs(name, g, Fraction(1))
    return AffineSubspace.make(base, [[a - b for a, b in zip(one, base)]])


# --------------------------------------------------------------------------
# The Ambrose-Singer system


def _dedupe(polys, variables=COEFF_NAMES):
    seen, out = set(), []
    for p in polys:
        if not isinstance(p, MultiPoly):
            p = MultiPoly.constant(variables, p)
        if p.is_zero():
            continue
        _, q = p.normalized()
        key = frozenset(q.terms.items())
        if key not in seen:
            seen.add(key)
            out.append(q)
    return out


@dataclass
class ASSystem:
    metric: DiagonalMetric
    linear_rows: list
    linear_rhs: list
    quadratics: list
    variables: tuple = COEFF_NAMES

    def residuals(self, coeffs: Sequence) -> list:
        lin = [
            sum((a * x for a, x in zip(row, coeffs)), Fraction(0)) - b
            for row, b in zip(self.linear_rows, self.linear_rhs)
        ]
        return lin + [q.evaluate(coeffs) for q in self.quadratics]

    def satisfied_by(self, coeffs: Sequence) -> bool:
        return all(r == 0 for r in self.residuals(coeffs))


def canonical_tensors(g: DiagonalMetric, coeffs: Sequence):
    """(nabla~, nabla~R, nabla~S) for the canonical connection of ``coeffs``."""
    S = structure_tensor(coeffs)
    lc = levi_civita(g)
    conn = canonical_connection(lc, S, g)
    R = curvature(lc, SU11).r
    return conn, covariant_derivative(conn, R), covariant_derivative(conn, S)


def metricity_residual(g: DiagonalMetric, coeffs: Sequence) -> Tensor:
    conn = canonical_connection(levi_civita(g), structure_tensor(coeffs), g)
    return covariant_derivative(conn, g.tensor())


def build_as_system(g: DiagonalMetric) -> ASSystem:
    unknowns = [MultiPoly.var(COEFF_NAMES, v) for v in COEFF_NAMES]
    _, dR, dS = canonical_tensors(g, unknowns)
    if not metricity_residual(g, unknowns).is_zero():
        raise AssertionError("wedge ansatz must make nabla~ metric")
    rows, rhs, seen = [], [], set()
    for p in _dedupe(dR.entries()):
        if p.degree() > 1:
            raise AssertionError("nabla~R must be affine in S")
        key = (tuple(p.linear_coeffs()), p.constant_term())
        if key not in seen:
            seen.add(key)
            rows.append(p.linear_coeffs())
            rhs.append(-p.constant_term())
    quads = _dedupe(dS.entries())
    if any(q.degree() > 2 for q in quads):
        raise AssertionError("nabla~S must have degree <= 2")
    return ASSystem(g, rows, rhs, quads)


def linear_stage(sys: ASSystem) -> AffineSubspace:
    rows = sys.linear_rows or [[Fraction(0)] * 9]
    rhs = sys.linear_rhs or [Fraction(0)]
    try:
        return rref_solve(rows, rhs)
    except Infeasible as exc:  # pragma: no cover - S0 always solves the system
        raise RuntimeError("linear stage infeasible: S0 must be a solution") from exc


# --------------------------------------------------------------------------
# Branch and factor


CERTIFIED = "CERTIFIED"
SAMPLED = "SAMPLED"


def _pivots(sub: AffineSubspace) -> list[int]:
    return [next(k for k, x in enumerate(d) if x != 0) for d in sub.directions]


def parameter_names(sub: AffineSubspace) -> list[str]:
    """Free coordinates of a canonical affine set (its direction pivots)."""
    return [COEFF_NAMES[p] for p in _pivots(sub)]


def parametrization(sub: AffineSubspace) -> list[MultiPoly]:
    """Each of the nine coefficients as an affine polynomial in the free ones."""
    names = parameter_names(sub)
    return [
        MultiPoly.affine(names, [d[k] for d in sub.directions], sub.base[k]) for k in range(9)
    ]


@dataclass
class SolutionComponent:
    subspace: AffineSubspace
    status: str
    trace: list = field(default_factory=list)
    residual: list = field(default_factory=list)  # polynomials in parameter_names

    @property
    def params(self) -> list[str]:
        return parameter_names(self.subspace)

    @property
    def dimension(self) -> int:
        return self.subspace.dimension

    def point(self, values: Sequence) -> tuple:
        return self.subspace.point(values)

    def contains_family(self, fam: AffineSubspace) -> bool:
        if not self.subspace.contains(fam):
            return False
        if not self.residual:
            return True
        tnames = [f"t{a}" for a in range(max(fam.dimension, 1))]
        images = [
            MultiPoly.affine(tnames, [d[k] for d in fam.directions], fam.base[k]) for k in range(9)
        ]
        params = [images[p] for p in _pivots(self.subspace)]
        return all(q.substitute(tnames, params).is_zero() for q in self.residual)

    def contains_point(self, x: Sequence) -> bool:
        if not self.subspace.contains_point(x):
            return False
        vals = [x[p] for p in _pivots(self.subspace)]
        return all(q.evaluate(vals) == 0 for q in self.residual)

    def describe(self) -> str:
        parts = []
        for name, poly in zip(COEFF_NAMES, parametrization(self.subspace)):
            parts.append(f"{name} = {poly!r}")
        text = ", ".join(parts)
        if self.residual:
            text += " subject to " + "; ".join(f"{q!r} = 0" for q in self.residual)
        return text


class RecursionLimit(RuntimeError):
    pass


def _restrict(sub: AffineSubspace, poly: MultiPoly) -> AffineSubspace:
    """Intersect ``sub`` with the zero set of an affine polynomial in its parameters."""
    coeffs = poly.linear_coeffs()
    return sub.compose(rref_solve([coeffs], [-poly.constant_term()]))


def _factor_preference(p: MultiPoly):
    try:
        const, factors = poly_factor_affine(p)
    except NotFactorable:
        return None
    return const, factors


def _simple_forms(names: Sequence[str], constants: Sequence[Fraction]) -> list[MultiPoly]:
    """x, x - c and x +- y over the given variables."""
    forms = []
    for a, x in enumerate(names):
        vx = MultiPoly.var(names, x)
        forms.append(vx)
        forms.extend(vx - c for c in constants if c != 0)
        for y in names[a + 1:]:
            vy = MultiPoly.var(names, y)
            forms.extend((vx + vy, vx - vy))
    return forms


class _Span:
    """Linear span of polynomials, for exact membership tests."""

    def __init__(self, polys: Sequence[MultiPoly]):
        self.rows: list[tuple[tuple, dict]] = []
        for p in polys:
            v = self.reduce(dict(p.terms))
            if v:
                piv = max(v, key=lambda e: (sum(e), e))
                inv = 1 / v[piv]
                row = {e: c * inv for e, c in v.items()}
                # keep rows fully reduced against each other
                self.rows = [
                    (pv, self._eliminate(r, row, piv)) for pv, r in self.rows
                ]
                self.rows.append((piv, row))

    @staticmethod
    def _eliminate(target: dict, row: dict, piv) -> dict:
        f = target.get(piv, 0)
        if f == 0:
            return target
        out = dict(target)
        for e, c in row.items():
            val = out.get(e, 0) - f * c
            if val == 0:
                out.pop(e, None)
            else:
                out[e] = val
        return out

    def reduce(self, v: dict) -> dict:
        for piv, row in self.rows:
            v = self._eliminate(v, row, piv)
        return v

    def contains(self, p: MultiPoly) -> bool:
        return not self.reduce(dict(p.terms))


def _span_factorization(eqs: Sequence[MultiPoly], names: Sequence[str], constants):
    """Search the linear span of ``eqs`` for a product of two simple affine
    forms; returns the factors or None."""
    span = _Span(eqs)
    forms = _simple_forms(names, constants)
    for i, f in enumerate(forms):
        for h in forms[i:]:
            prod = f * h
            if prod.degree() == 2 and span.contains(prod):
                return [f] if f == h else [f, h]
    return None


def branch_solve(sys: ASSystem, sub: AffineSubspace, max_depth: int = 32) -> list[SolutionComponent]:
    """Exact case split of the quadratic stage over the affine set ``sub``.

    Components on which every equation vanishes are CERTIFIED; when no
    factorable consequence is found the residual equations are kept and the
    component is marked SAMPLED.
    """
    results: dict[AffineSubspace, SolutionComponent] = {}
    visited: set[AffineSubspace] = set()
    constants = sorted({abs(x) for x in sys.metric.diag} | {abs(x) for x in family_subspace(Family.S0, sys.metric).base} - {0})

    def recurse(state: AffineSubspace, trace: list, depth: int):
        if depth > max_depth:
            raise RecursionLimit(f"branch depth exceeded at {trace}")
        if state in visited:
            return
        visited.add(state)
        names = parameter_names(state)
        images = parametrization(state)
        eqs = _dedupe((q.substitute(names, images) for q in sys.quadratics), names)
        if not eqs:
            results.setdefault(state, SolutionComponent(state, CERTIFIED, list(trace)))
            return
        for q in eqs:
            if q.degree() == 0:
                return  # nonzero constant: empty branch
        affine = [q for q in eqs if q.degree() == 1]
        if affine:
            q = affine[0]
            recurse(_restrict(state, q), trace + [f"{q!r} = 0"], depth + 1)
            return
        candidates = []
        for idx, q in enumerate(eqs):
            fac = _factor_preference(q)
            if fac is not None:
                distinct = {frozenset(f.terms.items()): f for f in fac[1]}
                candidates.append((len(distinct), idx, list(distinct.values())))
        if candidates:
            _, _, factors = min(candidates, key=lambda c: (c[0], c[1]))
        else:
            factors = _span_factorization(eqs, names, constants)
        if factors is None:
            results.setdefault(state, SolutionComponent(state, SAMPLED, list(trace), eqs))
            return
        for f in factors:
            recurse(_restrict(state, f), trace + [f"{f!r} = 0"], depth + 1)

    recurse(sub, [], 0)
    comps = sorted(
        results.values(),
        key=lambda c: (c.status, -c.dimension, c.subspace.base, c.subspace.directions),
    )
    certified = [c for c in comps if c.status == CERTIFIED]
    kept = []
    for c in comps:
        covered = any(
            o is not c and o.subspace.contains(c.subspace) for o in certified
        )
        if not covered:
            kept.append(c)
    return kept


def solve_structures(g: DiagonalMetric) -> list[SolutionComponent]:
    sys = build_as_system(g)
    return branch_solve(sys, linear_stage(sys))


# --------------------------------------------------------------------------
# Sampling points of components defined by irreducible quadrics


def sample_component(
    comp: SolutionComponent, rng: random.Random, attempts: int = 400, num: int = 20, den: int = 6
) -> tuple | None:
    """An exact rational point of a component, or None after ``attempts``.

    Free parameters are fixed at random one at a time; whenever an equation
    is left with a single unknown it is solved (linearly, or by a rational
    root of a quadratic).
    """
    names = comp.params
    if not comp.residual:
        return comp.point([random_rational(rng, num, den) for _ in names])
    for _ in range(attempts):
        values: dict[str, Fraction] = {}
        ok = True
        while len(values) < len(names) and ok:
            progressed = False
            for q in comp.residual:
                sub = _partial(q, names, values)
                unknown = sub.used_variables()
                if len(unknown) == 1 and not sub.is_zero():
                    (var,) = unknown
                    root = _rational_root(sub, var, rng)
                    if root is None:
                        ok = False
                        break
                    values[var] = root
                    progressed = True
                    break
            if not ok:
                break
            if not progressed:
                free = [n for n in names if n not in values]
                values[rng.choice(free)] = random_rational(rng, num, den)
        if not ok:
            continue
        vals = [values[n] for n in names]
        if all(q.evaluate(vals) == 0 for q in comp.residual):
            return comp.point(vals)
    return None


def _partial(q: MultiPoly, names, values) -> MultiPoly:
    images = [
        MultiPoly.constant(names, values[n]) if n in values else MultiPoly.var(names, n)
        for n in names
    ]
    return q.substitute(names, images)


def _rational_root(p: MultiPoly, var: str, rng: random.Random):
    k = p.variables.index(var)
    coeff = {0: Fraction(0), 1: Fraction(0), 2: Fraction(0)}
    for e, c in p.terms.items():
        coeff[e[k]] += c
    a, b, c = coeff[2], coeff[1], coeff[0]
    if a == 0:
        return -c / b if b != 0 else None
    disc = b * b - 4 * a * c
    r = rational_sqrt(disc)
    if r is None:
        return None
    return rng.choice([(-b + r) / (2 * a), (-b - r) / (2 * a)])


# --------------------------------------------------------------------------
# Frame changes and isomorphism certificates


def frame_pullback(coeffs: Sequence, A: Sequence[Sequence]) -> list:
    """Coefficients of A*S, (A*S)(X,Y,Z) = S(AX, AY, AZ); column j of A is
    the image of X_j."""
    S = structure_tensor(coeffs)
    zero = coeffs[0] - coeffs[0]
    support = [(idx, v) for idx, v in S.items() if v != 0]
    cols = [[(a, A[a][i]) for a in range(3) if A[a][i] != 0] for i in range(3)]

    def entry(i, j, k):
        total = zero
        for (a, b, c), v in support:
            x = next((w for r, w in cols[i] if r == a), None)
            y = next((w for r, w in cols[j] if r == b), None)
            z = next((w for r, w in cols[k] if r == c), None)
            if x is not None and y is not None and z is not None:
                total = total + x * y * z * v
        return total

    out = []
    for a, b in _WEDGE_SLOTS:
        out.extend(entry(i, a, b) for i in range(3))
    return out


def is_frame_isometry(A: Sequence[Sequence], g: DiagonalMetric, g_target: DiagonalMetric | None = None) -> bool:
    """A^T G' A = G, i.e. A maps (frame, g) isometrically onto (frame, g')."""
    gt = g if g_target is None else g_target
    return all(
        sum((A[a][i] * gt[a] * A[a][j] for a in range(3)), Fraction(0)) == (g[i] if i == j else 0)
        for i in range(3)
        for j in range(3)
    )


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), Fraction(0)) for j in range(3)] for i in range(3)]


def _inverse_isometry(A, g: DiagonalMetric):
    """A^{-1} = G^{-1} A^T G for an isometry A."""
    return [[A[j][i] * g[j] / g[i] for j in range(3)] for i in range(3)]


def certify_frame_map(
    target: HomogeneousStructure,
    source: HomogeneousStructure,
    A: Sequence[Sequence],
    g: DiagonalMetric,
    label: str = "",
    g_target: DiagonalMetric | None = None,
):
    """Isomorphism between the transvection algebras of ``source`` (a catalog
    structure on g) and ``target`` (on ``g_target``, default g) whose m-part
    is the frame map ``A``."""
    from .reductive import CheckResult, build_transvection_algebra, induced_certificate, verify_isomorphism

    gt = g if g_target is None else g_target
    res = CheckResult(f"certificate {label}".strip(), True)
    if not is_frame_isometry(A, g, gt):
        res.fail("frame map is not an isometry")
        return res
    pulled = frame_pullback(target.coeffs, A)
    if any(x != y for x, y in zip(pulled, source.coeffs)):
        res.fail("pullback of the structure does not match")
        return res
    src = build_transvection_algebra(g, source)
    tgt = build_transvection_algebra(gt, target)
    if len(src.h) != len(tgt.h):
        res.fail("holonomy dimensions differ")
        return res
    cert = induced_certificate(src, tgt, A, label)
    sub = verify_isomorphism(cert)
    res.details["holonomy_dim"] = len(src.h)
    if not sub.ok:
        res.fail(sub.failures[0])
    return res


EXCHANGE = [[1, 0, 0], [0, 0, 1], [0, -1, 0]]  # X0 -> X0, X1 -> -X2, X2 -> X1
NULL_FLIP = [[1, 0, 0], [0, -1, 0], [0, 0, -1]]  # X0 -> X0, X1 -> -X1, X2 -> -X2


def _frac_matrix(M):
    return [[Fraction(x) for x in row] for row in M]


def _as_rational(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    return x.rational_value()


@dataclass
class PointMatch:
    coeffs: tuple
    kind: str  # "family" or a proof case label
    family: Family
    t: object
    ok: bool
    detail: str = ""


def _family_membership(coeffs, g: DiagonalMetric):
    case = MetricCase.classify(*g.diag)
    for fam in families_for(case):
        sub = family_subspace(fam, g)
        if sub.contains_point(coeffs):
            if fam is Family.S0:
                return fam, None
            d = sub.directions[0]
            k = next(i for i, x in enumerate(d) if x != 0)
            # catalog coefficient of that slot is base + t * (dir scaled)
            one = _family_coeffs(fam, g, Fraction(1))
            zero = _family_coeffs(fam, g, Fraction(0))
            t = (coeffs[k] - zero[k]) / (one[k] - zero[k])
            return fam, t
    return None, None


def _case5_target(coeffs, g: DiagonalMetric, tower: tuple):
    """Catalog structure and frame map for a structure in the (t, k) cone
    rho2 = mu, rho0 = rho1 = tau2 = sigma2 = 0, sigma1 = -tau0 = t."""
    from .exact import lift, sqrt_rational

    mu = g.mu
    t = coeffs[4]
    k = t / (mu - coeffs[7])
    k2 = _as_rational(k * k)
    tp = _as_rational(mu + t * (k - 1 / k))
    one = lift(Fraction(1), tower)
    zero = one - one
    if k2 == 1:
        fam = Family.SNULL_MINUS if _as_rational(k) == 1 else Family.SNULL_PLUS
        tt = t
        A = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
        return fam, tt, A, tower
    if k2 > 1:
        s, tower = sqrt_rational(k2 - 1, tower)
        A = [[k / s, -1 / s, zero], [-1 / s, k / s, zero], [zero, zero, one]]
        return Family.SLAMBDA, tp, A, tower
    s, tower = sqrt_rational(1 - k2, tower)
    A = [[-1 / s, k / s, zero], [k / s, -1 / s, zero], [zero, zero, one]]
    return Family.SMU, tp, A, tower


def _lift_matrix(A, tower):
    from .exact import lift

    return [[lift(x, tower) for x in row] for row in A]


def classify_symmetric_point(coeffs: Sequence, g: DiagonalMetric):
    """Proof-case label of a solution on a symmetric metric and a frame map
    to a catalog structure.  Returns (label, family, t, A) with A mapping the
    catalog frame into the frame of ``coeffs``."""
    from .exact import sqrt_rational

    mu = g.mu
    r0, r1, r2, s0, s1, s2, t0, t1, t2 = coeffs
    fam, t = _family_membership(coeffs, g)
    if fam is not None:
        return "family", fam, t, _frac_matrix(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    eq = (r2 == mu, s0 == mu, t1 == mu)
    if eq == (True, False, False):
        if (r0, r1, t2, s2) != (0, 0, 0, 0) or s1 != -t0 or s1 == 0:
            raise ValueError("point is not of the (t, k) cone shape")
        fam, tt, A, _ = _case5_target(coeffs, g, ())
        return "cone", fam, tt, A
    if eq == (False, False, True):
        if (r1, s1, t0, t2) != (0, 0, 0, 0) or r0 != -s2:
            raise ValueError("point is not of the exchanged cone shape")
        for B in (EXCHANGE, _inverse_isometry(_frac_matrix(EXCHANGE), g)):
            B = _frac_matrix(B)
            c5 = frame_pullback(coeffs, B)
            if c5[0] == c5[1] == c5[5] == c5[8] == 0 and c5[2] == mu and c5[4] != 0:
                fam, tt, A5, tower = _case5_target(c5, g, ())
                return "exchanged-cone", fam, tt, _matmul(_lift_matrix(B, tower), A5)
        raise ValueError("exchange does not reach the cone")
    if eq == (False, True, False):
        if (r0, s1, s2, t0) != (0, 0, 0, 0) or r1 != t2:
            raise ValueError("point is not of the X1-X2 rotated shape")
        tp = r2 + t1 - mu
        c, tower = sqrt_rational((t1 - mu) / (tp - mu))
        s, tower = sqrt_rational((r2 - mu) / (tp - mu), tower)
        from .exact import lift

        one = lift(Fraction(1), tower)
        zero = one - one
        c = lift(c, tower)
        s = lift(s, tower)
        target = _family_coeffs(Family.SMU, g, tp)
        for sc, ss in ((c, s), (c, -s), (-c, s), (-c, -s)):
            A = [[one, zero, zero], [zero, sc, -ss], [zero, ss, sc]]
            if all(x == y for x, y in zip(frame_pullback(_lift_vec(coeffs, tower), A), target)):
                return "rotated", Family.SMU, tp, A
        raise ValueError("no rotation reaches the spacelike family")
    if eq == (False, False, False):
        if 0 in (r0, r1, s1):
            raise ValueError("generic point with a vanishing rho0, rho1 or sigma1")
        r, tower = sqrt_rational(s1 * s1 + r0 * r0)
        from .exact import lift

        one = lift(Fraction(1), tower)
        zero = one - one
        rot = [[one, zero, zero], [zero, s1 / r, r0 / r], [zero, -r0 / r, s1 / r]]
        for B in (rot, _inverse_isometry(rot, g)):
            c5 = frame_pullback(_lift_vec(coeffs, tower), B)
            if c5[0] == c5[1] == c5[5] == c5[8] == 0 and c5[2] == mu and c5[4] != 0:
                fam, tt, A5, tower2 = _case5_target(c5, g, tower)
                return "generic", fam, tt, _matmul(_lift_matrix(B, tower2), A5)
        raise ValueError("rotation does not reach the cone")
    raise ValueError(f"unexpected coincidence pattern {eq}")


def _lift_vec(v, tower):
    from .exact import lift

    return [lift(x, tower) for x in v]


# --------------------------------------------------------------------------
# Matching solver output against the catalog


@dataclass
class ComponentMatch:
    component: SolutionComponent
    family: Family | None = None  # set when the component equals a family line
    points: list = field(default_factory=list)  # PointMatch records


@dataclass
class MatchReport:
    metric: DiagonalMetric
    case: MetricCase
    ok: bool = True
    failures: list = field(default_factory=list)
    components: list = field(default_factory=list)
    missing: list = field(default_factory=list)

    def fail(self, message: str):
        self.ok = False
        self.failures.append(message)

    @property
    def sampled(self) -> list:
        return [m.component for m in self.components if m.component.status == SAMPLED]


def _fmt(coeffs) -> str:
    return "(" + ", ".join(str(x) for x in coeffs) + ")"


def _same_set(a: AffineSubspace, b: AffineSubspace) -> bool:
    return a.contains(b) and b.contains(a)


def match_point(coeffs: Sequence, g: DiagonalMetric) -> PointMatch:
    """Match one solution on a symmetric metric to the catalog, either by
    membership or by a verified frame-map certificate."""
    coeffs = tuple(coeffs)
    try:
        label, fam, t, A = classify_symmetric_point(coeffs, g)
    except ValueError as exc:
        return PointMatch(coeffs, "unclassified", Family.RAW, None, False, str(exc))
    if label == "family":
        return PointMatch(coeffs, label, fam, t, True)
    source = catalog_family(fam, g, t) if fam is not Family.S0 else catalog_family(fam, g)
    cert = certify_frame_map(HomogeneousStructure(coeffs), source, A, g, label)
    return PointMatch(coeffs, label, fam, t, cert.ok, "; ".join(cert.failures))


def match_components(
    comps: Sequence[SolutionComponent],
    g: DiagonalMetric,
    points_per_component: int = 3,
    certified_points: int = 1,
    seed: int = 0,
    system: ASSystem | None = None,
) -> MatchReport:
    """Compare solver output with the catalog.

    Every component is spot-checked at ``points_per_component`` random points;
    on the symmetric metric the first ``certified_points`` of them are also
    matched to a catalog family through a verified certificate.
    """
    case = MetricCase.classify(*g.diag)
    report = MatchReport(g, case)
    sys = system if system is not None else build_as_system(g)
    families = families_for(case)
    subspaces = {f: family_subspace(f, g) for f in families}

    for f in families:
        if not any(c.contains_family(subspaces[f]) for c in comps):
            report.missing.append(f)
            report.fail(f"family {f.value} is not contained in any component")

    rng = random.Random(f"match:{seed}:{_fmt(g.diag)}")
    for comp in comps:
        m = ComponentMatch(comp)
        report.components.append(m)
        base = comp.subspace.base
        if comp.status == CERTIFIED and not sys.satisfied_by(base):
            report.fail(f"component base point {_fmt(base)} violates the system")
        for f in families:
            if comp.status == CERTIFIED and _same_set(comp.subspace, subspaces[f]):
                m.family = f
                break
        if case is not MetricCase.SYMMETRIC:
            if comp.status != CERTIFIED:
                report.fail(f"sampled component in a non-symmetric case: {comp.describe()}")
            elif m.family is None:
                report.fail(f"component {comp.describe()} is not a catalog family")
        for n in range(points_per_component):
            p = sample_component(comp, rng)
            if p is None:
                report.fail(f"could not sample {comp.describe()}")
                break
            if not sys.satisfied_by(p):
                report.fail(f"sampled point {_fmt(p)} violates the system")
                continue
            if case is not MetricCase.SYMMETRIC or n >= certified_points:
                continue
            pm = match_point(p, g)
            m.points.append(pm)
            if not pm.ok:
                report.fail(f"unmatched point {_fmt(p)}: {pm.detail}")
    return report


# --------------------------------------------------------------------------
# Family-level checks of the isometry algebras


TABLE2_CASES = {
    Family.SVOL: "v",
    Family.SLAMBDA: "i",
    Family.SMU: "ii",
    Family.SNULL_MINUS: "iii",
    Family.SNULL_PLUS: "iii",
}


def table2_c_value(name: Family, g: DiagonalMetric, t) -> Fraction:
    """Parameter c of the so(2,2) decomposition isomorphic to the family."""
    mu = g.mu
    t = Fraction(t)
    if name in (Family.SVOL, Family.SLAMBDA, Family.SMU):
        return (t - mu) / (2 * mu)
    if name is Family.SNULL_MINUS:
        return t / mu
    if name is Family.SNULL_PLUS:
        return -t / mu
    raise ValueError(f"{name.value} has no so(2,2) decomposition parameter")


def _null_frame_map(name: Family):
    """X_i -> lemma m basis (B+, B- + cU+, B2) over Q(sqrt 2)."""
    from .exact import QuadSurd

    h = 1 / QuadSurd.sqrt(2)
    z = h - h
    s = 1 if name is Family.SNULL_PLUS else -1
    return [[h, s * h, z], [h, -s * h, z], [z, z, z + s]]


def table2_certificate(name, g: DiagonalMetric, t, c=None):
    """Isomorphism from the transvection algebra of a symmetric-case family
    to the lemma decomposition with parameter c (default: the tabulated
    value).  Passing another c is expected to fail."""
    from .reductive import (
        CheckResult,
        build_transvection_algebra,
        induced_certificate,
        lemma_decomposition,
        verify_isomorphism,
    )

    name = Family(name)
    case_id = TABLE2_CASES[name]
    c = table2_c_value(name, g, t) if c is None else Fraction(c)
    res = CheckResult(f"table2 {name.value}", True, details={"case": case_id, "c": c})
    S = catalog_family(name, g, t)
    P = build_transvection_algebra(g, S)
    L = lemma_decomposition(case_id, c, g.mu)
    if case_id == "iii":
        A = _null_frame_map(name)
    else:
        A = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    try:
        cert = induced_certificate(P, L, A, res.name)
    except ValueError as exc:
        res.fail(str(exc))
        return res
    sub = verify_isomorphism(cert)
    if not sub.ok:
        res.fail(sub.failures[0])
    return res


HATTED_FAMILIES = {Family.SLAMBDA: "timelike", Family.SMU: "spacelike"}


def _isotropy_generator(name: Family) -> list:
    from .reductive import stabilizer_endomorphisms

    U0, U1, _ = stabilizer_endomorphisms()
    if name is Family.SLAMBDA:
        return U0  # 2(theta1 x X2 - theta2 x X1)
    return [[-x for x in row] for row in U1]  # 2(theta2 x X0 + theta0 x X2)


def hatted_basis_check(name, g: DiagonalMetric, t):
    """The basis (U^, X^0, X^1, X^2) splitting the transvection algebra of
    S_lambda(t) or S_mu(t) as su(1,1) + R."""
    from .reductive import build_transvection_algebra, hatted_relations

    name = Family(name)
    lam, mu, nu = g.diag
    t = Fraction(t)
    S = catalog_family(name, g, t)
    P = build_transvection_algebra(g, S, h_basis=[_isotropy_generator(name)], h_names=["U"])
    F = Fraction
    e = [[F(int(k == i)) for k in range(4)] for i in range(4)]  # U, X0, X1, X2
    if name is Family.SLAMBDA:
        hat = {
            "U": [-(lam - t) / (2 * mu), F(-1), F(0), F(0)],
            "X0": [(lam - t + 2 * mu) / (2 * mu), F(1), F(0), F(0)],
            "X1": e[2],
            "X2": e[3],
        }
    elif name is Family.SMU:
        hat = {
            "U": [-(mu + t) / (2 * nu), F(0), F(-1), F(0)],
            "X0": e[1],
            "X1": [-(2 * nu - mu - t) / (2 * nu), F(0), F(1), F(0)],
            "X2": e[3],
        }
    else:
        raise ValueError("hatted bases exist for S_lambda and S_mu only")
    res = hatted_relations(P, hat)
    res.name = f"hatted {name.value}"
    return res


def displayed_decomposition_check(name, g: DiagonalMetric, t):
    """The decomposition written in su(1,1) + R is reductive and isomorphic,
    through the identity on m, to the transvection algebra of the family."""
    from .reductive import (
        CheckResult,
        build_transvection_algebra,
        check_jacobi,
        check_reductive,
        displayed_decomposition,
        induced_certificate,
        verify_isomorphism,
    )

    name = Family(name)
    D, tau_check = displayed_decomposition(HATTED_FAMILIES[name], g, t)
    res = CheckResult(f"decomposition {name.value}", True)
    for sub in (tau_check, check_jacobi(D), check_reductive(D)):
        if not sub.ok:
            res.fail(f"{sub.name}: {sub.failures[0]}")
    P = build_transvection_algebra(g, catalog_family(name, g, t), h_basis=[_isotropy_generator(name)])
    ident = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    sub = verify_isomorphism(induced_certificate(P, D, ident))
    if not sub.ok:
        res.fail(sub.failures[0])
    return res


def null_flip_certificate(g: DiagonalMetric, t):
    """S_null^-(t) and S_null^+(-t) through X0 -> X0, X1 -> -X1, X2 -> -X2."""
    t = Fraction(t)
    return certify_frame_map(
        catalog_family(Family.SNULL_PLUS, g, -t),
        catalog_family(Family.SNULL_MINUS, g, t),
        _frac_matrix(NULL_FLIP),
        g,
        "null-flip",
    )


def exchange_certificate(g: DiagonalMetric, t):
    """S_mu(t) on g (-lam = nu) and S_nu(t) on the metric with mu and nu
    exchanged, through X0 -> X0, X1 -> -X2, X2 -> X1."""
    t = Fraction(t)
    swapped = DiagonalMetric(g.lam, g.nu, g.mu)
    return certify_frame_map(
        catalog_family(Family.SNU, swapped, t),
        catalog_family(Family.SMU, g, t),
        _frac_matrix(EXCHANGE),
        g,
        "exchange",
        g_target=swapped,
    )


def svol_curvature(g: DiagonalMetric, t) -> dict:
    """The three sectional components of the canonical curvature of S_vol(t)."""
    from .reductive import canonical_curvature

    R = canonical_curvature(g, catalog_family(Family.SVOL, g, t))
    return {
        "R0_101": R.component(0, 1, 0, 1),
        "R0_202": R.component(0, 2, 0, 2),
        "R1_212": R.component(1, 2, 1, 2),
    }


def catalog_violations(name, g: DiagonalMetric, t, comps: Sequence[SolutionComponent],
                       system: ASSystem | None = None) -> list:
    """Coefficients of the catalog point that disagree with the solver.

    Returns [] when the catalog point solves the system and lies on some
    component.  Otherwise looks for a single coefficient whose change puts
    the point on a component and returns [(coefficient, catalog, solver)];
    if no single change suffices, the residual equations are reported as
    [("residual", index, value)].
    """
    from .exact import Infeasible

    name = Family(name)
    sys = system if system is not None else build_as_system(g)
    p = _family_coeffs(name, g, Fraction(0 if t is None else t))
    if sys.satisfied_by(p) and any(c.contains_point(p) for c in comps):
        return []
    for comp in comps:
        for k in range(9):
            sub = comp.subspace
            try:
                for j in range(9):
                    if j != k:
                        row = [Fraction(int(i == j)) for i in range(9)]
                        sub = sub.restrict(row, p[j])
            except Infeasible:
                continue
            if sub.dimension == 0 and sub.base[k] != p[k] and sys.satisfied_by(sub.base):
                return [(COEFF_NAMES[k], p[k], sub.base[k])]
    res = sys.residuals(p)
    return [("residual", i, r) for i, r in enumerate(res) if r != 0][:3]
