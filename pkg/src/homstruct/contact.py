"""Almost contact and almost paracontact metric structures on (SU(1,1), g).

Endomorphisms are 3x3 matrices on the frame with columns as images:
``phi[a][b]`` is the X_a component of phi(X_b).  Vectors are frame
coordinates, covectors are coefficients on (theta0, theta1, theta2).

The orthonormal frame is Xbar_a = X_a / s_a with s = (sqrt|lam|, sqrt mu,
sqrt nu).  By default |lam|, mu, nu must be rational squares; with
``surds=True`` the scales live in a tower of quadratic extensions instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exact import FRAME, Tensor, lift, rational_sqrt, sqrt_rational
from .lie import (
    SU11,
    DiagonalMetric,
    canonical_connection,
    covariant_derivative,
    levi_civita,
)
from .reductive import CheckResult, stabilizer_endomorphisms
from .structures import HomogeneousStructure, structure_tensor

CONTACT = "contact"
PARACONTACT = "paracontact"

# (coefficient, a, b) for coefficient * Xbar_a (x) thetabar^b
_TERMS = {
    (CONTACT, 0): ((1, 1, 2), (-1, 2, 1)),
    (CONTACT, 1): ((1, 0, 2), (-1, 2, 0)),
    (CONTACT, 2): ((1, 1, 0), (-1, 0, 1)),
    (PARACONTACT, 1): ((-1, 2, 0), (-1, 0, 2)),
    (PARACONTACT, 2): ((1, 1, 0), (1, 0, 1)),
}

_RIEMANNIAN_MIXED = (
    ((-1, 1, 2), (1, 2, 1)),
    ((1, 0, 2), (-1, 2, 0)),
    ((1, 1, 0), (-1, 0, 1)),
)


class InadmissibleTriple(ValueError):
    pass


def orthonormal_scales(g: DiagonalMetric, surds: bool = False) -> tuple:
    """(sqrt|lam|, sqrt mu, sqrt nu).

    Raises unless all are rational, or with ``surds`` returns them in a
    common tower of quadratic extensions.
    """
    if not surds:
        out = []
        for name, v in zip(("|lambda|", "mu", "nu"), (abs(g.lam), g.mu, g.nu)):
            r = rational_sqrt(v)
            if r is None:
                raise ValueError(f"{name} = {v} is not the square of a rational")
            out.append(r)
        return tuple(out)
    tower: tuple = ()
    roots = []
    for v in (abs(g.lam), g.mu, g.nu):
        r, tower = sqrt_rational(v, tower)
        roots.append(r)
    return tuple(lift(r, tower) for r in roots)


def _zero3():
    return [[Fraction(0)] * 3 for _ in range(3)]


def _endomorphism(terms, scales) -> list:
    phi = _zero3()
    for coef, a, b in terms:
        # Xbar_a (x) thetabar^b sends X_b to (s_b / s_a) X_a
        phi[a][b] += Fraction(coef) * scales[b] / scales[a]
    return phi


@dataclass(frozen=True)
class ContactTriple:
    kind: str
    index: int
    phi: tuple
    xi: tuple
    eta: tuple
    epsilon: Fraction
    label: str = ""

    def phi_matrix(self) -> list:
        return [list(r) for r in self.phi]

    def phi_tensor(self) -> Tensor:
        return Tensor.from_function("ud", lambda a, b: self.phi[a][b])

    def apply(self, v: Sequence) -> list:
        return [sum((self.phi[a][b] * v[b] for b in FRAME), Fraction(0)) for a in FRAME]

    @property
    def sign(self) -> int:
        """+1 for almost contact, -1 for almost paracontact."""
        return 1 if self.kind == CONTACT else -1


def _build(kind, index, terms, g: DiagonalMetric, label: str, surds=False) -> ContactTriple:
    s = orthonormal_scales(g, surds)
    phi = _endomorphism(terms, s)
    xi = tuple(Fraction(int(a == index)) / s[index] for a in FRAME)
    eta = tuple(Fraction(int(a == index)) * s[index] for a in FRAME)
    eps = Fraction(1) if g[index] > 0 else Fraction(-1)
    return ContactTriple(kind, index, tuple(tuple(r) for r in phi), xi, eta, eps, label)


def make_triple(kind: str, index: int, g: DiagonalMetric, surds: bool = False) -> ContactTriple:
    """The displayed left-invariant triple of the given kind and Reeb index.

    Contact index 0 works in any signature; contact 1 and 2 need lam > 0.
    Paracontact 1 and 2 need lam < 0 (the Reeb field must be spacelike and
    the metric Lorentzian); there is no paracontact triple along X0.
    Non-square parameters are rejected unless ``surds`` is set.
    """
    if (kind, index) not in _TERMS:
        raise InadmissibleTriple(f"no displayed {kind} triple with Reeb index {index}")
    if kind == CONTACT and index != 0 and g.lam < 0:
        raise InadmissibleTriple(f"contact triple {index} requires lambda > 0")
    if kind == PARACONTACT and g.lam > 0:
        raise InadmissibleTriple("paracontact triples require lambda < 0")
    name = "phi" if kind == CONTACT else "phitilde"
    return _build(kind, index, _TERMS[(kind, index)], g, f"{name}{index}", surds)


def displayed_triple(kind: str, index: int, g: DiagonalMetric, surds: bool = False) -> ContactTriple:
    """The displayed triple without the signature guard of ``make_triple``.

    Useful for showing that a triple fails its axioms on the wrong signature.
    """
    if (kind, index) not in _TERMS:
        raise InadmissibleTriple(f"no displayed {kind} triple with Reeb index {index}")
    name = "phi" if kind == CONTACT else "phitilde"
    return _build(kind, index, _TERMS[(kind, index)], g, f"{name}{index}", surds)


def admissible_triples(g: DiagonalMetric) -> list[ContactTriple]:
    out = []
    for kind, index in _TERMS:
        try:
            out.append(make_triple(kind, index, g))
        except InadmissibleTriple:
            pass
    return out


# --------------------------------------------------------------------------
# Axioms


def _mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in FRAME), Fraction(0)) for j in FRAME] for i in FRAME]


def _outer(v, w):
    """Matrix of X -> w(X) v."""
    return [[v[i] * w[j] for j in FRAME] for i in FRAME]


def _pair(w, v):
    return sum((w[i] * v[i] for i in FRAME), Fraction(0))


def _basis(i):
    return [Fraction(int(k == i)) for k in FRAME]


def check_structure_axioms(tr: ContactTriple, g: DiagonalMetric) -> CheckResult:
    res = CheckResult(f"axioms:{tr.label or tr.kind}", True)
    phi = tr.phi_matrix()
    sq = _mat_mul(phi, phi)
    proj = _outer(tr.xi, tr.eta)
    for a, b in product(FRAME, repeat=2):
        ident = Fraction(int(a == b))
        want = -ident + proj[a][b] if tr.kind == CONTACT else ident - proj[a][b]
        if sq[a][b] != want:
            res.fail(f"phi^2 slot ({a},{b}): {sq[a][b]} != {want}")
    if _pair(tr.eta, tr.xi) != 1:
        res.fail("eta(xi) != 1")
    if any(x != 0 for x in tr.apply(tr.xi)):
        res.fail("phi(xi) != 0")
    for b in FRAME:
        if _pair(tr.eta, tr.apply(_basis(b))) != 0:
            res.fail(f"eta(phi X{b}) != 0")
    if g.inner(tr.xi, tr.xi) != tr.epsilon:
        res.fail("epsilon != g(xi, xi)")
    if tr.kind == PARACONTACT and tr.epsilon != 1:
        res.fail("paracontact Reeb field is not spacelike")
    for i, j in product(FRAME, repeat=2):
        lhs = g.inner(tr.apply(_basis(i)), tr.apply(_basis(j)))
        base = g.inner(_basis(i), _basis(j))
        if tr.kind == CONTACT:
            rhs = base - tr.epsilon * tr.eta[i] * tr.eta[j]
        else:
            rhs = -base + tr.eta[i] * tr.eta[j]
        if lhs != rhs:
            res.fail(f"compatibility ({i},{j}): {lhs} != {rhs}")
    return res


# --------------------------------------------------------------------------
# Sasakian coefficient


def nabla_phi(tr: ContactTriple, g: DiagonalMetric, conn=None) -> list:
    """D[i][j] = frame coordinates of (nabla_{X_i} phi) X_j."""
    conn = conn or levi_civita(g)
    d = covariant_derivative(conn, tr.phi_tensor(), SU11)
    return [[[d[i, a, j] for a in FRAME] for j in FRAME] for i in FRAME]


def sasakian_rhs(tr: ContactTriple, g: DiagonalMetric, i: int, j: int) -> list:
    """g(X_i, X_j) xi - eps eta(X_j) X_i (eps = 1 for paracontact)."""
    eps = tr.epsilon if tr.kind == CONTACT else Fraction(1)
    gij = g[i] if i == j else Fraction(0)
    return [gij * tr.xi[a] - eps * tr.eta[j] * Fraction(int(a == i)) for a in FRAME]


def sasakian_proportionality(tr: ContactTriple, g: DiagonalMetric, conn=None):
    """(coefficient or None, first failing slot or None)."""
    lhs = nabla_phi(tr, g, conn)
    coef = None
    for i, j, a in product(FRAME, repeat=3):
        r = sasakian_rhs(tr, g, i, j)[a]
        if r != 0:
            coef = lhs[i][j][a] / r
            break
    if coef is None:
        return None, None
    for i, j in product(FRAME, repeat=2):
        r = sasakian_rhs(tr, g, i, j)
        for a in FRAME:
            if lhs[i][j][a] != coef * r[a]:
                return None, (i, j, a)
    return coef, None


def sasakian_coefficient(tr: ContactTriple, g: DiagonalMetric, conn=None) -> Fraction | None:
    """alpha (contact) or beta (paracontact) if nabla phi is proportional to
    the Sasakian right-hand side with one constant, else None."""
    return sasakian_proportionality(tr, g, conn)[0]


# --------------------------------------------------------------------------
# Contact-metric condition


def d_eta(tr: ContactTriple) -> list:
    """d eta(X_i, X_j) = -eta([X_i, X_j]) for a left-invariant form."""
    return [[-_pair(tr.eta, SU11.bracket(_basis(i), _basis(j))) for j in FRAME] for i in FRAME]


def contact_metric_defects(tr: ContactTriple, g: DiagonalMetric) -> list:
    """Slots (i, j, d eta, 2 g(X_i, phi X_j)) where the two sides differ."""
    de = d_eta(tr)
    out = []
    for i, j in product(FRAME, repeat=2):
        rhs = 2 * g.inner(_basis(i), tr.apply(_basis(j)))
        if de[i][j] != rhs:
            out.append((i, j, de[i][j], rhs))
    return out


def check_contact_metric(tr: ContactTriple, g: DiagonalMetric) -> bool:
    return not contact_metric_defects(tr, g)


def contact_metric_condition(kind: str, index: int, g: DiagonalMetric) -> bool:
    """The parameter equation equivalent to the contact-metric property."""
    lam, mu, nu = g.diag
    if kind == CONTACT:
        return {0: abs(lam) == mu * nu, 1: mu == lam * nu, 2: nu == lam * mu}[index]
    return {1: mu == -lam * nu, 2: nu == -lam * mu}[index]


# --------------------------------------------------------------------------
# Parallelism for a homogeneous structure


def _structure(S) -> Tensor:
    if isinstance(S, Tensor):
        return S
    if isinstance(S, HomogeneousStructure):
        return S.tensor()
    return structure_tensor(list(S))


def parallel_defects(tr: ContactTriple, g: DiagonalMetric, S) -> list:
    conn = canonical_connection(levi_civita(g), _structure(S), g)
    out = []
    for name, t in (
        ("phi", tr.phi_tensor()),
        ("xi", Tensor.from_function("u", lambda a: tr.xi[a])),
        ("eta", Tensor.from_function("d", lambda a: tr.eta[a])),
    ):
        d = covariant_derivative(conn, t, SU11)
        bad = d.nonzero()
        if bad:
            out.append((name, bad[0]))
    return out


def check_parallel(tr: ContactTriple, g: DiagonalMetric, S) -> bool:
    """True iff phi, xi and eta are all parallel for nabla - S."""
    return not parallel_defects(tr, g, S)


# --------------------------------------------------------------------------
# Mixed metric 3-structures

LORENTZIAN = "Lorentzian"
RIEMANNIAN = "Riemannian"
_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class MixedFamily:
    flavor: str
    triples: tuple
    signs: tuple = field(default=())


def mixed_family(flavor: str, g: DiagonalMetric) -> MixedFamily:
    if flavor == LORENTZIAN:
        if g.lam >= 0:
            raise InadmissibleTriple("the Lorentzian family needs lambda < 0")
        triples = (
            make_triple(CONTACT, 0, g),
            make_triple(PARACONTACT, 1, g),
            make_triple(PARACONTACT, 2, g),
        )
    elif flavor == RIEMANNIAN:
        if g.lam <= 0:
            raise InadmissibleTriple("the Riemannian family needs lambda > 0")
        triples = tuple(
            _build(CONTACT, l, terms, g, f"phi{l}") for l, terms in enumerate(_RIEMANNIAN_MIXED)
        )
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return MixedFamily(flavor, triples, tuple(tr.sign for tr in triples))


def _mat_eq(a, b) -> bool:
    return all(a[i][j] == b[i][j] for i, j in product(FRAME, repeat=2))


def _mat_lin(*pairs):
    out = _zero3()
    for c, m in pairs:
        for i, j in product(FRAME, repeat=2):
            out[i][j] += c * m[i][j]
    return out


def check_mixed_relations(fam: MixedFamily, g: DiagonalMetric) -> CheckResult:
    res = CheckResult(f"mixed-relations:{fam.flavor}", True)
    T = fam.triples
    tau = fam.signs
    for l, tr in enumerate(T):
        if tr.sign != tau[l]:
            res.fail(f"sign of triple {l} does not match its kind")
        ax = check_structure_axioms(tr, g)
        if not ax:
            res.fail(f"triple {l}: {ax.failures[0]}")
    for i, j, k in _CYCLIC:
        ti, tj, tk = T[i], T[j], T[k]
        if _pair(ti.eta, tj.xi) != 0 or _pair(tj.eta, ti.xi) != 0:
            res.fail(f"eta_{i}(xi_{j}) != 0")
        for b in FRAME:
            e = _basis(b)
            a1 = _pair(ti.eta, tj.apply(e))
            a2 = tau[k] * tk.eta[b]
            a3 = -_pair(tj.eta, ti.apply(e))
            if not a1 == a2 == a3:
                res.fail(f"eta_{i} phi_{j} = tau_{k} eta_{k} = -eta_{j} phi_{i} fails on X{b}")
        if ti.apply(tj.xi) != [tau[j] * x for x in tk.xi]:
            res.fail(f"phi_{i}(xi_{j}) != tau_{j} xi_{k}")
        if tj.apply(ti.xi) != [-tau[i] * x for x in tk.xi]:
            res.fail(f"phi_{j}(xi_{i}) != -tau_{i} xi_{k}")
        pi, pj, pk = ti.phi_matrix(), tj.phi_matrix(), tk.phi_matrix()
        left = _mat_lin((1, _mat_mul(pi, pj)), (-tau[i], _outer(ti.xi, tj.eta)))
        mid = _mat_lin((tau[k], pk))
        right = _mat_lin((-1, _mat_mul(pj, pi)), (tau[j], _outer(tj.xi, ti.eta)))
        if not (_mat_eq(left, mid) and _mat_eq(mid, right)):
            res.fail(f"phi_{i} phi_{j} relation fails for ({i},{j},{k})")
    for l, tr in enumerate(T):
        for a, b in product(FRAME, repeat=2):
            lhs = g.inner(tr.apply(_basis(a)), tr.apply(_basis(b)))
            rhs = tau[l] * (
                g.inner(_basis(a), _basis(b)) - tr.epsilon * tr.eta[a] * tr.eta[b]
            )
            if lhs != rhs:
                res.fail(f"compatibility of triple {l} at ({a},{b})")
    return res


def three_sasakian_flags(fam: MixedFamily, g: DiagonalMetric) -> list:
    """Per triple: (coefficient or None, attains its Sasakian value).

    A contact triple must have alpha = 1, a paracontact one beta = -1.
    """
    conn = levi_civita(g)
    out = []
    for tr in fam.triples:
        coef = sasakian_coefficient(tr, g, conn)
        target = Fraction(1) if tr.kind == CONTACT else Fraction(-1)
        out.append((coef, coef == target))
    return out


def stabilizer_signs(fam: MixedFamily) -> list:
    """s_l with phi_l = s_l * U_l / 2, where U_l = ad X_l is the action of the
    stabilizer generator on T_o (None if phi_l is not a multiple of U_l)."""
    out = []
    for tr, U in zip(fam.triples, stabilizer_endomorphisms()):
        half = [[u / 2 for u in row] for row in U]
        phi = tr.phi_matrix()
        if _mat_eq(phi, half):
            out.append(1)
        elif _mat_eq(phi, [[-u for u in row] for row in half]):
            out.append(-1)
        else:
            out.append(None)
    return out


def check_mixed_3(fam: MixedFamily, g: DiagonalMetric) -> CheckResult:
    res = check_mixed_relations(fam, g)
    res.name = f"mixed-3:{fam.flavor}"
    flags = three_sasakian_flags(fam, g)
    res.details["sasakian_coefficients"] = [c for c, _ in flags]
    res.details["three_sasakian"] = all(ok for _, ok in flags)
    lam, mu, nu = g.diag
    if fam.flavor == LORENTZIAN and -lam == mu == nu:
        signs = stabilizer_signs(fam)
        res.details["stabilizer_signs"] = signs
        res.details["phi_is_half_stabilizer"] = signs == [1, 1, 1]
    return res
