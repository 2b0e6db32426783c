"""Exact matrix model of H^3_1 = SU(1,1).

Points are (z1, z2) with Gaussian-rational entries and |z1|^2 - |z2|^2 = 1,
identified with the matrix (z1, z2; conj z2, conj z1).  Tangent vectors at Z
are 2x2 matrices M with Z^-1 M in su(1,1).

Derivatives along curves are taken exactly with dual numbers a + b*eps
(eps^2 = 0): evaluating a rational expression at Z (I + eps X) gives its
value and its derivative along the left-invariant field Z X in one pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .exact import FRAME, parse_rational, solve_in_span
from .lie import SU11, DiagonalMetric, canonical_connection, levi_civita
from .reductive import CheckResult
from .structures import Family, catalog_family


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return NotImplemented

    def __add__(self, o):
        o = GaussianRational.of(o)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        o = GaussianRational.of(o)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = GaussianRational.of(o)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return GaussianRational.of(o) * self.inverse()

    def __eq__(self, o):
        o = GaussianRational.of(o)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = GaussianRational(0, 1)
ZERO = GaussianRational(0)
ONE = GaussianRational(1)


@dataclass(frozen=True)
class Dual:
    """val + eps * d with eps^2 = 0 over the Gaussian rationals."""

    val: GaussianRational
    d: GaussianRational = ZERO

    @staticmethod
    def of(x) -> "Dual":
        if isinstance(x, Dual):
            return x
        g = GaussianRational.of(x)
        if g is NotImplemented:
            return g
        return Dual(g, ZERO)

    def __add__(self, o):
        o = Dual.of(o)
        return Dual(self.val + o.val, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.d)

    def __sub__(self, o):
        return self + (-Dual.of(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = Dual.of(o)
        return Dual(self.val * o.val, self.val * o.d + self.d * o.val)

    __rmul__ = __mul__

    def inverse(self) -> "Dual":
        inv = self.val.inverse()
        return Dual(inv, -(self.d * inv * inv))

    def __truediv__(self, o):
        return self * Dual.of(o).inverse()

    def __rtruediv__(self, o):
        return Dual.of(o) * self.inverse()

    def conj(self) -> "Dual":
        return Dual(self.val.conj(), self.d.conj())

    def __eq__(self, o):
        o = Dual.of(o)
        if o is NotImplemented:
            return False
        return self.val == o.val and self.d == o.d

    def __hash__(self):
        return hash((self.val, self.d))


def _conj(x):
    return x.conj() if hasattr(x, "conj") else x


# --------------------------------------------------------------------------
# 2x2 matrices (tuples of rows) over a ring supporting + - * conj


def mmul(a, b):
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2)
    )


def madd(a, b):
    return tuple(tuple(a[i][j] + b[i][j] for j in range(2)) for i in range(2))


def mscale(k, a):
    return tuple(tuple(k * a[i][j] for j in range(2)) for i in range(2))


def dagger(a):
    return tuple(tuple(_conj(a[j][i]) for j in range(2)) for i in range(2))


def _g(x, y=0):
    return GaussianRational(x, y)


GENERATORS = (
    ((_g(0, 1), ZERO), (ZERO, _g(0, -1))),  # X0
    ((ZERO, ONE), (ONE, ZERO)),  # X1
    ((ZERO, _g(0, 1)), (_g(0, -1), ZERO)),  # X2
)
IDENTITY = ((ONE, ZERO), (ZERO, ONE))


def su11_element(coords: Sequence):
    out = ((ZERO, ZERO), (ZERO, ZERO))
    for c, X in zip(coords, GENERATORS):
        if c != 0:
            out = madd(out, mscale(c, X))
    return out


def su11_coords(M) -> list:
    """(a, b, c) with M = a X0 + b X1 + c X2; raises outside su(1,1)."""
    a00, a01 = M[0]
    a10, a11 = M[1]
    if not (a00 + a11 == 0 and a10 == _conj(a01) and a00 + _conj(a00) == 0):
        raise ValueError("matrix is not in su(1,1)")
    return [(a00 - _conj(a00)) / _g(0, 2), (a01 + _conj(a01)) / 2, (a01 - _conj(a01)) / _g(0, 2)]


def _real(x) -> Fraction:
    """Real rational value of a Gaussian rational with zero imaginary part."""
    if isinstance(x, Dual):
        raise TypeError("expected a plain scalar")
    if x.im != 0:
        raise ValueError("expected a real value")
    return x.re


# --------------------------------------------------------------------------
# Points


@dataclass(frozen=True)
class GroupPoint:
    z1: object
    z2: object

    def __post_init__(self):
        if self.z1 * _conj(self.z1) - self.z2 * _conj(self.z2) != 1:
            raise ValueError("point is not on H^3_1: |z1|^2 - |z2|^2 != 1")

    @staticmethod
    def make(z1, z2) -> "GroupPoint":
        return GroupPoint(GaussianRational.of(z1), GaussianRational.of(z2))

    def matrix(self):
        return ((self.z1, self.z2), (_conj(self.z2), _conj(self.z1)))

    @staticmethod
    def from_matrix(m) -> "GroupPoint":
        if m[1][0] != _conj(m[0][1]) or m[1][1] != _conj(m[0][0]):
            raise ValueError("matrix is not in SU(1,1)")
        return GroupPoint(m[0][0], m[0][1])

    def inverse_matrix(self):
        return ((_conj(self.z1), -self.z2), (-_conj(self.z2), self.z1))

    def __mul__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint.from_matrix(mmul(self.matrix(), other.matrix()))

    def inverse(self) -> "GroupPoint":
        return GroupPoint.from_matrix(self.inverse_matrix())

    def jet(self, direction: Sequence) -> tuple:
        """(z1, z2) as dual numbers along the curve Z exp(s X), X = sum c_a X_a."""
        m = mmul(self.matrix(), su11_element(direction))
        return Dual.of(self.z1) + Dual(ZERO, m[0][0]), Dual.of(self.z2) + Dual(ZERO, m[0][1])


ORIGIN = GroupPoint.make(1, 0)


def _seed_points() -> list[GroupPoint]:
    u = _g(Fraction(3, 5), Fraction(4, 5))
    v = _g(Fraction(5, 13), Fraction(-12, 13))
    seeds = [
        GroupPoint.make(Fraction(5, 4), Fraction(3, 4)),
        GroupPoint.make(Fraction(13, 12), _g(0, Fraction(5, 12))),
        GroupPoint.make(Fraction(5, 4) * u, Fraction(3, 4) * v),
        GroupPoint.make(Fraction(13, 12) * v, Fraction(-5, 12) * u),
    ]
    return seeds + [s.inverse() for s in seeds]


def sample_points(seed: int, count: int) -> list[GroupPoint]:
    """The base point followed by products of up to four seed points."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = random.Random(f"group:{seed}")
    seeds = _seed_points()
    out = [ORIGIN]
    seen = {ORIGIN}
    while len(out) < count:
        p = ORIGIN
        for _ in range(rng.randint(1, 4)):
            p = p * rng.choice(seeds)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# --------------------------------------------------------------------------
# Killing fields

# derivative at s = 0 of the right factor of the displayed actions
RIGHT_FACTORS = {
    "u1": ((_g(0, -1), ZERO), (ZERO, _g(0, 1))),  # diag(e^{-is}, e^{is})
    "D": ((ZERO, -ONE), (-ONE, ZERO)),  # (cosh s, -sinh s; -sinh s, cosh s)
}


@dataclass(frozen=True)
class TangentAtPoint:
    base: GroupPoint
    mat: tuple

    def coords(self) -> list:
        """Coordinates in the left-invariant frame: Z^-1 mat = sum c_a X_a."""
        return su11_coords(mmul(self.base.inverse_matrix(), self.mat))


def killing_field(gen, side: str, Z: GroupPoint) -> TangentAtPoint:
    """Killing field of a one-parameter group of the isometric action at Z.

    ``gen`` is an su(1,1) coordinate triple, or for ``side="right"`` also a
    key of RIGHT_FACTORS.  Left: gen Z.  Right with an su(1,1) element:
    Z gen^dagger, from (g_L, g_R) Z = g_L Z g_R^dagger.
    """
    m = Z.matrix()
    if side == "left":
        return TangentAtPoint(Z, mmul(su11_element(gen), m))
    if side != "right":
        raise ValueError("side must be 'left' or 'right'")
    if isinstance(gen, str):
        return TangentAtPoint(Z, mmul(m, RIGHT_FACTORS[gen]))
    return TangentAtPoint(Z, mmul(m, dagger(su11_element(gen))))


def left_invariant(coords: Sequence, Z: GroupPoint) -> TangentAtPoint:
    return TangentAtPoint(Z, mmul(Z.matrix(), su11_element(coords)))


# --------------------------------------------------------------------------
# Isometry algebras with one central direction
#
# Elements are 4-vectors (x0, x1, x2, c): x acts from the left, c times the
# right factor of the displayed action.


TIMELIKE = "timelike"
SPACELIKE = "spacelike"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class ActionModel:
    case: str
    right: str | None
    m_basis: tuple  # Killing generators mapped by tau to X0, X1, X2 at o
    h_basis: tuple
    labels: tuple

    @property
    def width(self) -> int:
        return 4 if self.right else 3

    def field_matrix(self, v: Sequence, z1, z2):
        m = ((z1, z2), (_conj(z2), _conj(z1)))
        out = mmul(su11_element(v[:3]), m)
        if self.right and v[3] != 0:
            out = madd(out, mscale(v[3], mmul(m, RIGHT_FACTORS[self.right])))
        return out

    def tau(self, v: Sequence) -> list:
        """Value at o in the left-invariant frame."""
        return su11_coords(self.field_matrix(v, ONE, ZERO))

    def bracket(self, u: Sequence, v: Sequence) -> list:
        br = SU11.bracket(u[:3], v[:3])
        return br + [Fraction(0)] * (self.width - 3)

    def m_part(self, v: Sequence) -> list:
        """Coordinates of the m-component of v in m_basis."""
        basis = list(self.m_basis) + list(self.h_basis)
        coeffs = solve_in_span(basis, list(v))
        if coeffs is None:
            raise ValueError("vector outside the isometry algebra")
        return coeffs[:3]


def action_model(case: str, g: DiagonalMetric, t=None) -> ActionModel:
    lam, mu, nu = g.diag
    if case == TIMELIKE:
        t = Fraction(t)
        k0 = (lam - t) / (2 * mu)
        k3 = (2 * mu + lam - t) / (2 * mu)
        f = Fraction
        return ActionModel(
            case,
            "u1",
            ((-k0, f(0), f(0), -k3), (f(0), f(1), f(0), f(0)), (f(0), f(0), f(1), f(0))),
            ((f(1), f(0), f(0), f(1)),),
            ("E_t", "B1", "B2"),
        )
    if case == SPACELIKE:
        t = Fraction(t)
        f = Fraction
        return ActionModel(
            case,
            "D",
            (
                (f(1), f(0), f(0), f(0)),
                (f(0), (mu + t) / (2 * nu), f(0), -(2 * nu - mu - t) / (2 * nu)),
                (f(0), f(0), f(1), f(0)),
            ),
            ((f(0), f(1), f(0), f(1)),),
            ("B0", "E_t", "B2"),
        )
    if case == TRIVIAL:
        f = Fraction
        return ActionModel(
            case,
            None,
            ((f(1), f(0), f(0)), (f(0), f(1), f(0)), (f(0), f(0), f(1))),
            (),
            ("B0", "B1", "B2"),
        )
    raise ValueError(f"unknown case {case!r}")


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _cramer(cols, rhs):
    """Solve sum_k x_k cols[k] = rhs for 3-vectors over any field."""
    det = _det3([[cols[k][r] for k in range(3)] for r in range(3)])
    if det == 0:
        return None
    out = []
    for k in range(3):
        mod = [list(c) for c in cols]
        mod[k] = list(rhs)
        out.append(_det3([[mod[j][r] for j in range(3)] for r in range(3)]) / det)
    return out


def _inv_left(z1, z2, M):
    inv = ((_conj(z1), -z2), (-_conj(z2), z1))
    return mmul(inv, M)


def solve_expansion(model: ActionModel, z1, z2) -> list | None:
    """coef[a][k] with X_a = sum_k coef[a][k] K_k at (z1, z2), or None."""
    cols = [su11_coords(_inv_left(z1, z2, model.field_matrix(v, z1, z2))) for v in model.m_basis]
    out = []
    for a in FRAME:
        rhs = [ONE if b == a else ZERO for b in FRAME]
        c = _cramer(cols, rhs)
        if c is None:
            return None
        out.append(c)
    return out


# --------------------------------------------------------------------------
# Displayed closed forms of the expansion coefficients


def _timelike_forms(lam, mu, t, corrected: bool) -> dict:
    p = lam - t + mu

    def den(z1, w1, z2, w2):
        return p * z2 * w2 + mu * z1 * w1

    def g_t_den(z1, w1, z2, w2):
        # displayed with -mu|z1|^2; the solved coefficient has +mu|z1|^2
        return den(z1, w1, z2, w2) if corrected else p * z2 * w2 - mu * z1 * w1

    # displayed with an overall minus sign; h_2(o) must be 1
    h_2_sign = 1 if corrected else -1

    return {
        (0, 0): lambda z1, w1, z2, w2: (z2 * w2 + z1 * w1) * mu / den(z1, w1, z2, w2),
        (0, 1): lambda z1, w1, z2, w2: I * (lam - t) * (z1 * z2 - w1 * w2) / (2 * den(z1, w1, z2, w2)),
        (0, 2): lambda z1, w1, z2, w2: (lam - t) * (z1 * z2 + w1 * w2) / (2 * den(z1, w1, z2, w2)),
        (1, 0): lambda z1, w1, z2, w2: I * (z1 * w2 - w1 * z2) * mu / g_t_den(z1, w1, z2, w2),
        (1, 1): lambda z1, w1, z2, w2: (p * (z2 * z2 + w2 * w2) + mu * (z1 * z1 + w1 * w1))
        / (2 * den(z1, w1, z2, w2)),
        (1, 2): lambda z1, w1, z2, w2: -I * (p * (z2 * z2 - w2 * w2) + mu * (z1 * z1 - w1 * w1))
        / (2 * den(z1, w1, z2, w2)),
        (2, 0): lambda z1, w1, z2, w2: -(z2 * w1 + z1 * w2) * mu / den(z1, w1, z2, w2),
        (2, 1): lambda z1, w1, z2, w2: -I * (p * (z2 * z2 - w2 * w2) - mu * (z1 * z1 - w1 * w1))
        / (2 * den(z1, w1, z2, w2)),
        (2, 2): lambda z1, w1, z2, w2: h_2_sign * (mu * (z1 * z1 + w1 * w1) - p * (z2 * z2 + w2 * w2))
        / (2 * den(z1, w1, z2, w2)),
    }


def _spacelike_forms(mu, nu, t, corrected: bool) -> dict:
    q = t - 2 * nu + mu
    r = mu + t

    def den(z1, w1, z2, w2):
        return (z1 * z1 - z2 * z2 + w1 * w1 - w2 * w2) * q - 2 * r

    def g_t_num(z1, w1, z2, w2):
        # displayed with a bare z2 where the square z2^2 belongs
        z2sq = z2 * z2 if corrected else z2
        return z1 * z1 - z2sq + w1 * w1 - w2 * w2

    def g_2_num(z1, w1, z2, w2):
        # displayed as z1^2 - z2^2 + w1^2 - w2^2, which makes g_2 imaginary
        if corrected:
            return z1 * z1 - z2 * z2 - w1 * w1 + w2 * w2
        return z1 * z1 - z2 * z2 + w1 * w1 - w2 * w2

    def h_0_mixed(z1, w1, z2, w2):
        # displayed as -z1 w2 - w2 z1; the solved coefficient has -z1 w2 - w1 z2
        return z1 * w2 + (w1 * z2 if corrected else w2 * z1)

    return {
        (0, 0): lambda z1, w1, z2, w2: ((z1 * z1 + z2 * z2 + w1 * w1 + w2 * w2) * q
                                        - 2 * r * (z1 * w1 + z2 * w2)) / den(z1, w1, z2, w2),
        (0, 1): lambda z1, w1, z2, w2: 4 * I * nu * (z1 * z2 - w1 * w2) / den(z1, w1, z2, w2),
        (0, 2): lambda z1, w1, z2, w2: 2 * (r * (z1 * z2 + w1 * w2 - w1 * z2 - z1 * w2)
                                            + 2 * nu * (z1 * w2 + w1 * z2)) / den(z1, w1, z2, w2),
        (1, 0): lambda z1, w1, z2, w2: -2 * I * r * (z1 * w2 - w1 * z2) / den(z1, w1, z2, w2),
        (1, 1): lambda z1, w1, z2, w2: -2 * nu * g_t_num(z1, w1, z2, w2) / den(z1, w1, z2, w2),
        (1, 2): lambda z1, w1, z2, w2: I * r * g_2_num(z1, w1, z2, w2) / den(z1, w1, z2, w2),
        (2, 0): lambda z1, w1, z2, w2: -2 * (r * (z1 * z2 + w1 * w2 - h_0_mixed(z1, w1, z2, w2))
                                             - 2 * nu * (z1 * z2 + w1 * w2)) / den(z1, w1, z2, w2),
        (2, 1): lambda z1, w1, z2, w2: -2 * I * nu * (z1 * z1 + z2 * z2 - w1 * w1 - w2 * w2)
        / den(z1, w1, z2, w2),
        (2, 2): lambda z1, w1, z2, w2: -(2 * (2 * nu - mu - t) * (z1 * w1 + z2 * w2)
                                         + r * (z1 * z1 + z2 * z2 + w1 * w1 + w2 * w2))
        / den(z1, w1, z2, w2),
    }


TIMELIKE_NAMES = ("f_t", "f_1", "f_2", "g_t", "g_1", "g_2", "h_t", "h_1", "h_2")
SPACELIKE_NAMES = ("f_0", "f_t", "f_2", "g_0", "g_t", "g_2", "h_0", "h_t", "h_2")
# formulas whose display carries a misprint; see ``corrected`` below
DISPLAY_MISPRINTS = {TIMELIKE: ("g_t", "h_2"), SPACELIKE: ("g_t", "g_2", "h_0")}


@dataclass(frozen=True)
class ExpansionTable:
    case: str
    names: tuple
    formulas: dict = field(repr=False)
    denominator: Callable = field(repr=False)

    def evaluate(self, a: int, k: int, z1, z2):
        return self.formulas[(a, k)](z1, _conj(z1), z2, _conj(z2))


def expansion_table(case: str, g: DiagonalMetric, t, corrected: bool = True) -> ExpansionTable:
    """Closed forms of the coefficients of X_a in the Killing frame.

    With ``corrected=False`` the formulas are taken literally as displayed,
    including the misprints listed in DISPLAY_MISPRINTS.
    """
    lam, mu, nu = g.diag
    t = Fraction(t)
    if case == TIMELIKE:
        forms = _timelike_forms(lam, mu, t, corrected)
        p = lam - t + mu
        return ExpansionTable(case, TIMELIKE_NAMES, forms,
                              lambda z1, w1, z2, w2: p * z2 * w2 + mu * z1 * w1)
    if case == SPACELIKE:
        forms = _spacelike_forms(mu, nu, t, corrected)
        q, r = t - 2 * nu + mu, mu + t
        return ExpansionTable(case, SPACELIKE_NAMES, forms,
                              lambda z1, w1, z2, w2: (z1 * z1 - z2 * z2 + w1 * w1 - w2 * w2) * q - 2 * r)
    raise ValueError(f"no displayed expansion for {case!r}")


def _check_case(case: str, g: DiagonalMetric, t):
    lam, mu, nu = g.diag
    t = Fraction(t)
    if case == TIMELIKE:
        if mu != nu or -lam == mu:
            raise ValueError("timelike expansion needs -lambda != mu = nu")
        if t == lam + 2 * mu:
            raise ValueError("t = lambda + 2 mu is the degenerate value")
    elif case == SPACELIKE:
        if -lam != nu or nu == mu:
            raise ValueError("spacelike expansion needs -lambda = nu != mu")
        if t == 2 * nu - mu:
            raise ValueError("t = 2 nu - mu is the degenerate value")


def verify_expansion(case: str, g: DiagonalMetric, t, points: Sequence[GroupPoint],
                     corrected: bool = True) -> CheckResult:
    """Solve the expansion exactly at each point and compare with the
    closed forms.  Singular points are skipped and counted."""
    _check_case(case, g, t)
    model = action_model(case, g, t)
    table = expansion_table(case, g, t, corrected)
    res = CheckResult(f"expansion:{case}", True)
    checked = skipped = 0
    mismatched = set()
    for Z in points:
        z1, z2 = Z.z1, Z.z2
        if table.denominator(z1, z1.conj(), z2, z2.conj()) == 0:
            skipped += 1
            continue
        coef = solve_expansion(model, z1, z2)
        if coef is None:
            skipped += 1
            continue
        checked += 1
        for a, k in product(FRAME, repeat=2):
            name = table.names[3 * a + k]
            try:
                closed = table.evaluate(a, k, z1, z2)
            except ZeroDivisionError:
                closed = None
            if closed != coef[a][k]:
                if name not in mismatched:
                    res.fail(f"{name} at {Z}: closed form {closed} != solved {coef[a][k]}")
                mismatched.add(name)
    res.details.update(points_checked=checked, points_skipped=skipped,
                       mismatched=sorted(mismatched))
    return res


# --------------------------------------------------------------------------
# Canonical connection from the action


def _structure_for(case: str, g: DiagonalMetric, t):
    if case == TIMELIKE:
        return catalog_family(Family.SLAMBDA, g, t)
    if case == SPACELIKE:
        return catalog_family(Family.SMU, g, t)
    return catalog_family(Family.S0, g)


def action_connection(case: str, g: DiagonalMetric, t=None) -> list:
    """gamma[k][a][b] of nabla~_{X_a} X_b at o from the rule
    nabla~_{K*} L*|_o = -[K, L]_m*|_o and the Leibniz expansion of the
    left-invariant fields through the Killing frame."""
    model = action_model(case, g, t)
    K = model.m_basis
    tau_K = [[_real(x) for x in model.tau(v)] for v in K]
    # nabla~_{K_j} K_k at o, in the left-invariant frame
    nk = [[None] * 3 for _ in FRAME]
    for j, k in product(FRAME, repeat=2):
        mc = model.m_part(model.bracket(K[j], K[k]))
        nk[j][k] = [-sum((mc[l] * tau_K[l][a] for l in FRAME), Fraction(0)) for a in FRAME]
    base = solve_expansion(model, ONE, ZERO)
    c0 = [[_real(x) for x in row] for row in base]
    gamma = [[[Fraction(0)] * 3 for _ in FRAME] for _ in FRAME]
    for a in FRAME:
        z1, z2 = ORIGIN.jet([Fraction(int(i == a)) for i in FRAME])
        jet = solve_expansion(model, z1, z2)
        for b in FRAME:
            out = [Fraction(0)] * 3
            for k in FRAME:
                dk = _real(jet[b][k].d)
                for m in FRAME:
                    out[m] += dk * tau_K[k][m]
                    # X_a|_o = sum_j c0[a][j] K_j|_o
                    for j in FRAME:
                        out[m] += c0[b][k] * c0[a][j] * nk[j][k][m]
            for m in FRAME:
                gamma[m][a][b] = out[m]
    return gamma


def connection_from_action(case: str, g: DiagonalMetric, t=None) -> CheckResult:
    """Compare the connection induced by the action at o with nabla - S."""
    if case != TRIVIAL:
        _check_case(case, g, t)
    S = _structure_for(case, g, t)
    expected = canonical_connection(levi_civita(g), S.tensor(), g).gamma
    got = action_connection(case, g, t)
    res = CheckResult(f"connection-from-action:{case}", True)
    nonzero = {}
    for k, a, b in product(FRAME, repeat=3):
        if got[k][a][b] != expected[k, a, b]:
            res.fail(f"gamma[{k},{a},{b}]: action {got[k][a][b]} != tensor {expected[k, a, b]}")
        if got[k][a][b] != 0:
            nonzero[f"nabla_X{a} X{b}|X{k}"] = got[k][a][b]
    res.details["nonzero"] = nonzero
    res.details["family"] = S.family.value
    return res


# --------------------------------------------------------------------------
# Hopf fibrations and the double cover


def pi0(z1, z2) -> tuple:
    """Timelike fibration to H^2(4): (t, Re y, Im y) of 1/2(|z1|^2+|z2|^2, -2i z1 z2)."""
    t = (z1 * _conj(z1) + z2 * _conj(z2)) / 2
    y = -I * z1 * z2
    return t, (y + _conj(y)) / 2, (y - _conj(y)) / _g(0, 2)


def pi1(z1, z2) -> tuple:
    """Spacelike fibration to AdS_2: 1/2(2 Im(conj z1 z2), z1^2 - z2^2)."""
    w = _conj(z1) * z2
    t = (w - _conj(w)) / _g(0, 2)
    y = (z1 * z1 - z2 * z2) / 2
    return t, (y + _conj(y)) / 2, (y - _conj(y)) / _g(0, 2)


def piplus(z1, z2) -> tuple:
    """Lightlike fibration: z1 - i z2 as (Re, Im)."""
    y = z1 - I * z2
    return (y + _conj(y)) / 2, (y - _conj(y)) / _g(0, 2)


HOPF_MAPS = {
    "pi0": (pi0, (1, 0, 0), (1, 2)),
    "pi1": (pi1, (0, 1, 0), (0, 2)),
    "piplus": (piplus, (1, 1, 0), ()),
}
# the standard metric of H^3_1 on the left-invariant frame
STANDARD = (Fraction(-1), Fraction(1), Fraction(1))


def _differential(fn, Z: GroupPoint, direction) -> list:
    z1, z2 = Z.jet(direction)
    return [x.d for x in fn(z1, z2)]


def _lorentz(u, v):
    return -u[0] * v[0] + sum((a * b for a, b in zip(u[1:], v[1:])), ZERO)


def double_cover(Z: GroupPoint) -> list:
    """The displayed matrix A_Z in SO_0(1,2)."""
    z1, z2 = Z.z1, Z.z2
    w1, w2 = z1.conj(), z2.conj()

    def re(x):
        return x.re

    def im(x):
        return x.im

    m = [
        [z1.abs2() + z2.abs2(), 2 * re(-I * w1 * z2), 2 * im(-I * w1 * z2)],
        [-2 * re(I * z1 * z2), re(z1 * z1 - z2 * z2), im(w1 * w1 + w2 * w2)],
        [-2 * im(I * z1 * z2), im(z1 * z1 - z2 * z2), re(w1 * w1 + w2 * w2)],
    ]
    return [[Fraction(x) for x in row] for row in m]


def _mat3_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(3)), Fraction(0)) for j in range(3)]
            for i in range(3)]


def _det3_rational(m):
    return _det3(m)


def hopf_checks(which: str, points: Sequence[GroupPoint], seed: int = 0) -> CheckResult:
    res = CheckResult(f"hopf:{which}", True)
    if which == "doublecover":
        eta = [[Fraction(-1), 0, 0], [0, Fraction(1), 0], [0, 0, Fraction(1)]]
        rng = random.Random(f"pairs:{seed}")
        for Z in points:
            A = double_cover(Z)
            At = [list(r) for r in zip(*A)]
            if _mat3_mul(_mat3_mul(At, eta), A) != eta:
                res.fail(f"A_Z does not preserve diag(-1,1,1) at {Z}")
            if _det3_rational(A) != 1:
                res.fail(f"det A_Z != 1 at {Z}")
            if A[0][0] <= 0:
                res.fail(f"A_Z is not orthochronous at {Z}")
            minus = GroupPoint(-Z.z1, -Z.z2)
            if double_cover(minus) != A:
                res.fail(f"A_(-Z) != A_Z at {Z}")
        pairs = 0
        for Z in points:
            W = points[rng.randrange(len(points))]
            if double_cover(Z * W) != _mat3_mul(double_cover(Z), double_cover(W)):
                res.fail(f"A_ZW != A_Z A_W at ({Z}, {W})")
            pairs += 1
        res.details["pairs"] = pairs
        return res
    if which not in HOPF_MAPS:
        raise ValueError(f"unknown check {which!r}")
    fn, fiber, horizontal = HOPF_MAPS[which]
    frame = [[Fraction(int(i == a)) for i in FRAME] for a in FRAME]
    signs = set()
    for Z in points:
        if any(x != 0 for x in _differential(fn, Z, fiber)):
            res.fail(f"d{which} does not kill the fiber direction at {Z}")
        # the horizontal frame must map to a pseudo-orthonormal frame of the
        # ambient form -dt^2 + |dy|^2, up to one global sign
        for a, b in product(horizontal, repeat=2):
            val = _lorentz(_differential(fn, Z, frame[a]), _differential(fn, Z, frame[b]))
            if a != b:
                if val != 0:
                    res.fail(f"d{which} does not keep X{a}, X{b} orthogonal at {Z}")
            elif val == STANDARD[a]:
                signs.add(1)
            elif val == -STANDARD[a]:
                signs.add(-1)
            else:
                res.fail(f"d{which} rescales X{a} at {Z}")
    if len(signs) > 1:
        res.fail(f"d{which} is not a homothety of sign +-1 on the horizontal space")
    res.details["points"] = len(points)
    if signs:
        res.details["metric_sign"] = signs.pop()
    return res
