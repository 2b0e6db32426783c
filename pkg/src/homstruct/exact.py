"""Exact scalars, frame tensors, rational linear algebra and a small
polynomial toolkit.

Scalars are :class:`fractions.Fraction`.  Everything here is generic over
any exact field type supporting ``+ - * /`` and equality with ``0`` (the
lemma suite reuses it over a quadratic extension).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Callable, Iterable, Sequence

Rational = Fraction
DIM = 3
FRAME = range(DIM)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int/Fraction into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def is_zero(x) -> bool:
    return x == 0


# --------------------------------------------------------------------------
# Frame tensors


class Tensor:
    """Dense constant-coefficient tensor over the frame {X0, X1, X2}.

    ``layout`` is a string over ``"u"``/``"d"`` naming each slot as an upper
    (vector) or lower (covector) index.  Entries are stored row-major.
    """

    __slots__ = ("layout", "_data")

    def __init__(self, layout: str, data: Sequence):
        if any(ch not in "ud" for ch in layout):
            raise ValueError(f"bad layout {layout!r}")
        data = tuple(data)
        if len(data) != DIM ** len(layout):
            raise ValueError("entry count must be 3**rank")
        self.layout = layout
        self._data = data

    @classmethod
    def from_function(cls, layout: str, fn: Callable[..., object]) -> "Tensor":
        return cls(layout, [fn(*idx) for idx in product(FRAME, repeat=len(layout))])

    @classmethod
    def zeros(cls, layout: str) -> "Tensor":
        return cls(layout, [Fraction(0)] * DIM ** len(layout))

    @property
    def rank(self) -> int:
        return len(self.layout)

    @property
    def shape(self) -> tuple[int, ...]:
        return (DIM,) * self.rank

    def _offset(self, idx) -> int:
        off = 0
        for i in idx:
            off = off * DIM + i
        return off

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) != self.rank:
            raise IndexError("index rank mismatch")
        return self._data[self._offset(idx)]

    def entries(self) -> tuple:
        return self._data

    def items(self):
        return zip(product(FRAME, repeat=self.rank), self._data)

    def map(self, fn) -> "Tensor":
        return Tensor(self.layout, [fn(x) for x in self._data])

    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor) or other.layout != self.layout:
            raise ValueError("layout mismatch")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.layout, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.layout, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "Tensor":
        return Tensor(self.layout, [-a for a in self._data])

    def scale(self, k) -> "Tensor":
        return Tensor(self.layout, [k * a for a in self._data])

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._data)

    def nonzero(self) -> list:
        return [(idx, x) for idx, x in self.items() if x != 0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.layout == other.layout and all(
            a == b for a, b in zip(self._data, other._data)
        )

    def __hash__(self):
        return hash((self.layout, self._data))

    def __repr__(self) -> str:
        nz = ", ".join(f"{idx}: {x}" for idx, x in self.nonzero())
        return f"Tensor({self.layout!r}, {{{nz}}})"


# --------------------------------------------------------------------------
# Linear algebra


class Infeasible(Exception):
    """The linear system A x = b has no solution."""


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_inv(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> list | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span.

    ``basis`` must be linearly independent.
    """
    n = len(basis)
    if n == 0:
        return [] if all(x == 0 for x in v) else None
    rows = [[basis[i][k] for i in range(n)] + [v[k]] for k in range(len(v))]
    red, piv = rref(rows)
    if n in piv:
        return None
    coeffs = [Fraction(0)] * n
    for row, p in zip(red, piv):
        coeffs[p] = row[n]
    return coeffs


@dataclass(frozen=True)
class AffineSubspace:
    """``base + span(directions)`` inside Q^n, directions in canonical RREF."""

    base: tuple
    directions: tuple

    @property
    def dimension(self) -> int:
        return len(self.directions)

    @property
    def ambient(self) -> int:
        return len(self.base)

    @classmethod
    def make(cls, base: Sequence, directions: Iterable[Sequence]) -> "AffineSubspace":
        dirs, piv = rref([list(d) for d in directions])
        base = list(base)
        for row, p in zip(dirs, piv):
            if base[p] != 0:
                f = base[p]
                base = [x - f * y for x, y in zip(base, row)]
        return cls(tuple(base), tuple(tuple(d) for d in dirs))

    def point(self, params: Sequence) -> tuple:
        if len(params) != self.dimension:
            raise ValueError("parameter count mismatch")
        out = list(self.base)
        for c, d in zip(params, self.directions):
            out = [x + c * y for x, y in zip(out, d)]
        return tuple(out)

    def contains_point(self, x: Sequence) -> bool:
        diff = [a - b for a, b in zip(x, self.base)]
        return solve_in_span(self.directions, diff) is not None

    def contains(self, other: "AffineSubspace") -> bool:
        if not self.contains_point(other.base):
            return False
        return all(solve_in_span(self.directions, d) is not None for d in other.directions)

    def restrict(self, row: Sequence, rhs) -> "AffineSubspace":
        """Intersect with the hyperplane ``row . x = rhs``; may raise Infeasible."""
        # in parameters p: (row . D) p = rhs - row . base
        coeffs = [sum((a * b for a, b in zip(row, d)), Fraction(0)) for d in self.directions]
        const = rhs - sum((a * b for a, b in zip(row, self.base)), Fraction(0))
        sub = rref_solve([coeffs], [const]) if coeffs else None
        if sub is None:
            if const != 0:
                raise Infeasible("inconsistent restriction")
            return self
        return self.compose(sub)

    def compose(self, sub: "AffineSubspace") -> "AffineSubspace":
        """Image of the parameter-space subspace ``sub`` under this parametrization."""
        base = self.point(sub.base)
        dirs = []
        for d in sub.directions:
            v = [Fraction(0)] * self.ambient
            for c, dd in zip(d, self.directions):
                v = [x + c * y for x, y in zip(v, dd)]
            dirs.append(v)
        return AffineSubspace.make(base, dirs)


def rref_solve(a: Sequence[Sequence], b: Sequence) -> AffineSubspace:
    """Exact affine solution set of ``a x = b``; raises Infeasible."""
    if not a:
        raise ValueError("empty system")
    n = len(a[0])
    red, piv = rref([list(row) + [rhs] for row, rhs in zip(a, b)])
    if n in piv:
        raise Infeasible("rank(A) < rank([A|b])")
    base = [Fraction(0)] * n
    for row, p in zip(red, piv):
        base[p] = row[n]
    free = [j for j in range(n) if j not in piv]
    dirs = []
    for f in free:
        d = [Fraction(0)] * n
        d[f] = Fraction(1)
        for row, p in zip(red, piv):
            d[p] = -row[f]
        dirs.append(d)
    return AffineSubspace.make(base, dirs)


# --------------------------------------------------------------------------
# Polynomials


class MultiPoly:
    """Sparse multivariate polynomial with exact coefficients.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    coefficients.  Arithmetic requires identical variable tuples.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: dict | None = None):
        self.variables = tuple(variables)
        self.terms = {e: Fraction(c) if isinstance(c, int) else c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, variables, c) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): Fraction(c)})

    @classmethod
    def var(cls, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        e = tuple(int(v == name) for v in variables)
        return cls(variables, {e: Fraction(1)})

    @classmethod
    def affine(cls, variables, coeffs: Sequence, const=0) -> "MultiPoly":
        variables = tuple(variables)
        n = len(variables)
        terms = {(0,) * n: Fraction(const)}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return cls(variables, terms)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("variable mismatch")
            return other
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return MultiPoly(self.variables)
            return MultiPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, MultiPoly):
            raise TypeError("polynomial division unsupported")
        return self * (1 / Fraction(k) if not isinstance(k, Fraction) else 1 / k)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def linear_coeffs(self) -> list:
        n = len(self.variables)
        out = [Fraction(0)] * n
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def evaluate(self, values: Sequence):
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def substitute(self, new_variables: Sequence[str], images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace each variable by a polynomial in ``new_variables``."""
        result = MultiPoly(new_variables)
        for e, c in self.terms.items():
            term = MultiPoly.constant(new_variables, c)
            for img, k in zip(images, e):
                for _ in range(k):
                    term = term * img
            result = result + term
        return result

    def used_variables(self) -> set[str]:
        return {v for e in self.terms for v, k in zip(self.variables, e) if k}

    def homogenized_matrix(self) -> list[list[Fraction]]:
        """Symmetric (n+1)x(n+1) matrix M with p(x) = [1,x]^T M [1,x] (degree <= 2)."""
        if self.degree() > 2:
            raise ValueError("degree > 2")
        n = len(self.variables)
        m = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for e, c in self.terms.items():
            idx = [i + 1 for i, k in enumerate(e) for _ in range(k)]
            if not idx:
                m[0][0] += c
            elif len(idx) == 1:
                m[0][idx[0]] += c / 2
                m[idx[0]][0] += c / 2
            elif idx[0] == idx[1]:
                m[idx[0]][idx[0]] += c
            else:
                m[idx[0]][idx[1]] += c / 2
                m[idx[1]][idx[0]] += c / 2
        return m

    def normalized(self) -> tuple[Fraction, "MultiPoly"]:
        """(lead, p / lead) with the leading coefficient (graded-lex max) set to 1."""
        if self.is_zero():
            return Fraction(1), self
        lead_e = max(self.terms, key=lambda e: (sum(e), e))
        lead = self.terms[lead_e]
        return lead, self * (1 / lead)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


class NotFactorable(Exception):
    """The quadratic is irreducible over the rationals (or has degree > 2)."""


def poly_factor_affine(p: MultiPoly) -> tuple[Fraction, list[MultiPoly]]:
    """Split a polynomial of degree <= 2 into affine factors over Q.

    Returns ``(constant, factors)`` with ``constant * prod(factors) == p``
    exactly and every factor normalized to leading coefficient 1.  Raises
    NotFactorable when no such split exists.
    """
    if p.is_zero():
        raise NotFactorable("zero polynomial")
    deg = p.degree()
    if deg > 2:
        raise NotFactorable("degree > 2")
    if deg <= 1:
        if deg == 0:
            return p.constant_term(), []
        lead, f = p.normalized()
        return lead, [f]
    names = p.variables
    m = p.homogenized_matrix()
    size = len(m)
    r = rank(m)
    if r > 2:
        raise NotFactorable("rank of quadratic form exceeds 2")
    # a nonsingular principal r x r submatrix always exists for symmetric M
    from itertools import combinations

    for idx in combinations(range(size), r):
        sub = [[m[i][j] for j in idx] for i in idx]
        if rank(sub) == r:
            break
    else:  # pragma: no cover - impossible for symmetric matrices
        raise NotFactorable("no principal minor")
    ginv = mat_inv(sub)
    # p = y^T G y with y_k = sum_i m[i][idx_k] * xh_i, xh = (1, x)
    ys = []
    for j in idx:
        col = [m[i][j] for i in range(size)]
        ys.append(MultiPoly.affine(names, col[1:], col[0]))
    if r == 1:
        k = ginv[0][0]
        lead, f = ys[0].normalized()
        return k * lead * lead, [f, f]
    g11, g12, g22 = ginv[0][0], ginv[0][1], ginv[1][1]
    y1, y2 = ys
    if g11 == 0:
        f1, f2 = y2, y2 * g22 + y1 * (2 * g12)
        const = Fraction(1)
    else:
        disc = g12 * g12 - g11 * g22
        root = rational_sqrt(disc)
        if root is None:
            raise NotFactorable("binary form is anisotropic over Q")
        r1 = (-g12 + root) / g11
        r2 = (-g12 - root) / g11
        f1, f2 = y1 - y2 * r1, y1 - y2 * r2
        const = g11
    l1, f1 = f1.normalized()
    l2, f2 = f2.normalized()
    const = const * l1 * l2
    factors = sorted([f1, f2], key=repr)
    return const, factors


# --------------------------------------------------------------------------
# Parameter sampling


class MetricCase(str, enum.Enum):
    GENERIC = "generic"
    TIMELIKE = "timelike"  # -lambda != mu = nu
    SPACELIKE_NU = "spacelike_nu"  # -lambda = nu != mu
    SPACELIKE_MU = "spacelike_mu"  # -lambda = mu != nu
    SYMMETRIC = "symmetric"  # -lambda = mu = nu

    @classmethod
    def classify(cls, lam, mu, nu) -> "MetricCase":
        a, b, c = -lam, mu, nu
        if a == b == c:
            return cls.SYMMETRIC
        if b == c:
            return cls.TIMELIKE
        if a == c:
            return cls.SPACELIKE_NU
        if a == b:
            return cls.SPACELIKE_MU
        return cls.GENERIC


POOL_NUM = 1000
POOL_DEN = 1000


def random_rational(rng: random.Random, num: int = POOL_NUM, den: int = POOL_DEN) -> Fraction:
    """p/q with p in [-num, num], q in [1, den]."""
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _positive(rng, perfect_square, num, den):
    while True:
        if perfect_square:
            root = Fraction(rng.randint(1, 40), rng.randint(1, 12))
            return root * root
        x = abs(random_rational(rng, num, den))
        if x != 0:
            return x


def sample_params(
    case: MetricCase,
    seed: int,
    count: int,
    perfect_square: bool = False,
    num: int = POOL_NUM,
    den: int = POOL_DEN,
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Deterministic rational (lambda, mu, nu) triples satisfying ``case``.

    lambda != 0 and mu, nu > 0 always; with ``perfect_square`` each of
    |lambda|, mu, nu is the square of a rational.  The Generic case keeps a
    random sign on lambda, the others are Lorentzian by construction.
    """
    if count <= 0:
        raise ValueError("count must be >= 1")
    case = MetricCase(case)
    rng = random.Random(f"{case.value}:{seed}:{int(perfect_square)}")
    out: list[tuple[Fraction, Fraction, Fraction]] = []
    while len(out) < count:
        a = _positive(rng, perfect_square, num, den)
        b = _positive(rng, perfect_square, num, den)
        c = _positive(rng, perfect_square, num, den)
        sign = rng.choice((-1, 1))
        if case is MetricCase.GENERIC:
            lam, mu, nu = sign * a, b, c
        elif case is MetricCase.TIMELIKE:
            lam, mu, nu = sign * a, b, b
        elif case is MetricCase.SPACELIKE_NU:
            lam, mu, nu = -c, b, c
        elif case is MetricCase.SPACELIKE_MU:
            lam, mu, nu = -b, b, c
        else:
            lam, mu, nu = -b, b, b
        if MetricCase.classify(lam, mu, nu) is case and (lam, mu, nu) not in out:
            out.append((lam, mu, nu))
    return out


# --------------------------------------------------------------------------
# Quadratic extension


class QuadSurd:
    """a + b*sqrt(d) over the field generated by earlier square roots.

    ``base`` is the tower (d1, ..., dk) of rationals already adjoined; ``a``
    and ``b`` live in Q(sqrt d1, ..., sqrt dk) and ``d`` must not be a
    square there (only checked against Q; :func:`sqrt_rational` guarantees
    it for towers it builds).
    """

    __slots__ = ("a", "b", "d", "base")

    def __init__(self, a, b=0, d=2, base: tuple = ()):
        d = Fraction(d)
        if not base and rational_sqrt(d) is not None:
            raise ValueError("d must not be a rational square")
        self.base = tuple(base)
        self.d = d
        self.a = lift(a, self.base)
        self.b = lift(b, self.base)

    @property
    def tower(self) -> tuple:
        return self.base + (self.d,)

    @classmethod
    def sqrt(cls, d=2, base: tuple = ()) -> "QuadSurd":
        return cls(0, 1, d, base)

    def _coerce(self, other):
        """Both operands embedded in the larger of the two fields."""
        to = tower_of(other)
        if to is None:
            return None
        mine = self.tower
        if to == mine:
            return self, other
        if len(to) < len(mine) and mine[: len(to)] == to:
            return self, lift(other, mine)
        if len(to) > len(mine) and to[: len(mine)] == mine:
            return lift(self, to), other
        raise ValueError("scalars from incompatible fields")

    def _new(self, a, b) -> "QuadSurd":
        # a, b already live in the base field; skip validation and lifting
        out = object.__new__(QuadSurd)
        out.a = a if not isinstance(a, int) else Fraction(a)
        out.b = b if not isinstance(b, int) else Fraction(b)
        out.d = self.d
        out.base = self.base
        return out

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x._new(x.a + y.a, x.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x._new(x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return self._new(self.a, -self.b)

    def norm(self):
        """a^2 - d b^2, an element of the base field."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return self._new(self.a / n, -self.b / n)

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x * (y.inverse() if isinstance(y, QuadSurd) else 1 / y)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        out = lift(Fraction(1), self.tower)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            pair = self._coerce(other)
        except ValueError:
            return False
        if pair is None:
            return NotImplemented
        x, y = pair
        if not isinstance(y, QuadSurd):
            return x.b == 0 and x.a == y
        return x.a == y.a and x.b == y.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.tower))

    def rational_value(self) -> Fraction | None:
        if self.b != 0:
            return None
        return self.a if isinstance(self.a, Fraction) else self.a.rational_value()

    def __repr__(self) -> str:
        if self.b == 0:
            return repr(self.a) if isinstance(self.a, QuadSurd) else str(self.a)
        return f"({self.a!r} + {self.b!r}*sqrt({self.d}))"


def tower_of(x):
    if isinstance(x, QuadSurd):
        return x.tower
    if isinstance(x, (int, Fraction)):
        return ()
    return None


def lift(x, tower: tuple):
    """Embed a scalar into the field with the given tower of square roots."""
    t = tower_of(x)
    if t == tuple(tower):
        return x if not isinstance(x, int) else Fraction(x)
    if t is None or len(t) > len(tower) or tuple(tower[: len(t)]) != t:
        raise ValueError("cannot embed scalar into this field")
    return QuadSurd(lift(x, tower[:-1]), 0, tower[-1], tuple(tower[:-1]))


def sqrt_rational(q, tower: tuple = ()) -> tuple[object, tuple]:
    """Square root of a positive rational inside Q(sqrt of tower), extending
    the tower when needed.  Returns (root, tower)."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    r = rational_sqrt(q)
    if r is not None:
        return r, tuple(tower)
    # sqrt(q) = sqrt(q * prod d_i) / prod sqrt(d_i) for some subset of the tower
    n = len(tower)
    for mask in range(1, 1 << n):
        prod = Fraction(1)
        root = Fraction(1)
        for i in range(n):
            if mask >> i & 1:
                prod *= tower[i]
        r = rational_sqrt(q * prod)
        if r is None:
            continue
        elem = lift(r / prod, tower)
        for i in range(n):
            if mask >> i & 1:
                elem = elem * lift(QuadSurd.sqrt(tower[i], tuple(tower[:i])), tower)
        return elem, tuple(tower)
    new = tuple(tower) + (q,)
    return QuadSurd.sqrt(q, tuple(tower)), new
