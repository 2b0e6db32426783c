"""su(1,1) with diagonal left-invariant metrics: Levi-Civita connection,
curvature and covariant derivatives of constant frame tensors.

Index conventions (all frame components, summed over the frame):

* structure constants ``c[k, i, j]``: [X_i, X_j] = c^k_ij X_k
* connections ``gamma[k, i, j]``: nabla_{X_i} X_j = gamma^k_ij X_k, so the
  connection one-forms are omega^i_j(X_k) = gamma^i_kj
* curvature ``r[l, i, j, k]``: R(X_i, X_j) X_k = R^l_ijk X_l with
  R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
* the (0,3) tensor of a homogeneous structure is S(X,Y,Z) = g(S_X Y, Z)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exact import DIM, FRAME, Tensor, parse_rational


def _sum(values):
    total = Fraction(0)
    for v in values:
        if v != 0:
            total = v + total
    return total


class StructureConstants:
    """Bracket table of a 3-dimensional Lie algebra on the frame."""

    def __init__(self, c: Tensor):
        if c.layout != "udd":
            raise ValueError("structure constants use layout 'udd'")
        self.c = c

    @classmethod
    def su11(cls) -> "StructureConstants":
        table = {(0, 1): (2, 2), (1, 2): (0, -2), (2, 0): (1, 2)}

        def entry(k, i, j):
            if (i, j) in table and table[(i, j)][0] == k:
                return Fraction(table[(i, j)][1])
            if (j, i) in table and table[(j, i)][0] == k:
                return Fraction(-table[(j, i)][1])
            return Fraction(0)

        return cls(Tensor.from_function("udd", entry))

    @classmethod
    def abelian(cls) -> "StructureConstants":
        return cls(Tensor.zeros("udd"))

    def bracket(self, x, y) -> list:
        """[x, y] for frame coordinate vectors."""
        return [
            _sum(self.c[k, i, j] * x[i] * y[j] for i in FRAME for j in FRAME)
            for k in FRAME
        ]

    def antisymmetry_violations(self) -> list:
        return [
            (k, i, j)
            for k, i, j in product(FRAME, repeat=3)
            if self.c[k, i, j] != -self.c[k, j, i]
        ]

    def jacobi_violations(self) -> list:
        c = self.c
        bad = []
        for i, j, k, l in product(FRAME, repeat=4):
            s = _sum(
                c[m, i, j] * c[l, m, k] + c[m, j, k] * c[l, m, i] + c[m, k, i] * c[l, m, j]
                for m in FRAME
            )
            if s != 0:
                bad.append((i, j, k, l))
        return bad

    def is_valid(self) -> bool:
        return not self.antisymmetry_violations() and not self.jacobi_violations()


SU11 = StructureConstants.su11()


@dataclass(frozen=True)
class DiagonalMetric:
    """g = lam theta0^2 + mu theta1^2 + nu theta2^2 on the frame."""

    lam: Fraction
    mu: Fraction
    nu: Fraction

    def __post_init__(self):
        for name in ("lam", "mu", "nu"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if self.lam == 0 or self.mu == 0 or self.nu == 0:
            raise ValueError("degenerate metric: lam*mu*nu = 0")

    @classmethod
    def checked(cls, lam, mu, nu) -> "DiagonalMetric":
        """Construct and enforce mu, nu > 0."""
        g = cls(lam, mu, nu)
        if g.mu <= 0 or g.nu <= 0:
            raise ValueError("mu and nu must be positive")
        return g

    @property
    def diag(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.lam, self.mu, self.nu)

    def __getitem__(self, i: int) -> Fraction:
        return self.diag[i]

    def tensor(self) -> Tensor:
        return Tensor.from_function("dd", lambda i, j: self.diag[i] if i == j else Fraction(0))

    def inner(self, x, y):
        return _sum(self.diag[i] * x[i] * y[i] for i in FRAME)

    @property
    def lorentzian(self) -> bool:
        return self.lam < 0

    def as_tuple(self) -> tuple:
        return self.diag


@dataclass(frozen=True)
class Connection:
    gamma: Tensor
    tag: str = "raw"

    def __post_init__(self):
        if self.gamma.layout != "udd":
            raise ValueError("connection coefficients use layout 'udd'")

    def apply(self, i: int, j: int) -> list:
        """Frame coordinates of nabla_{X_i} X_j."""
        return [self.gamma[k, i, j] for k in FRAME]

    def form(self, i: int, j: int) -> list:
        """omega^i_j as coefficients on (theta0, theta1, theta2)."""
        return [self.gamma[i, k, j] for k in FRAME]


def koszul_connection(alg: StructureConstants, g: DiagonalMetric) -> Connection:
    """Levi-Civita connection of a left-invariant diagonal metric."""
    if g.lam * g.mu * g.nu == 0:
        raise ValueError("degenerate metric")
    c = alg.c
    d = g.diag

    # 2 g(nabla_i X_j, X_l) = g([i,j],l) - g([j,l],i) + g([l,i],j)
    def entry(l, i, j):
        return (c[l, i, j] * d[l] - c[i, j, l] * d[i] + c[j, l, i] * d[j]) / (2 * d[l])

    return Connection(Tensor.from_function("udd", entry), "levi-civita")


def levi_civita(g: DiagonalMetric) -> Connection:
    return koszul_connection(SU11, g)


def torsion(conn: Connection, alg: StructureConstants) -> Tensor:
    """T^k_ij = gamma^k_ij - gamma^k_ji - c^k_ij."""
    return Tensor.from_function(
        "udd", lambda k, i, j: conn.gamma[k, i, j] - conn.gamma[k, j, i] - alg.c[k, i, j]
    )


@dataclass(frozen=True)
class CurvatureTensor:
    r: Tensor

    def endomorphism(self, i: int, j: int) -> list[list]:
        """Matrix M with M[l][k] = R^l_ijk, i.e. the map X_k -> R(X_i,X_j)X_k."""
        return [[self.r[l, i, j, k] for k in FRAME] for l in FRAME]

    def lowered(self, g: DiagonalMetric) -> Tensor:
        """(0,4) layout R(X_i,X_j,X_k,X_l) = g(R(X_i,X_j)X_k, X_l)."""
        return Tensor.from_function("dddd", lambda i, j, k, l: self.r[l, i, j, k] * g[l])

    def component(self, a: int, b: int, c: int, d: int):
        """Component R^a_bcd in the a-th slot of R(X_c, X_d) X_b."""
        return self.r[a, c, d, b]


def curvature(conn: Connection, alg: StructureConstants) -> CurvatureTensor:
    G = conn.gamma
    c = alg.c

    def entry(l, i, j, k):
        return _sum(G[m, j, k] * G[l, i, m] - G[m, i, k] * G[l, j, m] for m in FRAME) - _sum(
            c[m, i, j] * G[l, m, k] for m in FRAME
        )

    return CurvatureTensor(Tensor.from_function("uddd", entry))


def covariant_derivative(conn: Connection, T: Tensor, alg: StructureConstants | None = None) -> Tensor:
    """nabla T for a constant-coefficient frame tensor.

    The derivative index is prepended as a lower slot.  ``alg`` is accepted
    for symmetry with the other operations; constant coefficients make the
    frame derivatives of the components vanish so it is unused.
    """
    if T.rank > 4:
        raise ValueError("rank > 4 not supported")
    G = conn.gamma
    layout = T.layout

    def entry(i, *idx):
        terms = []
        for s, kind in enumerate(layout):
            for m in FRAME:
                moved = idx[:s] + (m,) + idx[s + 1:]
                if kind == "u":
                    coef = G[idx[s], i, m]
                    if coef != 0:
                        terms.append(coef * T[moved])
                else:
                    coef = G[m, i, idx[s]]
                    if coef != 0:
                        terms.append(-(coef * T[moved]))
        return _sum(terms)

    return Tensor.from_function("d" + layout, entry)


def canonical_connection(base: Connection, S: Tensor, g: DiagonalMetric) -> Connection:
    """nabla - S with S the (0,3) tensor S(X,Y,Z) = g(S_X Y, Z)."""
    if S.layout != "ddd":
        raise ValueError("S must be a (0,3) tensor")
    return Connection(
        Tensor.from_function("udd", lambda k, i, j: base.gamma[k, i, j] - S[i, j, k] / g[k]),
        "canonical",
    )


def raise_last(S: Tensor, g: DiagonalMetric) -> Tensor:
    """(1,2) form S^k_ij = S_ijk / g_kk, i.e. S_{X_i} X_j = S^k_ij X_k."""
    return Tensor.from_function("udd", lambda k, i, j: S[i, j, k] / g[k])


@dataclass(frozen=True)
class KKParams:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    kappa: Fraction
    nondegenerate: bool = field(default=False)
    riemannian: bool = field(default=False)


def kk_correspondence(lam, mu, nu, kappa) -> KKParams:
    """Constants (a, b, c, d) of the g-natural metric on the unit tangent
    bundle of H^2(-kappa/4) matching g_{lam mu nu}."""
    lam, mu, nu, kappa = map(parse_rational, (lam, mu, nu, kappa))
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    a = 4 * lam / kappa
    b = Fraction(0)
    c = mu - 4 * lam / kappa
    d = nu - mu
    nondeg = a * (a + c) * (a + c + d) != 0
    riem = a * (a + c) - b * b > 0 and a > 0 and a + c + d > 0
    return KKParams(a, b, c, d, kappa, nondeg, riem)


def closed_form_connection(g: DiagonalMetric) -> Tensor:
    """Levi-Civita coefficients gamma[k, i, j] from the closed-form connection
    one-forms omega^k_j = sum_i gamma^k_ij theta^i."""
    lam, mu, nu = g.diag
    forms = {
        (0, 1): (2, (lam - mu + nu) / lam),
        (0, 2): (1, -(lam + mu - nu) / lam),
        (1, 0): (2, -(lam - mu + nu) / mu),
        (1, 2): (0, -(lam + mu + nu) / mu),
        (2, 0): (1, (lam + mu - nu) / nu),
        (2, 1): (0, (lam + mu + nu) / nu),
    }

    def entry(k, i, j):
        slot = forms.get((k, j))
        return slot[1] if slot is not None and slot[0] == i else Fraction(0)

    return Tensor.from_function("udd", entry)


def closed_form_curvature(g: DiagonalMetric) -> Tensor:
    """R^l_ijk from the closed-form curvature endomorphisms R(X_i, X_j)."""
    lam, mu, nu = g.diag
    a01 = lam / nu + 2 * mu / nu - 2 + mu**2 / (lam * nu) + 2 * mu / lam - 3 * nu / lam
    b01 = -(lam**2) / (mu * nu) - 2 * lam / nu + 2 * lam / mu - mu / nu - 2 + 3 * nu / mu
    a12 = -3 * lam / mu - 2 - 2 * nu / mu + mu / lam - 2 * nu / lam + nu**2 / (lam * mu)
    b12 = 3 * lam / nu + 2 * mu / nu + 2 - mu**2 / (lam * nu) + 2 * mu / lam - nu / lam
    a20 = -lam / mu + 2 - 2 * nu / mu + 3 * mu / lam - 2 * nu / lam - nu**2 / (lam * mu)
    b20 = lam**2 / (mu * nu) - 2 * lam / nu + 2 * lam / mu - 3 * mu / nu + 2 + nu / mu
    # (i, j) -> [(k, l, value)]: R(X_i, X_j) X_k = value X_l
    table = {
        (0, 1): [(1, 0, a01), (0, 1, b01)],
        (1, 2): [(2, 1, a12), (1, 2, b12)],
        (2, 0): [(2, 0, a20), (0, 2, b20)],
    }
    data = {}
    for (i, j), entries in table.items():
        for k, l, v in entries:
            data[(l, i, j, k)] = v
            data[(l, j, i, k)] = -v
    return Tensor.from_function("uddd", lambda l, i, j, k: data.get((l, i, j, k), Fraction(0)))


def space_form_curvature(g: DiagonalMetric, k) -> Tensor:
    """R^l_ijk of constant curvature: R(X,Y)Z = k (g(Y,Z) X - g(X,Z) Y)."""
    k = Fraction(k)
    d = g.diag

    def entry(l, i, j, m):
        v = Fraction(0)
        if j == m and l == i:
            v += d[j]
        if i == m and l == j:
            v -= d[i]
        return k * v

    return Tensor.from_function("uddd", entry)
