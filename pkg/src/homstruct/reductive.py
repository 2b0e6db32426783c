"""Reductive decompositions: holonomy of canonical connections, the
transvection algebra h + m rebuilt from (S, R~), Jacobi and reductivity
checks, isomorphism certificates and the reductive decompositions of
so(2,2) = su(1,1) + su(1,1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exact import FRAME, QuadSurd, Tensor, mat_inv, rank, rational_sqrt, rref, solve_in_span
from .lie import (
    SU11,
    CurvatureTensor,
    DiagonalMetric,
    canonical_connection,
    curvature,
    levi_civita,
    raise_last,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, message) -> None:
        self.ok = False
        self.failures.append(message)


def _zero_like(x):
    return x - x


def _vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def _vec_scale(k, v):
    return [k * a for a in v]


def _lin_comb(coeffs, vectors):
    out = [_zero_like(vectors[0][0])] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c != 0:
            out = _vec_add(out, _vec_scale(c, v))
    return out


# --------------------------------------------------------------------------
# Presentations


class LieAlgebraPresentation:
    """A Lie algebra on a named basis with an h/m split and a metric on m.

    ``table[i][j]`` is the coordinate vector of [e_i, e_j].
    """

    def __init__(
        self,
        names: Sequence[str],
        table: Sequence[Sequence[Sequence]],
        h: Sequence[int],
        m: Sequence[int],
        metric_on_m: Sequence[Sequence] | None = None,
    ):
        self.names = tuple(names)
        n = len(self.names)
        self.table = [[list(table[i][j]) for j in range(n)] for i in range(n)]
        self.h = tuple(h)
        self.m = tuple(m)
        if sorted(self.h + self.m) != list(range(n)):
            raise ValueError("h and m must partition the basis")
        self.metric_on_m = (
            [list(r) for r in metric_on_m] if metric_on_m is not None else None
        )

    @property
    def dim(self) -> int:
        return len(self.names)

    def basis_vector(self, i: int) -> list:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def bracket(self, x: Sequence, y: Sequence) -> list:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                coef = x[i] * y[j]
                out = [a + coef * b for a, b in zip(out, self.table[i][j])]
        return out

    def h_part(self, v: Sequence) -> list:
        return [v[i] for i in self.h]

    def m_part(self, v: Sequence) -> list:
        return [v[i] for i in self.m]

    def metric(self, x: Sequence, y: Sequence):
        """Metric of m applied to full coordinate vectors (their m-parts)."""
        xm, ym = self.m_part(x), self.m_part(y)
        return sum(
            (xm[a] * self.metric_on_m[a][b] * ym[b] for a in range(len(xm)) for b in range(len(ym))),
            Fraction(0),
        )

    def with_table_entry(self, i: int, j: int, value: Sequence) -> "LieAlgebraPresentation":
        """Copy with [e_i, e_j] replaced (and [e_j, e_i] set to its negative)."""
        table = [[list(v) for v in row] for row in self.table]
        table[i][j] = list(value)
        table[j][i] = [-a for a in value]
        return LieAlgebraPresentation(self.names, table, self.h, self.m, self.metric_on_m)

    def describe(self, i: int, j: int) -> str:
        terms = [
            f"{c}*{name}" for c, name in zip(self.table[i][j], self.names) if c != 0
        ]
        return f"[{self.names[i]},{self.names[j]}] = " + (" + ".join(terms) or "0")

    @classmethod
    def from_vectors(
        cls,
        ambient: "LieAlgebraPresentation",
        names: Sequence[str],
        vectors: Sequence[Sequence],
        h: Sequence[int],
        m: Sequence[int],
        metric_on_m=None,
    ) -> "LieAlgebraPresentation":
        """Presentation on a basis of a subalgebra given by ambient coordinates."""
        n = len(vectors)
        table = [[None] * n for _ in range(n)]
        for i, j in product(range(n), repeat=2):
            br = ambient.bracket(vectors[i], vectors[j])
            coeffs = solve_in_span(vectors, br)
            if coeffs is None:
                raise ValueError(f"span is not closed under [{names[i]},{names[j]}]")
            table[i][j] = coeffs
        return cls(names, table, h, m, metric_on_m)


def check_jacobi(p: LieAlgebraPresentation) -> CheckResult:
    res = CheckResult("jacobi", True)
    n = p.dim
    for i in range(n):
        if any(x != 0 for x in p.table[i][i]):
            res.fail(f"[{p.names[i]},{p.names[i]}] != 0")
            return res
        for j in range(i + 1, n):
            if any(a != -b for a, b in zip(p.table[i][j], p.table[j][i])):
                res.fail(f"antisymmetry fails for ({p.names[i]},{p.names[j]})")
                return res
    e = [p.basis_vector(i) for i in range(n)]
    for i, j, k in combinations(range(n), 3):
        s = _vec_add(
            _vec_add(
                p.bracket(e[i], p.table[j][k]),
                p.bracket(e[j], p.table[k][i]),
            ),
            p.bracket(e[k], p.table[i][j]),
        )
        if any(x != 0 for x in s):
            res.fail((p.names[i], p.names[j], p.names[k]))
            return res
    return res


def check_reductive(p: LieAlgebraPresentation) -> CheckResult:
    """[h, m] in m, [h, h] in h and ad(h) skew for the metric on m."""
    res = CheckResult("reductive", True)
    e = [p.basis_vector(i) for i in range(p.dim)]
    for u in p.h:
        for x in p.m:
            if any(c != 0 for c in p.h_part(p.table[u][x])):
                res.fail(f"[{p.names[u]},{p.names[x]}] leaves m")
        for v in p.h:
            if any(c != 0 for c in p.m_part(p.table[u][v])):
                res.fail(f"[{p.names[u]},{p.names[v]}] leaves h")
    if p.metric_on_m is not None:
        for u in p.h:
            for x, y in product(p.m, repeat=2):
                s = p.metric(p.table[u][x], e[y]) + p.metric(e[x], p.table[u][y])
                if s != 0:
                    res.fail(f"ad({p.names[u]}) not skew on ({p.names[x]},{p.names[y]})")
        if rank(p.metric_on_m) != len(p.m):
            res.fail("metric on m is degenerate")
    return res


# --------------------------------------------------------------------------
# Holonomy and the transvection algebra


def _structure_tensor(S) -> Tensor:
    return S if isinstance(S, Tensor) else S.tensor()


def canonical_curvature(g: DiagonalMetric, S) -> CurvatureTensor:
    conn = canonical_connection(levi_civita(g), _structure_tensor(S), g)
    return curvature(conn, SU11)


def _flat(mat):
    return [mat[a][b] for a in FRAME for b in FRAME]


def _unflat(vec):
    return [[vec[3 * a + b] for b in FRAME] for a in FRAME]


def _mat_mul3(a, b):
    return [[sum((a[i][k] * b[k][j] for k in FRAME), Fraction(0)) for j in FRAME] for i in FRAME]


def commutator(a, b):
    ab, ba = _mat_mul3(a, b), _mat_mul3(b, a)
    return [[ab[i][j] - ba[i][j] for j in FRAME] for i in FRAME]


def is_skew(mat, g: DiagonalMetric) -> bool:
    """g(A x, y) + g(x, A y) = 0 on the frame."""
    return all(mat[j][i] * g[j] + mat[i][j] * g[i] == 0 for i in FRAME for j in FRAME)


@dataclass
class HolonomySpan:
    generators: list  # 3x3 endomorphism matrices (columns are images of X_k)
    basis: list
    dimension: int
    closed: bool
    skew: bool


def _independent(mats):
    chosen, flats = [], []
    for mtx in mats:
        if rank(flats + [_flat(mtx)]) > len(flats):
            chosen.append(mtx)
            flats.append(_flat(mtx))
    return chosen


def holonomy_algebra(g: DiagonalMetric, S) -> HolonomySpan:
    """Lie algebra generated by the endomorphisms R~(X_i, X_j)."""
    R = canonical_curvature(g, S)
    gens = [R.endomorphism(i, j) for i, j in ((1, 2), (2, 0), (0, 1))]
    basis = _independent(gens)
    closed = True
    grew = True
    while grew:
        grew = False
        for a, b in combinations(list(basis), 2):
            c = commutator(a, b)
            if rank([_flat(x) for x in basis] + [_flat(c)]) > len(basis):
                basis.append(c)
                closed = False
                grew = True
    skew = all(is_skew(x, g) for x in gens)
    return HolonomySpan(gens, basis, len(basis), closed, skew)


def endomorphism_coords(mat, basis) -> list | None:
    return solve_in_span([_flat(b) for b in basis], _flat(mat))


def build_transvection_algebra(
    g: DiagonalMetric,
    S,
    h_basis: Sequence | None = None,
    h_names: Sequence[str] | None = None,
) -> LieAlgebraPresentation:
    """h + m with basis (h generators, X0, X1, X2).

    [X,Y] = S_X Y - S_Y X - R~(X,Y), [A,X] = A X, [A,B] = AB - BA.
    ``h_basis`` optionally fixes the endomorphisms used as h generators; it
    must span the holonomy algebra.
    """
    St = _structure_tensor(S)
    R = canonical_curvature(g, St)
    hol = holonomy_algebra(g, St)
    if h_basis is None:
        h_basis = hol.basis
    else:
        h_basis = [[list(r) for r in b] for b in h_basis]
        if rank([_flat(b) for b in h_basis]) != len(h_basis):
            raise ValueError("h basis is not independent")
        for b in hol.basis:
            if endomorphism_coords(b, h_basis) is None:
                raise ValueError("h basis does not contain the holonomy algebra")
        for b in h_basis:
            if endomorphism_coords(b, hol.basis) is None:
                raise ValueError("h basis exceeds the holonomy algebra")
    r = len(h_basis)
    n = r + 3
    names = list(h_names) if h_names else [f"U{a}" for a in range(r)]
    names += ["X0", "X1", "X2"]
    Sup = raise_last(St, g)
    zero = [Fraction(0)] * n
    table = [[list(zero) for _ in range(n)] for _ in range(n)]
    for a, b in product(range(r), repeat=2):
        coords = endomorphism_coords(commutator(h_basis[a], h_basis[b]), h_basis)
        if coords is None:
            raise ValueError("h basis not closed under commutators")
        table[a][b] = coords + [Fraction(0)] * 3
    for a in range(r):
        for i in FRAME:
            v = [Fraction(0)] * r + [h_basis[a][l][i] for l in FRAME]
            table[a][r + i] = v
            table[r + i][a] = [-x for x in v]
    for i, j in product(FRAME, repeat=2):
        hcoords = endomorphism_coords(R.endomorphism(i, j), h_basis)
        mpart = [Sup[k, i, j] - Sup[k, j, i] for k in FRAME]
        table[r + i][r + j] = [-x for x in hcoords] + mpart
    metric = [[g[i] if i == j else Fraction(0) for j in FRAME] for i in FRAME]
    return LieAlgebraPresentation(names, table, range(r), range(r, n), metric)


def check_torsion_reconstruction(p: LieAlgebraPresentation, g: DiagonalMetric, S) -> CheckResult:
    """m-part of [X_i, X_j] equals minus the torsion of nabla - S."""
    res = CheckResult("torsion-reconstruction", True)
    conn = canonical_connection(levi_civita(g), _structure_tensor(S), g)
    r = len(p.h)
    for i, j in product(FRAME, repeat=2):
        tors = [
            conn.gamma[k, i, j] - conn.gamma[k, j, i] - SU11.c[k, i, j] for k in FRAME
        ]
        if p.m_part(p.table[r + i][r + j]) != [-x for x in tors]:
            res.fail((i, j))
    return res


# --------------------------------------------------------------------------
# Isomorphisms


@dataclass
class IsomorphismCertificate:
    source: LieAlgebraPresentation
    target: LieAlgebraPresentation
    matrix: list  # column j = image of source basis j in target coordinates
    label: str = ""


def _column(mat, j):
    return [row[j] for row in mat]


def verify_isomorphism(cert: IsomorphismCertificate) -> CheckResult:
    src, tgt, M = cert.source, cert.target, cert.matrix
    res = CheckResult(f"isomorphism {cert.label}".strip(), True)
    if src.dim != tgt.dim or len(M) != tgt.dim or any(len(r) != src.dim for r in M):
        raise ValueError("dimension mismatch")
    if rank(M) != src.dim:
        res.fail("map is not invertible")
        return res
    images = [_column(M, j) for j in range(src.dim)]
    for i, j in combinations(range(src.dim), 2):
        lhs = _lin_comb(src.table[i][j], images)
        rhs = tgt.bracket(images[i], images[j])
        if lhs != rhs:
            res.fail(f"bracket [{src.names[i]},{src.names[j]}] not preserved")
            return res
    for i in src.m:
        if any(c != 0 for c in tgt.h_part(images[i])):
            res.fail(f"{src.names[i]} not mapped into m")
    for i in src.h:
        if any(c != 0 for c in tgt.m_part(images[i])):
            res.fail(f"{src.names[i]} not mapped into h")
    if src.metric_on_m is not None and tgt.metric_on_m is not None:
        e = [src.basis_vector(i) for i in range(src.dim)]
        for i, j in product(src.m, repeat=2):
            if tgt.metric(images[i], images[j]) != src.metric(e[i], e[j]):
                res.fail(f"not an isometry on ({src.names[i]},{src.names[j]})")
    return res


def _ad_on_m(p: LieAlgebraPresentation, u: int) -> list:
    """ad(e_u) restricted to m as a flat matrix in m coordinates."""
    return [p.table[u][x][y] for x in p.m for y in p.m]


def induced_certificate(
    source: LieAlgebraPresentation,
    target: LieAlgebraPresentation,
    m_map: Sequence[Sequence],
    label: str = "",
) -> IsomorphismCertificate:
    """Extend a linear map m -> m' (column j = image of the j-th m vector in
    target m coordinates) to h by matching the adjoint actions on m."""
    k = len(source.m)
    P = [list(r) for r in m_map]
    Pinv = mat_inv(P)
    tgt_ads = [_ad_on_m(target, u) for u in target.h]
    M = [[Fraction(0)] * source.dim for _ in range(target.dim)]
    for col, x in enumerate(source.m):
        for row, y in enumerate(target.m):
            M[y][x] = P[row][col]
    for u in source.h:
        # ad(u) as matrix A[y][x] acting on m coordinates, conjugated by P
        A = [[source.table[u][source.m[x]][source.m[y]] for x in range(k)] for y in range(k)]
        B = [
            [sum((P[a][b] * A[b][c] * Pinv[c][d] for b in range(k) for c in range(k)), Fraction(0)) for d in range(k)]
            for a in range(k)
        ]
        # target ad matrices in the same [row=y][col=x] orientation
        target_flats = [[t[x * k + y] for y in range(k) for x in range(k)] for t in tgt_ads]
        coords = solve_in_span(target_flats, [B[y][x] for y in range(k) for x in range(k)])
        if coords is None:
            raise ValueError(f"{source.names[u]} has no counterpart in the target h")
        for c, v in zip(coords, target.h):
            M[v][u] = c
    return IsomorphismCertificate(source, target, M, label)


def rebase(
    p: LieAlgebraPresentation,
    vectors: Sequence[Sequence],
    names: Sequence[str],
    h: Sequence[int],
    m: Sequence[int],
    metric_on_m=None,
) -> LieAlgebraPresentation:
    """Same algebra on a new basis (given in old coordinates)."""
    return LieAlgebraPresentation.from_vectors(p, names, vectors, h, m, metric_on_m)


# --------------------------------------------------------------------------
# su(1,1) + R: isometry algebras with a one-dimensional right factor


def su11_plus_center() -> LieAlgebraPresentation:
    """su(1,1) + R on (X0, X1, X2, C) with C central."""
    n = 4
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j in product(FRAME, repeat=2):
        table[i][j] = [SU11.c[k, i, j] for k in FRAME] + [Fraction(0)]
    return LieAlgebraPresentation(("X0", "X1", "X2", "C"), table, (), range(n))


def _tau_center(v, center_image):
    """Tangent vector at o of x + cC when C generates the Killing field
    ``center_image`` at o."""
    return [v[k] + v[3] * center_image[k] for k in FRAME]


def displayed_decomposition(
    family: str, g: DiagonalMetric, t
) -> tuple[LieAlgebraPresentation, CheckResult]:
    """The reductive decompositions written inside su(1,1) + R for the
    timelike family (R = the centre iI of u(1,1)) and the spacelike family
    (R = the central generator D acting through the right factor).

    Returns the presentation on (m0, m1, m2, h0) and a check that tau sends
    the m basis to the frame and kills h.
    """
    lam, mu, nu = g.diag
    t = Fraction(t)
    F = Fraction
    if family == "timelike":
        # diag(i, (1 + (lam - t)/mu) i) = a X0 + b iI
        a = -(lam - t) / (2 * mu)
        b = 1 + (lam - t) / (2 * mu)
        m = [[a, F(0), F(0), b], [F(0), F(1), F(0), F(0)], [F(0), F(0), F(1), F(0)]]
        h = [[F(-1, 2), F(0), F(0), F(1, 2)]]  # diag(0, i)
        center_image = [F(1), F(0), F(0)]  # iI generates X0 at o
    elif family == "spacelike":
        m = [
            [F(1), F(0), F(0), F(0)],
            [F(0), (mu + t) / (2 * nu), F(0), -(2 * nu - mu - t) / (2 * nu)],
            [F(0), F(0), F(1), F(0)],
        ]
        h = [[F(0), F(1), F(0), F(1)]]  # X1 + D
        center_image = [F(0), F(-1), F(0)]  # tau(D) = -X1
    else:
        raise ValueError(f"unknown displayed decomposition {family!r}")
    res = CheckResult(f"tau-{family}", True)
    for i, v in enumerate(m):
        want = [F(int(k == i)) for k in FRAME]
        if _tau_center(v, center_image) != want:
            res.fail(f"tau(m{i}) is not X{i}")
    if any(x != 0 for x in _tau_center(h[0], center_image)):
        res.fail("tau does not vanish on h")
    metric = [[g[i] if i == j else F(0) for j in FRAME] for i in FRAME]
    p = LieAlgebraPresentation.from_vectors(
        su11_plus_center(), ["m0", "m1", "m2", "h0"], m + h, h=[3], m=[0, 1, 2], metric_on_m=metric
    )
    return p, res


def hatted_relations(p: LieAlgebraPresentation, hat: dict) -> CheckResult:
    """Checks that the vectors in ``hat`` (keys U, X0, X1, X2, in the
    coordinates of p) satisfy the su(1,1) + R table with U central."""
    res = CheckResult("hatted-basis", True)
    X = [hat["X0"], hat["X1"], hat["X2"]]
    for i, j, k, sign in ((0, 1, 2, 2), (1, 2, 0, -2), (2, 0, 1, 2)):
        if p.bracket(X[i], X[j]) != _vec_scale(Fraction(sign), X[k]):
            res.fail(f"[X^{i}, X^{j}] != {sign} X^{k}")
    for i in FRAME:
        if any(c != 0 for c in p.bracket(hat["U"], X[i])):
            res.fail(f"U^ does not commute with X^{i}")
    if rank([hat["U"]] + X) != 4:
        res.fail("hatted vectors are not a basis")
    return res


# --------------------------------------------------------------------------
# su(1,1) + su(1,1)

SO22_NAMES = ("B0", "B1", "B2", "D0", "D1", "D2")
# the stabilizer of o acts on T_o by these endomorphisms (columns = images)
STABILIZER_ENDOMORPHISMS = (
    [[0, 0, 0], [0, 0, -2], [0, 2, 0]],  # 2(theta1 x X2 - theta2 x X1)
    [[0, 0, -2], [0, 0, 0], [-2, 0, 0]],  # -2(theta0 x X2 + theta2 x X0)
    [[0, 2, 0], [2, 0, 0], [0, 0, 0]],  # 2(theta0 x X1 + theta1 x X0)
)


def stabilizer_endomorphisms() -> list:
    return [[[Fraction(x) for x in row] for row in mat] for mat in STABILIZER_ENDOMORPHISMS]


def so22() -> LieAlgebraPresentation:
    """so(2,2) as su(1,1) + su(1,1) on B_i = (X_i, 0), D_i = (0, X_i)."""
    n = 6
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j in product(FRAME, repeat=2):
        br = [SU11.c[k, i, j] for k in FRAME]
        table[i][j] = br + [Fraction(0)] * 3
        table[3 + i][3 + j] = [Fraction(0)] * 3 + br
    return LieAlgebraPresentation(SO22_NAMES, table, (), range(n))


def pair(a: Sequence, b: Sequence) -> list:
    """Coordinates of (a, b) in the B/D basis."""
    return list(a) + list(b)


def tau(v: Sequence) -> list:
    """Tangent vector at o of (a, b): a + b^dagger in frame coordinates."""
    return [v[0] - v[3], v[1] + v[4], v[2] + v[5]]


def so22_elements(field_one=Fraction(1)) -> dict:
    """Named elements B_i, D_i, U_i (and lightlike combinations when the
    scalar field contains sqrt(2))."""
    one = field_one
    z = one - one
    e = lambda i: [one if k == i else z for k in range(3)]  # noqa: E731
    zero3 = [z, z, z]
    out = {}
    for i in FRAME:
        out[f"B{i}"] = pair(e(i), zero3)
        out[f"D{i}"] = pair(zero3, e(i))
    out["U0"] = pair(e(0), e(0))
    out["U1"] = pair(e(1), _vec_scale(-one, e(1)))
    out["U2"] = pair(e(2), _vec_scale(-one, e(2)))
    if isinstance(one, QuadSurd):
        r = QuadSurd(Fraction(1, 2), 0, one.d) * QuadSurd.sqrt(one.d)  # 1/sqrt(2) when d = 2
        for a, b, name in (("B0", "B1", "B"), ("U0", "U1", "U")):
            out[name + "+"] = _vec_scale(r, _vec_add(out[a], out[b]))
            out[name + "-"] = _vec_scale(r, _vec_add(out[a], _vec_scale(-one, out[b])))
    return out


def tau_metric(vectors: Sequence[Sequence], g: DiagonalMetric) -> list:
    """Pull back of g along tau restricted to the span of ``vectors``."""
    imgs = [tau(v) for v in vectors]
    return [[g.inner(a, b) for b in imgs] for a in imgs]


def decomposition(
    m_vectors: Sequence[Sequence],
    h_vectors: Sequence[Sequence],
    m_names: Sequence[str],
    h_names: Sequence[str],
    g: DiagonalMetric,
) -> LieAlgebraPresentation:
    """Presentation of m + h inside so(2,2) with the tau-induced metric."""
    vectors = list(m_vectors) + list(h_vectors)
    k = len(m_vectors)
    return LieAlgebraPresentation.from_vectors(
        so22(),
        list(m_names) + list(h_names),
        vectors,
        h=range(k, len(vectors)),
        m=range(k),
        metric_on_m=tau_metric(m_vectors, g),
    )


LEMMA_CASES = ("i", "ii", "iii", "iv", "v")


def lemma_decomposition(case_id: str, c=Fraction(0), mu=Fraction(1)) -> LieAlgebraPresentation:
    """The five reductive decompositions of so(2,2) containing su(1,1)_L.

    Cases (iii) and (iv) use lightlike combinations and live over Q(sqrt 2).
    """
    g = DiagonalMetric(-mu, mu, mu)
    if case_id in ("iii", "iv"):
        el = so22_elements(QuadSurd(1, 0, 2))
        c = QuadSurd(c, 0, 2)
    else:
        el = so22_elements()
        c = Fraction(c)

    def plus(a, b, k=1):
        return _vec_add(el[a], _vec_scale(k, el[b]))

    if case_id == "i":
        m, h, hn = [plus("B0", "U0", c), el["B1"], el["B2"]], [el["U0"]], ["U0"]
    elif case_id == "ii":
        m, h, hn = [el["B0"], plus("B1", "U1", c), el["B2"]], [el["U1"]], ["U1"]
    elif case_id == "iii":
        m, h, hn = [el["B+"], plus("B-", "U+", c), el["B2"]], [el["U+"]], ["U+"]
    elif case_id == "iv":
        m, h, hn = [el["B+"], el["B-"], el["B2"]], [el["U+"], el["U2"]], ["U+", "U2"]
    elif case_id == "v":
        m = [plus(f"B{i}", f"U{i}", c) for i in FRAME]
        h, hn = [el["U0"], el["U1"], el["U2"]], ["U0", "U1", "U2"]
    else:
        raise ValueError(f"unknown lemma case {case_id!r}")
    return decomposition(m, h, ["m0", "m1", "m2"], hn, g)


def curvature_generated_dimension(p: LieAlgebraPresentation) -> int:
    """Dimension of the span of the h-components of [m, m]."""
    rows = [p.h_part(p.table[x][y]) for x, y in combinations(p.m, 2)]
    return rank(rows) if p.h else 0


def isotropy_obstruction(p: LieAlgebraPresentation) -> CheckResult:
    """Passes when [m, m] has no h-component although h is non-trivial, so
    no curvature R~(X, Y) can generate the stabilizer."""
    res = CheckResult("isotropy-obstruction", True)
    d = curvature_generated_dimension(p)
    res.details["curvature_generated_dim"] = d
    res.details["h_dim"] = len(p.h)
    if not (len(p.h) > 0 and d == 0):
        res.fail(f"curvature part spans {d} of {len(p.h)} isotropy dimensions")
    return res


def require_square(x, label: str) -> Fraction:
    r = rational_sqrt(Fraction(x))
    if r is None:
        raise ValueError(
            f"{label} = {x} is not the square of a rational; choose parameters "
            "making it a perfect square (e.g. (c1, c2) = (3, 4))"
        )
    return r


def _element_check(res: CheckResult, p: LieAlgebraPresentation, lhs, rhs, label):
    if lhs != rhs:
        res.fail(label)


@dataclass
class Relation:
    left: str
    right: str
    expected: dict  # name -> coefficient
    label: str


def check_relations(elements: dict, relations: Sequence[Relation], name: str) -> CheckResult:
    """Verify [left, right] = sum(coeff * element) inside so(2,2)."""
    alg = so22()
    res = CheckResult(name, True)
    for rel in relations:
        lhs = alg.bracket(elements[rel.left], elements[rel.right])
        rhs = None
        for key, coef in rel.expected.items():
            term = _vec_scale(coef, elements[key])
            rhs = term if rhs is None else _vec_add(rhs, term)
        if rhs is None:
            rhs = [x - x for x in lhs]
        if lhs != rhs:
            res.fail(rel.label)
    res.details["relations"] = len(relations)
    return res


def verify_decomposition_case(case_id: str, **params) -> CheckResult:
    """Verify the bracket relations of a lemma case inside so(2,2).

    Case ids: ``"i"``..``"v"`` (the decompositions themselves, with ``c``),
    ``"general"`` (generator c0 U0 + c1 U1 + c2 U2), ``"timelike-gen"``
    (c0^2 > c1^2), ``"spacelike-gen"`` (c1^2 > c0^2), ``"null-plus"``,
    ``"null-minus"``, ``"null-swap"`` (the isometric exchange of the two
    lightlike decompositions, with ``c``) and ``"two-dim"`` (dim h = 2).
    """
    F = Fraction
    if case_id in LEMMA_CASES:
        c = params.get("c", F(1, 3))
        mu = params.get("mu", F(1))
        p = lemma_decomposition(case_id, c, mu)
        res = CheckResult(f"lemma-{case_id}", True)
        for sub in (check_jacobi(p), check_reductive(p)):
            if not sub.ok:
                res.fail(f"{sub.name}: {sub.failures[0]}")
        if case_id == "iv":
            obs = isotropy_obstruction(p)
            res.details.update(obs.details)
            if not obs.ok:
                res.fail(obs.failures[0])
        else:
            dim = curvature_generated_dimension(p)
            res.details["curvature_generated_dim"] = dim
            if c != 0 and dim != len(p.h):
                res.fail("curvature does not generate h")
        return res

    if case_id == "general":
        c0, c1, c2 = (F(params.get(k, d)) for k, d in (("c0", 2), ("c1", 3), ("c2", 4)))
        r = require_square(c1 * c1 + c2 * c2, "c1^2 + c2^2")
        el = so22_elements()
        el["w"] = _lin_comb([c0, c1, c2], [el["U0"], el["U1"], el["U2"]])
        el["v1"] = _vec_scale(1 / r, _vec_add(_vec_scale(c2, el["B1"]), _vec_scale(-c1, el["B2"])))
        el["v2"] = _vec_scale(1 / r, _vec_add(_vec_scale(c1, el["B1"]), _vec_scale(c2, el["B2"])))
        rels = [
            Relation("w", "B0", {"v1": 2 * r}, "[w,B0] = 2r v1"),
            Relation("w", "v1", {"B0": 2 * r, "v2": 2 * c0}, "[w,v1] = 2r B0 + 2c0 v2"),
            Relation("w", "v2", {"v1": -2 * c0}, "[w,v2] = -2c0 v1"),
            Relation("B0", "v1", {"v2": F(2)}, "[B0,v1] = 2v2"),
            Relation("v1", "v2", {"B0": F(-2)}, "[v1,v2] = -2B0"),
            Relation("v2", "B0", {"v1": F(2)}, "[v2,B0] = 2v1"),
        ]
        return check_relations(el, rels, "lemma-general-generator")

    if case_id in ("timelike-gen", "spacelike-gen"):
        timelike = case_id == "timelike-gen"
        c0 = F(params.get("c0", 5 if timelike else 3))
        c1 = F(params.get("c1", 3 if timelike else 5))
        el = so22_elements()
        if timelike:
            if c0 * c0 <= c1 * c1:
                raise ValueError("requires c0^2 > c1^2")
            r = require_square(c0 * c0 - c1 * c1, "c0^2 - c1^2")
            # generator taken with unit length, like w+ and w- below
            el["w"] = _vec_scale(1 / r, _lin_comb([c0, c1], [el["U0"], el["U1"]]))
            el["v0"] = _vec_scale(1 / r, _lin_comb([c1, c0], [el["B1"], el["B0"]]))
            el["v1"] = _vec_scale(1 / r, _lin_comb([c0, c1], [el["B1"], el["B0"]]))
            first = [
                Relation("w", "v0", {}, "[w,v0] = 0"),
                Relation("w", "v1", {"B2": F(2)}, "[w,v1] = 2B2"),
                Relation("w", "B2", {"v1": F(-2)}, "[w,B2] = -2v1"),
            ]
        else:
            if c1 * c1 <= c0 * c0:
                raise ValueError("requires c1^2 > c0^2")
            r = require_square(c1 * c1 - c0 * c0, "c1^2 - c0^2")
            el["w"] = _vec_scale(1 / r, _lin_comb([c0, c1], [el["U0"], el["U1"]]))
            el["v0"] = _vec_scale(1 / r, _lin_comb([c0, c1], [el["B1"], el["B0"]]))
            el["v1"] = _vec_scale(1 / r, _lin_comb([c1, c0], [el["B1"], el["B0"]]))
            first = [
                Relation("w", "v0", {"B2": F(-2)}, "[w,v0] = -2B2"),
                Relation("w", "v1", {}, "[w,v1] = 0"),
                Relation("w", "B2", {"v0": F(-2)}, "[w,B2] = -2v0"),
            ]
        rels = first + [
            Relation("v0", "v1", {"B2": F(2)}, "[v0,v1] = 2B2"),
            Relation("v1", "B2", {"v0": F(-2)}, "[v1,B2] = -2v0"),
            Relation("B2", "v0", {"v1": F(2)}, "[B2,v0] = 2v1"),
        ]
        return check_relations(el, rels, f"lemma-{case_id}")

    one = QuadSurd(1, 0, 2)
    el = so22_elements(one)
    el["w+"], el["w-"] = el["U+"], el["U-"]
    el["v+"], el["v-"] = el["B+"], el["B-"]
    el["w2"], el["v2"] = el["U2"], el["B2"]
    two = one * 2
    if case_id == "null-plus":
        rels = [
            Relation("w+", "v+", {}, "[w+,v+] = 0"),
            Relation("w+", "v-", {"B2": -two}, "[w+,v-] = -2B2"),
            Relation("w+", "B2", {"v+": -two}, "[w+,B2] = -2v+"),
        ]
    elif case_id == "null-minus":
        rels = [
            Relation("w-", "v+", {"B2": two}, "[w-,v+] = 2B2"),
            Relation("w-", "v-", {}, "[w-,v-] = 0"),
            Relation("w-", "B2", {"v-": two}, "[w-,B2] = 2v-"),
        ]
    elif case_id == "two-dim":
        rels = [
            Relation("w2", "v+", {"v+": two}, "[w2,v+] = 2v+"),
            Relation("w2", "v-", {"v-": -two}, "[w2,v-] = -2v-"),
            Relation("w2", "v2", {}, "[w2,v2] = 0"),
            Relation("w+", "v+", {}, "[w+,v+] = 0"),
            Relation("w+", "v-", {"v2": -two}, "[w+,v-] = -2v2"),
            Relation("w+", "v2", {"v+": -two}, "[w+,v2] = -2v+"),
            Relation("w-", "v+", {"v2": two}, "[w-,v+] = 2v2"),
            Relation("w-", "v-", {}, "[w-,v-] = 0"),
            Relation("w-", "v2", {"v-": two}, "[w-,v2] = 2v-"),
        ]
    elif case_id == "null-swap":
        return null_swap_certificate(params.get("c", F(1, 2)))
    else:
        raise ValueError(f"unknown lemma case {case_id!r}")
    if case_id != "two-dim":
        rels += [
            Relation("v+", "v-", {"B2": -two}, "[v+,v-] = -2B2"),
            Relation("v+", "B2", {"v+": -two}, "[v+,B2] = -2v+"),
            Relation("v-", "B2", {"v-": two}, "[v-,B2] = 2v-"),
        ]
    return check_relations(el, rels, f"lemma-{case_id}")


def null_swap_certificate(c) -> CheckResult:
    """The two lightlike decompositions are exchanged by w+ -> w-, v+ -> v-,
    v- + c w+ -> v+ + c w-, B2 -> -B2, isometrically on m."""
    one = QuadSurd(1, 0, 2)
    cq = one * Fraction(c)
    el = so22_elements(one)
    g = DiagonalMetric(-1, 1, 1)
    src = decomposition(
        [el["B+"], _vec_add(el["B-"], _vec_scale(cq, el["U+"])), el["B2"]],
        [el["U+"]], ["v+", "v-+cw+", "B2"], ["w+"], g,
    )
    tgt = decomposition(
        [el["B-"], _vec_add(el["B+"], _vec_scale(cq, el["U-"])), el["B2"]],
        [el["U-"]], ["v-", "v++cw-", "B2"], ["w-"], g,
    )
    z, o = one - one, one
    M = [[o, z, z, z], [z, o, z, z], [z, z, -o, z], [z, z, z, o]]
    return verify_isomorphism(IsomorphismCertificate(src, tgt, M, "null-swap"))
