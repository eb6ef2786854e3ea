"""Isometries of even lattices, Eichler transvections and a constructive
Eichler criterion on lattices of the form U + U + L'.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Sequence

from .lattice_core import (
    DiscClass,
    GramLattice,
    LatticeError,
    bezout,
    determinant,
    diagonalize,
    disc_class,
    divisibility,
    inner,
    is_primitive,
    mat_mul,
    pairings,
    square,
    transpose,
)

Word = tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


class EichlerError(LatticeError):
    """Precondition of the Eichler criterion not met."""


@dataclass(frozen=True, eq=False)
class Isometry:
    """Integer matrix acting on coordinates (x -> matrix @ x) preserving the form.

    det, disc_action and orientation are computed on first access.
    """

    lattice: GramLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.lattice.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise LatticeError("isometry matrix has the wrong shape")
        g = self.lattice.gram
        # G M through the sparse Gram rows, then one dense product
        gm = [[0] * n for _ in range(n)]
        for k, col in enumerate(_gram_columns(self.lattice)):
            mk = self.matrix[k]
            for j, c in col:
                row = gm[j]
                for i in range(n):
                    row[i] += c * mk[i]
        if mat_mul(transpose(self.matrix), gm) != [list(r) for r in g]:
            raise LatticeError("matrix does not preserve the Gram form")

    @classmethod
    def from_matrix(cls, L: GramLattice, matrix: Sequence[Sequence[int]]) -> "Isometry":
        return cls(L, tuple(tuple(int(x) for x in row) for row in matrix))

    @classmethod
    def identity(cls, L: GramLattice) -> "Isometry":
        return cls(L, tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)))

    def __call__(self, v: Sequence) -> list:
        return [sum(a * b for a, b in zip(row, v)) for row in self.matrix]

    def __matmul__(self, other: "Isometry") -> "Isometry":
        """Composition: (self @ other)(x) == self(other(x))."""
        if other.lattice != self.lattice:
            raise LatticeError("isometries of different lattices")
        return Isometry(self.lattice, tuple(map(tuple, mat_mul(self.matrix, other.matrix))))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Isometry) and self.lattice == other.lattice
                and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix)

    def inverse(self) -> "Isometry":
        # g^T G g = G  =>  g^-1 = G^-1 g^T G
        g = self.lattice.gram
        inv = mat_mul(mat_mul(self.lattice.gram_inverse, transpose(self.matrix)), g)
        return Isometry(self.lattice, tuple(tuple(int(x) for x in row) for row in inv))

    @cached_property
    def det(self) -> int:
        return determinant(self.matrix)

    @cached_property
    def disc_action(self) -> tuple[tuple[int, ...], ...]:
        """Generator coordinates of the image of each generator of A_L."""
        D = self.lattice.discriminant_group
        return tuple(D.class_of_scaled(self(num), d).components for num, d in D.scaled_generators)

    @cached_property
    def disc_scalar(self) -> int | None:
        """c if the induced map on A_L is multiplication by c, else None.

        c is reported as +1 or -1 when applicable and otherwise reduced
        modulo the exponent of A_L.
        """
        D = self.lattice.discriminant_group
        if not D.invariant_factors:
            return 1
        exp = D.exponent
        for c in (1, -1, *range(2, exp)):
            if all(img == tuple((c * int(i == j)) % d for j, d in enumerate(D.invariant_factors))
                   for i, img in enumerate(self.disc_action)):
                return c
        return None

    @property
    def disc_action_summary(self) -> str:
        c = self.disc_scalar
        return {1: "+1", -1: "-1"}.get(c, "general")

    @cached_property
    def orientation(self) -> int:
        return orientation_sign(self.lattice, self)

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "det": self.det,
            "disc_action": self.disc_action_summary,
            "orientation": self.orientation,
        }


def disc_action(L: GramLattice, g: Isometry) -> tuple[tuple[int, ...], ...]:
    return g.disc_action


@lru_cache(maxsize=None)
def positive_plane(L: GramLattice) -> tuple[tuple[int, ...], ...]:
    """Deterministic integral basis of a maximal positive-definite subspace.

    Vectors are pairwise orthogonal.  For a basis made of hyperbolic planes
    (u_i, f_i) followed by negative vectors this is {u_i + f_i}.
    """
    basis, values = diagonalize(L.gram)
    out = []
    for b, x in zip(basis, values):
        if x > 0:
            den = 1
            for c in b:
                den = den * c.denominator // gcd(den, c.denominator)
            out.append(tuple(int(c * den) for c in b))
    return tuple(out)


def orientation_sign(L: GramLattice, g: Isometry) -> int:
    """+1 iff g preserves the orientation of maximal positive subspaces."""
    P = positive_plane(L)
    if not P:
        raise LatticeError("orientation needs a positive direction (p >= 1)")
    # P is orthogonal, so g(p_i) projects onto span(P) with coefficients
    # (p_j, g p_i) / (p_j, p_j); the positive denominators drop out of the sign
    GP = [pairings(L, p) for p in P]
    images = [g(p) for p in P]
    d = determinant([[sum(a * b for a, b in zip(gp, y)) for gp in GP] for y in images])
    if d == 0:
        raise LatticeError("projection is singular; not an isometry")
    return 1 if d > 0 else -1


# ---------------------------------------------------------------------------
# transvections


def _sparse(v: Sequence[int]) -> list[tuple[int, int]]:
    return [(i, c) for i, c in enumerate(v) if c]


@lru_cache(maxsize=None)
def _gram_columns(L: GramLattice) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Nonzero (row, entry) pairs of each Gram column."""
    G = L.gram
    return tuple(tuple((j, G[j][k]) for j in range(L.rank) if G[j][k]) for k in range(L.rank))


def _gram_apply(L: GramLattice, sv: list[tuple[int, int]]) -> list[tuple[int, int]]:
    acc: dict[int, int] = {}
    cols = _gram_columns(L)
    for k, c in sv:
        for j, g in cols[k]:
            acc[j] = acc.get(j, 0) + g * c
    return sorted((j, c) for j, c in acc.items() if c)


@lru_cache(maxsize=1 << 16)
def _cached_data(L: GramLattice, e: tuple[int, ...], a: tuple[int, ...]):
    se, sa = _sparse(e), _sparse(a)
    Ge, Ga = _gram_apply(L, se), _gram_apply(L, sa)
    if sum(c * e[k] for k, c in Ge) != 0:
        raise LatticeError("transvection needs an isotropic vector e")
    if sum(c * a[k] for k, c in Ge) != 0:
        raise LatticeError("transvection needs a orthogonal to e")
    qa = sum(c * a[k] for k, c in Ga)
    assert qa % 2 == 0, "even lattice"
    return se, sa, Ge, Ga, qa // 2


def _transvection_data(L: GramLattice, e: Sequence[int], a: Sequence[int]):
    """Sparse pieces of E(e, a): (e, a, G e, G a, a^2/2) as index/value lists."""
    if len(e) != L.rank or len(a) != L.rank:
        raise LatticeError(f"expected vectors of length {L.rank}")
    return _cached_data(L, tuple(int(c) for c in e), tuple(int(c) for c in a))


def _transvect(x: list, data) -> list:
    se, sa, Ge, Ga, half_qa = data
    ax = sum(c * x[k] for k, c in Ga)
    ex = sum(c * x[k] for k, c in Ge)
    if not ax and not ex:
        return x
    x = list(x)
    ce = -ax - half_qa * ex
    if ce:
        for k, c in se:
            x[k] += ce * c
    if ex:
        for k, c in sa:
            x[k] += ex * c
    return x


def _apply_to_matrix(m: list[list[int]], data) -> None:
    """Left-multiply m (rows) in place by the transvection."""
    se, sa, Ge, Ga, half_qa = data
    ncols = len(m[0])
    ax = [sum(c * m[k][j] for k, c in Ga) for j in range(ncols)]
    ex = [sum(c * m[k][j] for k, c in Ge) for j in range(ncols)]
    ce = [-p - half_qa * q for p, q in zip(ax, ex)]
    for k, c in se:
        row = m[k]
        for j in range(ncols):
            row[j] += c * ce[j]
    for k, c in sa:
        row = m[k]
        for j in range(ncols):
            row[j] += c * ex[j]


def transvection(L: GramLattice, e: Sequence[int], a: Sequence[int]) -> Isometry:
    """x -> x - (a,x) e + (e,x) a - (a,a)/2 (e,x) e  for isotropic e and a orthogonal to e."""
    return word_matrix(L, ((tuple(e), tuple(a)),))


def apply_word(L: GramLattice, word: Word, v: Sequence[int]) -> list[int]:
    """Apply transvections word[0], word[1], ... to v in that order."""
    x = list(v)
    for e, a in word:
        x = _transvect(x, _transvection_data(L, e, a))
    return x


def word_matrix(L: GramLattice, word: Word) -> Isometry:
    """Matrix of the composite: word[-1] o ... o word[0]."""
    m = [[int(i == j) for j in range(L.rank)] for i in range(L.rank)]
    for e, a in word:
        _apply_to_matrix(m, _transvection_data(L, e, a))
    return Isometry(L, tuple(map(tuple, m)))


def invert_word(word: Word) -> Word:
    return tuple((e, tuple(-c for c in a)) for e, a in reversed(word))


# ---------------------------------------------------------------------------
# Eichler criterion


def hyperbolic_planes(L: GramLattice) -> list[tuple[int, int]]:
    """Coordinate pairs (i, i+1) spanning an orthogonal summand isometric to U."""
    g = L.gram
    n = L.rank
    found = []
    i = 0
    while i + 1 < n:
        j = i + 1
        ok = (g[i][i] == 0 and g[j][j] == 0 and g[i][j] == 1
              and all(g[i][k] == 0 and g[j][k] == 0 for k in range(n) if k not in (i, j)))
        if ok:
            found.append((i, j))
            i += 2
        else:
            i += 1
    return found


def eichler_equivalent(L: GramLattice, v: Sequence[int], w: Sequence[int]) -> bool:
    """Equal square and equal class [x/div(x)] in A_L."""
    for x in (v, w):
        if not is_primitive(x):
            raise EichlerError("Eichler criterion needs primitive vectors")
    return square(L, v) == square(L, w) and disc_class(L, v) == disc_class(L, w)


def inequivalence_reason(L: GramLattice, v: Sequence[int], w: Sequence[int]) -> str | None:
    qv, qw = square(L, v), square(L, w)
    if qv != qw:
        return f"squares differ: {qv} vs {qw}"
    cv, cw = disc_class(L, v), disc_class(L, w)
    if cv != cw:
        return f"discriminant classes differ: {list(cv.components)} vs {list(cw.components)}"
    return None


def _nearest_quotient(a: int, b: int) -> int:
    """q with |a - q b| <= |b|/2."""
    q, r = divmod(a, b)
    return q + 1 if 2 * abs(r) > abs(b) else q


class _Reducer:
    """Moves a primitive vector to t*u1 + B*f1 + xi0 by Eichler transvections.

    Coordinates of the two hyperbolic planes form the 2x2 matrix
    X = [[a1, a2], [-b2, b1]] (a = u-coefficient, b = f-coefficient); the
    transvections E(u1, c u2), E(f1, c f2), E(f1, c u2), E(u1, c f2) act on
    X by elementary row and column operations, which reduce X to
    diag(g, q/2g).  Transvections E(u2, a) with a in L' move the L'-part.
    """

    def __init__(self, L: GramLattice, planes: Sequence[tuple[int, int]], v: Sequence[int]):
        self.L = L
        n = L.rank
        (self.iu1, self.if1), (self.iu2, self.if2) = planes[0], planes[1]
        self.rest = [k for k in range(n) if k not in (self.iu1, self.if1, self.iu2, self.if2)]
        self.x = list(v)
        self.word: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def _unit(self, i: int, c: int = 1) -> tuple[int, ...]:
        return tuple(c if k == i else 0 for k in range(self.L.rank))

    def apply(self, e: tuple[int, ...], a: tuple[int, ...]) -> None:
        if not any(a):
            return
        self.x = _transvect(self.x, _transvection_data(self.L, e, a))
        self.word.append((e, a))

    def X(self):
        x = self.x
        return [[x[self.iu1], x[self.iu2]], [-x[self.if2], x[self.if1]]]

    # elementary operations on X
    def row0_add(self, c):  # R0 += c R1
        self.apply(self._unit(self.iu1), self._unit(self.iu2, c))

    def row1_add(self, c):  # R1 += c R0
        self.apply(self._unit(self.if1), self._unit(self.if2, -c))

    def col1_add(self, c):  # C1 += c C0
        self.apply(self._unit(self.if1), self._unit(self.iu2, c))

    def col0_add(self, c):  # C0 += c C1
        self.apply(self._unit(self.iu1), self._unit(self.if2, -c))

    def swap_rows(self):  # (r0, r1) -> (-r1, r0)
        self.row1_add(1)
        self.row0_add(-1)
        self.row1_add(1)

    def swap_cols(self):  # (c0, c1) -> (-c1, c0)
        self.col1_add(1)
        self.col0_add(-1)
        self.col1_add(1)

    def diagonalize_planes(self) -> None:
        while True:
            X = self.X()
            if not any(X[0]) and not any(X[1]):
                return
            # each remainder step at least halves the pivot
            while X[1][0]:
                if X[0][0] and X[1][0] % X[0][0] == 0:
                    self.row1_add(-(X[1][0] // X[0][0]))
                else:
                    self.row0_add(-_nearest_quotient(X[0][0], X[1][0]))
                    self.swap_rows()
                X = self.X()
            while X[0][1]:
                if X[0][0] and X[0][1] % X[0][0] == 0:
                    self.col1_add(-(X[0][1] // X[0][0]))
                else:
                    self.col0_add(-_nearest_quotient(X[0][0], X[0][1]))
                    self.swap_cols()
                X = self.X()
            if X[1][0]:
                continue
            if X[0][0] == 0 or X[1][1] % X[0][0]:
                self.row0_add(1)
                continue
            if X[0][0] < 0:
                self.swap_rows()
                self.swap_rows()
            return

    def push_rest_gcd(self) -> None:
        """With X diagonal, put gcd of the L'-pairings of x into the u2 slot."""
        G = self.L.gram
        ys = [sum(G[j][k] * self.x[k] for k in self.rest) for j in self.rest]
        delta, coeffs = bezout(ys)
        if delta == 0:
            return
        a = [0] * self.L.rank
        for j, c in zip(self.rest, coeffs):
            a[j] = c
        self.apply(self._unit(self.iu2), tuple(a))

    def reduce(self) -> list[int]:
        t = divisibility(self.L, self.x)
        self.diagonalize_planes()
        if self.x[self.iu1] != t:
            self.push_rest_gcd()
            self.diagonalize_planes()
        xi = [self.x[k] for k in self.rest]
        xi0 = [c % t for c in xi]
        if xi != xi0:
            self.row1_add(-1)  # b2 += t
            a = [0] * self.L.rank
            for k, c, c0 in zip(self.rest, xi, xi0):
                a[k] = -((c - c0) // t)
            assert self.x[self.if2] == t
            self.apply(self._unit(self.iu2), tuple(a))
            self.diagonalize_planes()
            if self.x[self.iu1] != t:
                self.push_rest_gcd()
                self.diagonalize_planes()
        if (self.x[self.iu1] != t or self.x[self.iu2] or self.x[self.if2]
                or [self.x[k] for k in self.rest] != xi0):
            raise RuntimeError(f"Eichler reduction failed to reach normal form: {self.x}")
        return self.x


def _planes_for(L: GramLattice, planes) -> list[tuple[int, int]]:
    if planes is None:
        found = hyperbolic_planes(L)
        if len(found) < 2:
            raise EichlerError("lattice basis does not exhibit a U + U summand")
        return found[:2]
    planes = [tuple(p) for p in planes]
    if len(planes) != 2 or len({*planes[0], *planes[1]}) != 4:
        raise EichlerError("need two disjoint hyperbolic planes")
    g = L.gram
    for i, j in planes:
        ok = (g[i][i] == g[j][j] == 0 and g[i][j] == 1
              and all(g[i][k] == g[j][k] == 0 for k in range(L.rank) if k not in (i, j)))
        if not ok:
            raise EichlerError(f"coordinates {(i, j)} do not span an orthogonal U summand")
    return planes


def eichler_reduction(L: GramLattice, v: Sequence[int], planes=None) -> tuple[Word, list[int]]:
    """Transvection word moving primitive v to its canonical representative.

    The representative t*u1 + B*f1 + xi0 depends only on (v^2, [v/div v]):
    t = div(v), xi0 is the L'-part reduced modulo t, and B is fixed by the square.
    """
    planes = _planes_for(L, planes)
    if not any(v) or not is_primitive(v):
        raise EichlerError("Eichler reduction needs a primitive vector")
    r = _Reducer(L, planes, v)
    canon = r.reduce()
    return tuple(r.word), canon


def construct_isometry(L: GramLattice, v: Sequence[int], w: Sequence[int], planes=None) -> Isometry:
    """Product of Eichler transvections g with g(v) = w.

    Requires v, w primitive with equal square and equal [x/div x] in A_L.
    """
    planes = _planes_for(L, planes)
    for x in (v, w):
        if not any(x) or not is_primitive(x):
            raise EichlerError("Eichler criterion needs primitive vectors")
    reason = inequivalence_reason(L, v, w)
    if reason:
        raise EichlerError(reason)
    word_v, cv = eichler_reduction(L, v, planes)
    word_w, cw = eichler_reduction(L, w, planes)
    if cv != cw:
        raise RuntimeError(f"canonical forms disagree for equivalent vectors: {cv} vs {cw}")
    g = word_matrix(L, word_v + invert_word(word_w))
    if g(v) != list(w):
        raise RuntimeError("constructed isometry does not map v to w")
    return g


def is_in_tilde_O_plus(g: Isometry) -> bool:
    """det 1, trivial on A_L and orientation preserving."""
    return g.det == 1 and g.disc_scalar == 1 and g.orientation == 1


def reflection(L: GramLattice, r: Sequence[int]) -> Isometry:
    """x -> x - 2 (x, r) / (r, r) r, when integral."""
    rr = square(L, r)
    if rr == 0:
        raise LatticeError("cannot reflect in an isotropic vector")
    cols = []
    for j in range(L.rank):
        x = [int(i == j) for i in range(L.rank)]
        c = Fraction(2 * inner(L, x, r), rr)
        if c.denominator != 1:
            raise LatticeError("reflection is not integral")
        cols.append([xi - int(c) * ri for xi, ri in zip(x, r)])
    return Isometry(L, tuple(map(tuple, transpose(cols))))


def negation(L: GramLattice) -> Isometry:
    return Isometry(L, tuple(tuple(-int(i == j) for j in range(L.rank)) for i in range(L.rank)))


__all__ = [
    "DiscClass", "EichlerError", "Isometry", "Word", "apply_word", "construct_isometry",
    "disc_action", "eichler_equivalent", "eichler_reduction", "hyperbolic_planes",
    "inequivalence_reason", "invert_word", "is_in_tilde_O_plus", "negation",
    "orientation_sign", "positive_plane", "reflection", "transvection",
    "word_matrix",
]
