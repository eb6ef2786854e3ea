"""Exact integer lattices: Gram matrices, Smith/Hermite normal forms,
discriminant groups, divisibility and saturation.

Everything here works with Python ints and :class:`fractions.Fraction`;
no floating point is involved anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

Matrix = list[list[int]]


class LatticeError(ValueError):
    """Raised on malformed lattices or vectors, or violated preconditions."""


# ---------------------------------------------------------------------------
# small integer linear algebra helpers


def content(coords: Iterable[int]) -> int:
    return reduce(gcd, coords, 0)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` with integer coefficients realizing it."""
    g, coeffs = 0, [0] * len(values)
    for i, a in enumerate(values):
        g2, x, y = xgcd(g, a)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
        g = g2
    return g, coeffs


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises LatticeError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve_rational(rows: Sequence[Sequence], target: Sequence) -> list[Fraction]:
    """Coefficients c with sum_i c_i * rows[i] == target, or LatticeError.

    ``rows`` must be linearly independent.
    """
    k, n = len(rows), len(target)
    # augmented system: columns are rows[i], solve A c = target with A n x k
    a = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if a[i][col] != 0), None)
        if piv is None:
            raise LatticeError("vectors are linearly dependent")
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        raise LatticeError("target is not in the span")
    return [a[i][k] for i in range(k)]


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ M @ right == diag`` with unimodular ``left`` and ``right``."""

    left: tuple[tuple[int, ...], ...]
    diag: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def invariants(self) -> list[int]:
        k = min(len(self.diag), len(self.diag[0]) if self.diag else 0)
        return [self.diag[i][i] for i in range(k)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are the entry of least absolute value in the remaining block,
    ties broken in row-major order, so the output is deterministic.

    >>> smith_normal_form([[2, 0], [0, 3]]).invariants
    [1, 6]
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left = identity(rows)
    right = identity(cols)

    def row_addmul(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def col_addmul(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    for s in range(min(rows, cols)):
        while True:
            best = None
            for i in range(s, rows):
                for j in range(s, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != s:
                swap_rows(s, i)
            if j != s:
                swap_cols(s, j)
            p = a[s][s]
            clean = True
            for i in range(s + 1, rows):
                if a[i][s]:
                    row_addmul(i, s, -(a[i][s] // p))
                    clean = clean and a[i][s] == 0
            for j in range(s + 1, cols):
                if a[s][j]:
                    col_addmul(j, s, -(a[s][j] // p))
                    clean = clean and a[s][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(s + 1, rows)
                        if any(a[i][j] % p for j in range(s + 1, cols))), None)
            if bad is None:
                break
            row_addmul(s, bad, 1)
        if s < rows and s < cols and a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            left[s] = [-x for x in left[s]]

    freeze = lambda mat: tuple(tuple(r) for r in mat)
    return SmithDecomposition(freeze(left), freeze(a), freeze(right))


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF basis of the Z-span of ``rows``; zero rows are dropped.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        if r == len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][col]), i))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    done = done and a[i][col] == 0
            if done:
                break
        if r < len(a) and a[r][col]:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
            p = a[r][col]
            for i in range(r):
                q = a[i][col] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    return [row for row in a if any(row)]


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class GramLattice:
    """Even nondegenerate lattice given by the Gram matrix of a basis."""

    gram: tuple[tuple[int, ...], ...]

    def __init__(self, gram: Sequence[Sequence[int]]):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square and non-empty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise LatticeError("lattice must be even")
        if determinant(g) == 0:
            raise LatticeError("Gram matrix is degenerate")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return determinant(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        _, values = diagonalize(self.gram)
        p = sum(1 for x in values if x > 0)
        return p, self.rank - p

    @cached_property
    def gram_inverse(self) -> list[list[Fraction]]:
        return rational_inverse(self.gram)

    @cached_property
    def discriminant_group(self) -> "DiscriminantGroup":
        return DiscriminantGroup._build(self)

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data: dict) -> "GramLattice":
        try:
            gram = data["gram"]
            rank = data.get("rank", len(gram))
        except (TypeError, KeyError) as exc:
            raise LatticeError(f"malformed lattice JSON: {exc}") from None
        if rank != len(gram):
            raise LatticeError("rank does not match Gram matrix size")
        return cls(gram)


def hyperbolic_U() -> GramLattice:
    return GramLattice([[0, 1], [1, 0]])


def rank_one(a: int) -> GramLattice:
    if a == 0 or a % 2:
        raise LatticeError(f"rank-one lattice needs a nonzero even square, got {a}")
    return GramLattice([[a]])


def direct_sum(*lattices: GramLattice) -> GramLattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            g[off + i][off:off + L.rank] = row
        off += L.rank
    return GramLattice(g)


def diagonalize(gram: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational orthogonal basis of a nondegenerate symmetric form.

    Returns (basis, values) where basis rows are pairwise orthogonal and
    values[i] is the square of basis[i].  Pivoting is fixed: the first
    anisotropic basis vector if any, otherwise b_i + b_j for the first
    pair with nonzero pairing.
    """
    n = len(gram)
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    g = [[Fraction(x) for x in row] for row in gram]
    out_b, out_v = [], []

    def form(x, y):
        return sum(xi * gij * yj for xi, row in zip(x, g) if xi for gij, yj in zip(row, y) if yj)

    remaining = basis
    while remaining:
        idx = next((i for i, b in enumerate(remaining) if form(b, b) != 0), None)
        if idx is None:
            pair = next(((i, j) for i in range(len(remaining))
                         for j in range(i + 1, len(remaining))
                         if form(remaining[i], remaining[j]) != 0), None)
            if pair is None:
                raise LatticeError("form is degenerate")
            i, j = pair
            remaining[i] = [x + y for x, y in zip(remaining[i], remaining[j])]
            idx = i
        p = remaining.pop(idx)
        pp = form(p, p)
        out_b.append(p)
        out_v.append(pp)
        remaining = [[x - form(p, b) / pp * y for x, y in zip(b, p)] for b in remaining]
    return out_b, out_v


# ---------------------------------------------------------------------------
# vectors


def _check_dim(L: GramLattice, *vectors: Sequence) -> None:
    for v in vectors:
        if len(v) != L.rank:
            raise LatticeError(f"vector of length {len(v)} in a rank {L.rank} lattice")


def inner(L: GramLattice, v: Sequence, w: Sequence):
    _check_dim(L, v, w)
    return sum(vi * gij * wj for vi, row in zip(v, L.gram) if vi
               for gij, wj in zip(row, w) if wj)


def square(L: GramLattice, v: Sequence):
    return inner(L, v, v)


def pairings(L: GramLattice, v: Sequence) -> list:
    """Pairings of v with every basis vector, i.e. gram @ v."""
    _check_dim(L, v)
    return mat_vec(L.gram, v)


def divisibility(L: GramLattice, v: Sequence[int]) -> int:
    if not any(v):
        raise LatticeError("divisibility of the zero vector is undefined")
    return content(pairings(L, v))


def is_primitive(v: Sequence[int]) -> bool:
    if not any(v):
        raise LatticeError("primitivity of the zero vector is undefined")
    return content(v) == 1


def saturate(L: GramLattice, vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis (in HNF) of L intersected with the rational span of ``vectors``."""
    _check_dim(L, *vectors)
    k = len(vectors)
    if k == 0:
        return []
    snf = smith_normal_form(vectors)
    ds = snf.invariants
    if sum(1 for d in ds if d) < k:
        raise LatticeError("spanning vectors are linearly dependent")
    # vectors = left^-1 diag right^-1, so the first k rows of right^-1 span
    # the saturation and extend to a basis of Z^n; row i equals
    # (left @ vectors)[i] / d_i.
    lv = mat_mul(snf.left, vectors)
    basis = []
    for row, d in zip(lv, ds):
        assert all(x % d == 0 for x in row)
        basis.append([x // d for x in row])
    return hermite_normal_form(basis)


# ---------------------------------------------------------------------------
# discriminant groups


def _mod2(x: Fraction) -> Fraction:
    return Fraction(x) % 2


@dataclass(frozen=True)
class DiscClass:
    """Element of A_L in generator coordinates, with its Q/2Z square."""

    components: tuple[int, ...]
    q_value: Fraction

    @property
    def is_zero(self) -> bool:
        return not any(self.components)

    def to_json(self) -> dict:
        return {"components": list(self.components), "q": format_rational(self.q_value)}


@dataclass(frozen=True, eq=False)
class DiscriminantGroup:
    """L^dual / L for a nondegenerate lattice, via the Smith form of the Gram.

    With ``left @ gram @ right = diag(d_1, ..., d_r)`` the class of a dual
    vector x has coordinates ``left @ gram @ x`` reduced modulo the d_i, and
    the i-th generator is column i of ``right`` divided by d_i.
    """

    lattice: GramLattice
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    _rows: tuple[tuple[int, ...], ...]  # rows of `left` for the nontrivial factors

    @classmethod
    def _build(cls, L: GramLattice) -> "DiscriminantGroup":
        snf = smith_normal_form(L.gram)
        factors, gens, rows = [], [], []
        for i, d in enumerate(snf.invariants):
            if d > 1:
                factors.append(d)
                gen = tuple(Fraction(snf.right[j][i], d) % 1 for j in range(L.rank))
                gens.append(gen)
                rows.append(snf.left[i])
        return cls(L, tuple(factors), tuple(gens), tuple(rows))

    @property
    def order(self) -> int:
        return reduce(lambda x, y: x * y, self.invariant_factors, 1)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def class_of(self, x: Sequence) -> DiscClass:
        """Class of a vector of L^dual given by rational coordinates."""
        den = 1
        for c in x:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        return self.class_of_scaled([int(c * den) for c in x], den)

    def class_of_scaled(self, num: Sequence[int], den: int) -> DiscClass:
        """Class of num/den for an integer vector num."""
        y = pairings(self.lattice, num)
        if any(c % den for c in y):
            raise LatticeError("vector is not in the dual lattice")
        y = [c // den for c in y]
        comps = tuple(sum(a * b for a, b in zip(row, y)) % d
                      for row, d in zip(self._rows, self.invariant_factors))
        qn = sum(a * b for a, b in zip(num, pairings(self.lattice, num)))
        return DiscClass(comps, _mod2(Fraction(qn, den * den)))

    @cached_property
    def scaled_generators(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Generators as (integer numerator, denominator d_i) pairs."""
        return tuple((tuple(int(c * d) for c in g), d)
                     for g, d in zip(self.generators, self.invariant_factors))

    def element(self, components: Sequence[int]) -> list[Fraction]:
        """A representative dual vector for the given generator coordinates."""
        x = [Fraction(0)] * self.lattice.rank
        for c, g in zip(components, self.generators):
            x = [a + c * b for a, b in zip(x, g)]
        return x

    def make_class(self, components: Sequence[int]) -> DiscClass:
        comps = tuple(int(c) % d for c, d in zip(components, self.invariant_factors))
        return DiscClass(comps, _mod2(square(self.lattice, self.element(comps))))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
            "generators": [[format_rational(c) for c in g] for g in self.generators],
            "q_values": [format_rational(_mod2(square(self.lattice, g))) for g in self.generators],
        }


def discriminant_group(L: GramLattice) -> DiscriminantGroup:
    return L.discriminant_group


def disc_class(L: GramLattice, v: Sequence[int]) -> DiscClass:
    """The class of v/div(v) in A_L for a primitive vector v."""
    if not is_primitive(v):
        raise LatticeError("disc_class needs a primitive vector")
    d = divisibility(L, v)
    return L.discriminant_group.class_of_scaled(v, d)


# ---------------------------------------------------------------------------
# serialization


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise LatticeError(f"not a rational: {s!r}") from None


def vector_to_json(v: Sequence[int]) -> dict:
    return {"coords": [int(c) for c in v]}


def vector_from_json(data: dict) -> list[int]:
    try:
        return [int(c) for c in data["coords"]]
    except (TypeError, KeyError, ValueError) as exc:
        raise LatticeError(f"malformed vector JSON: {exc}") from None


def load_lattice(path: str) -> GramLattice:
    with open(path, encoding="utf-8") as fh:
        return GramLattice.from_json(json.load(fh))
