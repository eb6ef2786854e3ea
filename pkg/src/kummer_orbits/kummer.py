"""Lattices of generalized Kummer type and the classification of primitive
polarizations up to monodromy.

Basis conventions
-----------------
``kummer_lattice(n)`` has basis u1, f1, u2, f2, u3, f3, e where (u_i, f_i)
are hyperbolic planes and e^2 = -(2n+2).  The Mukai lattice uses
coordinates (r, D_1..D_6, s) with (r, D, s)^2 = D^2 - 2rs.  A class
h = D + c*e is sent to (c, D, c(n+1)), which is orthogonal to
v_n = (1, 0, -(n+1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Sequence

from .eichler import Isometry, construct_isometry, reflection
from .lattice_core import (
    GramLattice,
    LatticeError,
    content,
    direct_sum,
    divisibility,
    hermite_normal_form,
    hyperbolic_U,
    inner,
    is_primitive,
    rank_one,
    saturate,
    square,
)

RANK = 7
E_INDEX = 6


@lru_cache(maxsize=None)
def mukai_lattice() -> GramLattice:
    g = [[0] * 8 for _ in range(8)]
    g[0][7] = g[7][0] = -1
    for i in (1, 3, 5):
        g[i][i + 1] = g[i + 1][i] = 1
    return GramLattice(g)


@lru_cache(maxsize=None)
def kummer_lattice(n: int) -> GramLattice:
    if n < 1:
        raise LatticeError(f"n must be at least 1, got {n}")
    U = hyperbolic_U()
    return direct_sum(U, U, U, rank_one(-(2 * n + 2)))


def e_n(n: int) -> list[int]:
    return [0] * 6 + [1]


def v_n(n: int) -> list[int]:
    """The Mukai vector (1, 0, -(n+1))."""
    return [1, 0, 0, 0, 0, 0, 0, -(n + 1)]


def embed_h2(n: int, h: Sequence[int]) -> list[int]:
    if len(h) != RANK:
        raise LatticeError(f"expected {RANK} coordinates, got {len(h)}")
    c = h[E_INDEX]
    return [c, *h[:6], c * (n + 1)]


def mukai_square(x: Sequence[int]) -> int:
    return square(mukai_lattice(), x)


# ---------------------------------------------------------------------------
# monodromy


def reflection_e(n: int) -> Isometry:
    """Reflection in e: x -> x + (x, e)/(n+1) e, which flips the e-coefficient."""
    return reflection(kummer_lattice(n), e_n(n))


def is_monodromy(n: int, g: Isometry) -> bool:
    """det(g) * chi(g) == 1, chi being the (scalar) action on A_L."""
    if g.lattice != kummer_lattice(n):
        raise LatticeError("isometry is not defined on kummer_lattice(n)")
    chi = g.disc_scalar
    if chi not in (1, -1):
        raise LatticeError(f"action on the discriminant group is not +-1 ({chi})")
    return g.det * chi == 1


def _check_class(n: int, h: Sequence[int]) -> None:
    if len(h) != RANK:
        raise LatticeError(f"expected {RANK} coordinates, got {len(h)}")
    if not any(h) or not is_primitive(h):
        raise LatticeError("class must be primitive")


def disc_class_coefficient(n: int, h: Sequence[int]) -> int:
    """c with [h/div(h)] = c * [e/(2n+2)] in the cyclic discriminant group.

    Writing h = lambda*h_A + mu*e with h_A primitive in U^3, this is
    mu * (2n+2)/div(h) modulo 2n+2.
    """
    _check_class(n, h)
    t = divisibility(kummer_lattice(n), h)
    N = 2 * n + 2
    return (h[E_INDEX] * (N // t)) % N


# ---------------------------------------------------------------------------
# normal form


@dataclass(frozen=True, order=True)
class PolarizationType:
    """Normal form t*h_A +- (beta/m) e of a polarized orbit; h_A^2 = 2*d_prime."""

    n: int
    square: int
    t: int
    beta: int
    m: int
    d_prime: int

    def __post_init__(self):
        problems = type_violations(self.n, self.square, self.t, self.beta, self.d_prime, self.m)
        if problems:
            raise LatticeError("invalid polarization type: " + "; ".join(problems))

    @property
    def beta_over_m(self) -> int:
        return self.beta // self.m

    @property
    def key(self) -> tuple[int, int]:
        return self.t, self.beta

    def to_json(self) -> dict:
        return {"n": self.n, "square": self.square, "t": self.t, "beta": self.beta,
                "m": self.m, "d_prime": self.d_prime}

    @classmethod
    def from_json(cls, data: dict) -> "PolarizationType":
        return cls(data["n"], data["square"], data["t"], data["beta"], data["m"], data["d_prime"])


def _m_for(n: int, beta: int) -> int:
    N = 2 * n + 2
    return N if beta == 0 else gcd(N, beta)


def type_violations(n: int, sq: int, t: int, beta: int, d_prime: int, m: int | None = None) -> list[str]:
    N = 2 * n + 2
    out = []
    if n < 1:
        out.append("n >= 1")
    if t < 1 or N % t:
        out.append(f"t={t} must divide 2n+2={N}")
    if not 0 <= beta <= n + 1:
        out.append(f"beta={beta} outside 0..{n + 1}")
    if out:
        return out
    mm = _m_for(n, beta)
    if m is not None and m != mm:
        out.append(f"m={m} but gcd(2n+2, beta)={mm}")
    if beta == 0 and t != 1 or beta > 0 and gcd(beta, N) != N // t:
        out.append(f"beta={beta} does not have order t={t} modulo {N}")
    k = beta // mm
    if gcd(t, k) != 1:
        out.append("gcd(t, beta/m) must be 1")
    if d_prime < 1:
        out.append("d_prime must be positive")
    if sq != t * t * 2 * d_prime - k * k * N:
        out.append(f"square {sq} != t^2 (2d') - (beta/m)^2 (2n+2)")
    return out


def normal_form(n: int, h: Sequence[int], allow_n1: bool = False) -> PolarizationType:
    """Polarization type of a primitive class h with h^2 > 0.

    t = div(h); beta is mu*(2n+2)/t mod 2n+2 folded into 0..n+1 by the
    reflection in e; d' solves h^2 = t^2 (2d') - (beta/m)^2 (2n+2).
    """
    if n < 2 and not (n == 1 and allow_n1):
        raise LatticeError("normal_form needs n > 1 (pass allow_n1 for n = 1)")
    _check_class(n, h)
    L = kummer_lattice(n)
    q = square(L, h)
    if q <= 0:
        raise LatticeError(f"class must have positive square, got {q}")
    N = 2 * n + 2
    t = divisibility(L, h)
    lam = content(h[:6])
    assert t == gcd(lam, N)
    beta0 = (h[E_INDEX] * (N // t)) % N
    beta = beta0 if beta0 <= n + 1 else N - beta0
    m = _m_for(n, beta)
    k = beta // m
    num = q + k * k * N
    if num % (2 * t * t):
        raise RuntimeError(f"h^2 + (beta/m)^2 (2n+2) = {num} is not divisible by 2t^2 = {2 * t * t}")
    d_prime = num // (2 * t * t)
    if d_prime < 1:
        raise RuntimeError(f"non-positive d' = {d_prime}")
    return PolarizationType(n, q, t, beta, m, d_prime)


def realize(p: PolarizationType) -> list[int]:
    """The representative t*(u1 + d' f1) + (beta/m) e of the type."""
    return [p.t, p.t * p.d_prime, 0, 0, 0, 0, p.beta_over_m]


def equivalent(n: int, h1: Sequence[int], h2: Sequence[int]) -> bool:
    """Same square and same normal form, i.e. same polarized orbit."""
    return normal_form(n, h1) == normal_form(n, h2)


def admissible_pairs(n: int) -> list[tuple[int, int]]:
    """All (t, beta) with t | 2n+2 and beta in 0..n+1 of order t mod 2n+2."""
    N = 2 * n + 2
    out = []
    for t in range(1, N + 1):
        if N % t:
            continue
        for beta in range(n + 2):
            if (beta == 0 and t == 1) or (beta > 0 and gcd(beta, N) == N // t):
                out.append((t, beta))
    return out


def orbit_enumerate(n: int, sq: int) -> list[PolarizationType]:
    """Every polarization type of the given square, sorted by (t, beta)."""
    if n < 2:
        raise LatticeError("orbit enumeration needs n > 1")
    if sq <= 0 or sq % 2:
        raise LatticeError(f"square must be even and positive, got {sq}")
    N = 2 * n + 2
    out = []
    for t, beta in admissible_pairs(n):
        k = beta // _m_for(n, beta)
        num = sq + k * k * N
        if num % (2 * t * t) == 0 and num > 0:
            out.append(PolarizationType(n, sq, t, beta, _m_for(n, beta), num // (2 * t * t)))
    return out


# ---------------------------------------------------------------------------
# saturation invariant


@dataclass(frozen=True)
class SaturatedPairInvariant:
    """Saturation T of <v_n, h> in the Mukai lattice, with v_n and h inside it.

    The basis of T is the Hermite normal form of T written in the rational
    basis (v_n, h); h and -h are identified and the lexicographically
    smaller of the two presentations is kept.
    """

    gram: tuple[tuple[int, int], tuple[int, int]]
    v: tuple[int, int]
    h: tuple[int, int]

    def to_json(self) -> dict:
        return {"gram": [list(r) for r in self.gram], "v": list(self.v), "h": list(self.h)}


def _presentation(B: list[tuple[int, int]], den: int, dv: int, dh: int) -> tuple:
    """(gram, v coords, h coords) for T spanned by rows B/den in the basis (v, h)."""
    H = hermite_normal_form(B)
    (h11, h12), (_, h22) = H
    gram = tuple(tuple((a[0] * b[0] * dv + a[1] * b[1] * dh) // (den * den) for b in H) for a in H)
    # inverse of the upper triangular basis, scaled back by den
    v = (den // h11, -den * h12 // (h11 * h22))
    h = (0, den // h22)
    return gram, v, h


def saturation_invariant(n: int, h: Sequence[int]) -> SaturatedPairInvariant:
    _check_class(n, h)
    M = mukai_lattice()
    v = v_n(n)
    w = embed_h2(n, h)
    dv, dh = mukai_square(v), mukai_square(w)
    if dh == 0:
        raise LatticeError("saturation invariant needs a non-isotropic class")
    T = saturate(M, [v, w])
    # v and w are orthogonal, so b = (b,v)/v^2 v + (b,w)/w^2 w
    den = dv * dh
    B = [(inner(M, b, v) * dh, inner(M, b, w) * dv) for b in T]
    plus = _presentation(B, den, dv, dh)
    minus = _presentation([(x, -y) for x, y in B], den, dv, dh)
    for gram, cv, ch in (plus, minus):
        assert sum(gram[i][j] * cv[i] * cv[j] for i in range(2) for j in range(2)) == dv
        assert sum(gram[i][j] * ch[i] * ch[j] for i in range(2) for j in range(2)) == dh
    return SaturatedPairInvariant(*min(plus, minus))


# ---------------------------------------------------------------------------
# explicit monodromy operators


def monodromy_isometry(n: int, h1: Sequence[int], h2: Sequence[int]) -> Isometry:
    """A monodromy operator g with g(h1) = h2 for classes of equal normal form.

    Built from Eichler transvections, preceded by the reflection in e when
    the discriminant classes of h1 and h2 are opposite.
    """
    L = kummer_lattice(n)
    c1, c2 = disc_class_coefficient(n, h1), disc_class_coefficient(n, h2)
    N = 2 * n + 2
    if square(L, h1) != square(L, h2):
        raise LatticeError("classes have different squares")
    if c1 == c2:
        return construct_isometry(L, h1, h2)
    if (-c1) % N == c2:
        r = reflection_e(n)
        return construct_isometry(L, r(h1), h2) @ r
    raise LatticeError(f"discriminant classes {c1} and {c2} are not +-equal modulo {N}")
