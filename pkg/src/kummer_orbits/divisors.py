"""Numerical classes of Brill-Noether rational curves on K_n(A) and of the
uniruled divisors they sweep out.

Curve classes are a*H_A + b*r with r the exceptional curve class; divisor
classes are a*H_A + c*delta with delta the half-exceptional divisor (the
basis vector e of :func:`kummer.kummer_lattice`).  H_A^2 = 2 p_a - 2,
delta^2 = -(2n+2) and r.delta = -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .kummer import PolarizationType, admissible_pairs, kummer_lattice, normal_form, orbit_enumerate
from .lattice_core import LatticeError, divisibility, format_rational


def _check_k(n: int, k: int) -> None:
    if n < 1:
        raise LatticeError(f"n must be at least 1, got {n}")
    if not 1 <= k <= n + 1:
        raise LatticeError(f"k={k} outside 1..{n + 1}")


@dataclass(frozen=True)
class CurveClass:
    n: int
    aH: int
    bR: int

    def __str__(self) -> str:
        return f"{self.aH} H_A {'-' if self.bR < 0 else '+'} {abs(self.bR)} r_n"


@dataclass(frozen=True)
class DivisorClass:
    """Rational combination coef_h * H_A + coef_delta * delta."""

    n: int
    coef_h: Fraction
    coef_delta: Fraction

    def square(self, p_a: int) -> Fraction:
        return self.coef_h ** 2 * (2 * p_a - 2) - self.coef_delta ** 2 * (2 * self.n + 2)

    def to_json(self) -> dict:
        return {"H_A": format_rational(self.coef_h), "delta": format_rational(self.coef_delta)}


def curve_class(n: int, k: int, reduced: bool) -> CurveClass:
    """H_A - 2k r for the irreducible curve, H_A - (2k-1) r for the reducible C_k."""
    _check_k(n, k)
    return CurveClass(n, 1, -(2 * k - 1) if reduced else -2 * k)


def dual_divisor(c: CurveClass) -> DivisorClass:
    # r pairs to -1 with delta and delta^2 = -(2n+2), so r is dual to delta/(2n+2)
    return DivisorClass(c.n, Fraction(c.aH), Fraction(c.bR, 2 * c.n + 2))


def _kappa(k: int, reduced: bool) -> Fraction:
    return Fraction(2 * k - 1, 2) if reduced else Fraction(k)


def divisor_square(n: int, k: int, p_a: int, reduced: bool) -> Fraction:
    """q(D_k) by the closed formula, checked against the Gram form on (H_A, delta)."""
    _check_k(n, k)
    if p_a < 2:
        raise LatticeError("p_a must be at least 2")
    kap = _kappa(k, reduced)
    closed = 2 * p_a - 2 - 2 * kap ** 2 / (n + 1)
    via_gram = dual_divisor(curve_class(n, k, reduced)).square(p_a)
    if closed != via_gram:
        raise RuntimeError(f"q(D_k) mismatch: formula {closed} vs Gram {via_gram}")
    return closed


def primitive_multiple(n: int, k: int, reduced: bool) -> tuple[int, int, int]:
    """(lambda, s, t) with t*D_k = t*H_A - s*delta primitive and integral."""
    _check_k(n, k)
    num, den = (2 * k - 1, 2 * (n + 1)) if reduced else (k, n + 1)
    lam = gcd(num, den)
    return lam, num // lam, den // lam


def divisor_vector(n: int, k: int, p_a: int, reduced: bool) -> list[int]:
    """t*D_k as a vector of kummer_lattice(n), with H_A = u1 + (p_a - 1) f1."""
    _, s, t = primitive_multiple(n, k, reduced)
    return [t, t * (p_a - 1), 0, 0, 0, 0, -s]


def divisor_invariant(n: int, k: int, p_a: int, reduced: bool, allow_n1: bool = False) -> PolarizationType:
    _check_k(n, k)
    if divisor_square(n, k, p_a, reduced) <= 0:
        raise LatticeError("D_k has non-positive square; increase p_a")
    h = divisor_vector(n, k, p_a, reduced)
    t = primitive_multiple(n, k, reduced)[2]
    d = divisibility(kummer_lattice(n), h)
    if d != t:
        raise RuntimeError(f"divisibility of t*D_k is {d}, expected {t}")
    return normal_form(n, h, allow_n1=allow_n1)


def brill_noether_rho(g: int, r: int, d: int) -> int:
    return g - (r + 1) * (g - d + r)


def family_dimension(k: int) -> int:
    """dim of the family of g^1_{k+1} pencils on genus g = k curves: rho + 1 + g."""
    return brill_noether_rho(k, 1, k + 1) + 1 + k


@dataclass(frozen=True)
class UniruledDivisorClass:
    n: int
    k: int
    reduced: bool
    p_a: int
    curve: CurveClass
    divisor: DivisorClass
    square: Fraction
    lam: int
    s: int
    t: int
    type: PolarizationType | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "reduced": self.reduced,
            "p_a": self.p_a,
            "curve_class": {"H_A": self.curve.aH, "r_n": self.curve.bR},
            "divisor_class": self.divisor.to_json(),
            "square": format_rational(self.square),
            "lambda": self.lam,
            "s": self.s,
            "t": self.t,
            "divisibility": self.t,
            "polarization_type": self.type.to_json() if self.type else None,
        }


def uniruled_divisor(n: int, k: int, p_a: int | None = None, reduced: bool = False) -> UniruledDivisorClass:
    """Full record for D_k; p_a defaults to k + 2."""
    if p_a is None:
        p_a = k + 2
    c = curve_class(n, k, reduced)
    lam, s, t = primitive_multiple(n, k, reduced)
    sq = divisor_square(n, k, p_a, reduced)
    ptype = divisor_invariant(n, k, p_a, reduced) if n > 1 and sq > 0 else None
    return UniruledDivisorClass(n, k, reduced, p_a, c, dual_divisor(c), sq, lam, s, t, ptype)


# ---------------------------------------------------------------------------
# coverage


def witness_table(n: int) -> dict[tuple[int, int], dict]:
    """(t, beta) -> first (k, reduced, p_a) whose divisor realizes it.

    The pair (t, beta) does not depend on p_a, so p_a = k + 2 is used.
    """
    table: dict[tuple[int, int], dict] = {}
    for reduced in (False, True):
        for k in range(1, n + 2):
            p = divisor_invariant(n, k, k + 2, reduced)
            table.setdefault(p.key, {"k": k, "reduced": reduced, "p_a": k + 2})
    return table


def coverage(n: int, d_max: int) -> dict:
    """Match every type of square 2..2*d_max with a divisor class of the same (t, beta).

    A (t, beta) pair that occurs but has no witness is a gap.  Admissible
    pairs that never occur at these squares are listed as square-limited.
    """
    if n < 2:
        raise LatticeError("coverage needs n > 1")
    if d_max < 1:
        raise LatticeError("d_max must be at least 1")
    table = witness_table(n)
    seen: dict[tuple[int, int], None] = {}
    for d in range(1, d_max + 1):
        for p in orbit_enumerate(n, 2 * d):
            seen.setdefault(p.key)
    keys = sorted(seen)
    types = [{"t": t, "beta": b, "witness": table.get((t, b))} for t, b in keys]
    return {
        "n": n,
        "d_max": d_max,
        "types": types,
        "gaps": [[t, b] for t, b in keys if (t, b) not in table],
        "square_limited": [[t, b] for t, b in admissible_pairs(n) if (t, b) not in seen],
    }
