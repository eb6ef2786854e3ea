"""Verification suites shared by the ``verify`` subcommand and the test suite.

Every suite returns a report dict with at least ``suite``, ``passed``,
``checked`` and ``counterexamples`` (capped at :data:`MAX_COUNTEREXAMPLES`).

The exhaustive Eichler and faithfulness suites check each vector's reduction
isometry individually and then combine them: if g_v(v) = c and g_w(w) = c
then g_w^-1 g_v is exactly what ``construct_isometry(v, w)`` returns, and
det, the discriminant character and orientation are multiplicative.  This
turns a quadratic number of pair checks into a linear one; a sample of
literal pair constructions is run on top.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Sequence

from . import divisors, eichler, kummer
from .eichler import (
    apply_word,
    construct_isometry,
    eichler_reduction,
    invert_word,
    transvection,
    word_matrix,
)
from .lattice_core import (
    GramLattice,
    LatticeError,
    bezout,
    content,
    determinant,
    direct_sum,
    disc_class,
    divisibility,
    hyperbolic_U,
    inner,
    mat_mul,
    rank_one,
    smith_normal_form,
    square,
)

MAX_COUNTEREXAMPLES = 10

SUITES = (
    "disc",
    "transvections",
    "eichler",
    "faithfulness",
    "roundtrip",
    "calculus",
    "coverage",
    "orbits",
    "snf",
)


class _Report:
    def __init__(self, suite: str, **params):
        self.data = {"suite": suite, **params, "checked": 0, "failures": 0, "counterexamples": []}

    def check(self, ok: bool, detail: Callable[[], object] | object = None) -> bool:
        self.data["checked"] += 1
        if not ok:
            self.fail(detail() if callable(detail) else detail)
        return ok

    def fail(self, detail) -> None:
        self.data["failures"] += 1
        if len(self.data["counterexamples"]) < MAX_COUNTEREXAMPLES:
            self.data["counterexamples"].append(detail)

    def done(self, **extra) -> dict:
        self.data.update(extra)
        self.data["passed"] = self.data["failures"] == 0
        return self.data


def primitive_vectors(rank: int, bound: int) -> Iterable[tuple[int, ...]]:
    """Primitive vectors with every coordinate in [-bound, bound]."""
    for v in itertools.product(range(-bound, bound + 1), repeat=rank):
        if content(v) == 1:
            yield v


def eichler_test_lattice(n: int) -> GramLattice:
    """U + U + (-(2n+2))."""
    U = hyperbolic_U()
    return direct_sum(U, U, rank_one(-(2 * n + 2)))


# ---------------------------------------------------------------------------
# random isotropic vectors and transvections on U^k + (-2N)


def _split_shape(L: GramLattice) -> tuple[int, int]:
    """(number of leading hyperbolic planes, -e^2/2) for U^k + (-2N) bases."""
    planes = eichler.hyperbolic_planes(L)
    k = len(planes)
    if planes != [(2 * i, 2 * i + 1) for i in range(k)] or L.rank != 2 * k + 1:
        raise LatticeError("expected a basis of the form U^k + <-2N>")
    return k, -L.gram[-1][-1] // 2


def random_isotropic(L: GramLattice, rng: random.Random, size: int = 6) -> list[int]:
    """A random nonzero isotropic vector: sum x_i y_i = N z^2 solved for y_1, y_2."""
    k, N = _split_shape(L)
    while True:
        x = [rng.randint(-size, size) for _ in range(k)]
        y = [rng.randint(-size, size) for _ in range(k)]
        z = rng.randint(-size, size)
        rhs = N * z * z - sum(a * b for a, b in zip(x[2:], y[2:]))
        g, (s1, s2) = bezout(x[:2])
        if g == 0 or rhs % g:
            continue
        # particular solution plus a random multiple of the kernel (x2, -x1)/g
        c = rng.randint(-2, 2)
        y[0] = s1 * rhs // g + c * x[1] // g
        y[1] = s2 * rhs // g - c * x[0] // g
        v = [c for pair in zip(x, y) for c in pair] + [z]
        if any(v):
            assert square(L, v) == 0
            return v


def random_orthogonal(L: GramLattice, e: Sequence[int], rng: random.Random, size: int = 6) -> list[int]:
    """a = (e, y) x - (e, x) y, orthogonal to e by construction."""
    x = [rng.randint(-size, size) for _ in range(L.rank)]
    y = [rng.randint(-size, size) for _ in range(L.rank)]
    ey, ex = inner(L, e, y), inner(L, e, x)
    return [ey * a - ex * b for a, b in zip(x, y)]


def random_transvection_pair(L: GramLattice, rng: random.Random) -> tuple[tuple[int, ...], tuple[int, ...]]:
    e = random_isotropic(L, rng)
    return tuple(e), tuple(random_orthogonal(L, e, rng))


# ---------------------------------------------------------------------------
# suites


def disc_suite(n_max: int = 25) -> dict:
    """A_L cyclic of order 2n+2 with a generator of value -1/(2n+2) mod 2."""
    from fractions import Fraction

    rep = _Report("disc", n_max=n_max)
    for n in range(1, n_max + 1):
        A = kummer.kummer_lattice(n).discriminant_group
        N = 2 * n + 2
        rep.check(A.is_cyclic and A.order == N, lambda: {"n": n, "invariant_factors": list(A.invariant_factors)})
        target = Fraction(-1, N) % 2
        gen = disc_class(kummer.kummer_lattice(n), kummer.e_n(n))
        rep.check(gen.q_value == target and A.order == N,
                  lambda: {"n": n, "q_value": str(gen.q_value), "expected": str(target)})
    return rep.done()


def transvection_suite(n_values: Iterable[int] = range(1, 11), count: int = 1000, seed: int = 0) -> dict:
    """Random Eichler transvections on U + U + (-(2n+2)) lie in the special stable orthogonal group."""
    n_values = list(n_values)
    rep = _Report("transvections", n=n_values, count=count, seed=seed)
    rng = random.Random(seed)
    for n in n_values:
        L = eichler_test_lattice(n)
        for _ in range(count):
            e, a = random_transvection_pair(L, rng)
            try:
                g = transvection(L, e, a)
            except LatticeError as exc:  # includes a failed Gram check
                rep.fail({"n": n, "e": list(e), "a": list(a), "error": str(exc)})
                continue
            x = [rng.randint(-9, 9) for _ in range(L.rank)]
            ax, ex, qa = inner(L, a, x), inner(L, e, x), square(L, a)
            formula = [xi - ax * ei + ex * ai - (qa // 2) * ex * ei for xi, ei, ai in zip(x, e, a)]
            rep.check(g.det == 1 and g.disc_scalar == 1 and g.orientation == 1 and g(x) == formula,
                      lambda: {"n": n, "e": list(e), "a": list(a), "det": g.det,
                               "disc": g.disc_action_summary, "orientation": g.orientation})
    return rep.done()


def _word_check(L: GramLattice, v, word, canon) -> str | None:
    g = word_matrix(L, word)  # validates the Gram form
    if g(v) != canon:
        return "g(v) != canonical vector"
    if g.det != 1:
        return f"det {g.det}"
    if g.disc_scalar != 1:
        return f"disc action {g.disc_action_summary}"
    if g.orientation != 1:
        return f"orientation {g.orientation}"
    return None


def eichler_suite(bound: int = 5, n: int = 2, pair_samples: int = 2000, seed: int = 0) -> dict:
    """Constructive Eichler criterion on all primitive vectors of U + U + (-(2n+2)) in a box.

    For each v: its reduction word g_v is an isometry with det 1, trivial
    disc action and orientation +1, and g_v(v) is a canonical vector.  The
    canonical vector must depend only on (v^2, [v/div v]), which makes every
    Eichler-equivalent pair (v, w) satisfy the postconditions through
    g = g_w^-1 g_v.  Consecutive pairs in each class (and a random sample of
    further pairs) also go through ``construct_isometry`` literally.
    """
    L = eichler_test_lattice(n)
    rep = _Report("eichler", n=n, bound=bound)
    classes: dict[tuple, list] = defaultdict(list)
    canon_of: dict[tuple, tuple] = {}
    vectors = 0
    for v in primitive_vectors(L.rank, bound):
        vectors += 1
        try:
            word, canon = eichler_reduction(L, v)
            problem = _word_check(L, v, word, canon)
        except (LatticeError, RuntimeError) as exc:
            problem = f"{type(exc).__name__}: {exc}"
            canon = None
        if not rep.check(problem is None, {"v": list(v), "problem": problem}):
            continue
        key = (square(L, v), disc_class(L, v).components)
        c = canon_of.setdefault(key, tuple(canon))
        rep.check(c == tuple(canon), {"v": list(v), "problem": "canonical vector not determined by the invariants",
                                      "canon": list(canon), "expected": list(c)})
        classes[key].append(v)

    rng = random.Random(seed)
    pairs = []
    for members in classes.values():
        pairs.extend(zip(members, members[1:]))
    sampled = [p for p in pairs if p[0] != p[1]]
    if pair_samples is not None and len(sampled) > pair_samples:
        sampled = rng.sample(sampled, pair_samples)
    big = [m for m in classes.values() if len(m) > 1]
    for _ in range(min(pair_samples or 0, len(big) and pair_samples)):
        members = rng.choice(big)
        sampled.append(tuple(rng.sample(members, 2)))
    literal = 0
    for v, w in sampled:
        literal += 1
        try:
            g = construct_isometry(L, v, w)
            ok = g(v) == list(w) and g.det == 1 and g.disc_scalar == 1 and g.orientation == 1
            detail = {"v": list(v), "w": list(w), "det": g.det, "orientation": g.orientation}
        except (LatticeError, RuntimeError) as exc:
            ok, detail = False, {"v": list(v), "w": list(w), "error": str(exc)}
        rep.check(ok, detail)
    eq_pairs = sum(len(m) * (len(m) - 1) for m in classes.values())
    return rep.done(vectors=vectors, classes=len(classes), equivalent_ordered_pairs=eq_pairs,
                    literal_pairs=literal)


def _partition(keys: dict) -> set[frozenset]:
    blocks = defaultdict(set)
    for v, k in keys.items():
        blocks[k].add(v)
    return {frozenset(b) for b in blocks.values()}


def faithfulness_suite(n_values: Iterable[int] = (2, 3, 4), bound: int = 3, pair_samples: int = 200,
                       seed: int = 0) -> dict:
    """Three predicates on pairs of polarization classes agree.

    (a) equal square and saturation invariant, (b) equal normal form, and
    (c) an explicit monodromy operator maps one class to the other.  Each
    predicate is an equivalence relation given by a key, so they agree on
    all pairs iff the three partitions coincide.  For (c) every vector gets
    an explicit operator to the representative ``realize(normal_form)``
    (checked with ``is_monodromy``); pairs in a block are connected by
    composing two of them, and vectors in different blocks are never
    connected by ``monodromy_isometry`` because it demands equal squares
    and +-equal discriminant classes.
    """
    n_values = list(n_values)
    rep = _Report("faithfulness", n=n_values, bound=bound)
    rng = random.Random(seed)
    stats = {}
    for n in n_values:
        L = kummer.kummer_lattice(n)
        N = 2 * n + 2
        r = kummer.reflection_e(n)
        sat_key, nf_key, mono_key = {}, {}, {}
        rep_words: dict = {}
        ops: dict = {}
        for h in primitive_vectors(L.rank, bound):
            q = square(L, h)
            if q <= 0:
                continue
            p = kummer.normal_form(n, h)
            sat_key[h] = (q, kummer.saturation_invariant(n, h))
            nf_key[h] = p
            c = kummer.disc_class_coefficient(n, h)
            mono_key[h] = (q, min(c, (-c) % N))
            # explicit monodromy operator h -> realize(p)
            target = kummer.realize(p)
            if p not in rep_words:
                rep_words[p] = (eichler_reduction(L, target), kummer.disc_class_coefficient(n, target))
            (word_t, canon_t), c_t = rep_words[p]
            flip = c != c_t
            start = r(list(h)) if flip else h
            word_h, canon_h = eichler_reduction(L, start)
            if canon_h != canon_t:
                rep.fail({"n": n, "h": list(h), "problem": "no Eichler path to the representative"})
                continue
            g = word_matrix(L, word_h + invert_word(word_t))
            if flip:
                g = g @ r
            ok = g(list(h)) == target and kummer.is_monodromy(n, g)
            rep.check(ok, lambda: {"n": n, "h": list(h), "det": g.det, "chi": g.disc_scalar})
            if len(ops) < pair_samples * 2 and rng.random() < 0.01:
                ops[h] = g
        parts = [_partition(k) for k in (sat_key, nf_key, mono_key)]
        rep.check(parts[0] == parts[1], {"n": n, "problem": "saturation and normal-form partitions differ"})
        rep.check(parts[1] == parts[2], {"n": n, "problem": "normal-form and monodromy partitions differ"})
        # literal pair operators through monodromy_isometry
        keys = list(ops)
        for _ in range(pair_samples):
            h1, h2 = rng.sample(keys, 2)
            same = nf_key[h1] == nf_key[h2]
            try:
                g = kummer.monodromy_isometry(n, h1, h2)
                built = g(list(h1)) == list(h2) and kummer.is_monodromy(n, g)
            except LatticeError:
                built = False
            rep.check(built == same, {"n": n, "h1": list(h1), "h2": list(h2), "same_type": same})
        stats[str(n)] = {"vectors": len(nf_key), "orbits": len(parts[1])}
    return rep.done(per_n=stats)


def _random_monodromy_word(n: int, rng: random.Random, length: int) -> list:
    L = kummer.kummer_lattice(n)
    ops = []
    for _ in range(length):
        if rng.random() < 0.25:
            ops.append(None)  # reflection in e
        else:
            ops.append(random_transvection_pair(L, rng))
    return ops


def roundtrip_suite(n_max: int = 10, d_max: int = 50, words: int = 10_000, seed: int = 0) -> dict:
    """normal_form o realize = id, and normal_form is constant along random monodromy words."""
    rep = _Report("roundtrip", n_max=n_max, d_max=d_max, words=words, seed=seed)
    types = []
    for n in range(2, n_max + 1):
        N = 2 * n + 2
        for t, beta in kummer.admissible_pairs(n):
            m = kummer._m_for(n, beta)
            for d in range(1, d_max + 1):
                sq = t * t * 2 * d - (beta // m) ** 2 * N
                if sq <= 0:
                    continue
                p = kummer.PolarizationType(n, sq, t, beta, m, d)
                h = kummer.realize(p)
                rep.check(kummer.normal_form(n, h) == p, lambda: {"type": p.to_json(), "h": h})
                types.append((p, h))
    rng = random.Random(seed)
    for _ in range(words):
        p, h = rng.choice(types)
        n = p.n
        L = kummer.kummer_lattice(n)
        x = list(h)
        ops = _random_monodromy_word(n, rng, rng.randint(1, 4))
        for op in ops:
            x = kummer.reflection_e(n)(x) if op is None else apply_word(L, (op,), x)
        rep.check(kummer.normal_form(n, x) == p, lambda: {"type": p.to_json(), "image": x})
    return rep.done(types=len(types))


def calculus_suite(n_max: int = 20, pa_max: int = 40) -> dict:
    """Dual divisor coefficients, both square computations, divisibility of t*D_k, positivity."""
    from fractions import Fraction

    rep = _Report("calculus", n_max=n_max, pa_max=pa_max)
    for n in range(1, n_max + 1):
        L = kummer.kummer_lattice(n)
        for k in range(1, n + 2):
            for reduced in (False, True):
                D = divisors.dual_divisor(divisors.curve_class(n, k, reduced))
                expected = Fraction(2 * k - 1, 2 * (n + 1)) if reduced else Fraction(k, n + 1)
                rep.check(D.coef_h == 1 and D.coef_delta == -expected,
                          {"n": n, "k": k, "reduced": reduced, "divisor": D.to_json()})
                _, s, t = divisors.primitive_multiple(n, k, reduced)
                for p_a in range(2, pa_max + 1):
                    sq = divisors.divisor_square(n, k, p_a, reduced)
                    v = divisors.divisor_vector(n, k, p_a, reduced)
                    rep.check(square(L, v) == sq * t * t and D.square(p_a) == sq,
                              {"n": n, "k": k, "reduced": reduced, "p_a": p_a})
                    rep.check(divisibility(L, v) == t, {"n": n, "k": k, "reduced": reduced, "p_a": p_a})
                rep.check(divisors.divisor_square(n, k, k + 2, reduced) > 0,
                          {"n": n, "k": k, "reduced": reduced, "problem": "q(D_k) <= 0 at p_a = k+2"})
    return rep.done()


def coverage_suite(n_values: Iterable[int] = range(2, 21), d_max: int = 50) -> dict:
    n_values = list(n_values)
    rep = _Report("coverage", n=n_values, d_max=d_max)
    for n in n_values:
        report = divisors.coverage(n, d_max)
        rep.check(not report["gaps"], {"n": n, "gaps": report["gaps"]})
        if n == 2:
            # the witness table does not depend on d_max
            seen = set(divisors.witness_table(2))
            rep.check(seen == {(1, 0), (2, 3), (3, 2), (6, 1)}, {"n": 2, "witnessed": sorted(seen)})
    return rep.done()


def brute_force_types(n: int, sq: int, bound: int) -> set:
    """Normal forms of all primitive vectors of square sq with coordinates in [-bound, bound].

    Solves a3*b3 = sq/2 + (n+1) c^2 - a1 b1 - a2 b2 through a product table
    instead of running over all (2 bound + 1)^7 vectors.
    """
    rng_ = range(-bound, bound + 1)
    products = defaultdict(list)
    for a, b in itertools.product(rng_, repeat=2):
        products[a * b].append((a, b))
    found = set()
    cache = {}
    for a1, b1, a2, b2, c in itertools.product(rng_, repeat=5):
        rest = sq // 2 + (n + 1) * c * c - a1 * b1 - a2 * b2
        for a3, b3 in products.get(rest, ()):
            h = (a1, b1, a2, b2, a3, b3, c)
            if content(h) != 1:
                continue
            key = (gcd(a1, b1, a2, b2, a3, b3), c)
            if key not in cache:
                cache[key] = kummer.normal_form(n, h)
            found.add(cache[key])
    return found


def orbits_suite(n: int = 2, bound: int = 6, expected: dict | None = None) -> dict:
    """orbit_enumerate counts and agreement with a brute-force search over a box.

    The normal form of a class depends only on its square, the content of
    its U^3 part and its e-coefficient; the brute force evaluates
    normal_form once per such combination, on an actual vector.
    """
    if expected is None:
        expected = {4: 1, 12: 2}
    rep = _Report("orbits", n=n, bound=bound)
    detail = {}
    for sq, count in sorted(expected.items()):
        listed = set(kummer.orbit_enumerate(n, sq))
        brute = brute_force_types(n, sq, bound)
        rep.check(len(listed) == count, {"square": sq, "listed": len(listed), "expected": count})
        rep.check(listed == brute, {"square": sq, "listed": sorted(p.key for p in listed),
                                    "brute_force": sorted(p.key for p in brute)})
        detail[str(sq)] = sorted([list(p.key) for p in listed])
    return rep.done(types=detail)


def _determinantal_divisors(m: list[list[int]]) -> list[int]:
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                g = gcd(g, determinant([[m[i][j] for j in ci] for i in ri]))
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g)
    return out


def snf_suite(count: int = 1000, entry_bound: int = 20, max_dim: int = 5, seed: int = 0) -> dict:
    """left * M * right = diag with unimodular left, right and a divisor chain.

    The invariants are compared with ratios of determinantal divisors
    (gcds of k x k minors), an independent characterization.
    """
    rep = _Report("snf", count=count, entry_bound=entry_bound, seed=seed)
    rng = random.Random(seed)
    for _ in range(count):
        r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
        m = [[rng.randint(-entry_bound, entry_bound) for _ in range(c)] for _ in range(r)]
        s = smith_normal_form(m)
        prod = mat_mul(mat_mul(s.left, m), s.right)
        inv = s.invariants
        shape_ok = prod == [list(row) for row in s.diag] and all(
            s.diag[i][j] == 0 for i in range(r) for j in range(c) if i != j)
        uni = abs(determinant(s.left)) == 1 and abs(determinant(s.right)) == 1
        chain = all(x >= 0 for x in inv) and all(
            (inv[i + 1] % inv[i] == 0) if inv[i] else inv[i + 1] == 0 for i in range(len(inv) - 1))
        dd = _determinantal_divisors(m)
        oracle, prev = [], 1
        for x in dd:
            oracle.append(x // prev if prev else 0)
            prev = x if x else 0
        rep.check(shape_ok and uni and chain and inv == oracle,
                  lambda: {"matrix": m, "invariants": inv, "expected": oracle})
    return rep.done()


def run_suite(name: str, **kwargs) -> dict:
    suites = {
        "disc": disc_suite,
        "transvections": transvection_suite,
        "eichler": eichler_suite,
        "faithfulness": faithfulness_suite,
        "roundtrip": roundtrip_suite,
        "calculus": calculus_suite,
        "coverage": coverage_suite,
        "orbits": orbits_suite,
        "snf": snf_suite,
    }
    if name not in suites:
        raise LatticeError(f"unknown suite {name!r}")
    return suites[name](**kwargs)
