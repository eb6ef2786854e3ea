import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummer_orbits.eichler import (
    EichlerError,
    Isometry,
    apply_word,
    construct_isometry,
    eichler_equivalent,
    eichler_reduction,
    inequivalence_reason,
    invert_word,
    is_in_tilde_O_plus,
    negation,
    orientation_sign,
    reflection,
    transvection,
    word_matrix,
)
from kummer_orbits.kummer import kummer_lattice
from kummer_orbits.lattice_core import (
    LatticeError,
    content,
    direct_sum,
    disc_class,
    hyperbolic_U,
    rank_one,
    square,
)
from kummer_orbits.verify import eichler_test_lattice, random_transvection_pair

U = hyperbolic_U()
UU = direct_sum(U, U)
L6 = eichler_test_lattice(2)
K2 = kummer_lattice(2)

vec5 = st.lists(st.integers(-5, 5), min_size=5, max_size=5).filter(lambda v: any(v) and content(v) == 1)


class TestTransvection:
    def test_example(self):
        g = transvection(UU, [1, 0, 0, 0], [0, 0, 1, 0])
        assert g([0, 1, 0, 0]) == [0, 1, 1, 0]

    def test_trivial_cases(self):
        assert transvection(UU, [1, 0, 0, 0], [0, 0, 0, 0]) == Isometry.identity(UU)
        assert transvection(UU, [1, 0, 0, 0], [3, 0, 0, 0]) == Isometry.identity(UU)

    def test_preconditions(self):
        with pytest.raises(LatticeError):
            transvection(UU, [1, 1, 0, 0], [0, 0, 1, 0])
        with pytest.raises(LatticeError):
            transvection(UU, [1, 0, 0, 0], [0, 1, 0, 0])

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_random_special(self, n):
        L = eichler_test_lattice(n)
        rng = random.Random(n)
        for _ in range(50):
            e, a = random_transvection_pair(L, rng)
            g = transvection(L, e, a)
            assert g.det == 1 and g.disc_scalar == 1 and g.orientation == 1
            assert g.inverse() == transvection(L, e, [-c for c in a])

    def test_word_order(self):
        w = (((1, 0, 0, 0, 0), (0, 0, 1, 0, 0)), ((0, 1, 0, 0, 0), (0, 0, 0, 1, 0)))
        g1, g2 = (word_matrix(L6, (x,)) for x in w)
        assert word_matrix(L6, w) == g2 @ g1
        v = [1, 2, 3, 4, 5]
        assert apply_word(L6, w, v) == g2(g1(v))
        assert word_matrix(L6, w + invert_word(w)) == Isometry.identity(L6)


class TestIsometry:
    def test_rejects_non_isometry(self):
        with pytest.raises(LatticeError):
            Isometry.from_matrix(U, [[1, 1], [0, 1]])

    def test_orientation_examples(self):
        assert orientation_sign(K2, Isometry.identity(K2)) == 1
        assert orientation_sign(K2, negation(K2)) == -1
        r = reflection(K2, [0] * 6 + [1])
        assert r.orientation == 1 and r.disc_scalar == -1 and r.det == -1

    def test_disc_action(self):
        assert Isometry.identity(K2).disc_action_summary == "+1"
        assert negation(K2).disc_action_summary == "-1"

    def test_json(self):
        j = Isometry.identity(U).to_json()
        assert j == {"matrix": [[1, 0], [0, 1]], "det": 1, "disc_action": "+1", "orientation": 1}

    def test_multiplicative(self):
        rng = random.Random(3)
        gs = [transvection(L6, *random_transvection_pair(L6, rng)) for _ in range(4)]
        r = reflection(L6, [0, 0, 0, 0, 1])
        for a, b in itertools.product(gs + [r], repeat=2):
            c = a @ b
            assert c.det == a.det * b.det
            assert c.disc_scalar == (a.disc_scalar * b.disc_scalar)
            assert c.orientation == a.orientation * b.orientation
            assert (c @ c.inverse()) == Isometry.identity(L6)

    @settings(max_examples=50, deadline=None)
    @given(vec5)
    def test_disc_class_equivariant(self, v):
        r = reflection(L6, [0, 0, 0, 0, 1])
        c, cr = disc_class(L6, v), disc_class(L6, r(v))
        assert cr.components == tuple((-x) % 6 for x in c.components)
        assert cr.q_value == c.q_value


class TestCriterion:
    def test_examples(self):
        v, w = [1, 2, 0, 0, 0], [0, 0, 1, 2, 0]
        assert eichler_equivalent(L6, v, v)
        assert eichler_equivalent(L6, v, w)
        assert not eichler_equivalent(L6, [1, 6, 0, 0, 0], [3, 3, 0, 0, 1])
        assert "discriminant" in inequivalence_reason(L6, [1, 6, 0, 0, 0], [3, 3, 0, 0, 1])
        assert "square" in inequivalence_reason(L6, [1, 2, 0, 0, 0], [1, 3, 0, 0, 0])

    @pytest.mark.parametrize("v,w", [([1, 2, 0, 0, 0], [1, 2, 0, 0, 0]), ([1, 2, 0, 0, 0], [0, 0, 1, 2, 0]),
                                     ([1, 0, 0, 0, 0], [0, 0, 0, 1, 0]), ([3, 3, 0, 0, 1], [0, 0, 3, 3, 1])])
    def test_construct_examples(self, v, w):
        g = construct_isometry(L6, v, w)
        assert g(v) == w and is_in_tilde_O_plus(g)

    def test_construct_refuses(self):
        with pytest.raises(EichlerError):
            construct_isometry(L6, [1, 6, 0, 0, 0], [3, 3, 0, 0, 1])
        with pytest.raises(EichlerError):
            construct_isometry(L6, [2, 0, 0, 0, 0], [0, 2, 0, 0, 0])
        with pytest.raises(EichlerError):
            construct_isometry(direct_sum(U, rank_one(-2)), [1, 0, 0], [0, 1, 0])

    def test_explicit_planes(self):
        L = direct_sum(rank_one(-6), U, U)
        g = construct_isometry(L, [1, 1, 2, 0, 0], [1, 0, 0, 1, 2], planes=[(1, 2), (3, 4)])
        assert g([1, 1, 2, 0, 0]) == [1, 0, 0, 1, 2] and is_in_tilde_O_plus(g)
        with pytest.raises(EichlerError):
            construct_isometry(L, [1, 1, 2, 0, 0], [1, 0, 0, 1, 2], planes=[(0, 1), (3, 4)])

    @settings(max_examples=200, deadline=None)
    @given(vec5, st.randoms(use_true_random=False))
    def test_random_pairs(self, v, rnd):
        # w obtained from v by a random word is always equivalent
        word = tuple(random_transvection_pair(L6, rnd) for _ in range(3))
        w = apply_word(L6, word, v)
        assert eichler_equivalent(L6, v, w)
        g = construct_isometry(L6, v, w)
        assert g(v) == w and is_in_tilde_O_plus(g)

    def test_canonical_depends_on_invariants(self):
        seen = {}
        for v in itertools.product(range(-2, 3), repeat=5):
            if not any(v) or content(v) != 1:
                continue
            key = (square(L6, v), disc_class(L6, v).components)
            canon = eichler_reduction(L6, v)[1]
            assert seen.setdefault(key, canon) == canon

    def test_equivalence_relation(self):
        vs = [v for v in itertools.product(range(-1, 2), repeat=5) if any(v) and content(v) == 1]
        rng = random.Random(0)
        for _ in range(300):
            a, b, c = rng.sample(vs, 3)
            assert eichler_equivalent(L6, a, b) == eichler_equivalent(L6, b, a)
            if eichler_equivalent(L6, a, b) and eichler_equivalent(L6, b, c):
                assert eichler_equivalent(L6, a, c)

    def test_soundness_sampled(self):
        rng = random.Random(1)
        vs = [v for v in itertools.product(range(-2, 3), repeat=5) if any(v) and content(v) == 1]
        for _ in range(300):
            v, w = rng.sample(vs, 2)
            if eichler_equivalent(L6, v, w):
                continue
            word = tuple(random_transvection_pair(L6, rng) for _ in range(rng.randint(1, 3)))
            assert apply_word(L6, word, v) != list(w)
