import random

import pytest

from kummer_orbits import eichler, verify
from kummer_orbits.lattice_core import LatticeError, square


@pytest.mark.parametrize("name,kw", [
    ("disc", {"n_max": 5}),
    ("transvections", {"n_values": [1, 4], "count": 30}),
    ("eichler", {"bound": 2, "pair_samples": 50}),
    ("faithfulness", {"n_values": [2], "bound": 1, "pair_samples": 20}),
    ("roundtrip", {"n_max": 4, "d_max": 5, "words": 100}),
    ("calculus", {"n_max": 4, "pa_max": 8}),
    ("coverage", {"n_values": [2, 5], "d_max": 10}),
    ("orbits", {"n": 2, "bound": 3}),
    ("snf", {"count": 40}),
])
def test_suites_small(name, kw):
    r = verify.run_suite(name, **kw)
    assert r["passed"] and r["suite"] == name and r["checked"] > 0 and r["counterexamples"] == []


def test_unknown_suite():
    with pytest.raises(LatticeError):
        verify.run_suite("nope")


@pytest.mark.parametrize("n", [1, 3, 9])
def test_random_isotropic(n):
    L = verify.eichler_test_lattice(n)
    rng = random.Random(n)
    for _ in range(100):
        e = verify.random_isotropic(L, rng)
        assert any(e) and square(L, e) == 0


def test_eichler_suite_detects_broken_reduction(monkeypatch):
    real = eichler.eichler_reduction

    def broken(L, v, planes=None):
        word, canon = real(L, v, planes)
        return word[:-1], canon

    monkeypatch.setattr(verify, "eichler_reduction", broken)
    r = verify.eichler_suite(bound=1, pair_samples=0)
    assert not r["passed"] and r["counterexamples"]


def test_brute_force_types():
    types = verify.brute_force_types(2, 12, 3)
    assert sorted(p.key for p in types) == [(1, 0), (3, 2)]
