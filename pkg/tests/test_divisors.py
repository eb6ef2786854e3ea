from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kummer_orbits.divisors import (
    CurveClass,
    brill_noether_rho,
    coverage,
    curve_class,
    divisor_invariant,
    divisor_square,
    divisor_vector,
    dual_divisor,
    family_dimension,
    primitive_multiple,
    uniruled_divisor,
    witness_table,
)
from kummer_orbits.kummer import kummer_lattice, normal_form
from kummer_orbits.lattice_core import LatticeError, content, divisibility, square

nk = st.integers(1, 20).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n + 1)))


def test_curve_classes():
    assert curve_class(3, 2, False) == CurveClass(3, 1, -4)
    assert curve_class(3, 2, True) == CurveClass(3, 1, -3)
    assert curve_class(3, 1, True) == CurveClass(3, 1, -1)
    with pytest.raises(LatticeError):
        curve_class(3, 5, False)


def test_dual_examples():
    assert dual_divisor(CurveClass(3, 1, -4)).coef_delta == Fraction(-1, 2)
    assert dual_divisor(CurveClass(3, 1, -3)).coef_delta == Fraction(-3, 8)
    z = dual_divisor(CurveClass(3, 0, 0))
    assert z.coef_h == 0 and z.coef_delta == 0


@given(nk, st.booleans())
def test_dual_pairing(nk_, reduced):
    # (D, delta) = -(2n+2) * coef_delta must reproduce the curve's -r coefficient
    n, k = nk_
    curve = curve_class(n, k, reduced)
    D = dual_divisor(curve)
    assert -D.coef_delta * (2 * n + 2) == -curve.bR


def test_square_examples():
    assert divisor_square(2, 2, 4, False) == Fraction(10, 3)
    assert divisor_square(3, 2, 4, False) == 4


@given(nk, st.booleans(), st.integers(2, 40))
def test_square_both_paths(nk_, reduced, p_a):
    n, k = nk_
    sq = divisor_square(n, k, p_a, reduced)
    _, _, t = primitive_multiple(n, k, reduced)
    assert square(kummer_lattice(n), divisor_vector(n, k, p_a, reduced)) == sq * t * t


def test_primitive_multiple_examples():
    assert primitive_multiple(3, 2, False) == (2, 1, 2)
    assert primitive_multiple(3, 2, True) == (1, 3, 8)
    assert primitive_multiple(2, 3, False) == (3, 1, 1)


@given(nk, st.booleans(), st.integers(2, 40))
def test_divisibility_is_t(nk_, reduced, p_a):
    n, k = nk_
    lam, s, t = primitive_multiple(n, k, reduced)
    v = divisor_vector(n, k, p_a, reduced)
    assert content(v) == 1 and divisibility(kummer_lattice(n), v) == t
    assert Fraction(s, t) == -dual_divisor(curve_class(n, k, reduced)).coef_delta


def test_invariant_examples():
    assert divisor_invariant(2, 1, 3, False).key == (3, 2)
    assert divisor_invariant(2, 2, 4, True).key == (2, 3)
    assert divisor_invariant(2, 1, 3, True).key == (6, 1)


@given(st.integers(2, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n + 1))), st.booleans(),
       st.integers(0, 30))
def test_invariant_independent_of_pa(nk_, reduced, extra):
    n, k = nk_
    assert divisor_invariant(n, k, k + 2, reduced).key == divisor_invariant(n, k, k + 2 + extra, reduced).key


def test_positivity_at_minimal_genus():
    for n in range(1, 21):
        for k in range(1, n + 2):
            for reduced in (False, True):
                assert divisor_square(n, k, k + 2, reduced) > 0


def test_h_a_choice_irrelevant():
    # another primitive H_A of the same square, inside the second and third planes
    n, k, p_a = 3, 2, 5
    _, s, t = primitive_multiple(n, k, False)
    other = [0, 0, t, t * (p_a - 2), t, t, -s]
    L = kummer_lattice(n)
    assert square(L, other) == square(L, divisor_vector(n, k, p_a, False))
    assert normal_form(n, other) == divisor_invariant(n, k, p_a, False)


def test_brill_noether():
    assert brill_noether_rho(2, 1, 3) == 2
    for k in range(1, 30):
        assert brill_noether_rho(k, 1, k + 1) == k
        assert family_dimension(k) == 2 * k + 1


def test_uniruled_record():
    rec = uniruled_divisor(2, 1, reduced=True)
    j = rec.to_json()
    assert j["p_a"] == 3 and j["t"] == 6 and j["divisor_class"] == {"H_A": "1/1", "delta": "-1/6"}
    assert j["polarization_type"]["beta"] == 1
    assert uniruled_divisor(1, 1).type is None


def test_coverage_n2():
    rep = coverage(2, 50)
    assert rep["gaps"] == []
    assert {(x["t"], x["beta"]) for x in rep["types"]} == {(1, 0), (2, 3), (3, 2), (6, 1)}
    assert all(x["witness"]["k"] in (1, 2, 3) for x in rep["types"])
    assert set(witness_table(2)) == {(1, 0), (2, 3), (3, 2), (6, 1)}


def test_coverage_square_limited():
    rep = coverage(2, 1)
    assert rep["gaps"] == [] and rep["square_limited"] == [[3, 2], [6, 1]]


@pytest.mark.parametrize("n", [3, 7, 11])
def test_coverage_no_gaps(n):
    assert coverage(n, 20)["gaps"] == []


def test_coverage_errors():
    with pytest.raises(LatticeError):
        coverage(1, 5)
    with pytest.raises(LatticeError):
        coverage(2, 0)
