import cmath
import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cycloforge.core import (
    CycElement,
    CycloError,
    InvalidOrderError,
    NotAUnitError,
    SumOfRoots,
    add,
    cyclotomic_polynomial,
    euler_phi,
    format_sum,
    galois_apply,
    make_root,
    mul,
    neg,
    normalize_modulus,
    parse_sum,
    sum_to_element,
    units,
)


def test_make_root_reduces():
    assert make_root(10, 4) == make_root(5, 2)
    r = make_root(8, 7)
    assert (r.order, r.exponent) == (8, 7)
    r = make_root(6, 2)
    assert (r.order, r.exponent) == (3, 1)
    assert make_root(7, 14) == make_root(1, 0)
    assert make_root(5, -1) == make_root(5, 4)


def test_make_root_rejects_zero_order():
    with pytest.raises(InvalidOrderError):
        make_root(0, 1)


def test_cyclotomic_small_cases():
    assert cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyclotomic_polynomial(5).coeffs == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("n", list(range(1, 80)) + [105, 210, 385, 420])
def test_cyclotomic_matches_sympy(n):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    poly = cyclotomic_polynomial(n)
    assert list(poly.coeffs) == [int(c) for c in expected]
    assert poly.degree == euler_phi(n)


def test_normalize_modulus():
    assert normalize_modulus(10) == 5
    assert normalize_modulus(56) == 56
    assert normalize_modulus(2) == 1
    assert normalize_modulus(4) == 4


def test_simple_values():
    assert sum_to_element(parse_sum("1/3, 2/3")) == CycElement.integer(-1)
    assert sum_to_element(parse_sum("0/5, 1/5, 2/5, 3/5, 4/5")).is_zero()
    beta = sum_to_element(parse_sum("1/8, 7/8"))
    assert beta * beta == CycElement.integer(2)


def test_ring_examples():
    a = sum_to_element(parse_sum("1/7, 3/7"))
    assert add(a, CycElement.zero()) == a
    z3 = sum_to_element(parse_sum("1/3"))
    z3sq = sum_to_element(parse_sum("2/3"))
    assert mul(z3, z3sq) == CycElement.integer(1)
    assert add(neg(a), a).is_zero()


def test_negated_roots_fold_to_odd_modulus():
    # -zeta_3 = zeta_6^5 lives in Q_3
    elem = sum_to_element(parse_sum("-1/3"))
    assert elem.modulus == 3
    assert elem == sum_to_element(parse_sum("5/6"))


def test_equality_across_moduli():
    one = CycElement.integer(1)
    assert one.lift(12) == one
    assert sum_to_element(parse_sum("1/4, 3/4")).is_zero()
    assert sum_to_element(parse_sum("1/5")) != sum_to_element(parse_sum("2/5"))


def test_galois_apply_on_sums_and_elements():
    alpha = parse_sum("1/8, 7/8, 1/7, 2/7, 4/7")
    elem = sum_to_element(alpha)
    assert galois_apply(elem, 1) == elem
    assert galois_apply(elem, 9) == elem
    assert galois_apply(alpha, 9).counter() == alpha.counter()
    z5 = parse_sum("1/5")
    assert galois_apply(galois_apply(z5, 2), 3) == z5


def test_galois_rejects_non_units():
    with pytest.raises(NotAUnitError):
        galois_apply(parse_sum("1/8"), 2)
    with pytest.raises(NotAUnitError):
        galois_apply(sum_to_element(parse_sum("1/15")), 5)


def test_parse_and_format_round_trip():
    s = parse_sum("1/8, 7/8, 2*1/7, -1/3")
    assert s.weight == 5
    assert parse_sum(format_sum(s)) == s
    assert format_sum(parse_sum("1/7, 1/7")) == "2*1/7"
    assert parse_sum("") == SumOfRoots()
    assert parse_sum("0").weight == 0


@pytest.mark.parametrize("bad", ["1/0", "x/3", "1/3,,", "1/2/3"])
def test_parse_errors(bad):
    with pytest.raises(CycloError):
        parse_sum(bad)


def test_empty_sum():
    s = SumOfRoots()
    assert s.weight == 0 and s.modulus == 1
    assert sum_to_element(s).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_rotated_prime_sum_vanishes(p):
    for eps in (make_root(1, 0), make_root(12, 5), make_root(35, 4)):
        s = SumOfRoots(eps * make_root(p, i) for i in range(p))
        assert sum_to_element(s).is_zero()


def test_large_modulus_falls_back_to_exact_integers():
    # products of many large-coefficient elements stay exact
    a = sum_to_element(parse_sum(", ".join(f"{i}/105" for i in range(1, 60))))
    b = a
    for _ in range(6):
        b = b * a
    ref = a.to_complex() ** 7
    assert abs(b.to_complex() - ref) < 1e-6 * abs(ref)


# --- randomized properties ------------------------------------------------

# orders dividing 5040 keep every common modulus small
ORDERS = [d for d in range(1, 5041) if 5040 % d == 0]
roots = st.builds(lambda n, e: make_root(n, e), st.sampled_from(ORDERS), st.integers(0, 5039))
sums = st.lists(roots, max_size=6).map(SumOfRoots)


@settings(max_examples=150, deadline=None)
@given(sums, sums)
def test_sum_to_element_is_additive(s, t):
    assert sum_to_element(s + t) == sum_to_element(s) + sum_to_element(t)


@settings(max_examples=150, deadline=None)
@given(sums)
def test_exact_value_matches_float(s):
    assert abs(sum_to_element(s).to_complex() - s.value()) < 1e-9


@settings(max_examples=100, deadline=None)
@given(sums, st.integers(0, 10**6))
def test_galois_commutes_with_evaluation(s, seed):
    n = s.modulus
    x = random.Random(seed).choice(units(n)) if n > 1 else 1
    assert sum_to_element(galois_apply(s, x)) == galois_apply(sum_to_element(s), x)


def test_float_cross_check_random():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 420)
        terms = [(rng.randrange(n), rng.choice((-1, 1))) for _ in range(rng.randint(1, 8))]
        s1 = SumOfRoots((-make_root(n, e) if c < 0 else make_root(n, e)) for e, c in terms)
        if rng.random() < 0.5:
            s2 = SumOfRoots(make_root(n, rng.randrange(n)) for _ in range(rng.randint(1, 8)))
        else:
            # same value: pad with a rotated vanishing sum
            p, eps = rng.choice((2, 3, 5, 7)), make_root(n, rng.randrange(n))
            s2 = s1 + SumOfRoots(eps * make_root(p, i) for i in range(p))
        exact = sum_to_element(s1) == sum_to_element(s2)
        close = cmath.isclose(s1.value(), s2.value(), abs_tol=1e-9)
        assert exact == close


def test_units_and_phi():
    assert units(12) == (1, 5, 7, 11)
    assert all(len(units(n)) == euler_phi(n) for n in range(2, 100))
    assert math.prod(units(1)) == 0  # the single class modulo 1
