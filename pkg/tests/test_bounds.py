import math

import pytest
import sympy

from cycloforge.bounds import (
    C,
    assembled_bound,
    bell_number,
    bell_upper_bound,
    bound_report,
    chebyshev_theta,
    d_lower_observed,
    lemma3_count_bound,
    main_theorem_bound,
    primes_upto,
    primorial,
    stars_and_bars_count,
    theta_table,
)
from cycloforge.core import CycloError


def test_primes_and_primorial():
    assert primes_upto(30) == [int(p) for p in sympy.primerange(2, 31)]
    assert primorial(8) == 210
    assert primorial(1) == 1
    assert primorial(13) == 30030


def test_theta():
    assert chebyshev_theta(10) == pytest.approx(math.log(210))
    assert chebyshev_theta(10) == pytest.approx(5.3471, abs=1e-4)
    table = theta_table(10**5)
    ks = range(1, 10**5 + 1)
    assert all(table[k] < C * k for k in ks)
    assert table[97] == pytest.approx(chebyshev_theta(97))


def test_stars_and_bars():
    assert stars_and_bars_count(2) == 3
    assert stars_and_bars_count(5) == 278256
    for k in range(1, 31):
        assert math.log(stars_and_bars_count(k)) <= lemma3_count_bound(k)


def test_bell_numbers():
    assert [bell_number(k) for k in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]
    for k in range(40):
        assert bell_number(k) == sympy.bell(k)
    with pytest.raises(CycloError):
        bell_number(-1)


def test_bell_bound():
    assert math.exp(bell_upper_bound(1)) == pytest.approx(1.1427, abs=1e-4)
    assert math.exp(bell_upper_bound(5)) == pytest.approx(52.74, abs=0.01)
    for k in range(1, 21):
        assert math.log(bell_number(k)) < bell_upper_bound(k)


def test_main_theorem_bound():
    assert main_theorem_bound(1) == pytest.approx(5.2320, abs=1e-4)
    assert math.exp(main_theorem_bound(1)) == pytest.approx(187.17, abs=0.01)
    assert math.exp(main_theorem_bound(3)) > 4
    vals = [main_theorem_bound(k) for k in range(1, 51)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    with pytest.raises(CycloError):
        main_theorem_bound(0)


def test_assembled_form_agrees():
    # 2.376 = 3 * 0.792
    for k in range(1, 60):
        assert assembled_bound(k) == pytest.approx(main_theorem_bound(k), rel=1e-12)


@pytest.mark.parametrize("k,value", [(1, 1), (2, 2), (3, 4), (4, 6), (5, 6), (6, 9), (9, 27)])
def test_d_lower_observed(k, value):
    assert d_lower_observed(k) == value


def test_d_lower_observed_growth():
    for k in range(6, 16):
        assert d_lower_observed(k) >= 3 ** (k // 3)


def test_bound_report():
    r = bound_report(5)
    assert r.consistent and r.lower_observed == 6
    assert r.to_dict()["log_upper"] == pytest.approx(main_theorem_bound(5))
