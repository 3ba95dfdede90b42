import json
import random

import pytest

from cycloforge.core import BudgetError, PreconditionError, SumOfRoots, make_root, parse_sum, sum_to_element
from cycloforge.vanishing import (
    CanonicalMVS,
    MVSAtlas,
    canonicalize,
    enumerate_mvs,
    extremal_sum,
    is_minimal_vanishing,
    is_vanishing,
    lam_leung_check,
    partition_minimal,
    prime_root_sum,
    replaced_prime_sum,
    square_free_rotate,
    strip_vanishing,
)

R = prime_root_sum


def test_is_vanishing():
    assert is_vanishing(parse_sum("0/1, 1/3, 2/3"))
    assert is_vanishing(parse_sum("1/6, 5/6, 1/7, 2/7, 3/7, 4/7, 5/7, 6/7"))
    assert not is_vanishing(parse_sum("1/5, 2/5"))
    assert is_vanishing(SumOfRoots())


def test_is_minimal_vanishing():
    assert is_minimal_vanishing(R(5))
    assert not is_minimal_vanishing(R(3) + R(2))
    assert is_minimal_vanishing(replaced_prime_sum(5, [0, 1, 2]))
    assert not is_minimal_vanishing(parse_sum("1/5, 2/5"))
    assert not is_minimal_vanishing(SumOfRoots())


def test_minimality_budget():
    big = SumOfRoots([make_root(17, i) for i in range(17)])
    with pytest.raises(BudgetError):
        is_minimal_vanishing(big)
    assert is_minimal_vanishing(big, cap=17)


def test_partition_examples():
    s = R(2) + R(3, make_root(9, 1))
    blocks = partition_minimal(s)
    assert sorted(b.weight for b in blocks) == [2, 3]
    assert partition_minimal(SumOfRoots()) == []
    with pytest.raises(PreconditionError):
        partition_minimal(parse_sum("1/5"))


def test_partition_of_difference_is_one_block():
    # alpha - sigma_47(alpha) for alpha = i (zeta_6 + zeta_5 + zeta_5^4) at modulus 60
    from cycloforge.core import galois_apply

    alpha = parse_sum("5/12, 9/20, 1/20")
    diff = alpha + (-galois_apply(alpha, 47))
    blocks = partition_minimal(diff)
    assert [b.weight for b in blocks] == [6]


def test_partition_blocks_are_minimal_random():
    rng = random.Random(5)
    pieces = [R(2), R(3), R(5), replaced_prime_sum(5, [0]), extremal_sum(2, 3, 5)]
    for _ in range(25):
        s = SumOfRoots()
        for _ in range(rng.randint(1, 3)):
            s = s + rng.choice(pieces).rotate(make_root(60, rng.randrange(60)))
        blocks = partition_minimal(s, cap=18)
        assert sorted(t for b in blocks for t in b.terms) == list(s.terms)
        assert all(is_minimal_vanishing(b) for b in blocks)


def test_strip_vanishing():
    assert strip_vanishing(parse_sum("0/1, 1/3, 2/3, 1/5")) == parse_sum("1/5")
    assert strip_vanishing(parse_sum("1/8, 7/8")).weight == 2
    assert strip_vanishing(R(5)).weight == 0


def test_square_free_rotate():
    s, eps = square_free_rotate(R(3, make_root(9, 1)))
    assert all(3 % t.order == 0 for t in s.terms)
    assert s == R(3).rotate(eps * make_root(9, 1))
    s, _ = square_free_rotate(R(7, make_root(7, 3)))
    assert all(t.order in (1, 7) for t in s.terms)
    s, _ = square_free_rotate(extremal_sum(2, 3, 5).rotate(make_root(16, 3)))
    assert all(30 % t.order == 0 for t in s.terms)
    with pytest.raises(PreconditionError):
        square_free_rotate(parse_sum("1/5"))


def test_canonicalize_examples():
    c = canonicalize(R(3, make_root(11, 2)))
    assert c.exponents == (0, 2, 4) and c.ell == 6
    assert canonicalize(R(5, make_root(5, 1))) == canonicalize(R(5, make_root(5, 3)))
    assert canonicalize(replaced_prime_sum(5, [0, 1, 2])) != canonicalize(replaced_prime_sum(5, [0, 2, 3]))


@pytest.mark.parametrize("k,count", [(1, 0), (2, 1), (3, 1), (4, 0), (5, 1), (6, 1)])
def test_small_atlases(k, count):
    atlas = enumerate_mvs(k)
    assert atlas.complete and len(atlas) == count


def test_weight6_class_is_the_extremal_sum():
    (entry,) = enumerate_mvs(6).entries
    assert entry == canonicalize(extremal_sum(2, 3, 5))
    assert entry == canonicalize(replaced_prime_sum(5, [0]))


def test_atlas_entries_are_valid_and_rotation_closed():
    rng = random.Random(2)
    for k in range(2, 7):
        for entry in enumerate_mvs(k).entries:
            s = entry.to_sum()
            assert s.weight == k and is_minimal_vanishing(s)
            assert canonicalize(s) == entry
            assert lam_leung_check(entry)
            for _ in range(50):
                eps = make_root(rng.randint(1, 210), rng.randrange(210))
                assert canonicalize(s.rotate(eps)) == entry


def test_enumeration_cap_and_bad_weight():
    with pytest.raises(BudgetError):
        enumerate_mvs(9)
    with pytest.raises(PreconditionError):
        enumerate_mvs(0)


def test_node_budget_marks_incomplete():
    atlas = enumerate_mvs(6, node_budget=1)
    assert not atlas.complete


def test_parallel_matches_serial():
    assert enumerate_mvs(6, workers=2).entries == enumerate_mvs(6).entries


def test_atlas_json_round_trip():
    atlas = enumerate_mvs(5)
    data = json.loads(json.dumps(atlas.to_json()))
    assert data == {"weight": 5, "primorial": 30, "complete": True, "entries": [[0, 6, 12, 18, 24]]}
    assert MVSAtlas.from_json(data) == atlas


def test_lam_leung_check_cases():
    assert lam_leung_check(canonicalize(R(5)))
    assert lam_leung_check(canonicalize(extremal_sum(2, 3, 5)))
    assert lam_leung_check(canonicalize(replaced_prime_sum(7, [0])))
    # a vanishing-looking but non-minimal multiset is rejected
    fake = CanonicalMVS(6, (0, 0, 1, 3, 3, 4))
    assert not lam_leung_check(fake)


def test_replaced_sums_vanish():
    for p, pos in ((7, [0]), (5, [0, 1, 2]), (5, [0, 2, 3]), (5, [0])):
        s = replaced_prime_sum(p, pos)
        assert sum_to_element(s).is_zero()
