"""Bounded exhaustive search for the length (least representation weight) of a cyclotomic integer.

Order bound.  Let ``target`` have weight ``w``, common order ``N`` and no
vanishing sub-multiset, and suppose its value equals ``d_1 + ... + d_t'``
(``t' <= t``) where no sub-multiset of the ``d_j`` vanishes.  Split the
vanishing sum ``target - sum d_j`` into minimal blocks.  A block made only of
``d``-terms or only of target terms would be a vanishing sub-multiset of one
side, so every block mixes both.  Rotating a block to square-free orders
involves primes no larger than its weight ``<= w + t``, so every ratio of two
terms in a block has order dividing ``primorial(w + t)``.  Each ``d_j`` is a
target term times such a ratio, hence ``d_j^M = 1`` for
``M = lcm(N, primorial(w + t))``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .bounds import primorial
from .core import (
    BudgetError,
    PreconditionError,
    SumOfRoots,
    lcm,
    make_root,
    sum_to_element,
)
from .vanishing import strip_vanishing

DEFAULT_NODE_BUDGET = 10**8
_SLACK = 1e-9


@dataclass(frozen=True)
class LengthQuery:
    target: SumOfRoots
    max_weight: int
    order_bound: int | None = None

    def __post_init__(self):
        if self.max_weight < 0:
            raise PreconditionError("max_weight must be non-negative")
        m = self.order_bound
        if m is not None and (m < 1 or m % self.target.modulus):
            raise PreconditionError(f"order bound {m} must be a positive multiple of {self.target.modulus}")

    @property
    def modulus(self) -> int:
        if self.order_bound is not None:
            return self.order_bound
        return lcm(self.target.modulus, primorial(self.target.weight + self.max_weight))


def search_size(m: int, t: int) -> int:
    """Number of DFS prefixes visited in the worst case (the last two roots are solved for)."""
    return sum(math.comb(m + w - 3, w - 2) for w in range(2, t + 1))


class _RepresentationSearch:
    def __init__(self, target: SumOfRoots, m: int):
        self.m = m
        self.roots = [cmath.exp(2j * math.pi * e / m) for e in range(m)]
        self.value = target.value()
        self.exact = sum_to_element(target)
        self.nodes = 0

    def _angle_exp(self, z: complex) -> int | None:
        m = self.m
        e = round(cmath.phase(z) * m / (2 * math.pi)) % m
        return e if abs(self.roots[e] - z) < 1e-7 else None

    def _accept(self, exps: list[int]) -> SumOfRoots | None:
        cand = SumOfRoots(make_root(self.m, e) for e in exps)
        return cand if sum_to_element(cand) == self.exact else None

    def search(self, w: int) -> SumOfRoots | None:
        if w == 0:
            return SumOfRoots() if self.exact.is_zero() else None
        return self._dfs([], 0j, w)

    def _dfs(self, exps: list[int], z: complex, w: int) -> SumOfRoots | None:
        self.nodes += 1
        rest = self.value - z
        remaining = w - len(exps)
        lo = exps[-1] if exps else 0
        if remaining == 1:
            e = self._angle_exp(rest)
            if e is not None and e >= lo:
                return self._accept(exps + [e])
            return None
        if remaining == 2:
            r = abs(rest)
            if r > 2 + 1e-9:
                return None
            if r < 1e-9:
                # u + (-u): any u; the least admissible one
                for e in range(lo, self.m):
                    f = (e + self.m // 2) % self.m if self.m % 2 == 0 else None
                    if f is not None and f >= e:
                        hit = self._accept(exps + [e, f])
                        if hit is not None:
                            return hit
                return None
            theta = cmath.phase(rest)
            delta = math.acos(min(1.0, r / 2))
            a = self._angle_exp(cmath.rect(1.0, theta + delta))
            b = self._angle_exp(cmath.rect(1.0, theta - delta))
            if a is None or b is None:
                return None
            a, b = sorted((a, b))
            if a < lo:
                return None
            return self._accept(exps + [a, b])
        bound = remaining - 1 + _SLACK
        for e in range(lo, self.m):
            nz = z + self.roots[e]
            if abs(self.value - nz) > bound:
                continue
            exps.append(e)
            hit = self._dfs(exps, nz, w)
            exps.pop()
            if hit is not None:
                return hit
        return None


def _check_target(target: SumOfRoots):
    if strip_vanishing(target).weight != target.weight:
        raise PreconditionError("target has a vanishing sub-multiset; strip it first")


def min_weight_representation(q: LengthQuery, node_budget: int = DEFAULT_NODE_BUDGET) -> SumOfRoots | None:
    """Least-weight sum of at most ``q.max_weight`` roots of order dividing ``M`` equal to the target.

    Ties are broken by the lexicographically least sorted exponent tuple.
    Returns ``None`` when no such sum exists; raises :class:`BudgetError` when
    the search space is larger than ``node_budget``.
    """
    _check_target(q.target)
    m = q.modulus
    size = search_size(m, q.max_weight)
    if size > node_budget:
        raise BudgetError(f"search over {size} prefixes exceeds the node budget {node_budget}")
    search = _RepresentationSearch(q.target, m)
    for w in range(q.max_weight + 1):
        hit = search.search(w)
        if hit is not None:
            return hit
    return None


def length_upper_bound(s: SumOfRoots) -> int:
    """Weight left after greedily deleting vanishing sub-multisets."""
    return strip_vanishing(s).weight


@dataclass(frozen=True)
class LengthInterval:
    lower: int
    upper: int
    certified: bool
    witness: SumOfRoots | None
    order_bound: int

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "certified": self.certified,
            "witness": str(self.witness) if self.witness is not None else None,
            "order_bound": self.order_bound,
        }


def length_interval(
    s: SumOfRoots,
    max_weight: int,
    order_bound: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> LengthInterval:
    """Bracket the length of ``s``: exact when ``certified`` is true.

    The search runs on ``s`` with its vanishing parts removed, over weights up
    to ``min(max_weight, upper - 1)``.  With an explicit ``order_bound`` the
    result is only certified relative to that bound.
    """
    stripped = strip_vanishing(s)
    upper = stripped.weight
    t = min(max_weight, max(upper - 1, 0))
    q = LengthQuery(stripped, t, order_bound)
    hit = min_weight_representation(q, node_budget) if upper else SumOfRoots()
    if hit is not None:
        return LengthInterval(hit.weight, hit.weight, True, hit, q.modulus)
    lower = t + 1
    return LengthInterval(lower, upper, lower >= upper, stripped, q.modulus)


def certified_length(s: SumOfRoots, node_budget: int = DEFAULT_NODE_BUDGET) -> int | None:
    """The exact length of ``s`` if the bounded search can certify it."""
    res = length_interval(s, length_upper_bound(s), node_budget=node_budget)
    return res.lower if res.certified else None
