"""Vanishing sums of roots of unity: tests, partitions, canonical forms, enumeration."""
from __future__ import annotations

import cmath
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds import primes_upto, primorial
from .core import (
    BudgetError,
    PreconditionError,
    RootOfUnity,
    SumOfRoots,
    lcm,
    make_root,
    prime_factors,
    sum_to_element,
)

DEFAULT_SUBSET_CAP = 16
DEFAULT_WEIGHT_CAP = 8
_SLACK = 1e-9


def is_vanishing(s: SumOfRoots) -> bool:
    return sum_to_element(s).is_zero()


def _maybe_zero(terms) -> bool:
    # float screen; exact arithmetic decides whenever this passes
    return abs(sum((t.value() for t in terms), 0j)) < 1e-6


def _vanishing_subsets(terms: tuple[RootOfUnity, ...], size: int):
    """Sub-multisets of ``terms`` of the given size that vanish, least first."""
    seen = set()
    for idx in itertools.combinations(range(len(terms)), size):
        sub = tuple(terms[i] for i in idx)
        if sub in seen:
            continue
        seen.add(sub)
        if _maybe_zero(sub) and is_vanishing(SumOfRoots(sub)):
            yield idx, sub


def is_minimal_vanishing(s: SumOfRoots, cap: int = DEFAULT_SUBSET_CAP) -> bool:
    """Vanishing, and no proper nonempty sub-multiset vanishes."""
    if s.weight > cap:
        raise BudgetError(f"weight {s.weight} exceeds the subset-search cap {cap}")
    if s.weight == 0 or not is_vanishing(s):
        return False
    # a proper vanishing subset forces a vanishing complement, so half the sizes suffice
    for size in range(1, s.weight // 2 + 1):
        for _ in _vanishing_subsets(s.terms, size):
            return False
    return True


def partition_minimal(s: SumOfRoots, cap: int = DEFAULT_SUBSET_CAP) -> list[SumOfRoots]:
    """Split a vanishing sum into minimal vanishing blocks.

    Repeatedly removes the smallest vanishing sub-multiset, ties broken by
    lexicographic order of the sorted terms, so the result is deterministic.
    """
    if s.weight > cap:
        raise BudgetError(f"weight {s.weight} exceeds the subset-search cap {cap}")
    if not is_vanishing(s):
        raise PreconditionError("sum does not vanish")
    rest = list(s.terms)
    blocks: list[SumOfRoots] = []
    while rest:
        found = None
        for size in range(1, len(rest) + 1):
            if size == len(rest):
                found = (tuple(range(size)), tuple(rest))
                break
            found = next(_vanishing_subsets(tuple(rest), size), None)
            if found is not None:
                break
        idx, sub = found
        blocks.append(SumOfRoots(sub))
        drop = set(idx)
        rest = [t for i, t in enumerate(rest) if i not in drop]
    return blocks


def strip_vanishing(s: SumOfRoots, cap: int = DEFAULT_SUBSET_CAP) -> SumOfRoots:
    """Greedily delete minimal vanishing sub-multisets until none remains."""
    rest = s
    while rest.weight:
        if rest.weight > cap:
            raise BudgetError(f"weight {rest.weight} exceeds the subset-search cap {cap}")
        hit = None
        for size in range(1, rest.weight + 1):
            hit = next(_vanishing_subsets(rest.terms, size), None)
            if hit is not None:
                break
        if hit is None:
            break
        drop = set(hit[0])
        rest = SumOfRoots(t for i, t in enumerate(rest.terms) if i not in drop)
    return rest


# ---------------------------------------------------------------------------
# rotation to square-free orders


def _exponents(s: SumOfRoots, n: int) -> list[int]:
    return [t.exponent * (n // t.order) for t in s.terms]


def square_free_rotate(s: SumOfRoots, check: bool = True) -> tuple[SumOfRoots, RootOfUnity]:
    """Rotate a minimal vanishing sum so that every term has square-free order.

    Returns ``(eps * s, eps)``.  Afterwards every prime dividing a term order is
    at most the weight.  Two reductions are applied until neither fires:

    * if ``p^2`` divides the common order ``N``, the terms fall into cosets of
      ``<zeta_N^p>`` indexed by ``e mod p``; these are linearly independent over
      the subfield, so a minimal sum occupies a single coset, which a rotation
      moves onto the subfield;
    * for the largest prime ``p`` of a square-free ``N``, grouping by the
      ``p``-component gives ``sum f_i zeta_p^i`` with all ``f_i`` equal; if only
      one group is occupied, rotating it away removes ``p``.
    """
    if check and not is_minimal_vanishing(s):
        raise PreconditionError("square-free rotation needs a minimal vanishing sum")
    eps = make_root(1, 0)
    cur = s
    while True:
        n = cur.modulus
        if n == 1:
            break
        exps = _exponents(cur, n)
        square = [p for p in prime_factors(n) if n % (p * p) == 0]
        if square:
            p = square[0]
            residues = {e % p for e in exps}
            if len(residues) != 1:
                raise PreconditionError("terms span several cosets; the sum is not minimal")
            shift = make_root(n, -residues.pop())
        else:
            p = prime_factors(n)[-1]
            m = n // p
            comps = {(e * pow(m, -1, p)) % p for e in exps}
            if len(comps) != 1:
                break
            # multiply by zeta_p^{-a}
            shift = make_root(p, -comps.pop())
        if shift.order == 1:
            break
        cur = cur.rotate(shift)
        eps = eps * shift
    return cur, eps


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True, order=True)
class CanonicalMVS:
    """A minimal vanishing sum up to rotation: exponents of ``zeta_ell``, ``ell = primorial(weight)``."""

    weight: int
    exponents: tuple[int, ...]

    @property
    def ell(self) -> int:
        return primorial(self.weight)

    def to_sum(self) -> SumOfRoots:
        return SumOfRoots(make_root(self.ell, e) for e in self.exponents)

    @property
    def prime_support(self) -> tuple[int, ...]:
        return prime_factors(self.to_sum().modulus)


def least_translate(exps: list[int], ell: int) -> tuple[int, ...]:
    """Lexicographically least sorted multiset among the translates sending a term to 0."""
    return min(tuple(sorted((e - base) % ell for e in exps)) for base in set(exps))


def canonicalize(s: SumOfRoots, check: bool = True) -> CanonicalMVS:
    rotated, _ = square_free_rotate(s, check=check)
    ell = primorial(s.weight)
    if ell % rotated.modulus:
        raise PreconditionError("rotated orders do not divide the primorial; the sum is not minimal")
    return CanonicalMVS(s.weight, least_translate(_exponents(rotated, ell), ell))


# ---------------------------------------------------------------------------
# structure checks


def prime_root_sum(p: int, eps: RootOfUnity | None = None) -> SumOfRoots:
    """``eps * (1 + zeta_p + ... + zeta_p^{p-1})``."""
    s = SumOfRoots(make_root(p, i) for i in range(p))
    return s.rotate(eps) if eps is not None else s


def extremal_sum(p1: int, p2: int, p3: int) -> SumOfRoots:
    """``(sum_{i>0} zeta_{p1}^i)(sum_{i>0} zeta_{p2}^i) + sum_{i>0} zeta_{p3}^i``: the equality case of the weight bound."""
    terms = [make_root(p1, i) * make_root(p2, j) for i in range(1, p1) for j in range(1, p2)]
    terms += [make_root(p3, i) for i in range(1, p3)]
    return SumOfRoots(terms)


def replaced_prime_sum(p: int, positions) -> SumOfRoots:
    """``1 + zeta_p + ... + zeta_p^{p-1}`` with each ``zeta_p^j`` (j in positions) replaced by ``zeta_p^j (zeta_6 + zeta_6^5)``."""
    positions = set(positions)
    terms = []
    for j in range(p):
        root = make_root(p, j)
        if j in positions:
            terms += [root * make_root(6, 1), root * make_root(6, 5)]
        else:
            terms.append(root)
    return SumOfRoots(terms)


def weight_bound(primes) -> int:
    p1, p2, p3 = sorted(primes)[:3]
    return (p1 - 1) * (p2 - 1) + p3 - 1


def lam_leung_check(c: CanonicalMVS) -> bool:
    """Check the structure every minimal vanishing sum must have.

    Either the class is a rotated ``1 + zeta_p + ... + zeta_p^{p-1}`` with ``p``
    the weight, or its prime support has at least three primes and the weight is
    at least ``(p1-1)(p2-1) + p3 - 1``, with equality only for the extremal sum.
    """
    w = c.weight
    support = c.prime_support
    if len(support) == 1 and support[0] == w:
        return c == canonicalize(prime_root_sum(w), check=False)
    if len(support) < 3:
        return False
    bound = weight_bound(support)
    if w < bound:
        return False
    if w == bound:
        return c == canonicalize(extremal_sum(*support[:3]), check=False)
    return True


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class MVSAtlas:
    weight: int
    entries: tuple[CanonicalMVS, ...]
    complete: bool
    nodes: int = field(default=0, compare=False)

    @property
    def primorial(self) -> int:
        return primorial(self.weight)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "primorial": self.primorial,
            "complete": self.complete,
            "entries": [list(c.exponents) for c in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "MVSAtlas":
        if isinstance(data, str):
            data = json.loads(data)
        k = data["weight"]
        if data.get("primorial", primorial(k)) != primorial(k):
            raise ValueError("primorial does not match the weight")
        entries = tuple(sorted(CanonicalMVS(k, tuple(e)) for e in data["entries"]))
        return cls(k, entries, bool(data["complete"]))


def _feasible_supports(k: int) -> dict[frozenset, bool]:
    """For each set of primes <= k: can it grow into a valid support of a weight-k minimal sum?"""
    primes = primes_upto(k)
    subsets = [frozenset(c) for r in range(len(primes) + 1) for c in itertools.combinations(primes, r)]

    def valid(t: frozenset) -> bool:
        if len(t) == 1:
            return next(iter(t)) == k
        return len(t) >= 3 and weight_bound(t) <= k

    return {s: any(valid(t) for t in subsets if s <= t) for s in subsets}


class _Search:
    """Depth-first search over sorted exponent tuples ``0 = e_0 <= e_1 <= ...`` mod ell.

    Only tuples that can be canonical are visited: the first gap ``e_1`` must
    be the smallest cyclic gap.  Pruning rules, all sound:

    * triangle inequality: ``|partial| <= remaining``;
    * for each prime ``p | ell``, a minimal sum containing 1 either has every
      exponent ``= 0 mod p`` or meets all ``p`` residue classes;
    * the support must be able to grow into one allowed by the weight bound.

    The last two exponents are solved for directly from the partial sum.
    Floats only prune; leaves are decided exactly.
    """

    def __init__(self, k: int, node_budget: int | None):
        self.k = k
        self.ell = ell = primorial(k)
        self.roots = [cmath.exp(2j * math.pi * e / ell) for e in range(ell)]
        self.primes = primes_upto(k)
        self.feasible = _feasible_supports(k)
        self.budget = node_budget
        self.nodes = 0
        self.aborted = False
        self.found: set[tuple[int, ...]] = set()

    def _angle_exp(self, z: complex) -> int | None:
        ell = self.ell
        e = round(cmath.phase(z) * ell / (2 * math.pi)) % ell
        return e if abs(self.roots[e] - z) < 1e-7 else None

    def _leaf(self, exps: list[int]):
        ell = self.ell
        gaps = [b - a for a, b in zip(exps, exps[1:])] + [ell - exps[-1]]
        if min(gaps) != exps[1]:
            return
        key = tuple(exps)
        if key in self.found:
            return
        s = SumOfRoots(make_root(ell, e) for e in exps)
        if is_minimal_vanishing(s, cap=max(self.k, DEFAULT_SUBSET_CAP)):
            if least_translate(exps, ell) == key:
                self.found.add(key)

    def _classes_ok(self, exps: list[int], remaining: int) -> bool:
        support = set()
        for p in self.primes:
            used = len({e % p for e in exps})
            if used >= 2:
                support.add(p)
                if p - used > remaining:
                    return False
        return self.feasible[frozenset(support)]

    def run_from(self, first_gap: int):
        """Explore the subtree with ``e_1 = first_gap``."""
        k = self.k
        if k == 2:
            exps = [0, first_gap]
            z = 1 + self.roots[first_gap]
            if abs(z) < 1e-6:
                self._leaf(exps)
            return
        z = 1 + self.roots[first_gap]
        exps = [0, first_gap]
        if abs(z) > k - 2 + _SLACK or not self._classes_ok(exps, k - 2):
            return
        self._dfs(exps, z, first_gap)

    def _close_two(self, exps: list[int], z: complex, g: int):
        t = -z
        r = abs(t)
        if r < 1e-9 or r > 2 + 1e-9:
            return
        theta = cmath.phase(t)
        delta = math.acos(min(1.0, r / 2))
        a = self._angle_exp(cmath.rect(1.0, theta + delta))
        b = self._angle_exp(cmath.rect(1.0, theta - delta))
        if a is None or b is None:
            return
        a, b = sorted((a, b))
        last = exps[-1]
        if a - last < g or b - a < g or self.ell - b < g:
            return
        self._leaf(exps + [a, b])

    def _dfs(self, exps: list[int], z: complex, g: int):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            self.aborted = True
            return
        remaining = self.k - len(exps)
        if remaining == 2:
            self._close_two(exps, z, g)
            return
        if remaining == 1:
            e = self._angle_exp(-z)
            if e is not None and e - exps[-1] >= g and self.ell - e >= g:
                self._leaf(exps + [e])
            return
        lo = exps[-1] + g
        hi = min(self.ell - 1, self.ell - remaining * g)
        bound = remaining - 1 + _SLACK
        roots = self.roots
        for e in range(lo, hi + 1):
            nz = z + roots[e]
            if abs(nz) > bound:
                continue
            exps.append(e)
            if self._classes_ok(exps, remaining - 1):
                self._dfs(exps, nz, g)
            exps.pop()
            if self.aborted:
                return


def _run_gap(args):
    k, gap, budget = args
    search = _Search(k, budget)
    search.run_from(gap)
    return sorted(search.found), search.nodes, search.aborted


def enumerate_mvs(
    k: int,
    cap: int = DEFAULT_WEIGHT_CAP,
    node_budget: int | None = None,
    workers: int = 1,
) -> MVSAtlas:
    """All minimal vanishing sums of weight ``k`` up to rotation.

    The atlas is marked incomplete when ``node_budget`` (per first-gap subtree)
    runs out.  ``workers > 1`` spreads first-gap subtrees over processes; the
    merged result is sorted, so it does not depend on scheduling.
    """
    if k < 1:
        raise PreconditionError("weight must be positive")
    if k > cap:
        raise BudgetError(f"weight {k} exceeds the enumeration cap {cap}")
    if k == 1:
        return MVSAtlas(1, (), True)
    ell = primorial(k)
    gaps = list(range(0, ell // k + 1))
    jobs = [(k, g, node_budget) for g in gaps]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_gap, jobs))
    else:
        results = [_run_gap(j) for j in jobs]
    found: set[tuple[int, ...]] = set()
    nodes = 0
    complete = True
    for keys, n, aborted in results:
        found.update(keys)
        nodes += n
        complete &= not aborted
    entries = tuple(sorted(CanonicalMVS(k, key) for key in found))
    return MVSAtlas(k, entries, complete, nodes)
