"""Counterexample families and desk-scale verifiers for the index-versus-length question."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from sympy import isprime, nextprime
from sympy.ntheory.modular import solve_congruence

from .core import (
    BudgetError,
    PreconditionError,
    RootOfUnity,
    SumOfRoots,
    euler_phi,
    galois_apply,
    make_root,
    sum_to_element,
    units,
)
from .galois import (
    conductor,
    conductor_from_stabilizer,
    crt_lift,
    cyclic_subgroup_of_order,
    orbit_sum,
    stabilizer,
    subgroup_generated,
    unit_order,
)
from .length import LengthQuery, length_interval, min_weight_representation
from .vanishing import strip_vanishing

DEFAULT_EXACT_PHI_CAP = 6000
PRIME_SEARCH_CAP = 10**6


@dataclass(frozen=True)
class CounterexampleReport:
    alpha: SumOfRoots
    weight: int
    conductor: int
    index: int
    exact: bool  # False: conductor taken from the construction, index is a certified lower bound
    guaranteed: int  # lower bound on the index promised by the construction
    certified_length: int | None = None
    primes: tuple[int, ...] = ()

    @property
    def surrogate(self) -> bool:
        """True when the violation flag compares against the weight rather than a certified length."""
        return self.certified_length is None

    @property
    def violates(self) -> bool:
        bound = self.weight if self.certified_length is None else self.certified_length
        return self.index > bound

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "weight": self.weight,
            "conductor": self.conductor,
            "index": self.index,
            "exact": self.exact,
            "guaranteed": self.guaranteed,
            "certified_length": self.certified_length,
            "violates": self.violates,
            "surrogate": self.surrogate,
        }


def product_subgroup(primes, subgroups) -> tuple[int, list[int]]:
    """CRT lifts acting as a generator of ``H_i`` at ``p_i`` and trivially elsewhere.

    Returns ``(n, generators)`` with ``n`` the product of the primes.
    """
    n = math.prod(primes)
    gens = []
    for i, h in enumerate(subgroups):
        g = max(h.elements, key=lambda x: unit_order(x, primes[i]))
        residues = [g if j == i else 1 for j in range(len(primes))]
        gens.append(crt_lift(primes, residues))
    return n, gens


def _orbit_construction(
    primes,
    subgroups,
    extra: SumOfRoots,
    guaranteed: int,
    exact_phi_cap: int,
    certify: bool,
) -> CounterexampleReport:
    alpha = SumOfRoots()
    for p, h in zip(primes, subgroups):
        alpha = alpha + orbit_sum(p, h)
    alpha = alpha + extra
    base, gens = product_subgroup(primes, subgroups)
    n = base * extra.modulus
    if n != base:
        gens = [crt_lift([base, extra.modulus], [g, 1]) for g in gens]
    for g in gens:
        if not permutes_terms(alpha, g):
            raise AssertionError(f"lifted automorphism {g} does not permute the terms")
    product = subgroup_generated(n, gens)
    if euler_phi(n) <= exact_phi_cap:
        stab = stabilizer(alpha)
        if not product.issubset(stab):
            raise AssertionError("product subgroup is not inside the stabilizer")
        rep = conductor_from_stabilizer(stab)
        cond, index, exact = rep.conductor, rep.index, True
    else:
        # conductor n by the square-free orbit argument; the index is at least the product group's order
        cond, index, exact = n, product.order, False
    length = None
    if certify:
        res = length_interval(alpha, alpha.weight)
        length = res.lower if res.certified else None
    return CounterexampleReport(alpha, alpha.weight, cond, index, exact, guaranteed, length, tuple(primes))


def theorem1_construct(
    primes,
    orders,
    exact_phi_cap: int = 20000,
    certify_length: bool = False,
) -> CounterexampleReport:
    """Sum of Gaussian periods ``sum_i orbit_sum(p_i, H_i)`` with ``|H_i| = d_i``.

    Needs at least two distinct primes ``>= 5``, every ``H_i`` nontrivial and
    proper, and some ``d_i >= 3``.
    """
    primes, orders = list(primes), list(orders)
    if len(primes) != len(orders):
        raise PreconditionError("primes and orders differ in length")
    if len(primes) < 2:
        raise PreconditionError("need at least two primes")
    if len(set(primes)) != len(primes):
        raise PreconditionError("primes must be distinct")
    for p, d in zip(primes, orders):
        if p < 5 or not isprime(p):
            raise PreconditionError(f"{p} is not a prime >= 5")
        if d <= 1 or d >= p - 1 or (p - 1) % d:
            raise PreconditionError(f"order {d} is not a nontrivial proper subgroup order for p={p}")
    if max(orders) < 3:
        raise PreconditionError("some subgroup must have order at least 3")
    subgroups = [cyclic_subgroup_of_order(p, d) for p, d in zip(primes, orders)]
    return _orbit_construction(primes, subgroups, SumOfRoots(), math.prod(orders), exact_phi_cap, certify_length)


def _least_prime(d: int, avoid=()) -> int:
    """Least prime ``q`` with ``d | q - 1``, ``(q - 1) / d > 1`` and ``q`` not in ``avoid``."""
    q = 2 * d + 1
    while q <= PRIME_SEARCH_CAP:
        if isprime(q) and q not in avoid:
            return q
        q += d
    raise BudgetError(f"no admissible prime for order {d} below {PRIME_SEARCH_CAP}")


def corollary1_primes(k: int) -> tuple[int, int]:
    if k < 5:
        raise PreconditionError("weight must be at least 5")
    p = _least_prime(2)
    return p, _least_prime(k - 2, avoid=(p,))


def corollary1_construct(k: int, exact_phi_cap: int = 20000, certify_length: bool = False) -> CounterexampleReport:
    """Two Gaussian periods of orders 2 and ``k - 2``; index ``2(k - 2) > k``."""
    p, q = corollary1_primes(k)
    return theorem1_construct((p, q), (2, k - 2), exact_phi_cap, certify_length)


def corollary2_primes(k: int) -> list[int]:
    if k < 6:
        raise PreconditionError("weight must be at least 6")
    primes: list[int] = []
    p = 3
    while len(primes) < k // 3:
        p = nextprime(p)
        if p % 3 == 1:
            primes.append(p)
    return primes


# padding prime for weights not divisible by 3; never 1 mod 3, so never one of the orbit primes
_PAD_PRIME = 5


def corollary2_construct(
    k: int,
    exact_phi_cap: int = DEFAULT_EXACT_PHI_CAP,
    certify_length: bool = False,
) -> CounterexampleReport:
    """``floor(k/3)`` cubic Gaussian periods plus ``k mod 3`` primitive fifth roots.

    The index is computed exactly when ``phi(conductor) <= exact_phi_cap``;
    beyond that the report carries the order of the explicit product subgroup.
    """
    primes = corollary2_primes(k)
    subgroups = [cyclic_subgroup_of_order(p, 3) for p in primes]
    extra = SumOfRoots()
    if k % 3 == 1:
        extra = SumOfRoots([make_root(_PAD_PRIME, 1)])
    elif k % 3 == 2:
        # the pair zeta_5 + zeta_5^4 is itself a period, so it joins the product group
        primes = primes + [_PAD_PRIME]
        subgroups = subgroups + [cyclic_subgroup_of_order(_PAD_PRIME, 2)]
    return _orbit_construction(primes, subgroups, extra, 3 ** (k // 3), exact_phi_cap, certify_length)


# ---------------------------------------------------------------------------
# verifiers


@dataclass
class SweepResult:
    """Outcome of a randomized or exhaustive verification run."""

    checked: int = 0
    failures: list[str] = field(default_factory=list)
    excluded: list[str] = field(default_factory=list)  # certified, but outside the theorem's hypothesis
    uncertified: list[str] = field(default_factory=list)
    equality_cases: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "excluded": len(self.excluded),
            "uncertified": self.uncertified,
            "equality_cases": [list(c) for c in self.equality_cases],
        }


def minimal_prime_power_representation(s: SumOfRoots, q: int) -> SumOfRoots:
    """Least-weight sum of ``q``-th roots equal to ``s`` (``s`` itself a sum of ``q``-th roots)."""
    stripped = strip_vanishing(s)
    rep = min_weight_representation(LengthQuery(stripped, stripped.weight, order_bound=q))
    assert rep is not None  # stripped itself qualifies
    return rep


def permutes_terms(s: SumOfRoots, x: int) -> bool:
    return galois_apply(s, x).counter() == s.counter()


def check_theorem2_instance(s: SumOfRoots, q: int) -> tuple[bool, str]:
    """Index bound and term permutation for one sum of ``q``-th roots."""
    rep = minimal_prime_power_representation(s, q)
    if rep.weight == 0:
        return True, "zero"
    stab = stabilizer(sum_to_element(rep), modulus=q)
    index = conductor(rep).index
    if index > rep.weight:
        return False, f"{rep}: index {index} > {rep.weight}"
    for x in stab:
        if not permutes_terms(rep, x):
            return False, f"{rep}: automorphism {x} does not permute the terms"
    return True, "ok"


def verify_theorem2(p: int, a: int, trials: int = 100, seed: int = 0, max_weight: int = 6) -> SweepResult:
    """Random sums of ``p^a``-th roots: index at most the least ``p^a``-representation weight."""
    if not isprime(p) or a < 1:
        raise PreconditionError("need a prime p and a >= 1")
    q = p**a
    rng = random.Random(seed)
    res = SweepResult()
    for _ in range(trials):
        w = rng.randint(1, max_weight)
        s = SumOfRoots(make_root(q, rng.randrange(q)) for _ in range(w))
        ok, msg = check_theorem2_instance(s, q)
        res.checked += 1
        if not ok:
            res.failures.append(msg)
    return res


def _random_root(rng: random.Random, order_cap: int) -> RootOfUnity:
    n = rng.randint(1, order_cap)
    return make_root(n, rng.choice(units(n)) if n > 1 else 0)


def verify_theorem3(trials: int = 500, order_cap: int = 60, seed: int = 0, max_attempts: int | None = None) -> SweepResult:
    """Random two-root sums of certified length 2 have index at most 2.

    Draws until ``trials`` sums are certified; shorter sums are counted as
    excluded.
    """
    rng = random.Random(seed)
    res = SweepResult()
    attempts = 0
    limit = max_attempts if max_attempts is not None else 20 * trials
    while res.checked < trials and attempts < limit:
        attempts += 1
        s = SumOfRoots([_random_root(rng, order_cap), _random_root(rng, order_cap)])
        interval = length_interval(s, 2)
        if not interval.certified:
            res.uncertified.append(str(s))
            continue
        if interval.lower != 2:
            res.excluded.append(str(s))
            continue
        res.checked += 1
        index = conductor(s).index
        if index > 2:
            res.failures.append(f"{s}: index {index}")
    if res.checked < trials:
        res.failures.append(f"only {res.checked} certified sums in {attempts} attempts")
    return res


def roots_of_order(m: int) -> list[RootOfUnity]:
    return [make_root(m, e) for e in (units(m) if m > 1 else (0,))]


def _factor_out(s: SumOfRoots, lead: RootOfUnity, pivot: RootOfUnity) -> tuple[RootOfUnity, list[RootOfUnity]]:
    """``eps = lead / pivot`` and the remaining terms divided by ``eps``."""
    eps = lead * pivot.inverse()
    rest = list(s.terms)
    rest.remove(lead)
    inv = eps.inverse()
    return eps, [inv * t for t in rest]


def _form_check(s: SumOfRoots, p: int, orbit: tuple[int, ...], excluded_primes: tuple[int, ...]) -> bool:
    if s.weight != len(orbit) + 1:
        return False
    orbit_set = {frozenset((a * o) % p for o in orbit) for a in range(1, p)}
    for lead in set(s.terms):
        for c in (1, 5):
            eps, rest = _factor_out(s, lead, make_root(6, c))
            m = eps.order
            if m % 4 or any(m % r == 0 for r in excluded_primes):
                continue
            if any(t.order != p for t in rest):
                continue
            exps = [t.exponent for t in rest]
            if len(set(exps)) == len(exps) and frozenset(exps) in orbit_set:
                return True
    return False


def theorem4_form_check(s: SumOfRoots) -> bool:
    """``s = eps (zeta_6^c + zeta_5^a + zeta_5^{4a})`` with ``4 | ord(eps)`` and ``gcd(ord(eps), 15) = 1``."""
    return _form_check(s, 5, (1, 4), (3, 5))


def theorem5_form_check(s: SumOfRoots) -> bool:
    """``s = eps (zeta_6^c + zeta_7^a + zeta_7^{2a} + zeta_7^{4a})`` with ``4 | ord(eps)`` and ``gcd(ord(eps), 21) = 1``."""
    return _form_check(s, 7, (1, 2, 4), (3, 7))


def theorem4_epsilon_admissible(m: int) -> bool:
    """Orders ``m`` of ``eps`` for which ``eps (zeta_6 + zeta_5 + zeta_5^4)`` reaches index 4."""
    return m % 4 == 0 and math.gcd(m, 15) == 1


def epsilon_admissible_direct(m: int) -> bool:
    """Is there a unit ``x`` modulo ``lcm(30, m)`` with ``x = 17 (mod 30)`` and ``eps^x = -eps``?"""
    if m < 1 or m % 2:
        return False
    sol = solve_congruence((17, 30), (m // 2 + 1, m))
    if sol is None:
        return False
    x, n = sol
    return math.gcd(int(x), int(n)) == 1


def _sweep(
    epsilon_orders,
    tails,
    length: int,
    bound: int,
    form_check,
    restrict_to: int | None = None,
    allowed_restrictions: tuple[int, ...] = (),
) -> SweepResult:
    res = SweepResult()
    for m in epsilon_orders:
        for eps in roots_of_order(m):
            for c in (1, 5):
                for tail in tails:
                    base = SumOfRoots([make_root(6, c), *tail])
                    s = base.rotate(eps)
                    label = f"eps={eps} c={c} tail={[str(t) for t in tail]}"
                    interval = length_interval(s, length - 1)
                    if not interval.certified:
                        res.uncertified.append(label)
                        continue
                    if interval.lower != length:
                        res.excluded.append(label)
                        continue
                    res.checked += 1
                    rep = conductor(s)
                    form = form_check(s)
                    if rep.index > bound:
                        res.failures.append(f"{label}: index {rep.index} > {bound}")
                    elif (rep.index == bound) != form:
                        res.failures.append(f"{label}: index {rep.index} but form check {form}")
                    if rep.index == bound:
                        res.equality_cases.append((m, eps.exponent, c, tuple(t.exponent for t in tail)))
                        if restrict_to is not None:
                            res.failures.extend(
                                _restriction_failures(label, rep, restrict_to, allowed_restrictions)
                            )
    return res


def _restriction_failures(label, rep, restrict_to, allowed) -> list[str]:
    if rep.conductor % restrict_to:
        return [f"{label}: conductor {rep.conductor} not divisible by {restrict_to}"]
    out = []
    for x in rep.stabilizer_at_conductor:
        if unit_order(x, rep.conductor) == rep.index and x % restrict_to not in allowed:
            out.append(f"{label}: generator {x} restricts to {x % restrict_to}")
    return out


def verify_theorem4_sweep(epsilon_orders=(1, 2, 3, 4, 5, 6, 8, 12, 20, 24)) -> SweepResult:
    """Length-3 sums ``eps (zeta_6^c + zeta_5^a + zeta_5^b)``: index <= 4, equality iff the form check passes.

    Also checks that every order-4 fixing automorphism acts on ``Q_30`` as
    ``zeta_30 -> zeta_30^17`` or ``zeta_30^23``.
    """
    tails = [(make_root(5, a), make_root(5, b)) for a, b in itertools.permutations(range(1, 5), 2) if a < b]
    return _sweep(epsilon_orders, tails, 3, 4, theorem4_form_check, 30, (17, 23))


def verify_theorem5_sweep(epsilon_orders=(1, 2, 3, 4, 6, 8, 12, 16)) -> SweepResult:
    """Length-4 sums ``eps (zeta_6^c + three primitive 7th roots)``: index <= 6, equality iff the form check passes."""
    tails = [tuple(make_root(7, e) for e in combo) for combo in itertools.combinations(range(1, 7), 3)]
    return _sweep(epsilon_orders, tails, 4, 6, theorem5_form_check)
