"""The reproducibility checklist behind ``cycloforge verify-paper`` and the acceptance tests."""
from __future__ import annotations

import functools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import bounds
from .constructions import (
    corollary2_construct,
    theorem1_construct,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4_sweep,
    verify_theorem5_sweep,
)
from .core import (
    CycElement,
    SumOfRoots,
    divisors,
    euler_phi,
    galois_apply,
    make_root,
    normalize_modulus,
    parse_sum,
    sum_to_element,
    units,
)
from .galois import (
    conductor,
    conductor_from_stabilizer,
    kernel_of_reduction,
    stabilizer,
    subgroup_generated,
    unit_order,
)
from .length import LengthQuery, min_weight_representation
from .vanishing import (
    canonicalize,
    enumerate_mvs,
    extremal_sum,
    lam_leung_check,
    replaced_prime_sum,
)

WEIGHT5_EXAMPLE = "1/8, 7/8, 1/7, 2/7, 4/7"
LENGTH3_EXAMPLE = "5/12, 9/20, 1/20"  # i (zeta_6 + zeta_5 + zeta_5^4)
LENGTH4_EXAMPLE = "5/12, 11/28, 15/28, 23/28"  # i (zeta_6 + zeta_7 + zeta_7^2 + zeta_7^4)

# frozen output of the exhaustive weight-7 enumeration
WEIGHT7_CLASSES = (
    (0, 7, 14, 84, 91, 133, 140),
    (0, 7, 49, 77, 119, 126, 168),
    (0, 30, 60, 90, 120, 150, 180),
)
ATLAS_COUNTS = {2: 1, 3: 1, 4: 0, 5: 1, 6: 1}


@dataclass(frozen=True)
class CheckResult:
    key: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.key:<44} {status}  ({self.seconds:.1f}s) {self.detail}"


@dataclass(frozen=True)
class Check:
    key: str
    func: Callable[[int], tuple[bool, str]]
    slow: bool = False

    def run(self, seed: int = 0) -> CheckResult:
        start = time.perf_counter()
        ok, detail = self.func(seed)
        return CheckResult(self.key, bool(ok), detail, time.perf_counter() - start)


@functools.lru_cache(maxsize=None)
def atlas(k: int):
    return enumerate_mvs(k)


def weight5_example(seed: int = 0) -> tuple[bool, str]:
    alpha = parse_sum(WEIGHT5_EXAMPLE)
    rep = conductor(alpha)
    stab = stabilizer(alpha)
    group = subgroup_generated(56, [9, 15])
    ok = (
        rep.conductor == 56
        and 9 in stab
        and 15 in stab
        and group.order == 6
        and group.is_cyclic()
        and rep.index >= 6 > alpha.weight
    )
    return ok, f"conductor {rep.conductor}, <9,15> order {group.order}, index {rep.index}"


def theorem1_instance(seed: int = 0) -> tuple[bool, str]:
    r = theorem1_construct((5, 7), (2, 3))
    ok = r.conductor == 35 and r.index == 6 and r.weight == 5 and r.violates
    return ok, f"conductor {r.conductor}, index {r.index}, weight {r.weight}"


def corollary2_growth(seed: int = 0) -> tuple[bool, str]:
    r6, r9 = corollary2_construct(6), corollary2_construct(9)
    ok = r6.index >= 9 and r9.index >= 27 and r6.exact and r9.exact
    return ok, f"k=6 index {r6.index}, k=9 index {r9.index}"


def length2_bound(seed: int = 0) -> tuple[bool, str]:
    r = verify_theorem3(trials=500, order_cap=60, seed=seed)
    return r.passed, f"{r.checked} certified sums, {len(r.excluded)} shorter ones set aside"


def prime_power_bound(seed: int = 0) -> tuple[bool, str]:
    failures = []
    for p, a in ((3, 2), (2, 4), (5, 2), (3, 3)):
        r = verify_theorem2(p, a, trials=100, seed=seed)
        failures += r.failures
    return not failures, "; ".join(failures[:3]) or "orders 9, 16, 25, 27"


def _fixing_automorphism(s: str, n: int, x: int, order: int, index: int) -> tuple[bool, str]:
    alpha = parse_sum(s)
    rep = conductor(alpha)
    elem = sum_to_element(alpha)
    fixes = galois_apply(elem, x) == elem
    ok = rep.conductor == n and fixes and unit_order(x, n) == order and rep.index == index
    return ok, f"conductor {rep.conductor}, sigma_{x} fixes: {fixes}, index {rep.index}"


def length3_classification(seed: int = 0) -> tuple[bool, str]:
    ok1, d1 = _fixing_automorphism(LENGTH3_EXAMPLE, 60, 47, 4, 4)
    r = verify_theorem4_sweep((1, 2, 3, 4, 5, 6, 8, 12, 20, 24))
    ok = ok1 and r.passed and not r.uncertified
    return ok, f"{d1}; sweep {r.checked} sums, {len(r.failures)} failures"


def length4_classification(seed: int = 0) -> tuple[bool, str]:
    ok1, d1 = _fixing_automorphism(LENGTH4_EXAMPLE, 84, 59, 6, 6)
    r = verify_theorem5_sweep((1, 2, 3, 4, 6, 8, 12, 16))
    ok = ok1 and r.passed and not r.uncertified
    return ok, f"{d1}; sweep {r.checked} sums, {len(r.failures)} failures"


def small_atlases(seed: int = 0) -> tuple[bool, str]:
    counts = {k: len(atlas(k)) for k in ATLAS_COUNTS}
    ok = counts == ATLAS_COUNTS and all(atlas(k).complete for k in ATLAS_COUNTS)
    ok = ok and atlas(6).entries[0] == canonicalize(extremal_sum(2, 3, 5))
    return ok, f"counts {counts}"


def weight7_atlas(seed: int = 0) -> tuple[bool, str]:
    a = atlas(7)
    found = tuple(c.exponents for c in a.entries)
    return a.complete and found == WEIGHT7_CLASSES, f"{len(found)} classes"


def weight8_atlas(seed: int = 0) -> tuple[bool, str]:
    a = atlas(8)
    expected = sorted(canonicalize(replaced_prime_sum(p, pos)) for p, pos in ((7, [0]), (5, [0, 1, 2]), (5, [0, 2, 3])))
    return a.complete and list(a.entries) == expected, f"{len(a)} classes"


def _lam_leung(weights) -> tuple[bool, str]:
    entries = [c for k in weights for c in atlas(k).entries]
    bad = [c.exponents for c in entries if not lam_leung_check(c)]
    return not bad, f"{len(entries)} entries, {len(bad)} failures"


def lam_leung_structure(seed: int = 0) -> tuple[bool, str]:
    return _lam_leung(range(2, 8))


def lam_leung_structure_weight8(seed: int = 0) -> tuple[bool, str]:
    return _lam_leung([8])


def length_oracle(seed: int = 0) -> tuple[bool, str]:
    out = []
    for s, length in ((LENGTH3_EXAMPLE, 3), (LENGTH4_EXAMPLE, 4)):
        target = parse_sum(s)
        shorter = min_weight_representation(LengthQuery(target, length - 1))
        exact = min_weight_representation(LengthQuery(target, length))
        out.append(shorter is None and exact is not None and exact.weight == length)
    return all(out), "lengths 3 and 4 certified" if all(out) else f"results {out}"


def bound_inequalities(seed: int = 0) -> tuple[bool, str]:
    bell = all(math.log(bounds.bell_number(k)) < bounds.bell_upper_bound(k) for k in range(1, 21))
    stars = all(math.log(bounds.stars_and_bars_count(k)) <= bounds.C * k * k for k in range(1, 31))
    lower = {k: bounds.d_lower_observed(k) for k in range(2, 16)}
    dk = all(math.log(v) <= bounds.main_theorem_bound(k) for k, v in lower.items())
    return bell and stars and dk, f"Bell {bell}, binomial {stars}, d(k) {dk}"


def _random_element(rng: random.Random, n: int) -> CycElement:
    terms = [(rng.choice((-1, 1)), rng.randrange(n)) for _ in range(rng.randint(1, 6))]
    roots = []
    for sign, e in terms:
        r = make_root(n, e)
        roots.append(-r if sign < 0 else r)
    return sum_to_element(SumOfRoots(roots)).lift(normalize_modulus(n))


def _in_field(elem: CycElement, f: int) -> bool:
    """Kernel-containment test for ``elem`` lying in ``Q_f``."""
    big = normalize_modulus(math.lcm(elem.modulus, f))
    lifted = elem.lift(big)
    return all(galois_apply(lifted, x) == lifted for x in kernel_of_reduction(big, math.gcd(big, f)))


def algebra_properties(seed: int = 0, instances: int = 1000) -> tuple[bool, str]:
    rng = random.Random(seed)
    problems = []
    for i in range(instances):
        n = normalize_modulus(rng.randint(1, 200))
        a, b = _random_element(rng, n), _random_element(rng, n)
        us = units(n)
        x, y = rng.choice(us), rng.choice(us)
        if galois_apply(a + b, x) != galois_apply(a, x) + galois_apply(b, x):
            problems.append(f"additivity N={n}")
        if galois_apply(a * b, x) != galois_apply(a, x) * galois_apply(b, x):
            problems.append(f"multiplicativity N={n}")
        if galois_apply(galois_apply(a, x), y) != galois_apply(a, (x * y) % n if n > 1 else 1):
            problems.append(f"composition N={n}")
        rep = conductor_from_stabilizer(stabilizer(a))
        if rep.index * rep.degree != euler_phi(rep.conductor):
            problems.append(f"index*degree N={n}")
        # intersection law: a lies in Q_f and Q_g, so the conductor divides gcd(f, g)
        f, g = n * rng.randint(1, 3), n * rng.randint(1, 3)
        for m in (f, g, rng.choice(divisors(n)) * rng.randint(1, 4)):
            if _in_field(a, m) and normalize_modulus(math.gcd(m, n)) % rep.conductor:
                problems.append(f"field membership N={n} m={m}")
        if _in_field(a, f) and _in_field(a, g) and normalize_modulus(math.gcd(f, g)) % rep.conductor:
            problems.append(f"intersection N={n}")
    return not problems, f"{instances} instances, {len(problems)} failures"


CHECKS: tuple[Check, ...] = (
    Check("weight-5 example: conductor 56, index 6", weight5_example),
    Check("periods of orders 2, 3 at 5, 7", theorem1_instance),
    Check("cubic periods: index >= 3^(k/3)", corollary2_growth),
    Check("length 2: index <= 2", length2_bound),
    Check("prime-power sums: index <= weight", prime_power_bound),
    Check("length 3: conductor 60, index 4, sweep", length3_classification),
    Check("length 4: conductor 84, index 6, sweep", length4_classification),
    Check("vanishing sums of weight <= 6", small_atlases),
    Check("vanishing sums of weight 7", weight7_atlas),
    Check("vanishing sums of weight 8", weight8_atlas, slow=True),
    Check("prime-support weight bound, weight <= 7", lam_leung_structure),
    Check("prime-support weight bound, weight 8", lam_leung_structure_weight8, slow=True),
    Check("length oracle: lengths 3 and 4", length_oracle),
    Check("growth bounds on d(k)", bound_inequalities),
    Check("Galois action and conductor laws", algebra_properties),
)


def run_checks(fast: bool = False, seed: int = 0, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        if fast and check.slow:
            continue
        res = check.run(seed)
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
