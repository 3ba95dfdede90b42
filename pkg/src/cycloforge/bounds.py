"""Log-space evaluation of the growth bounds on the index d(k)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .core import CycloError

# Rosser-Schoenfeld constant: theta(x) < C * x for all x >= 1
C = 1.000028
BELL_CONSTANT = 0.792


@lru_cache(maxsize=64)
def _sieve(n: int) -> np.ndarray:
    flags = np.ones(max(n + 1, 2), dtype=bool)
    flags[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    return [int(p) for p in np.flatnonzero(_sieve(n))]


def primorial(k: int) -> int:
    """Product of the primes ``<= k`` (1 for k < 2)."""
    return math.prod(primes_upto(k))


def chebyshev_theta(k: float) -> float:
    """``sum_{p <= k} ln p``."""
    return math.fsum(math.log(p) for p in primes_upto(int(k)))


def theta_table(n: int) -> np.ndarray:
    """``theta(k)`` for every integer ``0 <= k <= n``."""
    flags = _sieve(n)[: n + 1]
    logs = np.where(flags, np.log(np.maximum(np.arange(n + 1), 1)), 0.0)
    return np.cumsum(logs)


def stars_and_bars_count(k: int) -> int:
    """Number of multisets of ``k`` roots of unity of order dividing ``primorial(k)``."""
    return math.comb(primorial(k) + k - 1, k)


def lemma3_count_bound(k: int) -> float:
    """Natural log of the bound ``e^{C k^2}`` on minimal vanishing sums of weight k up to rotation."""
    return C * k * k


def bell_number(k: int) -> int:
    """Exact Bell number via the Bell triangle."""
    if k < 0:
        raise CycloError("Bell numbers need k >= 0")
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def bell_upper_bound(k: int) -> float:
    """Natural log of ``(0.792 k / ln(k + 1))^k``."""
    if k < 1:
        raise CycloError("bound defined for k >= 1")
    return k * (math.log(BELL_CONSTANT * k) - math.log(math.log(k + 1)))


def main_theorem_bound(k: int) -> float:
    """Natural log of ``k! (2.376 k e^{4Ck} / ln(k + 1))^k``."""
    if k < 1:
        raise CycloError("bound defined for k >= 1")
    return math.lgamma(k + 1) + k * (math.log(2.376) + math.log(k) + 4 * C * k - math.log(math.log(k + 1)))


def assembled_bound(k: int) -> float:
    """Same bound assembled from its factors: ``k! * Bell-bound * (3 e^{4Ck})^k``."""
    return math.lgamma(k + 1) + bell_upper_bound(k) + k * (math.log(3) + 4 * C * k)


# exact indices realised by the length 2, 3 and 4 extremal examples
_SMALL_K_WITNESSES = {
    1: "0/1",
    2: "1/5, 4/5",
    3: "5/12, 1/20, 9/20",
    4: "5/12, 11/28, 15/28, 23/28",
}


def d_lower_observed(k: int, exact_phi_cap: int = 6000) -> int:
    """Largest index at the conductor realised by the known constructions of weight k."""
    from .constructions import corollary1_construct, corollary2_construct
    from .core import parse_sum
    from .galois import index_at_conductor

    if k < 1:
        raise CycloError("k must be positive")
    if k in _SMALL_K_WITNESSES:
        return index_at_conductor(parse_sum(_SMALL_K_WITNESSES[k]))
    best = corollary1_construct(k).index
    if k >= 6:
        best = max(best, corollary2_construct(k, exact_phi_cap=exact_phi_cap).index)
    return best


@dataclass(frozen=True)
class BoundReport:
    k: int
    log_upper: float
    lower_observed: int
    consistent: bool

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(k: int) -> BoundReport:
    log_upper = main_theorem_bound(k)
    lower = d_lower_observed(k)
    return BoundReport(k, log_upper, lower, math.log(lower) <= log_upper)
