"""Stabilizers, conductors and related unit-group utilities."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sympy import isprime, primitive_root
from sympy.ntheory.modular import crt

from .core import (
    CycElement,
    CycloError,
    NotAUnitError,
    PreconditionError,
    SumOfRoots,
    divisors,
    euler_phi,
    galois_apply,
    make_root,
    normalize_modulus,
    sum_to_element,
    units,
)


@dataclass(frozen=True)
class UnitSubgroup:
    """A subgroup of ``(Z/N)^x`` given by its sorted elements."""

    modulus: int
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        n = self.modulus
        return (x % n if n > 1 else 0) in self._set

    @functools.cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def element_order(self, x: int) -> int:
        return unit_order(x, self.modulus)

    def is_cyclic(self) -> bool:
        return any(self.element_order(x) == self.order for x in self.elements)

    def issubset(self, other: "UnitSubgroup") -> bool:
        return all(x in other for x in self.elements)

    def reduce(self, f: int) -> "UnitSubgroup":
        """Image under ``(Z/N)^x -> (Z/f)^x`` for ``f | N``."""
        if self.modulus % f:
            raise CycloError(f"{f} does not divide {self.modulus}")
        if f == 1:
            return UnitSubgroup(1, (0,))
        return UnitSubgroup(f, tuple(sorted({x % f for x in self.elements})))


def unit_order(x: int, n: int) -> int:
    if n == 1:
        return 1
    x %= n
    k, y = 1, x
    while y != 1:
        y = (y * x) % n
        k += 1
    return k


def subgroup_generated(modulus: int, gens: Iterable[int]) -> UnitSubgroup:
    """Closure of ``gens`` under multiplication modulo the normalized modulus."""
    gens = list(gens)
    for g in gens:
        if math.gcd(g, modulus) != 1:
            raise NotAUnitError(f"{g} is not a unit modulo {modulus}")
    n = normalize_modulus(modulus)
    if n == 1:
        return UnitSubgroup(1, (0,))
    elems = {1}
    frontier = [1]
    gens = [g % n for g in gens]
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = (y * g) % n
                if z not in elems:
                    elems.add(z)
                    nxt.append(z)
        frontier = nxt
    return UnitSubgroup(n, tuple(sorted(elems)))


def full_unit_group(n: int) -> UnitSubgroup:
    n = normalize_modulus(n)
    return UnitSubgroup(n, units(n))


def kernel_of_reduction(n: int, f: int) -> tuple[int, ...]:
    """Units ``x`` modulo ``n`` with ``x = 1 mod f``."""
    if n == 1:
        return (0,)
    return tuple(x for x in units(n) if x % f == 1 % f)


def crt_lift(moduli: Iterable[int], residues: Iterable[int]) -> int:
    """Unique ``x`` modulo ``prod(moduli)`` with ``x = r_i mod m_i``."""
    moduli = [int(m) for m in moduli]
    residues = [int(r) for r in residues]
    if len(moduli) != len(residues):
        raise CycloError("moduli and residues differ in length")
    for i, m in enumerate(moduli):
        for m2 in moduli[i + 1 :]:
            if math.gcd(m, m2) != 1:
                raise CycloError(f"moduli {m} and {m2} are not coprime")
        if math.gcd(residues[i], m) != 1:
            raise NotAUnitError(f"{residues[i]} is not a unit modulo {m}")
    x, total = crt(moduli, residues)
    return int(x) % int(total)


# ---------------------------------------------------------------------------
# stabilizers


def _numeric_candidates(terms: dict[int, int], n: int, xs: np.ndarray) -> np.ndarray:
    """Units that might fix ``sum c * zeta_n^i``; a float filter ahead of exact checks.

    Rejects ``x`` only when ``|sigma_x(a) - a|`` is far above rounding error,
    so every true stabilizer element survives.
    """
    idx = np.array(list(terms), dtype=np.int64)
    coef = np.array([float(c) for c in terms.values()])
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    base = complex((coef * roots[idx % n]).sum())
    tol = 1e-7 * (1.0 + float(np.abs(coef).sum()))
    keep = []
    chunk = max(1, 4_000_000 // max(1, len(idx)))
    for start in range(0, len(xs), chunk):
        block = xs[start : start + chunk]
        vals = (roots[(idx[None, :] * block[:, None]) % n] * coef[None, :]).sum(axis=1)
        keep.append(block[np.abs(vals - base) <= tol])
    return np.concatenate(keep) if keep else xs[:0]


def _resolve(a, modulus: int | None) -> tuple[CycElement, SumOfRoots | None]:
    if isinstance(a, SumOfRoots):
        elem = sum_to_element(a)
        rep = a
    elif isinstance(a, CycElement):
        elem, rep = a, None
    else:
        raise TypeError(f"expected a sum or an element, got {type(a).__name__}")
    if modulus is not None:
        elem = elem.lift(modulus)
    return elem, rep


def stabilizer(a, modulus: int | None = None) -> UnitSubgroup:
    """All ``x`` in ``(Z/N)^x`` with ``sigma_x(a) = a``.

    ``N`` is the element's (normalized) modulus, or ``modulus`` when given, in
    which case ``a`` is lifted first.  Every unit is tested; a floating-point
    prefilter discards units that visibly move ``a`` and the rest are decided
    exactly.
    """
    elem, rep = _resolve(a, modulus)
    n = elem.modulus
    if n == 1:
        return UnitSubgroup(1, (0,))
    xs = np.array(units(n), dtype=np.int64)
    if rep is not None and normalize_modulus(rep.modulus) == n and rep.weight < np.count_nonzero(elem.coeffs):
        base_n = rep.modulus
        terms: dict[int, int] = {}
        for t in rep.terms:
            e = t.exponent * (base_n // t.order)
            terms[e] = terms.get(e, 0) + 1
        # units mod n act on base_n-th roots through their odd lift when base_n = 2n
        lifted = xs if base_n == n else np.where(xs % 2 == 1, xs, xs + n)
        keep = _numeric_candidates(terms, base_n, lifted) % n
    else:
        keep = _numeric_candidates(elem.as_terms() or {0: 0}, n, xs)
    fixed = [int(x) for x in keep if galois_apply(elem, int(x)) == elem]
    return UnitSubgroup(n, tuple(sorted(fixed)))


@dataclass(frozen=True)
class ConductorReport:
    conductor: int
    stabilizer_at_conductor: UnitSubgroup
    index: int
    degree: int

    def to_dict(self) -> dict:
        return {
            "conductor": self.conductor,
            "index": self.index,
            "degree": self.degree,
            "stabilizer_elements": list(self.stabilizer_at_conductor.elements),
        }


def conductor_from_stabilizer(stab: UnitSubgroup) -> ConductorReport:
    """Smallest normalized ``f | N`` whose reduction kernel lies inside ``stab``."""
    n = stab.modulus
    for f in divisors(n):
        if normalize_modulus(f) != f:
            continue
        if all(x in stab for x in kernel_of_reduction(n, f)):
            sub = stab.reduce(f)
            return ConductorReport(f, sub, sub.order, euler_phi(f) // sub.order)
    raise AssertionError("the modulus itself always qualifies")


def conductor(a, modulus: int | None = None) -> ConductorReport:
    """Conductor ``c``, stabilizer in ``(Z/c)^x``, index ``[Q_c : Q(a)]`` and degree ``[Q(a) : Q]``."""
    return conductor_from_stabilizer(stabilizer(a, modulus))


def index_at_conductor(a) -> int:
    return conductor(a).index


def orbit_sum(p: int, h) -> SumOfRoots:
    """Gaussian period ``sum_{x in h} zeta_p^x``."""
    if not isprime(p):
        raise CycloError(f"{p} is not prime")
    elems = h.elements if isinstance(h, UnitSubgroup) else tuple(h)
    if isinstance(h, UnitSubgroup) and h.modulus != p:
        raise CycloError(f"subgroup modulus {h.modulus} differs from {p}")
    return SumOfRoots(make_root(p, x) for x in elems)


def cyclic_subgroup_of_order(p: int, d: int) -> UnitSubgroup:
    """The unique subgroup of order ``d`` in the cyclic group ``(Z/p)^x``."""
    if not isprime(p):
        raise CycloError(f"{p} is not prime")
    if d < 1 or (p - 1) % d:
        raise PreconditionError(f"no subgroup of order {d} in (Z/{p})^x")
    g = primitive_root(p)
    return subgroup_generated(p, [pow(g, (p - 1) // d, p)])
