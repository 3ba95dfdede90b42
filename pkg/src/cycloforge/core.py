"""Exact arithmetic in cyclotomic rings.

Three value types live here:

* :class:`RootOfUnity` -- a single root ``zeta_n^e`` kept in lowest terms.
* :class:`SumOfRoots` -- a formal multiset of roots (a *representation*).
* :class:`CycElement` -- the canonical *value* of an element of ``Z[zeta_N]``,
  stored as power-basis coordinates modulo the cyclotomic polynomial.

Equality of values is decided on :class:`CycElement` only; two different
:class:`SumOfRoots` may have the same value.
"""
from __future__ import annotations

import cmath
import functools
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from sympy import factorint, totient


class CycloError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidOrderError(CycloError):
    pass


class NotAUnitError(CycloError):
    pass


class PreconditionError(CycloError):
    pass


class BudgetError(CycloError):
    """A search would exceed (or did exceed) its configured budget."""


# ---------------------------------------------------------------------------
# small number-theory helpers


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@functools.lru_cache(maxsize=4096)
def euler_phi(n: int) -> int:
    return int(totient(n))


@functools.lru_cache(maxsize=4096)
def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(n)))


@functools.lru_cache(maxsize=1024)
def units(n: int) -> tuple[int, ...]:
    """Sorted representatives of ``(Z/n)^x`` in ``[0, n)`` (``(0,)`` for n = 1)."""
    if n == 1:
        return (0,)
    return tuple(x for x in range(1, n) if math.gcd(x, n) == 1)


def normalize_modulus(n: int) -> int:
    """Return the canonical modulus of ``Q(zeta_n)``: ``n/2`` when ``n = 2 mod 4``."""
    if n < 1:
        raise InvalidOrderError(f"modulus must be positive, got {n}")
    return n // 2 if n % 4 == 2 else n


def divisors(n: int) -> list[int]:
    out = [1]
    for p, a in factorint(n).items():
        out = [d * p**k for d in out for k in range(a + 1)]
    return sorted(out)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with coefficients in ascending degree order."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            sign = "-" if c < 0 else "+"
            parts.append((sign, body + mono))
        if not parts:
            return "0"
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    # den is monic; division must be exact
    num = list(num)
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        t = num[i]
        if t:
            quot[i - dn] = t
            for j, c in enumerate(den):
                num[i - dn + j] -= t * c
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@functools.lru_cache(maxsize=512)
def cyclotomic_polynomial(n: int) -> IntPolynomial:
    """Phi_n, obtained by dividing ``x^n - 1`` by Phi_d for every proper divisor d."""
    if n < 1:
        raise InvalidOrderError(f"order must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_exact_div(num, list(cyclotomic_polynomial(d).coeffs))
    return IntPolynomial(tuple(num))


@functools.lru_cache(maxsize=512)
def _phi_array(n: int) -> np.ndarray:
    return np.array(cyclotomic_polynomial(n).coeffs, dtype=np.int64)


_SAFE = 1 << 62


def _reduce_dense(n: int, vec: np.ndarray) -> tuple[int, ...]:
    """Reduce a length-``n`` coefficient vector (indices = powers of zeta_n) mod Phi_n.

    Runs in int64.  Wrapping arithmetic is exact modulo 2^64, so the result is
    trusted whenever the running bound ``max|input| + sum|t| * max|Phi|`` stays
    below 2^62; otherwise the division is redone with Python integers.
    """
    phi = _phi_array(n)
    d = len(phi) - 1
    if vec.dtype != object:
        v = vec.astype(np.int64, copy=True)
        phimax = int(np.abs(phi).max())
        total = 0
        for i in range(len(v) - 1, d - 1, -1):
            t = int(v[i])
            if t:
                v[i - d : i + 1] -= t * phi
                total += abs(t)
        bound = int(np.abs(vec).max()) + total * phimax if len(vec) else 0
        if bound < _SAFE:
            return tuple(int(c) for c in v[:d])
    v = [int(c) for c in vec]
    pc = [int(c) for c in phi]
    for i in range(len(v) - 1, d - 1, -1):
        t = v[i]
        if t:
            base = i - d
            for j, c in enumerate(pc):
                if c:
                    v[base + j] -= t * c
    return tuple(v[:d])


def _reduce_sparse(n: int, terms: Mapping[int, int]) -> tuple[int, ...]:
    """Canonical power-basis coordinates of ``sum c * zeta_n^e`` with n normalized."""
    big = any(abs(c) >= _SAFE >> 8 for c in terms.values())
    vec = np.zeros(n, dtype=object if big else np.int64)
    for e, c in terms.items():
        vec[e % n] += c
    return _reduce_dense(n, vec)


def _fold_to_normalized(n: int, terms: Mapping[int, int]) -> tuple[int, dict[int, int]]:
    """Rewrite a sparse sum of n-th roots over the normalized modulus."""
    m = normalize_modulus(n)
    if m == n:
        return n, {e % n: c for e, c in terms.items()}
    # zeta_{2m}^e = (-1)^e zeta_m^{e(m+1)/2} for odd m
    half = (m + 1) // 2
    out: dict[int, int] = {}
    for e, c in terms.items():
        k = (e * half) % m
        out[k] = out.get(k, 0) + (-c if e % 2 else c)
    return m, out


# ---------------------------------------------------------------------------
# roots and sums


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """``zeta_order^exponent`` in lowest terms; ``(1, 0)`` is the root 1."""

    order: int
    exponent: int

    def __post_init__(self):
        if self.order < 1:
            raise InvalidOrderError(f"order must be positive, got {self.order}")

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = lcm(self.order, other.order)
        return make_root(n, self.exponent * (n // self.order) + other.exponent * (n // other.order))

    def __neg__(self) -> "RootOfUnity":
        return make_root(2 * self.order, 2 * self.exponent + self.order)

    def inverse(self) -> "RootOfUnity":
        return make_root(self.order, -self.exponent)

    def __pow__(self, k: int) -> "RootOfUnity":
        return make_root(self.order, self.exponent * k)

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def __str__(self) -> str:
        return f"{self.exponent}/{self.order}"


def make_root(n: int, e: int) -> RootOfUnity:
    """Canonical lowest-terms representative of ``zeta_n^e``."""
    if n < 1:
        raise InvalidOrderError(f"order must be positive, got {n}")
    e %= n
    g = math.gcd(e, n)  # gcd(0, n) = n sends zeta_n^0 to (1, 0)
    return RootOfUnity(n // g, e // g)


@dataclass(frozen=True)
class SumOfRoots:
    """A formal multiset of roots of unity, stored sorted."""

    terms: tuple[RootOfUnity, ...] = ()

    def __init__(self, terms: Iterable[RootOfUnity] = ()):
        object.__setattr__(self, "terms", tuple(sorted(terms)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "SumOfRoots":
        """Build from ``(order, exponent)`` pairs."""
        return cls(make_root(n, e) for n, e in pairs)

    @property
    def weight(self) -> int:
        return len(self.terms)

    @property
    def modulus(self) -> int:
        return lcm(*(t.order for t in self.terms)) if self.terms else 1

    def __add__(self, other: "SumOfRoots") -> "SumOfRoots":
        return SumOfRoots(self.terms + other.terms)

    def __neg__(self) -> "SumOfRoots":
        return SumOfRoots(-t for t in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def rotate(self, eps: RootOfUnity) -> "SumOfRoots":
        return SumOfRoots(eps * t for t in self.terms)

    def counter(self) -> Counter:
        return Counter(self.terms)

    def value(self) -> complex:
        return sum((t.value() for t in self.terms), 0j)

    def __str__(self) -> str:
        return format_sum(self)


def galois_apply(a, x: int):
    """Apply the automorphism ``zeta -> zeta^x`` to a :class:`SumOfRoots` or :class:`CycElement`."""
    if isinstance(a, SumOfRoots):
        n = a.modulus
        if math.gcd(x, n) != 1:
            raise NotAUnitError(f"{x} is not a unit modulo {n}")
        return SumOfRoots(make_root(t.order, t.exponent * x) for t in a.terms)
    if isinstance(a, CycElement):
        n = a.modulus
        if math.gcd(x, n) != 1:
            raise NotAUnitError(f"{x} is not a unit modulo {n}")
        x %= n
        if x == 1 or n == 1:
            return a
        return CycElement(n, _reduce_sparse(n, {(i * x) % n: c for i, c in enumerate(a.coeffs) if c}))
    raise TypeError(f"cannot apply an automorphism to {type(a).__name__}")


# ---------------------------------------------------------------------------
# canonical values


@dataclass(frozen=True, eq=False)
class CycElement:
    """An element of ``Z[zeta_N]`` in the power basis ``zeta_N^i, 0 <= i < phi(N)``.

    ``N`` is always normalized (never 2 mod 4).  Elements with different moduli
    compare equal when they agree after lifting to the lcm of the two moduli.
    """

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if normalize_modulus(self.modulus) != self.modulus:
            raise CycloError(f"modulus {self.modulus} is not normalized")
        if len(self.coeffs) != euler_phi(self.modulus):
            raise CycloError("coefficient vector has the wrong length")

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[int, int]) -> "CycElement":
        """Value of ``sum c * zeta_n^e`` given as ``{e: c}``."""
        m, folded = _fold_to_normalized(n, terms)
        return cls(m, _reduce_sparse(m, folded))

    @classmethod
    def integer(cls, k: int, modulus: int = 1) -> "CycElement":
        return cls.from_terms(normalize_modulus(modulus), {0: k})

    @classmethod
    def zero(cls, modulus: int = 1) -> "CycElement":
        return cls.integer(0, modulus)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lift(self, n: int) -> "CycElement":
        """The same value expressed at modulus ``normalize(n)``, a multiple of ours."""
        n = normalize_modulus(n)
        if n % self.modulus:
            raise CycloError(f"cannot lift modulus {self.modulus} to {n}")
        if n == self.modulus:
            return self
        step = n // self.modulus
        return CycElement(n, _reduce_sparse(n, {i * step: c for i, c in enumerate(self.coeffs) if c}))

    def _common(self, other: "CycElement") -> tuple["CycElement", "CycElement"]:
        n = lcm(self.modulus, other.modulus)
        return self.lift(n), other.lift(n)

    def __add__(self, other: "CycElement") -> "CycElement":
        a, b = self._common(other)
        return CycElement(a.modulus, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __neg__(self) -> "CycElement":
        return CycElement(self.modulus, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "CycElement") -> "CycElement":
        return self + (-other)

    def __mul__(self, other: "CycElement") -> "CycElement":
        a, b = self._common(other)
        n = a.modulus
        ca = np.array(a.coeffs, dtype=object)
        cb = np.array(b.coeffs, dtype=object)
        ma = max((abs(c) for c in a.coeffs), default=0)
        mb = max((abs(c) for c in b.coeffs), default=0)
        if ma * mb * len(a.coeffs) < _SAFE >> 8:
            prod = np.convolve(ca.astype(np.int64), cb.astype(np.int64))
        else:
            prod = np.convolve(ca, cb)
        terms: dict[int, int] = {}
        for i, c in enumerate(prod):
            if c:
                terms[i % n] = terms.get(i % n, 0) + int(c)
        return CycElement(n, _reduce_sparse(n, terms))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycElement.integer(other)
        if not isinstance(other, CycElement):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def to_complex(self) -> complex:
        n = self.modulus
        return sum((c * cmath.exp(2j * math.pi * i / n) for i, c in enumerate(self.coeffs) if c), 0j)

    def as_terms(self) -> dict[int, int]:
        """Nonzero power-basis coordinates as ``{i: c}`` (value = sum c * zeta_N^i)."""
        return {i: c for i, c in enumerate(self.coeffs) if c}


def sum_to_element(s: SumOfRoots) -> CycElement:
    """Exact value of a formal sum, at the normalized lcm of its term orders."""
    n = s.modulus
    terms: dict[int, int] = {}
    for t in s.terms:
        e = t.exponent * (n // t.order)
        terms[e] = terms.get(e, 0) + 1
    return CycElement.from_terms(n, terms)


def to_element(a) -> CycElement:
    if isinstance(a, CycElement):
        return a
    if isinstance(a, SumOfRoots):
        return sum_to_element(a)
    if isinstance(a, int):
        return CycElement.integer(a)
    raise TypeError(f"expected a sum or an element, got {type(a).__name__}")


def add(a: CycElement, b: CycElement) -> CycElement:
    return a + b


def mul(a: CycElement, b: CycElement) -> CycElement:
    return a * b


def neg(a: CycElement) -> CycElement:
    return -a


# ---------------------------------------------------------------------------
# text format:  [-][k*]e/n  separated by commas

_TERM = re.compile(r"^\s*(-)?\s*(?:(\d+)\s*\*\s*)?(-?\d+)\s*/\s*(\d+)\s*$")


def parse_root(text: str) -> tuple[int, RootOfUnity]:
    """Parse one term; returns ``(multiplicity, root)``."""
    m = _TERM.match(text)
    if not m:
        raise CycloError(f"cannot parse term {text!r}; expected [-][k*]e/n")
    sign, mult, e, n = m.groups()
    n = int(n)
    if n == 0:
        raise InvalidOrderError("root order must be positive")
    root = make_root(n, int(e))
    if sign:
        root = -root
    return (int(mult) if mult else 1), root


def parse_sum(text: str) -> SumOfRoots:
    """Parse ``"1/8, 7/8, 2*1/7, -1/3"``; an empty string is the empty sum."""
    text = text.strip()
    if not text or text == "0":
        return SumOfRoots()
    terms: list[RootOfUnity] = []
    for chunk in text.split(","):
        k, root = parse_root(chunk)
        terms.extend([root] * k)
    return SumOfRoots(terms)


def format_sum(s: SumOfRoots) -> str:
    counts = s.counter()
    parts = []
    for root in sorted(counts):
        k = counts[root]
        parts.append(f"{k}*{root}" if k > 1 else str(root))
    return ", ".join(parts)
