"""Exact arithmetic in GF(p^m) for q = p^m <= 256.

Elements use the polynomial basis over Z_p: an element is the residue class
of ``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` modulo the monic defining
polynomial.  Each element also has an integer *index*, the base-p digit value
``sum(c_i * p**i)``; indices are the symbols used by the code and protocol
modules, and ``elements(spec)[i]`` is the element with index ``i``.

The whole addition and multiplication tables are precomputed per field, so
vectorised code can work on index arrays directly::

    >>> F = field_new(2, 2, [1, 1, 1])
    >>> a = F.element(2)          # the class of x
    >>> (a * (a + F.one)).index
    1
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotIrreducible, NotPrime, UnsupportedSize, ValidationError

MAX_ORDER = 256

# Fixed defining polynomials for every extension field with q <= 256, ascending
# coefficients.  Serialized codes refer to these through "poly=auto", so the
# table must never change.
BUILTIN_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % f for f in range(2, int(n**0.5) + 1))


def _poly_mod(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of ``num`` modulo monic ``den`` over Z_p (ascending lists)."""
    num = list(num)
    dd = len(den) - 1
    for top in range(len(num) - 1, dd - 1, -1):
        c = num[top] % p
        if c:
            for i in range(dd + 1):
                num[top - dd + i] = (num[top - dd + i] - c * den[i]) % p
    return [c % p for c in num[:dd]]


def is_irreducible(poly: tuple[int, ...] | list[int], p: int) -> bool:
    """Exhaustive factor test: no monic polynomial of degree 1..m//2 divides ``poly``."""
    m = len(poly) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not any(_poly_mod(list(poly), (*low, 1), p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^m) with an explicit monic irreducible defining polynomial."""

    p: int
    m: int
    poly: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.m

    def __str__(self) -> str:
        return field_to_string(self)

    def __repr__(self) -> str:
        return f"FieldSpec({field_to_string(self)})"

    @cached_property
    def _coeff_table(self) -> np.ndarray:
        # row i holds the base-p digits of i, least significant first
        idx = np.arange(self.q)
        return np.stack([(idx // self.p**j) % self.p for j in range(self.m)], axis=1)

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``elements[i] + elements[j]``."""
        c = self._coeff_table
        s = (c[:, None, :] + c[None, :, :]) % self.p
        return self._to_index(s)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._to_index((-self._coeff_table) % self.p)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[i, j]`` is the index of ``elements[i] * elements[j]``."""
        p, m, q = self.p, self.m, self.q
        c = self._coeff_table
        prod = np.zeros((q, q, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                prod[:, :, i + j] += c[:, None, i] * c[None, :, j]
        prod %= p
        poly = np.array(self.poly, dtype=np.int64)
        for top in range(2 * m - 2, m - 1, -1):
            lead = prod[:, :, top].copy()
            prod[:, :, top - m : top + 1] -= lead[:, :, None] * poly[None, None, :]
            prod %= p
        return self._to_index(prod[:, :, :m])

    @cached_property
    def inv_table(self) -> np.ndarray:
        """``inv_table[i]`` is the multiplicative inverse index; entry 0 is -1."""
        inv = np.full(self.q, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    def _to_index(self, coeffs: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.m)
        return (coeffs * weights).sum(axis=-1).astype(np.int64)

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise ValidationError(f"index {index} out of range for GF({self.q})")
        return FieldElement(self, tuple(int(c) for c in self._coeff_table[index]))

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)


def field_new(p: int, m: int = 1, poly: str | tuple[int, ...] | list[int] = "auto") -> FieldSpec:
    """Validate and build a field spec.

    ``poly`` is an ascending coefficient list of a monic degree-``m``
    polynomial, or ``"auto"`` for the built-in table (``x`` for prime fields).
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise ValidationError(f"extension degree must be >= 1, got {m}")
    if p**m > MAX_ORDER:
        raise UnsupportedSize(f"q = {p}^{m} = {p**m} exceeds {MAX_ORDER}")
    if isinstance(poly, str):
        if poly != "auto":
            raise ValidationError(f"poly must be a coefficient list or 'auto', got {poly!r}")
        coeffs = (0, 1) if m == 1 else BUILTIN_POLYS[(p, m)]
    else:
        coeffs = tuple(int(c) for c in poly)
        if len(coeffs) != m + 1:
            raise ValidationError(f"poly must have {m + 1} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < p for c in coeffs):
            raise ValidationError(f"poly coefficients must lie in 0..{p - 1}")
        if coeffs[-1] != 1:
            raise ValidationError("poly must be monic")
    if not is_irreducible(coeffs, p):
        raise NotIrreducible(f"{_poly_str(coeffs)} is reducible over Z_{p}")
    return FieldSpec(p, m, coeffs)


def field_for_order(q: int) -> FieldSpec:
    """Field of order ``q`` with the built-in polynomial."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    else:
        raise ValidationError(f"no field of order {q}")
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ValidationError(f"{q} is not a prime power")
    return field_new(p, m, "auto")


def _poly_str(coeffs) -> str:
    terms = []
    for i, c in reversed(list(enumerate(coeffs))):
        if c:
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else f"{c}{'' if i == 0 else '*' + mono}")
    return " + ".join(terms) or "0"


_SPEC_RE = re.compile(r"^\s*p=(\d+)\s*,\s*m=(\d+)\s*,\s*poly=(auto|\d+(?:\s*,\s*\d+)*)\s*$")


def parse_field_spec(text: str) -> FieldSpec:
    """Parse ``p=<int>,m=<int>,poly=<c0>,...,<cm>`` or ``...,poly=auto``."""
    match = _SPEC_RE.match(text)
    if not match:
        raise ValidationError(f"malformed field spec {text!r}")
    p, m, poly = int(match[1]), int(match[2]), match[3]
    if poly == "auto":
        return field_new(p, m, "auto")
    return field_new(p, m, [int(c) for c in poly.split(",")])


def field_to_string(spec: FieldSpec) -> str:
    return f"p={spec.p},m={spec.m},poly={','.join(map(str, spec.poly))}"


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        return int(sum(c * self.spec.p**i for i, c in enumerate(self.coeffs)))

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldMismatch(f"GF({self.spec}) vs GF({other.spec})")

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    def __sub__(self, other: FieldElement) -> FieldElement:
        return add(self, -other)

    def __neg__(self) -> FieldElement:
        return self.spec.element(int(self.spec.neg_table[self.index]))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return mul(self, inv(other))

    def __pow__(self, e: int) -> FieldElement:
        return power(self, e)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"<{_poly_str(self.coeffs)} in GF({self.spec.q})>"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return a.spec.element(int(a.spec.add_table[a.index, b.index]))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return a.spec.element(int(a.spec.mul_table[a.index, b.index]))


def inv(a: FieldElement) -> FieldElement:
    if not a:
        raise DivisionByZero("inverse of zero")
    return a.spec.element(int(a.spec.inv_table[a.index]))


def power(a: FieldElement, e: int) -> FieldElement:
    """Square-and-multiply; negative exponents go through the inverse."""
    if e < 0:
        a, e = inv(a), -e
    result, base = a.spec.one, a
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def elements(spec: FieldSpec) -> list[FieldElement]:
    """All q elements in index order (0 first, 1 second)."""
    return [spec.element(i) for i in range(spec.q)]
