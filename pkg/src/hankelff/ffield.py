"""Finite fields F_p and F_{p^e} with table-driven arithmetic.

Every element is stored as an integer *code*: the coefficient tuple
(c_0, ..., c_{e-1}) of its residue modulo the defining polynomial is packed
as c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  For a prime field the code is just
the residue.  Counting codes upward gives the enumeration order used
everywhere (0 first, then 1, x, x+1, ... for GF(4)).

Addition, multiplication, negation and inversion are looked up in tables
built once per field; at q <= 49 the largest table has 2401 entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DegreeMismatch, DivisionByZero, FieldMismatch, NotIrreducible, NotPrime

MAX_ORDER = 49


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# Dense polynomials over F_p as low-first integer lists.  Only used to build
# the extension-field tables and to test the modulus for irreducibility.

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bi) % p
        _trim(a)
    return a


def _digits(code: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        code, d = divmod(code, p)
        out.append(d)
    return tuple(out)


def _undigits(digits: Iterable[int], p: int) -> int:
    code = 0
    for d in reversed(list(digits)):
        code = code * p + d
    return code


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for low in range(p**d):
            g = list(_digits(low, p, d)) + [1]
            if not _pmod(modulus, g, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e whose lower coefficients have the smallest code."""
    for low in range(p**e):
        cand = _digits(low, p, e) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise NotIrreducible(f"no irreducible of degree {e} over F_{p}")  # unreachable


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int = 1
    modulus: tuple[int, ...] = ()

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def __repr__(self) -> str:
        if self.e == 1:
            return f"F_{self.p}"
        return f"GF({self.q}; modulus={list(self.modulus)})"

    # -- lookup tables, built lazily -----------------------------------

    @cached_property
    def _tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
            mul = tuple(tuple(a * b % p for b in range(p)) for a in range(p))
        else:
            vecs = [_digits(c, p, e) for c in range(q)]
            add = tuple(
                tuple(_undigits(((x + y) % p for x, y in zip(vecs[a], vecs[b])), p) for b in range(q))
                for a in range(q)
            )
            rows = []
            for a in range(q):
                row = []
                for b in range(q):
                    prod = [0] * (2 * e - 1)
                    for i, x in enumerate(vecs[a]):
                        if x:
                            for j, y in enumerate(vecs[b]):
                                prod[i + j] += x * y
                    red = _pmod(prod, self.modulus, p)
                    row.append(_undigits(red + [0] * (e - len(red)), p))
                rows.append(tuple(row))
            mul = tuple(rows)
        neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
        sub = tuple(tuple(add[a][neg[b]] for b in range(q)) for a in range(q))
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        return add, sub, mul, neg, tuple(inv)

    @property
    def add(self):
        return self._tables[0]

    @property
    def sub(self):
        return self._tables[1]

    @property
    def mul(self):
        return self._tables[2]

    @property
    def neg(self):
        return self._tables[3]

    @property
    def inv(self):
        return self._tables[4]

    @cached_property
    def submul(self):
        """submul[f][a][b] = a - f*b, the workhorse of row reduction."""
        q, sub, mul = self.q, self.sub, self.mul
        return tuple(tuple(tuple(sub[a][mul[f][b]] for b in range(q)) for a in range(q)) for f in range(q))

    def __getstate__(self):
        # ship only the defining data to worker processes
        return {"p": self.p, "e": self.e, "modulus": self.modulus}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    # -- conversions -----------------------------------------------------

    def code_of(self, value) -> int:
        """Accept a FieldElement, an int, or (for e > 1) a coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatch(f"{value.spec} vs {self}")
            return value.code
        if isinstance(value, (tuple, list)):
            if len(value) != self.e:
                raise DegreeMismatch(f"expected {self.e} coefficients, got {len(value)}")
            return _undigits((int(c) % self.p for c in value), self.p)
        value = int(value)
        if self.e == 1:
            return value % self.p
        if not 0 <= value < self.q:
            raise ValueError(f"element code {value} outside [0, {self.q})")
        return value

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.code_of(value))

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        return _digits(code, self.p, self.e)

    def encode(self, code: int):
        """JSON form of an element: the residue, or its coefficient list."""
        return code if self.e == 1 else list(self.coeffs_of(code))

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, doc: dict) -> "FieldSpec":
        return field_make(doc["p"], doc["e"], doc.get("modulus") or None)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def repr(self):
        """Canonical residue: an int for prime fields, else a coefficient tuple."""
        return self.code if self.spec.e == 1 else self.spec.coeffs_of(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch(f"{self.spec} vs {other.spec}")
            return other.code
        return self.spec.code_of(other)

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add[self.code][self._other(other)])

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub[self.code][self._other(other)])

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub[self._other(other)][self.code])

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul[self.code][self._other(other)])

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg[self.code])

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise DivisionByZero("inverse of zero")
        return FieldElement(self.spec, self.spec.inv[self.code])

    def __truediv__(self, other):
        return self * FieldElement(self.spec, self._other(other)).inverse()

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        if self.spec.e == 1:
            return str(self.code)
        terms = []
        for i, c in reversed(list(enumerate(self.spec.coeffs_of(self.code)))):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}{mono}"))
        return "+".join(terms) or "0"


def field_make(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validate (p, e, modulus) and return the field.

    ``modulus`` is a low-first coefficient list of length e+1.  When e > 1
    and no modulus is given, the smallest monic irreducible is chosen.
    """
    if p < 2 or not is_prime(p):
        raise NotPrime(p)
    if e < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {e}")
    if e == 1:
        if modulus:
            mod = _trim([int(c) % p for c in modulus])
            if len(mod) != 2:
                raise DegreeMismatch("a prime field takes no modulus (or a linear one)")
        return FieldSpec(p, 1, ())
    if p**e > MAX_ORDER:
        raise ValueError(f"q = {p**e} exceeds the supported maximum {MAX_ORDER}")
    if modulus is None:
        return FieldSpec(p, e, smallest_irreducible(p, e))
    mod = _trim([int(c) % p for c in modulus])
    if len(mod) - 1 != e:
        raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {e}")
    if mod[-1] != 1:
        raise NotIrreducible(f"modulus {mod} is not monic")
    if not _is_irreducible(mod, p):
        raise NotIrreducible(mod)
    return FieldSpec(p, e, tuple(mod))


def elem_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.spec != b.spec:
        raise FieldMismatch(f"{a.spec} vs {b.spec}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def elem_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def field_enumerate(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, c) for c in range(spec.q)]
