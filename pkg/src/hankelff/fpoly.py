"""Polynomials over a finite field, stored low-degree-first.

Coefficient i of a Poly is the coefficient of T^i, which is also entry i of
the vector that the same polynomial stands for when it sits in the kernel of
a Hankel matrix.  Coefficients are element codes (see ``ffield``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import DivisionByZero, FieldMismatch
from .ffield import FieldElement, FieldSpec

NEG_INF = -math.inf  # degree of the zero polynomial


@dataclass(frozen=True)
class Poly:
    spec: FieldSpec
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        codes = [self.spec.code_of(c) for c in self.coeffs]
        while codes and codes[-1] == 0:
            codes.pop()
        object.__setattr__(self, "coeffs", tuple(codes))

    # -- construction ------------------------------------------------------

    @classmethod
    def _raw(cls, spec: FieldSpec, codes: Sequence[int]) -> "Poly":
        """Skip validation; ``codes`` must already be codes.  Trailing zeros are trimmed."""
        end = len(codes)
        while end and codes[end - 1] == 0:
            end -= 1
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "coeffs", tuple(codes[:end]))
        return obj

    @classmethod
    def zero(cls, spec: FieldSpec) -> "Poly":
        return cls._raw(spec, ())

    @classmethod
    def one(cls, spec: FieldSpec) -> "Poly":
        return cls._raw(spec, (1,))

    @classmethod
    def monomial(cls, spec: FieldSpec, k: int, coeff: int = 1) -> "Poly":
        return cls._raw(spec, (0,) * k + (spec.code_of(coeff),))

    @classmethod
    def from_vector(cls, spec: FieldSpec, vec: Iterable[int]) -> "Poly":
        return cls._raw(spec, tuple(vec))

    # -- inspection --------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def vector(self, length: int) -> list[int]:
        """Coefficient vector padded with zeros to ``length`` entries."""
        if len(self.coeffs) > length:
            raise ValueError(f"degree {self.degree} does not fit in {length} entries")
        return list(self.coeffs) + [0] * (length - len(self.coeffs))

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.spec, c) for c in self.coeffs]

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if other.spec != self.spec:
            raise FieldMismatch(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        add = self.spec.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = add[out[i]][y]
        return Poly._raw(self.spec, out)

    def __neg__(self) -> "Poly":
        neg = self.spec.neg
        return Poly._raw(self.spec, [neg[c] for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = self.spec.code_of(c)
        row = self.spec.mul[c]
        return Poly._raw(self.spec, [row[x] for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by T^k."""
        if not self.coeffs:
            return self
        return Poly._raw(self.spec, (0,) * k + self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def monic(self) -> "Poly":
        if not self.coeffs or self.lead == 1:
            return self
        return self.scale(self.spec.inv[self.lead])

    def __divmod__(self, other: "Poly"):
        return poly_divmod(self, other)

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[0]

    # -- output --------------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [self.spec.encode(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, spec: FieldSpec, doc: dict) -> "Poly":
        return cls(spec, tuple(spec.code_of(c) for c in doc["coeffs"]))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = repr(FieldElement(self.spec, c))
            if self.spec.e > 1 and "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}{mono}")
        return " + ".join(terms)


def poly_mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    if not a.coeffs or not b.coeffs:
        return Poly.zero(a.spec)
    add, mul = a.spec.add, a.spec.mul
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            row = mul[x]
            for j, y in enumerate(b.coeffs):
                out[i + j] = add[out[i + j]][row[y]]
    return Poly._raw(a.spec, out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a._check(b)
    if not b.coeffs:
        raise DivisionByZero("polynomial division by zero")
    spec = a.spec
    rem = list(a.coeffs)
    db = len(b.coeffs) - 1
    if len(rem) - 1 < db:
        return Poly.zero(spec), a
    quot = [0] * (len(rem) - db)
    inv_lead = spec.inv[b.lead]
    mul, submul = spec.mul, spec.submul
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        f = mul[c][inv_lead]
        quot[k - db] = f
        t = submul[f]
        for j, y in enumerate(b.coeffs):
            rem[k - db + j] = t[rem[k - db + j]][y]
    return Poly._raw(spec, quot), Poly._raw(spec, rem[:db])


@dataclass(frozen=True)
class EuclidChain:
    """Remainder sequence A_1, A_2, ... with A_i = R_{i+1} A_{i+1} + A_{i+2}.

    The last entry is the gcd made monic; ``last_unit`` is the scalar u with
    (raw last remainder) = u * polys[-1], so the final division step holds
    after multiplying polys[-1] by u.  Inputs are never rescaled.
    """

    polys: tuple[Poly, ...]
    quotients: tuple[Poly, ...]
    last_unit: int = 1

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.polys]

    @property
    def gcd(self) -> Poly:
        return self.polys[-1].monic()

    def coprime(self) -> bool:
        return self.gcd.degree == 0


def euclid_chain(a: Poly, b: Poly) -> EuclidChain:
    a._check(b)
    if a.is_zero():
        raise ValueError("euclid_chain needs a nonzero first argument")
    if b.is_zero():
        return EuclidChain((a,), ())
    if b.degree >= a.degree:
        raise ValueError("euclid_chain needs degree(b) < degree(a)")
    polys, quots = [a, b], []
    while True:
        qt, r = poly_divmod(polys[-2], polys[-1])
        if r.is_zero():
            break
        quots.append(qt)
        polys.append(r)
    unit = 1
    if len(polys) > 2 and polys[-1].lead != 1:
        unit = polys[-1].lead
        polys[-1] = polys[-1].monic()
    # the division that produced a zero remainder is recorded too
    quots.append(poly_divmod(polys[-2], polys[-1])[0])
    return EuclidChain(tuple(polys), tuple(quots), unit)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero when both inputs are zero)."""
    a._check(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def monic_from_index(spec: FieldSpec, deg: int, index: int) -> Poly:
    """The monic polynomial of degree ``deg`` whose lower coefficients pack to ``index``."""
    q = spec.q
    low = []
    for _ in range(deg):
        index, c = divmod(index, q)
        low.append(c)
    return Poly._raw(spec, tuple(low) + (1,))


def monic_enumerate(spec: FieldSpec, deg: int) -> list[Poly]:
    """All q^deg monic polynomials of degree ``deg``.

    Ordered by the packed index sum c_i q^i of the lower coefficients, so the
    constant term varies fastest.
    """
    if deg < 0:
        raise ValueError("degree must be non-negative")
    q = spec.q
    return [
        Poly._raw(spec, tuple(reversed(low)) + (1,))
        for low in product(range(q), repeat=deg)
    ]
