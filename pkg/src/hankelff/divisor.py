"""Divisor function on monic polynomials over F_p and its short-interval variance.

Monic polynomials of degree n are indexed by packing their lower
coefficients: B = T^n + b_{n-1} T^{n-1} + ... + b_0 has index
b_0 + b_1 p + ... + b_{n-1} p^{n-1}.  The interval I(A; h) is every monic B
with deg(B - A) < h, so it consists of the indices sharing index // p^h with
A.  The intervals therefore split M_n into p^{n-h} contiguous blocks of size
p^h, and all interval statistics come from a reshape of the divisor table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded, DegreeMismatch, ExtensionFieldUnsupported
from .ffield import FieldSpec
from .fpoly import Poly, monic_from_index

DEFAULT_BUDGET = 10**7


def _monic_coeff_array(p: int, deg: int) -> np.ndarray:
    """Rows are the coefficient vectors (low first, leading 1 last) of all monic polys of degree deg."""
    idx = np.arange(p**deg, dtype=np.int64)
    cols = [(idx // p**i) % p for i in range(deg)]
    cols.append(np.ones_like(idx))
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class DivisorTable:
    spec: FieldSpec
    n: int
    counts: np.ndarray  # counts[index] = d(B)

    def index_of(self, b: Poly) -> int:
        if b.spec != self.spec:
            raise ValueError("polynomial over a different field")
        if b.degree != self.n or not b.is_monic():
            raise DegreeMismatch(f"expected a monic polynomial of degree {self.n}")
        p = self.spec.p
        return sum(c * p**i for i, c in enumerate(b.coeffs[:-1]))

    def __getitem__(self, b: Poly) -> int:
        return int(self.counts[self.index_of(b)])

    def __len__(self) -> int:
        return len(self.counts)

    def items(self) -> Iterator[tuple[Poly, int]]:
        for i, c in enumerate(self.counts):
            yield monic_from_index(self.spec, self.n, i), int(c)


def divisor_table(spec: FieldSpec, n: int, budget: int = DEFAULT_BUDGET) -> DivisorTable:
    """d(B) for every monic B of degree n, by multiplying out every pair (E, F) with deg E + deg F = n."""
    if spec.e != 1:
        raise ExtensionFieldUnsupported("the divisor statistics are implemented for prime fields only")
    p = spec.p
    if (n + 1) * p**n > budget:
        raise BudgetExceeded(f"(n+1) p^n = {(n + 1) * p**n} exceeds budget {budget}")
    weights = p ** np.arange(n, dtype=np.int64)
    counts = np.zeros(p**n, dtype=np.int64)
    for l in range(n + 1):
        m = n - l
        E = _monic_coeff_array(p, l)
        F = _monic_coeff_array(p, m)
        prod = np.zeros((len(E), len(F), n + 1), dtype=np.int64)
        for i in range(l + 1):
            prod[:, :, i : i + m + 1] += E[:, i, None, None] * F[None, :, :]
        idx = (prod[:, :, :n] % p) @ weights
        counts += np.bincount(idx.ravel(), minlength=p**n)
    return DivisorTable(spec, n, counts)


@dataclass(frozen=True)
class IntervalSpec:
    center: Poly
    h: int

    def __post_init__(self):
        n = self.center.degree
        if not self.center.is_monic():
            raise ValueError("interval centre must be monic")
        if not 0 <= self.h <= n:
            raise ValueError(f"h must lie in [0, {n}]")


def interval_sum(table: DivisorTable, interval: IntervalSpec) -> int:
    if interval.center.degree != table.n:
        raise DegreeMismatch(f"centre has degree {interval.center.degree}, table covers {table.n}")
    size = table.spec.p ** interval.h
    start = (table.index_of(interval.center) // size) * size
    return int(table.counts[start : start + size].sum())


def class_sums(table: DivisorTable, h: int) -> list[int]:
    """One interval sum per class, classes ordered by their shared upper coefficients."""
    p = table.spec.p
    blocks = table.counts.reshape(p ** (table.n - h), p**h).sum(axis=1)
    return [int(s) for s in blocks]


def variance_formula(p: int, n: int, h: int) -> Fraction:
    if h > n // 2 - 1:
        return Fraction(0)
    k = n - 2 * h
    return Fraction((p - 1) * (k - 1) * k * (k + 1), 6) * Fraction(p) ** (h - 1)


def variance_bruteforce(p: int, n: int, h: int, budget: int = DEFAULT_BUDGET, table: DivisorTable | None = None) -> Fraction:
    table = table or divisor_table(FieldSpec(p), n, budget)
    mean = p**h * (n + 1)
    size = p**h
    total = sum(size * (s - mean) ** 2 for s in class_sums(table, h))
    return Fraction(total, p**n)


@dataclass(frozen=True)
class VarianceReport:
    p: int
    n: int
    h: int
    brute: Fraction
    formula: Fraction
    mean_check: tuple[Fraction, Fraction]

    @property
    def match(self) -> bool:
        return self.brute == self.formula

    @property
    def informational(self) -> bool:
        """The closed form is only claimed for n >= 4."""
        return self.n < 4

    def to_row(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "h": self.h,
            "brute": frac_str(self.brute),
            "formula": frac_str(self.formula),
            "match": self.match,
            "mean_ok": self.mean_check[0] == self.mean_check[1],
        }


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def variance_report(p: int, n: int, h: int, budget: int = DEFAULT_BUDGET, table: DivisorTable | None = None) -> VarianceReport:
    table = table or divisor_table(FieldSpec(p), n, budget)
    sums = class_sums(table, h)
    observed_mean = Fraction(sum(sums) * p**h, p**n)
    return VarianceReport(
        p,
        n,
        h,
        variance_bruteforce(p, n, h, table=table),
        variance_formula(p, n, h),
        (observed_mean, Fraction(p**h * (n + 1))),
    )


@dataclass(frozen=True)
class IdentityReport:
    p: int
    n: int
    h: int
    lhs: int
    rhs: int

    @property
    def match(self) -> bool:
        return self.lhs == self.rhs

    def to_row(self) -> dict:
        return {"p": self.p, "n": self.n, "h": self.h, "lhs": str(self.lhs), "rhs": str(self.rhs), "match": self.match}


def identity_rhs(p: int, n: int, h: int) -> int:
    n1 = (n + 2) // 2
    tail = sum((n + 1 - 2 * r) ** 2 for r in range(h + 1, n1))
    return (p - 1) * p ** (h + n - 1) * tail + p ** (2 * h + n) * (n + 1) ** 2


def summation_identity_check(p: int, n: int, h: int, budget: int = DEFAULT_BUDGET, table: DivisorTable | None = None) -> IdentityReport:
    """Compare sum over A in M_n of (interval sum)^2 against its closed form."""
    table = table or divisor_table(FieldSpec(p), n, budget)
    lhs = sum(p**h * s * s for s in class_sums(table, h))
    return IdentityReport(p, n, h, lhs, identity_rhs(p, n, h))
