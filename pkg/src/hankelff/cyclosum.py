"""Exact sums of p-th roots of unity.

A CycInt is an element of Z[zeta] with zeta a primitive p-th root of unity,
written in the basis 1, zeta, ..., zeta^{p-2}.  Sums of the form
sum zeta^{k} are accumulated as a tally of exponents mod p and only then
converted, so the Hankel exponential sums below involve no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, ExtensionFieldUnsupported, NotPrime, PrimeMismatch
from .ffield import FieldSpec, is_prime
from .hankel import SymbolSeq, rho_pi_profile

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class CycInt:
    p: int
    coords: tuple[int, ...]

    @classmethod
    def from_tally(cls, p: int, tally: Sequence[int]) -> "CycInt":
        """sum_k tally[k] zeta^k for k = 0..p-1, reduced with zeta^{p-1} = -(1 + ... + zeta^{p-2})."""
        top = int(tally[p - 1])
        return cls(p, tuple(int(tally[k]) - top for k in range(p - 1)))

    @classmethod
    def integer(cls, p: int, value: int) -> "CycInt":
        return cls(p, (int(value),) + (0,) * (p - 2))

    def tally(self) -> list[int]:
        return list(self.coords) + [0]

    def _same(self, other: "CycInt") -> None:
        if self.p != other.p:
            raise PrimeMismatch(f"{self.p} vs {other.p}")

    def __add__(self, other: "CycInt") -> "CycInt":
        self._same(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coords))

    def __sub__(self, other: "CycInt") -> "CycInt":
        return self + (-other)

    def __mul__(self, other: "CycInt") -> "CycInt":
        self._same(other)
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    acc[(i + j) % p] += a * b
        return CycInt.from_tally(p, acc)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational_integer(self) -> bool:
        return not any(self.coords[1:])

    def as_integer(self) -> int:
        if not self.is_rational_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coords[0]

    def conjugate(self) -> "CycInt":
        """Image under zeta -> zeta^{-1}."""
        p = self.p
        acc = [0] * p
        for k, c in enumerate(self.tally()):
            acc[(-k) % p] += c
        return CycInt.from_tally(p, acc)

    def to_json(self) -> dict:
        return {"p": self.p, "coords": list(self.coords)}


def cyc_from_exponent(p: int, k: int) -> CycInt:
    if not is_prime(p):
        raise NotPrime(p)
    acc = [0] * p
    acc[k % p] = 1
    return CycInt.from_tally(p, acc)


def cyc_arith(a: CycInt, b: CycInt, op: str) -> CycInt:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def _last_one_vectors(p: int, length: int) -> np.ndarray:
    """All vectors in F_p^length x {1}, one per row."""
    if length == 0:
        return np.ones((1, 1), dtype=np.int64)
    grid = np.array(list(product(range(p), repeat=length)), dtype=np.int64)
    return np.hstack([grid, np.ones((len(grid), 1), dtype=np.int64)])


def block_tallies(seq: SymbolSeq, sign: int = 1, budget: int = DEFAULT_BUDGET) -> dict[tuple[int, int], np.ndarray]:
    """Exponent tallies of zeta^{sign e^T H_{l+1,m+1} f}, one per split l + m = n."""
    spec = seq.spec
    if spec.e != 1:
        raise ExtensionFieldUnsupported("exponential sums need a prime field")
    p, n = spec.p, seq.n
    if (n + 1) * p**n > budget:
        raise BudgetExceeded(f"(n+1) p^n = {(n + 1) * p**n} exceeds budget {budget}")
    a = np.array(seq.entries, dtype=np.int64)
    out = {}
    for l in range(n + 1):
        m = n - l
        H = np.array([[a[i + j] for j in range(m + 1)] for i in range(l + 1)], dtype=np.int64)
        E = _last_one_vectors(p, l)
        F = _last_one_vectors(p, m)
        expo = (sign * ((E @ H) @ F.T)) % p
        out[(l, m)] = np.bincount(expo.ravel(), minlength=p)
    return out


def inner_hankel_sum(seq: SymbolSeq, sign: int = 1, budget: int = DEFAULT_BUDGET) -> CycInt:
    p = seq.spec.p
    total = np.zeros(p, dtype=np.int64)
    for t in block_tallies(seq, sign, budget).values():
        total += t
    return CycInt.from_tally(p, total)


@dataclass
class ExpsumReport:
    """Outcome of the exponential-sum lemma for one prefix alpha^- (length n)."""

    prefix: tuple[int, ...]
    n: int
    profile: tuple[int, int, int]
    case: str  # "vanishing", "square-odd" (full-rank prefix, n odd) or "product"
    expected: int | None
    observed: CycInt | None = None
    nonzero_blocks: list[tuple[int, int, int]] = field(default_factory=list)  # (next, l, m)

    @property
    def ok(self) -> bool:
        if self.case == "product":
            return self.observed is not None and self.observed == CycInt.integer(self.observed.p, self.expected)
        return not self.nonzero_blocks

    def to_row(self) -> dict:
        row = {"n": self.n, "prefix": list(self.prefix), "profile": list(self.profile), "case": self.case}
        if self.case == "product":
            row["expected"] = str(self.expected)
            row["observed"] = self.observed.to_json() if self.observed else None
        else:
            row["nonzero_blocks"] = [list(b) for b in self.nonzero_blocks]
        row["match"] = self.ok
        return row


def expsum_lemma_check(seq_minus: SymbolSeq, p: int | None = None, budget: int = DEFAULT_BUDGET) -> ExpsumReport:
    """Check the lemma for one prefix alpha^- = (alpha_0, ..., alpha_{n-1}).

    Excess rank (pi >= 1), or a full-rank prefix when n is odd: every block
    sum must vanish for every appended alpha_n.  Otherwise the prefix is
    quasi-regular of rank r and sum over alpha_n of S_- S_+ must equal
    p^{2n-2r+1} (n+1-2r)^2.
    """
    spec = seq_minus.spec
    if p is not None and p != spec.p:
        raise PrimeMismatch(f"{p} vs {spec.p}")
    if spec.e != 1:
        raise ExtensionFieldUnsupported("exponential sums need a prime field")
    p = spec.p
    n = seq_minus.n + 1
    prof = rho_pi_profile(seq_minus)
    r, rho, pi = prof.key
    n1 = (n + 2) // 2
    prefix = seq_minus.entries
    if pi >= 1 or (n % 2 == 1 and (r, rho, pi) == (n1, n1, 0)):
        case = "vanishing" if pi >= 1 else "square-odd"
        rep = ExpsumReport(prefix, n, prof.key, case, None)
        for v in range(p):
            full = seq_minus.extend(v)
            for sign in (1, -1):
                for (l, m), t in block_tallies(full, sign, budget).items():
                    if not CycInt.from_tally(p, t).is_zero():
                        rep.nonzero_blocks.append((v, l, m))
        return rep
    expected = p ** (2 * n - 2 * r + 1) * (n + 1 - 2 * r) ** 2
    acc = CycInt.integer(p, 0)
    for v in range(p):
        full = seq_minus.extend(v)
        acc = acc + inner_hankel_sum(full, -1, budget) * inner_hankel_sum(full, 1, budget)
    return ExpsumReport(prefix, n, prof.key, "product", expected, acc)
