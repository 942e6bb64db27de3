"""Counting sequences and Hankel matrices by rank, rho and pi.

The brute-force side walks every alpha in F_q^{n+1} whose first h entries
vanish and tallies (rank, rho, pi) together with the rank of each
rectangular H_{l,m}(alpha), l + m - 2 = n.  The closed-form side evaluates
the counting theorem.  ``census_reconcile`` pairs the two.

A tally over a contiguous range of the enumeration is a pure function of the
range, and tallies merge by addition, so any partition into ranges gives the
same result.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .errors import BudgetExceeded, CacheIOError, SchemaMismatch
from .ffield import FieldSpec
from .hankel import hankel_rows, profile_key
from .linalg import rank

DEFAULT_BUDGET = 10**7
MAX_WITNESSES = 10
CACHE_SCHEMA = "hankelff-census/v1"


class FormulaCount(int):
    """An int that also records whether the counting theorem declares the set empty."""

    empty: bool

    def __new__(cls, value: int, empty: bool = False):
        obj = super().__new__(cls, value)
        obj.empty = empty
        return obj


EMPTY = FormulaCount(0, True)


def _q(spec_or_q) -> int:
    return spec_or_q.q if isinstance(spec_or_q, FieldSpec) else int(spec_or_q)


# ---------------------------------------------------------------------------
# closed forms


def formula_L_rho_pi(spec, n: int, h: int, rho: int, pi: int) -> FormulaCount:
    q = _q(spec)
    n1 = (n + 2) // 2
    r = rho + pi
    if rho < 0 or pi < 0 or rho > n1 or not 0 <= h <= n + 1:
        return EMPTY
    if rho == 0:
        cap = n1 - 1 if n % 2 == 0 else n1
        if r > cap or r > n - h + 1:
            return EMPTY
        return FormulaCount(1 if r == 0 else (q - 1) * q ** (r - 1))
    if rho < n1:
        cap = n1 - rho - 1 if n % 2 == 0 else n1 - rho
        if pi > cap or rho < h + 1:
            return EMPTY
        if pi == 0:
            return FormulaCount((q - 1) * q ** (2 * rho - h - 1))
        return FormulaCount((q - 1) ** 2 * q ** (2 * rho + pi - h - 2))
    if pi != 0 or h + 1 > n1:
        return EMPTY
    return FormulaCount((q - 1) * q ** (n - h))


def _rank_cases(q: int, n: int, h: int, r: int) -> FormulaCount:
    n1 = (n + 2) // 2
    if r == 0:
        return FormulaCount(1)
    if 1 <= r <= min(h, n - h + 1):
        return FormulaCount((q - 1) * q ** (r - 1))
    if h + 1 <= r <= n1 - 1:
        return FormulaCount((q * q - 1) * q ** (2 * r - h - 2))
    return EMPTY


def formula_L_r(spec, n: int, h: int, r: int) -> FormulaCount:
    q = _q(spec)
    n1 = (n + 2) // 2
    if r < 0 or r > n1 or not 0 <= h <= n + 1:
        return EMPTY
    value = _rank_cases(q, n, h, r)
    if not value.empty:
        return value
    if r == n1 and h + 1 <= n1:
        return FormulaCount(q ** (n - h + 1) - q ** (2 * n1 - h - 2))
    return EMPTY


def formula_H(spec, l: int, m: int, h: int, r: int) -> FormulaCount:
    q = _q(spec)
    n = l + m - 2
    mu = min(l, m)
    if l < 1 or m < 1 or r < 0 or r > mu or not 0 <= h <= n + 1:
        return EMPTY
    if r < mu:
        return _rank_cases(q, n, h, r)
    if mu - 1 <= min(h, n - h + 1):
        return FormulaCount(q ** (l + m - h - 1) - q ** (mu - 1))
    if mu - 1 >= h + 1:
        return FormulaCount(q ** (l + m - h - 1) - q ** (2 * mu - h - 2))
    # every such matrix has rank <= n-h+1 < mu
    return EMPTY


# ---------------------------------------------------------------------------
# brute force


@dataclass(frozen=True)
class CensusQuery:
    spec: FieldSpec
    n: int
    h: int = 0
    r: int | None = None
    rho: int | None = None
    pi: int | None = None
    l: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.h <= self.n + 1:
            raise ValueError(f"h must lie in [0, {self.n + 1}]")
        if (self.l is None) != (self.m is None):
            raise ValueError("give both l and m or neither")
        if self.l is not None and (self.l < 1 or self.m < 1 or self.l + self.m - 2 != self.n):
            raise ValueError(f"need l, m >= 1 and l + m - 2 = {self.n}")

    @property
    def size(self) -> int:
        return self.spec.q ** (self.n - self.h + 1)


@dataclass
class Tally:
    profiles: Counter = field(default_factory=Counter)  # (r, rho, pi) -> count
    shapes: Counter = field(default_factory=Counter)  # (l, m, rank) -> count
    witnesses: dict = field(default_factory=dict)  # key -> list of entry tuples

    def _witness(self, key, entries) -> None:
        lst = self.witnesses.setdefault(key, [])
        if len(lst) < MAX_WITNESSES:
            lst.append(entries)

    def merge(self, other: "Tally") -> "Tally":
        """In-place sum; ``other`` must cover a later range than ``self``."""
        self.profiles.update(other.profiles)
        self.shapes.update(other.shapes)
        for key, lst in other.witnesses.items():
            mine = self.witnesses.setdefault(key, [])
            mine.extend(lst[: MAX_WITNESSES - len(mine)])
        return self


def census_tally(spec: FieldSpec, n: int, h: int, start: int, stop: int) -> Tally:
    """Tally alpha number start..stop-1 of the zero-prefix space, in lexicographic order."""
    q = spec.q
    free = n - h + 1
    prefix = (0,) * h
    half = [(l, n + 2 - l) for l in range(1, n + 2) if l <= n + 2 - l]
    tally = Tally()
    for idx in range(start, stop):
        digits = [0] * free
        x = idx
        for pos in range(free - 1, -1, -1):
            x, digits[pos] = divmod(x, q)
        entries = prefix + tuple(digits)
        key = profile_key(entries, spec)
        tally.profiles[key] += 1
        tally._witness(("rho_pi",) + key, entries)
        for l, m in half:
            rk = rank(hankel_rows(entries, l, m), spec)
            for shape in {(l, m), (m, l)}:
                skey = shape + (rk,)
                tally.shapes[skey] += 1
                tally._witness(("shape",) + skey, entries)
    return tally


def partition(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def _tally_range(args) -> Tally:
    spec, n, h, start, stop = args
    return census_tally(spec, n, h, start, stop)


def census_enumerate_tally(
    query: CensusQuery,
    budget: int = DEFAULT_BUDGET,
    mapper: Callable = map,
    parts: int = 1,
) -> Tally:
    """Full tally for the query's (n, h), optionally split into ``parts`` ranges fed through ``mapper``."""
    if query.size > budget:
        raise BudgetExceeded(f"q^(n-h+1) = {query.size} exceeds budget {budget}")
    jobs = [(query.spec, query.n, query.h, a, b) for a, b in partition(query.size, parts)]
    out = Tally()
    for t in mapper(_tally_range, jobs):
        out.merge(t)
    return out


@dataclass(frozen=True)
class CensusRecord:
    kind: str  # "rho_pi", "rank" or "shape"
    key: tuple[int, ...]  # (r, rho, pi) / (r,) / (l, m, r)
    brute: int
    formula: int | None  # None would mean no closed form covers the key

    @property
    def match(self) -> bool:
        return self.formula is not None and self.brute == self.formula

    def to_json(self) -> dict:
        names = {"rho_pi": ("r", "rho", "pi"), "rank": ("r",), "shape": ("l", "m", "r")}[self.kind]
        doc = {"kind": self.kind}
        doc.update(zip(names, self.key))
        doc.update(
            brute=str(self.brute),
            formula="NOT_COVERED" if self.formula is None else str(self.formula),
            match=self.match,
        )
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "CensusRecord":
        names = {"rho_pi": ("r", "rho", "pi"), "rank": ("r",), "shape": ("l", "m", "r")}[doc["kind"]]
        formula = None if doc["formula"] == "NOT_COVERED" else int(doc["formula"])
        return cls(doc["kind"], tuple(int(doc[k]) for k in names), int(doc["brute"]), formula)


def census_enumerate(query: CensusQuery, budget: int = DEFAULT_BUDGET, mapper: Callable = map, parts: int = 1) -> list[CensusRecord]:
    """Brute-force counts per (r, rho, pi) (formula column left empty)."""
    tally = census_enumerate_tally(query, budget, mapper, parts)
    return [CensusRecord("rho_pi", key, cnt, None) for key, cnt in sorted(tally.profiles.items())]


@dataclass
class CensusReport:
    spec: FieldSpec
    n: int
    h: int
    records: list[CensusRecord]
    witnesses: dict[str, list[list[int]]] = field(default_factory=dict)  # mismatched record -> alphas

    @property
    def mismatches(self) -> list[CensusRecord]:
        return [rec for rec in self.records if not rec.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.mass_ok

    @property
    def mass_ok(self) -> bool:
        total = sum(rec.brute for rec in self.records if rec.kind == "rank")
        return total == self.spec.q ** (self.n - self.h + 1)

    def select(self, query: CensusQuery) -> list[CensusRecord]:
        """Records restricted to the query's optional r / rho / pi / shape filters."""
        out = []
        for rec in self.records:
            if rec.kind == "rho_pi":
                r, rho, pi = rec.key
                if query.l is not None:
                    continue
                if (query.r, query.rho, query.pi) != (None, None, None) and any(
                    want is not None and want != got for want, got in ((query.r, r), (query.rho, rho), (query.pi, pi))
                ):
                    continue
            elif rec.kind == "rank":
                if query.l is not None or query.rho is not None or query.pi is not None:
                    continue
                if query.r is not None and rec.key[0] != query.r:
                    continue
            else:
                l, m, r = rec.key
                if query.rho is not None or query.pi is not None:
                    continue
                if query.l is not None and (l, m) != (query.l, query.m):
                    continue
                if query.r is not None and r != query.r:
                    continue
            out.append(rec)
        return out

    def to_json(self) -> dict:
        return {
            "schema": CACHE_SCHEMA,
            "field": self.spec.to_json(),
            "n": self.n,
            "h": self.h,
            "records": [rec.to_json() for rec in self.records],
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CensusReport":
        if not isinstance(doc, dict) or doc.get("schema") != CACHE_SCHEMA:
            raise SchemaMismatch(f"expected schema {CACHE_SCHEMA!r}")
        try:
            spec = FieldSpec.from_json(doc["field"])
            records = [CensusRecord.from_json(r) for r in doc["records"]]
            return cls(spec, int(doc["n"]), int(doc["h"]), records, dict(doc.get("witnesses", {})))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaMismatch(f"malformed census document: {exc}") from exc


def _record_label(rec: CensusRecord) -> str:
    return rec.kind + ":" + ",".join(map(str, rec.key))


def reconcile_tally(spec: FieldSpec, n: int, h: int, tally: Tally) -> CensusReport:
    n1 = (n + 2) // 2
    records: list[CensusRecord] = []
    for rho in range(n1 + 1):
        for pi in range(n1 - rho + 1):
            key = (rho + pi, rho, pi)
            brute, formula = tally.profiles.get(key, 0), formula_L_rho_pi(spec, n, h, rho, pi)
            if brute or formula:
                records.append(CensusRecord("rho_pi", key, brute, int(formula)))
    by_rank = Counter()
    for (r, _, _), cnt in tally.profiles.items():
        by_rank[r] += cnt
    for r in range(n1 + 1):
        brute, formula = by_rank.get(r, 0), formula_L_r(spec, n, h, r)
        if brute or formula:
            records.append(CensusRecord("rank", (r,), brute, int(formula)))
    for l in range(1, n + 2):
        m = n + 2 - l
        for r in range(min(l, m) + 1):
            brute, formula = tally.shapes.get((l, m, r), 0), formula_H(spec, l, m, h, r)
            if brute or formula:
                records.append(CensusRecord("shape", (l, m, r), brute, int(formula)))
    report = CensusReport(spec, n, h, records)
    for rec in report.mismatches:
        if rec.kind == "rank":
            found = []
            for key in sorted(tally.profiles):
                if key[0] == rec.key[0]:
                    found += tally.witnesses.get(("rho_pi",) + key, [])
            wit = found[:MAX_WITNESSES]
        else:
            wit = tally.witnesses.get((rec.kind,) + rec.key, [])
        report.witnesses[_record_label(rec)] = [list(w) for w in wit]
    return report


def census_reconcile(
    query: CensusQuery,
    budget: int = DEFAULT_BUDGET,
    mapper: Callable = map,
    parts: int = 1,
) -> CensusReport:
    tally = census_enumerate_tally(query, budget, mapper, parts)
    return reconcile_tally(query.spec, query.n, query.h, tally)


# ---------------------------------------------------------------------------
# cache


def cache_path(cache_dir, spec: FieldSpec, n: int, h: int) -> Path:
    mod = "-".join(map(str, spec.modulus)) or "none"
    return Path(cache_dir) / f"census_p{spec.p}_e{spec.e}_m{mod}_n{n}_h{h}.json"


def cache_write(path, report: CensusReport) -> None:
    path = Path(path)
    if not path.parent.is_dir():
        raise CacheIOError(path.parent, "cache directory does not exist")
    tmp = path.with_suffix(".tmp")
    try:
        tmp.write_text(json.dumps(report.to_json(), indent=1, sort_keys=True))
        os.replace(tmp, path)
    except OSError as exc:
        raise CacheIOError(path, str(exc)) from exc


def cache_read(path) -> CensusReport:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CacheIOError(path, str(exc)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: not valid JSON") from exc
    return CensusReport.from_json(doc)


def cache_roundtrip(path, report: CensusReport) -> CensusReport:
    cache_write(path, report)
    return cache_read(path)


def cached_reconcile(
    cache_dir,
    spec: FieldSpec,
    n: int,
    h: int,
    budget: int = DEFAULT_BUDGET,
    mapper: Callable = map,
    parts: int = 1,
) -> CensusReport:
    """Reuse a cached full census for (field, n, h) when it is valid; otherwise recompute and store it.

    A stale or corrupt file is recomputed, never trusted.
    """
    path = cache_path(cache_dir, spec, n, h) if cache_dir is not None else None
    if path is not None:
        if not Path(cache_dir).is_dir():
            raise CacheIOError(cache_dir, "cache directory does not exist")
        if path.exists():
            try:
                rep = cache_read(path)
                if rep.spec == spec and (rep.n, rep.h) == (n, h):
                    return rep
            except SchemaMismatch:
                pass
    rep = census_reconcile(CensusQuery(spec, n, h), budget, mapper, parts)
    if path is not None:
        cache_write(path, rep)
    return rep


def sweep(spec: FieldSpec, ns: Iterable[int], budget: int = DEFAULT_BUDGET) -> list[CensusReport]:
    return [census_reconcile(CensusQuery(spec, n, h), budget) for n in ns for h in range(n + 2)]
