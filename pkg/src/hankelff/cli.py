"""Command-line verification harness.

Every subcommand enumerates (or samples) a parameter space, reconciles the
brute-force side against the closed forms and prints one report envelope.
Work is split into contiguous chunks that are evaluated through a mapper
(the builtin ``map`` or a process pool) and merged in chunk order, so the
report does not depend on ``--jobs``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from . import census as census_mod
from .cyclosum import expsum_lemma_check
from .divisor import divisor_table, summation_identity_check, variance_report
from .errors import BudgetExceeded, HankelffError
from .ffield import FieldSpec, field_make
from .hankel import (
    SymbolSeq,
    char_polys,
    euclid_correspondence_check,
    hankel_kernel_basis,
    kernel_predict,
    rho_pi_profile,
    spans_equal,
)

SCHEMA = "hankelff/v1"
COMMANDS = ("variance", "census", "kernel", "euclid", "expsum", "all")
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
MAX_N = 30
EXAMPLES_PER_CLASS = 3


class BadFlag(ValueError):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """'5' -> (5, 5); '2..6' -> (2, 6)."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise BadFlag(f"bad range {text!r}; use N or A..B") from None
    if lo > hi or lo < 0:
        raise BadFlag(f"empty or negative range {text!r}")
    return lo, hi


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int = 2
    e: int = 1
    modulus: tuple[int, ...] | None = None
    n: tuple[int, int] = (0, 0)
    h: tuple[int, int] | None = None
    l: int | None = None
    m: int | None = None
    r: int | None = None
    rho: int | None = None
    pi: int | None = None
    format: str = "json"
    cache_dir: str | None = None
    jobs: int = 1
    budget: int = census_mod.DEFAULT_BUDGET
    seed: int = 0
    sample: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise BadFlag(f"unknown command {self.command!r}")
        if self.jobs < 1:
            raise BadFlag("--jobs must be >= 1")
        if self.budget < 1:
            raise BadFlag("--budget must be >= 1")
        if self.sample is not None and self.sample < 1:
            raise BadFlag("--sample must be >= 1")
        if self.n[1] > MAX_N:
            raise BadFlag(f"--n is capped at {MAX_N}")
        if self.format not in ("json", "csv"):
            raise BadFlag("--format is json or csv")
        if (self.l is None) != (self.m is None):
            raise BadFlag("--l and --m go together")

    def field(self) -> FieldSpec:
        return field_make(self.p, self.e, self.modulus)

    def ns(self) -> range:
        return range(self.n[0], self.n[1] + 1)

    def hs(self, hi: int) -> range:
        lo, top = self.h if self.h is not None else (0, hi)
        return range(lo, min(top, hi) + 1)

    def params(self) -> dict:
        doc = asdict(self)
        del doc["jobs"]
        for key in ("modulus", "n", "h"):
            if doc[key] is not None:
                doc[key] = list(doc[key])
        return doc


@dataclass
class Outcome:
    rows: list
    informational: list
    failures: list

    def extend(self, other: "Outcome", tag: str | None = None) -> None:
        for mine, theirs in ((self.rows, other.rows), (self.informational, other.informational), (self.failures, other.failures)):
            mine.extend({"suite": tag, **x} if tag else x for x in theirs)


# ---------------------------------------------------------------------------
# sequence spaces


def decode(spec: FieldSpec, length: int, idx: int) -> tuple[int, ...]:
    """The idx-th element of F_q^length in lexicographic order."""
    q = spec.q
    out = [0] * length
    for pos in range(length - 1, -1, -1):
        idx, out[pos] = divmod(idx, q)
    return tuple(out)


def index_chunks(cfg: RunConfig, spec: FieldSpec, length: int, salt: int, parts: int) -> list[Sequence[int]]:
    """Contiguous pieces of the enumeration order (or of a sorted seeded sample)."""
    size = spec.q**length
    if cfg.sample is not None and cfg.sample < size:
        rng = random.Random(cfg.seed * 1_000_003 + salt * 101 + length)
        picked = sorted(rng.sample(range(size), cfg.sample))
        return [picked[a:b] for a, b in census_mod.partition(len(picked), parts)]
    if size > cfg.budget:
        raise BudgetExceeded(f"{size} sequences of length {length} exceed budget {cfg.budget}; pass --sample")
    return [range(a, b) for a, b in census_mod.partition(size, parts)]


def _call(args):
    fn, rest = args[0], args[1:]
    return fn(*rest)


def run_chunks(mapper: Callable, fn: Callable, spec: FieldSpec, length: int, chunks) -> list:
    return list(mapper(_call, [(fn, spec, length, c) for c in chunks]))


# ---------------------------------------------------------------------------
# workers (top level so they pickle)


def kernel_chunk(spec: FieldSpec, length: int, indices) -> tuple[int, int, list]:
    n = length - 1
    checked = shapes = 0
    bad = []
    for idx in indices:
        seq = SymbolSeq._raw(spec, decode(spec, length, idx))
        prof = rho_pi_profile(seq)
        pair = char_polys(seq, prof)
        checked += 1
        for l in range(1, n + 2):
            m = n + 2 - l
            basis = hankel_kernel_basis(seq.view(l, m))
            pred = kernel_predict(seq, l, m, prof, pair)
            shapes += 1
            dim_ok = len(basis) == pred.predicted_dim
            span_ok = spans_equal(basis, pred.generators(), spec, m)
            if not (dim_ok and span_ok):
                bad.append(
                    {"alpha": seq.to_json(), "l": l, "m": m, "regime": pred.regime, "dim": len(basis),
                     "predicted_dim": pred.predicted_dim, "span_match": span_ok}
                )
    return checked, shapes, bad


def euclid_chunk(spec: FieldSpec, length: int, indices) -> dict:
    out = {"checked": 0, "skipped": 0, "levels": 0, "bad": [], "ledger": Counter(), "examples": {}}
    for idx in indices:
        seq = SymbolSeq._raw(spec, decode(spec, length, idx))
        prof = rho_pi_profile(seq)
        if prof.pi != 0 or prof.rank < 2:
            out["skipped"] += 1
            continue
        rep = euclid_correspondence_check(seq)
        out["checked"] += 1
        for lv in rep.levels:
            if lv.asserted:
                out["levels"] += 1
                if not lv.ok:
                    out["bad"].append({"alpha": seq.to_json(), **lv.to_json()})
            elif not lv.ok:
                key = (lv.case, lv.claimed, lv.observed)
                out["ledger"][key] += 1
                ex = out["examples"].setdefault(key, [])
                if len(ex) < EXAMPLES_PER_CLASS:
                    ex.append(seq.to_json())
        if not rep.leading_zeros_ok:
            out["bad"].append(
                {"alpha": seq.to_json(), "check": "leading_zeros",
                 "claimed": rep.leading_zeros_claimed, "observed": rep.leading_zeros_observed}
            )
    return out


def expsum_chunk(spec: FieldSpec, length: int, indices) -> tuple[Counter, list]:
    cases = Counter()
    bad = []
    for idx in indices:
        rep = expsum_lemma_check(SymbolSeq._raw(spec, decode(spec, length, idx)))
        cases[rep.case] += 1
        if not rep.ok:
            bad.append(rep.to_row())
    return cases, bad


# ---------------------------------------------------------------------------
# suites


def suite_variance(cfg: RunConfig, mapper: Callable) -> Outcome:
    out = Outcome([], [], [])
    spec = cfg.field()
    if spec.e != 1:
        out.informational.append({"note": "variance needs a prime field; skipped"})
        return out
    for n in cfg.ns():
        table = divisor_table(spec, n, cfg.budget)
        for h in cfg.hs(n):
            rep = variance_report(spec.p, n, h, table=table)
            row = rep.to_row()
            out.rows.append(row)
            if rep.informational:
                out.informational.append({"note": "n < 4 lies outside the theorem", **row})
            elif not (rep.match and row["mean_ok"]):
                out.failures.append(row)
    return out


def suite_census(cfg: RunConfig, mapper: Callable) -> Outcome:
    out = Outcome([], [], [])
    spec = cfg.field()
    for n in cfg.ns():
        if cfg.l is not None and cfg.l + cfg.m - 2 != n:
            continue
        for h in cfg.hs(n + 1):
            query = census_mod.CensusQuery(spec, n, h, cfg.r, cfg.rho, cfg.pi, cfg.l, cfg.m)
            if query.size > cfg.budget:
                raise BudgetExceeded(f"q^(n-h+1) = {query.size} exceeds budget {cfg.budget}")
            rep = census_mod.cached_reconcile(cfg.cache_dir, spec, n, h, cfg.budget, mapper, cfg.jobs)
            for rec in rep.select(query):
                row = {"n": n, "h": h, **rec.to_json()}
                out.rows.append(row)
                if not rec.match:
                    label = census_mod._record_label(rec)
                    out.failures.append({**row, "witnesses": rep.witnesses.get(label, [])})
            if not rep.mass_ok:
                out.failures.append({"n": n, "h": h, "check": "mass_conservation"})
    return out


def suite_kernel(cfg: RunConfig, mapper: Callable) -> Outcome:
    out = Outcome([], [], [])
    spec = cfg.field()
    for n in cfg.ns():
        chunks = index_chunks(cfg, spec, n + 1, 1, cfg.jobs)
        checked = shapes = 0
        bad = []
        for c, s, b in run_chunks(mapper, kernel_chunk, spec, n + 1, chunks):
            checked, shapes = checked + c, shapes + s
            bad += b
        out.rows.append({"n": n, "sequences": checked, "shapes": shapes, "mismatches": len(bad), "match": not bad})
        out.failures += [{"n": n, **b} for b in bad]
    return out


def suite_euclid(cfg: RunConfig, mapper: Callable) -> Outcome:
    out = Outcome([], [], [])
    spec = cfg.field()
    for n in cfg.ns():
        chunks = index_chunks(cfg, spec, n + 1, 2, cfg.jobs)
        checked = skipped = levels = 0
        bad, ledger, examples = [], Counter(), {}
        for part in run_chunks(mapper, euclid_chunk, spec, n + 1, chunks):
            checked += part["checked"]
            skipped += part["skipped"]
            levels += part["levels"]
            bad += part["bad"]
            ledger.update(part["ledger"])
            for key, ex in part["examples"].items():
                mine = examples.setdefault(key, [])
                mine.extend(ex[: EXAMPLES_PER_CLASS - len(mine)])
        out.rows.append(
            {"n": n, "checked": checked, "not_applicable": skipped, "asserted_levels": levels,
             "mismatches": len(bad), "match": not bad}
        )
        out.failures += [{"n": n, **b} for b in bad]
        for key in sorted(ledger):
            case, claimed, observed = key
            out.informational.append(
                {"n": n, "case": case, "claimed": list(claimed), "observed": list(observed),
                 "count": ledger[key], "examples": examples[key]}
            )
    return out


def suite_expsum(cfg: RunConfig, mapper: Callable) -> Outcome:
    out = Outcome([], [], [])
    spec = cfg.field()
    if spec.e != 1:
        out.informational.append({"note": "exponential sums need a prime field; skipped"})
        return out
    for n in cfg.ns():
        if n == 0:
            continue
        chunks = index_chunks(cfg, spec, n, 3, cfg.jobs)
        cases, bad = Counter(), []
        for c, b in run_chunks(mapper, expsum_chunk, spec, n, chunks):
            cases.update(c)
            bad += b
        out.rows.append(
            {"check": "lemma", "n": n, "cases": {k: cases[k] for k in sorted(cases)},
             "mismatches": len(bad), "match": not bad}
        )
        out.failures += bad
        table = divisor_table(spec, n, cfg.budget)
        for h in cfg.hs(n):
            rep = summation_identity_check(spec.p, n, h, table=table)
            row = {"check": "identity", **rep.to_row()}
            out.rows.append(row)
            if not rep.match:
                out.failures.append(row)
    return out


SUITES = {
    "variance": suite_variance,
    "census": suite_census,
    "kernel": suite_kernel,
    "euclid": suite_euclid,
    "expsum": suite_expsum,
}


def run(cfg: RunConfig, mapper: Callable = map) -> tuple[int, dict]:
    if cfg.command == "all":
        outcome = Outcome([], [], [])
        for name, suite in SUITES.items():
            outcome.extend(suite(cfg, mapper), tag=name)
    else:
        outcome = SUITES[cfg.command](cfg, mapper)
    envelope = {
        "schema": SCHEMA,
        "command": cfg.command,
        "params": cfg.params(),
        "rows": outcome.rows,
        "informational": outcome.informational,
        "failures": outcome.failures,
    }
    return (EXIT_MISMATCH if outcome.failures else EXIT_OK), envelope


# ---------------------------------------------------------------------------
# output


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return "" if value is None else str(value)


def render(envelope: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(envelope, indent=2) + "\n"
    entries = [("row", x) for x in envelope["rows"]]
    entries += [("informational", x) for x in envelope["informational"]]
    entries += [("failure", x) for x in envelope["failures"]]
    header = ["section"]
    for _, x in entries:
        header += [k for k in x if k not in header]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for section, x in entries:
        writer.writerow([section] + [_cell(x.get(k)) for k in header[1:]])
    return buf.getvalue()


@contextmanager
def worker_mapper(jobs: int):
    if jobs == 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield pool.map


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hankelff", description="Exact verification of Hankel-matrix and divisor-variance identities over finite fields.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p", type=int, default=2, help="field characteristic")
    ap.add_argument("--e", type=int, default=1, help="extension degree")
    ap.add_argument("--modulus", help="comma separated low-first coefficients of the defining polynomial")
    ap.add_argument("--n", required=True, help="N or A..B")
    ap.add_argument("--h", help="H or A..B (default: every admissible h)")
    for flag in ("--l", "--m", "--r", "--rho", "--pi"):
        ap.add_argument(flag, type=int, help="census filter")
    ap.add_argument("--sample", type=int, help="check k random sequences per n instead of all")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--cache-dir", help="reuse census results stored here")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("--budget", type=int, default=census_mod.DEFAULT_BUDGET, help="largest exhaustive space allowed")
    ap.add_argument("--seed", type=int, default=0)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    modulus = None
    if ns.modulus:
        try:
            modulus = tuple(int(c) for c in ns.modulus.split(","))
        except ValueError:
            raise BadFlag(f"bad --modulus {ns.modulus!r}") from None
    return RunConfig(
        command=ns.command, p=ns.p, e=ns.e, modulus=modulus,
        n=parse_range(ns.n), h=parse_range(ns.h) if ns.h else None,
        l=ns.l, m=ns.m, r=ns.r, rho=ns.rho, pi=ns.pi,
        format=ns.format, cache_dir=ns.cache_dir, jobs=ns.jobs,
        budget=ns.budget, seed=ns.seed, sample=ns.sample,
    )


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        cfg.field()
        with worker_mapper(cfg.jobs) as mapper:
            status, envelope = run(cfg, mapper)
    except BudgetExceeded as exc:
        print(f"hankelff: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BadFlag, HankelffError, ValueError) as exc:
        print(f"hankelff: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(render(envelope, cfg.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
