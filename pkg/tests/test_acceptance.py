"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the result lines are
written straight to the terminal so they survive output capture.
"""

import io
import random
import time
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from hankelff.census import CensusQuery, census_reconcile
from hankelff.cli import main
from hankelff.cyclosum import expsum_lemma_check
from hankelff.divisor import divisor_table, summation_identity_check, variance_bruteforce, variance_formula
from hankelff.ffield import field_make
from hankelff.fpoly import Poly, euclid_chain, monic_enumerate
from hankelff.hankel import (
    SymbolSeq,
    canonical_pair,
    char_polys,
    euclid_correspondence_check,
    extension_check,
    hankel_kernel_basis,
    kernel_predict,
    rho_pi_profile,
    seq_from_charpolys,
    spans_equal,
)
from hankelff.linalg import nullspace


@pytest.fixture
def announce(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {title}: {'PASS' if ok else 'FAIL'} ({detail})")

    return emit


def all_seqs(spec, length):
    for entries in product(range(spec.q), repeat=length):
        yield SymbolSeq._raw(spec, entries)


# 1 ---------------------------------------------------------------------------


def test_variance_theorem(announce):
    start = time.time()
    cases = [(p, n) for p in (2, 3) for n in range(4, 9)] + [(5, n) for n in range(4, 8)]
    bad, checked = [], 0
    for p, n in cases:
        table = divisor_table(field_make(p), n)
        for h in range(n + 1):
            brute = variance_bruteforce(p, n, h, table=table)
            checked += 1
            if brute != variance_formula(p, n, h):
                bad.append((p, n, h, brute))
    fractional = variance_bruteforce(3, 4, 0)
    ok = not bad and fractional == Fraction(20, 3)
    announce(1, "variance theorem", ok, f"{checked} triples, {len(bad)} mismatches, {time.time() - start:.1f}s")
    assert ok, bad


# 2 ---------------------------------------------------------------------------


def test_census_theorem(announce):
    start = time.time()
    plan = [((2, 1), 10), ((3, 1), 7), ((2, 2), 6), ((5, 1), 6)]
    bad, runs, records = [], 0, 0
    for (p, e), top in plan:
        spec = field_make(p, e)
        for n in range(top + 1):
            for h in range(n + 2):
                rep = census_reconcile(CensusQuery(spec, n, h))
                runs += 1
                records += len(rep.records)
                kinds = {rec.kind for rec in rep.records}
                if not rep.ok or kinds != {"rho_pi", "rank", "shape"}:
                    bad.append((spec.q, n, h, [(r.kind, r.key, r.brute, r.formula) for r in rep.mismatches]))
    elapsed = time.time() - start
    ok = not bad and elapsed < 180
    announce(2, "census theorem", ok, f"{runs} (q,n,h) runs, {records} records, {len(bad)} bad, {elapsed:.1f}s")
    assert ok, bad[:5]


# 3 ---------------------------------------------------------------------------


def _dimension_formula(n: int, rank: int, m: int) -> int:
    c1, c2 = rank, n + 2 - rank
    if m <= c1:
        return 0
    if m <= c2:
        return m - c1
    return 2 * m - n - 2


def _kernel_failures(seq):
    n = seq.n
    prof = rho_pi_profile(seq)
    pair = char_polys(seq, prof)
    out = []
    for l in range(1, n + 2):
        m = n + 2 - l
        basis = hankel_kernel_basis(seq.view(l, m))
        pred = kernel_predict(seq, l, m, prof, pair)
        if len(basis) != _dimension_formula(n, prof.rank, m) or not spans_equal(basis, pred.generators(), seq.spec, m):
            out.append((seq.entries, l, m))
    return out


def test_kernel_structure(announce):
    start = time.time()
    bad, seen = [], 0
    for q in (2, 3):
        spec = field_make(q)
        for n in range(8):
            for seq in all_seqs(spec, n + 1):
                seen += 1
                bad += _kernel_failures(seq)
    rng = random.Random(20240601)
    sampled = Counter()
    for q, e in ((2, 2), (5, 1)):
        spec = field_make(q, e)
        for n in range(10):
            for _ in range(110):
                seq = SymbolSeq._raw(spec, tuple(rng.randrange(spec.q) for _ in range(n + 1)))
                sampled[spec.q] += 1
                bad += _kernel_failures(seq)
    ok = not bad and min(sampled.values()) >= 1000
    announce(
        3, "kernel structure", ok,
        f"{seen} exhaustive + {dict(sampled)} sampled sequences, {len(bad)} mismatches, {time.time() - start:.1f}s",
    )
    assert ok, bad[:5]


# 4 ---------------------------------------------------------------------------


def _in_kernel(seq, poly, m) -> bool:
    n = seq.n
    if m > n + 1:  # no matrix with that many columns; nothing to check
        return True
    rows = seq.view(n + 2 - m, m).rows()
    basis = [Poly.from_vector(seq.spec, v) for v in nullspace(rows, seq.spec, m)]
    return spans_equal(basis + [poly], basis, seq.spec, m)


def test_converse_round_trip(announce):
    start = time.time()
    bad, pairs, runs = [], 0, 0
    for q in (2, 3):
        spec = field_make(q)
        for d1 in range(1, 5):
            n_min = 1 if d1 == 1 else 2 * d1 - 2
            for a1 in monic_enumerate(spec, d1):
                for d2 in range(d1):
                    for a2 in monic_enumerate(spec, d2):
                        if not euclid_chain(a1, a2).coprime():
                            continue
                        pairs += 1
                        for n in range(n_min, n_min + 4):
                            runs += 1
                            res = seq_from_charpolys(a1, a2, n)
                            c1, c2 = d1, n + 2 - d1
                            want = canonical_pair(a1, a2, c1, c2)
                            seqs = res.sequences
                            ok = len(seqs) == q - 1 and res.target == (d1, d1, 0)
                            base = res.canonical
                            ok &= base is not None and {
                                tuple(spec.mul[c][x] for x in base.entries) for c in range(1, q)
                            } == {s.entries for s in seqs}
                            for s in seqs:
                                got = char_polys(s)
                                ok &= got.a1 == want.a1 and ((got.a2 - want.a2) % a1).is_zero()
                                ok &= rho_pi_profile(s).key == (d1, d1, 0)
                                ok &= _in_kernel(s, a1, c1 + 1) and _in_kernel(s, a2, c2 + 1)
                            if not ok:
                                bad.append((q, a1, a2, n))
    ok = not bad
    announce(4, "converse and round trip", ok, f"{pairs} coprime pairs, {runs} (pair,n) runs, {len(bad)} failures, {time.time() - start:.1f}s")
    assert ok, bad[:5]


# 5 ---------------------------------------------------------------------------


def test_extension_partition(announce):
    start = time.time()
    bad, seen, claims = [], 0, Counter()
    for q in (2, 3):
        spec = field_make(q)
        for n in range(7):
            for seq in all_seqs(spec, n + 1):
                rep = extension_check(seq)
                seen += 1
                claims[rep.claim] += 1
                split = sorted(rep.counts.values())
                quasi = rep.profile.pi == 0 and rep.profile.rank <= seq.n1 - 1
                if quasi or rep.claim == "full-odd-regular":
                    shape_ok = split == sorted([1, q - 1])
                else:
                    shape_ok = split == [q]
                if not (rep.ok and shape_ok):
                    bad.append((seq.entries, rep.counts, rep.relation_failures))
    ok = not bad
    announce(5, "extension partition", ok, f"{seen} sequences, classes {dict(sorted(claims.items()))}, {len(bad)} failures, {time.time() - start:.1f}s")
    assert ok, bad[:5]


# 6 ---------------------------------------------------------------------------


def test_exponential_sums(announce):
    start = time.time()
    bad, cases = [], Counter()
    for p in (2, 3):
        spec = field_make(p)
        for n in range(1, 7):
            for seq in all_seqs(spec, n):
                rep = expsum_lemma_check(seq)
                cases[(p, rep.case)] += 1
                if not rep.ok:
                    bad.append(rep.to_row())
    identity_bad = []
    for p in (2, 3):
        for n in (4, 5, 6):
            table = divisor_table(field_make(p), n)
            for h in range(n + 1):
                rep = summation_identity_check(p, n, h, table=table)
                if not rep.match:
                    identity_bad.append(rep.to_row())
    all_cases = {c for _, c in cases} == {"vanishing", "square-odd", "product"}
    ok = not bad and not identity_bad and all_cases
    announce(
        6, "exponential-sum lemma and closing identity", ok,
        f"prefixes {dict(sorted(cases.items()))}, {len(bad)} lemma + {len(identity_bad)} identity failures, {time.time() - start:.1f}s",
    )
    assert ok, (bad[:3], identity_bad[:3])


# 7 ---------------------------------------------------------------------------


def test_euclid_correspondence(announce):
    start = time.time()
    bad, checked, levels, ledger = [], 0, 0, Counter()
    for q in (2, 3):
        spec = field_make(q)
        for n in range(8):
            for seq in all_seqs(spec, n + 1):
                prof = rho_pi_profile(seq)
                if prof.pi != 0 or prof.rank < 2:
                    continue
                rep = euclid_correspondence_check(seq)
                checked += 1
                for lv in rep.levels:
                    if lv.asserted:
                        levels += 1
                        if not lv.ok:
                            bad.append((seq.entries, lv.level, lv.claimed, lv.observed))
                    elif not lv.ok:
                        ledger[(lv.case, lv.claimed, lv.observed)] += 1
                if not rep.leading_zeros_ok:
                    bad.append((seq.entries, "leading zeros"))
    ok = not bad and checked > 0
    summary = ", ".join(f"{c} {cl}->{ob}: {k}" for (c, cl, ob), k in sorted(ledger.items()))
    announce(
        7, "Euclid correspondence", ok,
        f"{checked} sequences, {levels} asserted levels, {len(bad)} failures; informational ledger [{summary}]; {time.time() - start:.1f}s",
    )
    assert ok, bad[:5]


# 8 ---------------------------------------------------------------------------


SUITE_ARGS = [
    ["variance", "--p", "3", "--n", "2..6"],
    ["census", "--p", "3", "--n", "0..5"],
    ["census", "--p", "2", "--e", "2", "--n", "0..4", "--format", "csv"],
    ["kernel", "--p", "5", "--n", "0..7", "--sample", "60", "--seed", "9"],
    ["euclid", "--p", "3", "--n", "2..6", "--sample", "120", "--seed", "9"],
    ["expsum", "--p", "3", "--n", "1..4"],
    ["all", "--p", "2", "--n", "1..6", "--sample", "40", "--seed", "4"],
]


def _run(argv):
    buf = io.StringIO()
    status = main(argv, stdout=buf)
    return status, buf.getvalue()


def test_determinism_across_jobs(announce):
    start = time.time()
    differing = []
    for args in SUITE_ARGS:
        one = _run(args + ["--jobs", "1"])
        four = _run(args + ["--jobs", "4"])
        again = _run(args + ["--jobs", "1"])
        if not (one == four == again) or one[0] != 0:
            differing.append(" ".join(args))
    ok = not differing
    announce(8, "determinism across --jobs", ok, f"{len(SUITE_ARGS)} suites, {len(differing)} differing, {time.time() - start:.1f}s")
    assert ok, differing
