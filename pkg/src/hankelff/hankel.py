"""Hankel matrices H_{l,m}(alpha) = (alpha_{i+j-2}) over a finite field.

Everything is computed by direct elimination: ranks, kernels, the leading
invertible square (rho), the excess rank pi, and from those the two
characteristic polynomials whose bounded-degree multiples fill every kernel.
The remaining functions build sequences from prescribed characteristic
polynomials, track what happens when a sequence is extended by one term,
and compare truncations against the Euclidean remainder chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import BoundViolation, NotApplicable, NotCoprime, ShapeMismatch
from .ffield import FieldElement, FieldSpec
from .fpoly import Poly, euclid_chain, poly_gcd
from .linalg import nullspace, rank, rref, row_space, solve_combination


# ---------------------------------------------------------------------------
# sequences and views


@dataclass(frozen=True)
class SymbolSeq:
    spec: FieldSpec
    entries: tuple[int, ...]

    def __post_init__(self):
        codes = tuple(self.spec.code_of(a) for a in self.entries)
        if not codes:
            raise ValueError("a sequence needs at least one entry")
        object.__setattr__(self, "entries", codes)

    @classmethod
    def _raw(cls, spec: FieldSpec, codes: Sequence[int]) -> "SymbolSeq":
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "entries", tuple(codes))
        return obj

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def n1(self) -> int:
        return (self.n + 2) // 2

    @property
    def n2(self) -> int:
        return (self.n + 3) // 2

    def truncate(self, last: int) -> "SymbolSeq":
        """The prefix alpha_0, ..., alpha_last."""
        return SymbolSeq._raw(self.spec, self.entries[: last + 1])

    def extend(self, value) -> "SymbolSeq":
        return SymbolSeq._raw(self.spec, self.entries + (self.spec.code_of(value),))

    def leading_zeros(self) -> int:
        k = 0
        for a in self.entries:
            if a:
                break
            k += 1
        return k

    def view(self, l: int, m: int) -> "HankelView":
        return HankelView(self, l, m)

    def to_json(self) -> list:
        return [self.spec.encode(a) for a in self.entries]

    def __repr__(self) -> str:
        return f"SymbolSeq({self.spec!r}, {[FieldElement(self.spec, a) for a in self.entries]})"


def hankel_rows(entries: Sequence[int], l: int, m: int) -> list[list[int]]:
    return [list(entries[i : i + m]) for i in range(l)]


@dataclass(frozen=True)
class HankelView:
    seq: SymbolSeq
    l: int
    m: int

    def __post_init__(self):
        if self.l < 1 or self.m < 1 or self.l + self.m - 2 > self.seq.n:
            raise ShapeMismatch(f"H_{{{self.l},{self.m}}} needs l, m >= 1 and l+m-2 <= {self.seq.n}")

    def entry(self, i: int, j: int) -> int:
        """1-based (i, j) entry, i.e. alpha_{i+j-2}."""
        return self.seq.entries[i + j - 2]

    def rows(self) -> list[list[int]]:
        return hankel_rows(self.seq.entries, self.l, self.m)


def hankel_rank(h: HankelView) -> int:
    return rank(h.rows(), h.seq.spec)


def hankel_kernel_basis(h: HankelView) -> list[Poly]:
    spec = h.seq.spec
    return [Poly.from_vector(spec, v) for v in nullspace(h.rows(), spec, h.m)]


# ---------------------------------------------------------------------------
# (rho, pi)


@dataclass(frozen=True)
class RhoPiProfile:
    rank: int
    rho: int
    pi: int
    c1: int
    c2: int
    quasi_regular: bool

    @classmethod
    def of(cls, n: int, rank_: int, rho: int) -> "RhoPiProfile":
        return cls(rank_, rho, rank_ - rho, rank_, n + 2 - rank_, rank_ == rho)

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.rank, self.rho, self.pi)

    def to_json(self) -> dict:
        return {"rank": self.rank, "rho": self.rho, "pi": self.pi, "c1": self.c1, "c2": self.c2}


def _nonsingular(rows: list[list[int]], spec: FieldSpec) -> bool:
    size = len(rows)
    work = [list(r) for r in rows]
    inv, mul, submul = spec.inv, spec.mul, spec.submul
    for c in range(size):
        sel = next((i for i in range(c, size) if work[i][c]), None)
        if sel is None:
            return False
        work[c], work[sel] = work[sel], work[c]
        prow = work[c]
        pinv = inv[prow[c]]
        for i in range(c + 1, size):
            r = work[i]
            if r[c]:
                t = submul[mul[r[c]][pinv]]
                work[i] = [t[a][b] for a, b in zip(r, prow)]
    return True


def profile_key(entries: Sequence[int], spec: FieldSpec) -> tuple[int, int, int]:
    """(rank, rho, pi) of a raw code sequence; the census inner loop calls this."""
    n = len(entries) - 1
    n1, n2 = (n + 2) // 2, (n + 3) // 2
    r = rank(hankel_rows(entries, n1, n2), spec)
    # H_{l,l} sits inside H_{n1,n2}, so no leading square above size r can be invertible
    rho = 0
    for size in range(r, 0, -1):
        if _nonsingular(hankel_rows(entries, size, size), spec):
            rho = size
            break
    return r, rho, r - rho


def rho_pi_profile(seq: SymbolSeq) -> RhoPiProfile:
    r, rho, _ = profile_key(seq.entries, seq.spec)
    return RhoPiProfile.of(seq.n, r, rho)


# ---------------------------------------------------------------------------
# (rho, pi)-form


@dataclass(frozen=True)
class RhoPiForm:
    x: tuple[int, ...]
    alpha_prime: tuple[int, ...]
    beta: tuple[int, ...]
    beta_start: int
    pi_observed: int | None
    matrix: tuple[tuple[int, ...], ...]
    degenerate: bool
    tail_is_hankel: bool = True


def rho_pi_form(seq: SymbolSeq, l: int, m: int) -> RhoPiForm:
    """Row-reduce H_{l,m}(alpha) by subtracting x-weighted copies of the rho rows above.

    For rho = 0 the matrix is already in its final shape and beta is alpha
    itself; for rho = n1 (or l <= rho) nothing is reduced and beta is empty.
    """
    n = seq.n
    if l + m - 2 != n or l < 1 or m < 1:
        raise ShapeMismatch(f"need l+m-2 = {n}, got l={l}, m={m}")
    spec = seq.spec
    rows = hankel_rows(seq.entries, l, m)
    prof = rho_pi_profile(seq)
    rho = prof.rho
    if rho == 0:
        beta = seq.entries
        return RhoPiForm((), (), beta, 0, _pi_from_tail(beta, 0, n), _freeze(rows), True)
    if not (rho <= seq.n1 - 1 and l > rho):
        return RhoPiForm((), (), (), rho, None, _freeze(rows), True)

    # H[rho, rho] x = (alpha_rho, ..., alpha_{2 rho - 1})
    a = seq.entries
    aug = [list(a[i : i + rho]) + [a[i + rho]] for i in range(rho)]
    red, piv = rref(aug, spec, rho + 1)
    x = [0] * rho
    for r_, pc in zip(red, piv):
        x[pc] = r_[rho]

    mul, sub = spec.mul, spec.sub
    out = [list(r) for r in rows]
    for i in range(l - 1, rho - 1, -1):  # 0-based row i, bottom to top
        new = list(rows[i])
        for k in range(rho):
            src = rows[i - rho + k]
            xk = x[k]
            if xk:
                mrow = mul[xk]
                new = [sub[u][mrow[v]] for u, v in zip(new, src)]
        out[i] = new

    # lower block rows rho..l-1 (0-based); entry (i, j) sits on skew-diagonal i + j
    beta: dict[int, int] = {}
    hankel_ok = True
    for i in range(rho, l):
        for j in range(m):
            k = i + j
            if k in beta:
                hankel_ok &= beta[k] == out[i][j]
            else:
                beta[k] = out[i][j]
    tail = tuple(beta[k] for k in range(rho, n + 1))
    return RhoPiForm(
        tuple(x),
        tuple(a[: rho + m - 1]),
        tail,
        rho,
        _pi_from_tail(tail, rho, n),
        _freeze(out),
        False,
        hankel_ok,
    )


def _pi_from_tail(tail: Sequence[int], start: int, n: int) -> int:
    for off, b in enumerate(tail):
        if b:
            return (n + 1) - (start + off)
    return 0


def _freeze(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# characteristic polynomials


@dataclass(frozen=True)
class CharPair:
    a1: Poly
    a2: Poly

    def to_json(self) -> dict:
        return {"a1": self.a1.to_json(), "a2": self.a2.to_json()}


def _top_echelon(vectors: list[list[int]], spec: FieldSpec, length: int) -> list[tuple[int, Poly]]:
    """Echelon basis keyed on the highest-degree coefficient: [(pivot degree, monic poly)], highest first."""
    rev = [list(reversed(v)) for v in vectors]
    red, piv = rref(rev, spec, length)
    return [(length - 1 - pc, Poly.from_vector(spec, reversed(r))) for r, pc in zip(red, piv)]


def canonical_pair(a1: Poly, a2: Poly, c1: int, c2: int) -> CharPair:
    """Canonical representative of the pair (a1, a2) for characteristic degrees (c1, c2).

    When c1 < c2, a1 is made monic and a2 is reduced against T^k a1
    (0 <= k <= c2 - c1), clearing its coefficients at degrees deg a1 + k,
    then made monic.  For a quasi-regular sequence this is the least monic
    residue of a2 mod a1.  When c1 = c2 the two polynomials share one
    kernel: a2 becomes its monic element of least degree and a1 the monic
    element of top degree with no term in degree deg a2.
    """
    spec = a1.spec
    if a2.is_zero():
        return CharPair(a1.monic(), a2)
    if c1 == c2:
        length = max(a1.degree, a2.degree) + 1
        ech = _top_echelon([a1.vector(length), a2.vector(length)], spec, length)
        if len(ech) == 2:
            return CharPair(ech[0][1], ech[1][1])
        return CharPair(a1.monic(), a2.monic())
    a1m = a1.monic()
    d1 = a1m.degree
    red = a2
    for k in range(c2 - c1, -1, -1):
        c = red.coeff(d1 + k)
        if c:
            red = red - a1m.shift(k).scale(c)
    return CharPair(a1m, red.monic())


def char_polys(seq: SymbolSeq, profile: RhoPiProfile | None = None) -> CharPair:
    spec, n = seq.spec, seq.n
    prof = profile or rho_pi_profile(seq)
    r = prof.rank
    one = Poly.one(spec)
    if r == 0:
        return CharPair(one, Poly.zero(spec))
    if r == 1:
        if n == 0:
            # no kernel shape exists; T keeps the one-step extension rule intact
            return CharPair(Poly.monomial(spec, 1), one)
        (v,) = nullspace(hankel_rows(seq.entries, n, 2), spec, 2)
        a1 = Poly.from_vector(spec, v).monic()
        a2 = one if prof.rho == 1 else Poly.monomial(spec, n + 1)
        return CharPair(a1, a2)
    c1, c2 = prof.c1, prof.c2
    if c1 == c2:
        m = c1 + 1
        basis = nullspace(hankel_rows(seq.entries, n + 2 - m, m), spec, m)
        ech = _top_echelon(basis, spec, m)
        return CharPair(ech[0][1], ech[1][1])
    m = c1 + 1
    (v,) = nullspace(hankel_rows(seq.entries, n + 2 - m, m), spec, m)
    a1 = Poly.from_vector(spec, v).monic()
    m = c2 + 1
    basis = nullspace(hankel_rows(seq.entries, n + 2 - m, m), spec, m)
    taken = {a1.degree + k for k in range(c2 - c1 + 1)}
    a2 = next(p for deg, p in _top_echelon(basis, spec, m) if deg not in taken)
    return CharPair(a1, a2)


# ---------------------------------------------------------------------------
# kernel prediction


@dataclass(frozen=True)
class KernelDescription:
    n: int
    c1: int
    c2: int
    pair: CharPair
    m: int
    regime: str
    predicted_dim: int

    @property
    def a1(self) -> Poly:
        return self.pair.a1

    @property
    def a2(self) -> Poly:
        return self.pair.a2

    def generators(self) -> list[Poly]:
        """T^k A1 for k <= m-c1-1, then T^k A2 for k <= m-c2-1 (as the regime allows)."""
        gens = []
        if self.regime != "trivial":
            gens += [self.a1.shift(k) for k in range(self.m - self.c1)]
        if self.regime == "double-generator":
            gens += [self.a2.shift(k) for k in range(self.m - self.c2)]
        return gens


def kernel_predict(
    seq: SymbolSeq,
    l: int,
    m: int,
    profile: RhoPiProfile | None = None,
    pair: CharPair | None = None,
) -> KernelDescription:
    n = seq.n
    if l + m - 2 != n or l < 1 or m < 1:
        raise ShapeMismatch(f"need l+m-2 = {n}, got l={l}, m={m}")
    prof = profile or rho_pi_profile(seq)
    pair = pair or char_polys(seq, prof)
    c1, c2 = prof.c1, prof.c2
    if m <= c1:
        regime, dim = "trivial", 0
    elif m <= c2:
        regime, dim = "single-generator", m - c1
    else:
        regime, dim = "double-generator", 2 * m - n - 2
    return KernelDescription(n, c1, c2, pair, m, regime, dim)


def spans_equal(a: Iterable[Poly], b: Iterable[Poly], spec: FieldSpec, length: int) -> bool:
    return row_space([p.vector(length) for p in a], spec, length) == row_space(
        [p.vector(length) for p in b], spec, length
    )


def decompose(target: Poly, basis: Sequence[Poly]) -> list[int] | None:
    """Coefficients expressing ``target`` in ``basis`` (codes), or None."""
    spec = target.spec
    length = max([target.degree] + [p.degree for p in basis] + [0]) + 1
    length = int(length)
    return solve_combination(target.vector(length), [p.vector(length) for p in basis], spec)


# ---------------------------------------------------------------------------
# converse: sequences with prescribed characteristic polynomials


@dataclass(frozen=True)
class ConverseResult:
    target: tuple[int, int, int]
    sequences: tuple[SymbolSeq, ...]
    canonical: SymbolSeq | None

    def __len__(self) -> int:
        return len(self.sequences)


def _converse_target(a1: Poly, a2: Poly, n: int) -> tuple[int, int, int]:
    d1 = a1.degree
    if a2.is_zero():
        return (0, 0, 0)
    d2 = a2.degree
    if d1 == 0 and a2.monic() == Poly.monomial(a1.spec, n + 1):
        return (1, 0, 1)
    if d1 == 1 and d2 == 0:
        # at n = 0 every nonzero alpha carries the conventional pair (T, 1)
        if n < 0 or (n == 0 and a1.monic() != Poly.monomial(a1.spec, 1)):
            raise BoundViolation(n)
        return (1, 1, 0)
    if d1 <= 1:
        if d2 < d1 + 2 or n < d2:
            raise BoundViolation(n)
        # besides n >= deg a2 we need c1 < c2, i.e. n <= 2 deg a2 - 3
        if n > 2 * d2 - 3:
            raise BoundViolation(n)
        r = n + 2 - d2
        return (r, d1, r - d1)
    if d2 < d1:
        if n < max(d1, d2) + d1 - 2:
            raise BoundViolation(n)
        return (d1, d1, 0)
    # deg a2 > deg a1 >= 2: the second characteristic degree must equal deg a2,
    # which forces r = n + 2 - deg a2 with deg a1 < r < deg a2
    r = n + 2 - d2
    if not (d1 < r < d2):
        raise BoundViolation(n)
    return (r, d1, r - d1)


def seq_from_charpolys(a1: Poly, a2: Poly, n: int) -> ConverseResult:
    """All sequences of length n+1 with characteristic polynomials (a1, a2).

    The kernel of the one-row matrix (alpha_0 ... alpha_n) must contain
    T^k a1 for k <= n - c1 and T^k a2 for k <= n - c2; those linear
    conditions are solved and the nonzero solutions filtered by profile and
    by the canonical pair.
    """
    spec = a1.spec
    if a1.is_zero():
        raise NotCoprime("first characteristic polynomial is zero")
    if poly_gcd(a1, a2).degree != 0:
        raise NotCoprime(f"gcd({a1}, {a2}) is not constant")
    if n < 0:
        raise BoundViolation(n)
    if a2.degree >= a1.degree >= 2 and a2.degree == a1.degree:
        a2 = a2 % a1
    target = _converse_target(a1, a2, n)
    if target == (0, 0, 0):
        zero = SymbolSeq._raw(spec, (0,) * (n + 1))
        return ConverseResult(target, (zero,), zero)
    r = target[0]
    c1, c2 = r, n + 2 - r
    want = canonical_pair(a1, a2, c1, c2)
    gens = [a1.shift(k) for k in range(n - c1 + 1)]
    gens += [a2.shift(k) for k in range(n - c2 + 1)]
    rows = [g.vector(n + 1) for g in gens if g.degree <= n]
    basis = nullspace(rows, spec, n + 1) if rows else [
        [int(i == j) for j in range(n + 1)] for i in range(n + 1)
    ]
    q = spec.q
    add, mul = spec.add, spec.mul
    found = []
    for coeffs in product(range(q), repeat=len(basis)):
        if not any(coeffs):
            continue
        vec = [0] * (n + 1)
        for c, b in zip(coeffs, basis):
            if c:
                row = mul[c]
                vec = [add[u][row[v]] for u, v in zip(vec, b)]
        cand = SymbolSeq._raw(spec, vec)
        prof = rho_pi_profile(cand)
        if prof.key != target:
            continue
        if char_polys(cand, prof) == want:
            found.append(cand)
    found.sort(key=lambda s: s.entries)
    canon = next((s for s in found if s.entries[s.leading_zeros()] == 1), None)
    return ConverseResult(target, tuple(found), canon)


# ---------------------------------------------------------------------------
# extension by one term


def extend_profile(seq: SymbolSeq, value) -> tuple[RhoPiProfile, CharPair]:
    ext = seq.extend(value)
    prof = rho_pi_profile(ext)
    return prof, char_polys(ext, prof)


@dataclass
class ExtensionReport:
    claim: str
    profile: RhoPiProfile
    outcomes: dict[int, tuple[int, int, int]]  # next value code -> key of the extension
    counts: dict[tuple[int, int, int], int]
    expected_counts: dict[tuple[int, int, int], int]
    relation_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.counts == self.expected_counts and not self.relation_failures


def extension_check(seq: SymbolSeq) -> ExtensionReport:
    """Extend by every field value and test the predicted split and polynomial relations."""
    spec, n = seq.spec, seq.n
    q = spec.q
    prof = rho_pi_profile(seq)
    pair = char_polys(seq, prof)
    a1, a2 = pair.a1, pair.a2
    r, rho, pi = prof.key
    n1 = seq.n1
    c1, c2 = prof.c1, prof.c2

    results = {v: extend_profile(seq, v) for v in range(q)}
    outcomes = {v: res[0].key for v, res in results.items()}
    counts: dict[tuple[int, int, int], int] = {}
    for key in outcomes.values():
        counts[key] = counts.get(key, 0) + 1

    fails: list[str] = []
    betas: dict[int, int] = {}

    def beta_from(v: int, target: Poly, basis: list[Poly], nonzero: bool) -> None:
        coeffs = decompose(target, basis)
        if coeffs is None:
            fails.append(f"next={v}: relation outside the predicted span")
            return
        if nonzero and coeffs[0] == 0:
            fails.append(f"next={v}: beta vanishes")
        betas[v] = coeffs[0]

    if r <= n1 - 1 and pi == 0:
        claim = "regular-low"
        stay, grow = (r, r, 0), (r + 1, r, 1)
        expected = {stay: 1, grow: q - 1}
        for v, (p2, pr2) in results.items():
            if p2.key == stay:
                if pr2 != pair:
                    fails.append(f"next={v}: characteristic pair changed while the class stayed")
            elif p2.key == grow:
                if pr2.a1 != a1:
                    fails.append(f"next={v}: A1 changed")
                lower = [a1.shift(k) for k in range(c2 - c1)]
                if a2.is_zero():
                    if decompose(pr2.a2 - a1.shift(c2 - c1), lower) is None:
                        fails.append(f"next={v}: A2' not congruent to T^(c2-c1) A1")
                else:
                    beta_from(v, pr2.a2 - a1.shift(c2 - c1), [a2] + lower, nonzero=True)
    elif r <= n1 - 1:
        claim = "excess-low"
        expected = {(r + 1, rho, pi + 1): q}
        for v, (p2, pr2) in results.items():
            if pr2.a1 != a1:
                fails.append(f"next={v}: A1 changed")
            basis = [a1.shift(c2 - c1)] + [a1.shift(k) for k in range(c2 - c1)]
            beta_from(v, pr2.a2 - a2, basis, nonzero=False)
    elif n % 2 == 0:
        claim = "full-even"
        expected = {(n1, n1, 0): q}
        for v, (p2, pr2) in results.items():
            if pr2.a2 != a2:
                fails.append(f"next={v}: A2 changed")
            beta_from(v, pr2.a1 - a1, [a2], nonzero=False)
    elif pi == 0:
        claim = "full-odd-regular"
        stay, grow = (n1, n1, 0), (n1 + 1, n1 + 1, 0)
        expected = {stay: 1, grow: q - 1}
        for v, (p2, pr2) in results.items():
            if p2.key == stay:
                if pr2 != pair:
                    fails.append(f"next={v}: characteristic pair changed while the class stayed")
            elif p2.key == grow:
                if pr2.a2 != a1:
                    fails.append(f"next={v}: A2' differs from A1")
                beta_from(v, pr2.a1 - a1.shift(1), [a2, a1], nonzero=True)
    else:
        claim = "full-odd-excess"
        expected = {(n1 + 1, n1 + 1, 0): q}
        for v, (p2, pr2) in results.items():
            if pr2.a2 != a1:
                fails.append(f"next={v}: A2' differs from A1")
            beta_from(v, pr2.a1 - a2, [a1.shift(1), a1], nonzero=False)

    if len(set(betas.values())) != len(betas):
        fails.append("beta does not determine the appended value uniquely")
    return ExtensionReport(claim, prof, outcomes, counts, expected, fails)


# ---------------------------------------------------------------------------
# Euclidean chain vs truncations


@dataclass(frozen=True)
class LevelRecord:
    level: int
    case: str  # "base", "interior", "tail-linear" or "tail-constant"
    last_index: int
    claimed: tuple[int, int, int]
    observed: tuple[int, int, int]
    claimed_pair: CharPair
    observed_pair: CharPair
    asserted: bool

    @property
    def profile_match(self) -> bool:
        return self.claimed == self.observed

    @property
    def pair_match(self) -> bool:
        return self.claimed_pair == self.observed_pair

    @property
    def ok(self) -> bool:
        return self.profile_match and self.pair_match

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "case": self.case,
            "last_index": self.last_index,
            "claimed": list(self.claimed),
            "observed": list(self.observed),
            "claimed_pair": self.claimed_pair.to_json(),
            "observed_pair": self.observed_pair.to_json(),
            "match": self.ok,
        }


@dataclass(frozen=True)
class EuclidReport:
    chain: tuple[Poly, ...]
    levels: tuple[LevelRecord, ...]
    leading_zeros_claimed: int
    leading_zeros_observed: int

    @property
    def leading_zeros_ok(self) -> bool:
        return self.leading_zeros_claimed == self.leading_zeros_observed

    @property
    def passed(self) -> bool:
        """Asserted levels and the leading-zero count; informational levels never count."""
        return self.leading_zeros_ok and all(lv.ok for lv in self.levels if lv.asserted)

    @property
    def discrepancies(self) -> list[LevelRecord]:
        return [lv for lv in self.levels if not lv.asserted and not lv.ok]


def _level(seq: SymbolSeq, level: int, case: str, last: int, claimed, p1: Poly, p2: Poly, asserted: bool):
    trunc = seq.truncate(last)
    prof = rho_pi_profile(trunc)
    r = claimed[0]
    want = canonical_pair(p1, p2, r, last + 2 - r)
    return LevelRecord(level, case, last, claimed, prof.key, want, char_polys(trunc, prof), asserted)


def euclid_correspondence_check(seq: SymbolSeq) -> EuclidReport:
    prof = rho_pi_profile(seq)
    if prof.pi != 0 or prof.rank < 2:
        raise NotApplicable(f"needs a quasi-regular sequence of rank >= 2, got {prof.key}")
    pair = char_polys(seq, prof)
    chain = euclid_chain(pair.a1, pair.a2)
    A = chain.polys
    d = [p.degree for p in A]
    t = max(i for i in range(len(A)) if d[i] >= 2)  # 0-based index of A_t
    levels = [_level(seq, 1, "base", seq.n, (prof.rank, prof.rank, 0), A[0], A[1], True)]
    for i in range(1, t + 1):  # A_{i+1} in 1-based terms, i.e. levels 2..t
        last = d[i - 1] + d[i] - 2
        levels.append(_level(seq, i + 1, "interior", last, (d[i], d[i], 0), A[i], A[i + 1], True))
    final = (2, 1, 1) if d[t + 1] == 1 else (2, 0, 2)
    case = "tail-linear" if d[t + 1] == 1 else "tail-constant"
    levels.append(_level(seq, t + 2, case, d[t], final, A[t + 1], A[t], False))
    return EuclidReport(tuple(A), tuple(levels), int(A[-2].degree) - 1, seq.leading_zeros())


@dataclass(frozen=True)
class TruncationReport:
    last_index: int
    claimed: tuple[int, int, int]
    observed: tuple[int, int, int]
    a1_match: bool
    a2_match: bool | None  # None when the truncation has rank <= 1 and A2 comes from the table

    @property
    def ok(self) -> bool:
        return self.claimed == self.observed and self.a1_match and self.a2_match is not False


def truncation_check(seq: SymbolSeq) -> TruncationReport:
    """For pi >= 1: the prefix alpha_0..alpha_{n-pi} should be quasi-regular of rank rho with the same A1."""
    prof = rho_pi_profile(seq)
    if prof.pi < 1:
        raise NotApplicable("sequence is quasi-regular")
    pair = char_polys(seq, prof)
    last = seq.n - prof.pi
    trunc = seq.truncate(last)
    tprof = rho_pi_profile(trunc)
    tpair = char_polys(trunc, tprof)
    rho = prof.rho
    a2_match = None
    if rho >= 2:
        a2_match = canonical_pair(pair.a1, pair.a2, tprof.c1, tprof.c2) == tpair
    return TruncationReport(last, (rho, rho, 0), tprof.key, tpair.a1 == pair.a1, a2_match)
