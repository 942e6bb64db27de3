"""Gaussian elimination over F_q on rows of element codes.

Pivots are chosen in a fixed order (leftmost column, then topmost row), so
every routine here is deterministic.  Rows are plain lists of codes.
"""

from __future__ import annotations

from typing import Sequence

from .ffield import FieldSpec

Row = list[int]


def rref(rows: Sequence[Sequence[int]], spec: FieldSpec, ncols: int | None = None) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    inv, mul, submul = spec.inv, spec.mul, spec.submul
    pivots: list[int] = []
    top = 0
    for c in range(ncols):
        if top == len(work):
            break
        sel = next((i for i in range(top, len(work)) if work[i][c]), None)
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        if prow[c] != 1:
            row = mul[inv[prow[c]]]
            prow = work[top] = [row[x] for x in prow]
        for i, r in enumerate(work):
            f = r[c]
            if i != top and f:
                t = submul[f]
                work[i] = [t[a][b] for a, b in zip(r, prow)]
        pivots.append(c)
        top += 1
    return work[:top], pivots


def rank(rows: Sequence[Sequence[int]], spec: FieldSpec) -> int:
    """Rank by forward elimination only."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    inv, mul, submul = spec.inv, spec.mul, spec.submul
    top = 0
    for c in range(ncols):
        sel = None
        for i in range(top, len(work)):
            if work[i][c]:
                sel = i
                break
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        pinv = inv[prow[c]]
        for i in range(top + 1, len(work)):
            r = work[i]
            if r[c]:
                t = submul[mul[r[c]][pinv]]
                work[i] = [t[a][b] for a, b in zip(r, prow)]
        top += 1
        if top == len(work):
            break
    return top


def nullspace(rows: Sequence[Sequence[int]], spec: FieldSpec, ncols: int) -> list[Row]:
    """Right kernel of the matrix, returned as the RREF of a kernel basis."""
    red, pivots = rref(rows, spec, ncols)
    pivset = set(pivots)
    neg = spec.neg
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, pc in zip(red, pivots):
            v[pc] = neg[r[free]]
        basis.append(v)
    if not basis:
        return []
    return rref(basis, spec, ncols)[0]


def row_space(rows: Sequence[Sequence[int]], spec: FieldSpec, ncols: int) -> list[Row]:
    """Canonical form of the span of ``rows`` (two spans are equal iff these agree)."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    return rref(rows, spec, ncols)[0]


def solve_combination(target: Sequence[int], basis: Sequence[Sequence[int]], spec: FieldSpec) -> list[int] | None:
    """Coefficients x with sum x_i basis_i = target, or None when target is outside the span.

    The basis vectors are assumed independent; the returned coefficients are
    codes, one per basis vector.
    """
    k = len(basis)
    n = len(target)
    if k == 0:
        return [] if not any(target) else None
    # columns = basis vectors, augmented with target
    aug = [[basis[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    red, pivots = rref(aug, spec, k + 1)
    if k in pivots:
        return None
    x = [0] * k
    for r, pc in zip(red, pivots):
        x[pc] = r[k]
    return x
