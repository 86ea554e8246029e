"""Exact Gaussian elimination over the prime field F_p.

Vectors are lists of ints in [0, p).  Bases are always returned in
reduced row-echelon form so repeated runs are bit-identical.
"""

from __future__ import annotations

from typing import Optional, Sequence


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(work)):
            if work[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        inv = pow(work[row][col], -1, p)
        work[row] = [x * inv % p for x in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col] % p:
                f = work[r][col]
                work[r] = [(x - f * y) % p for x, y in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return work[:row], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """RREF basis of {v : A v = 0} for the matrix with the given rows."""
    ech, pivots = rref(rows, p)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-ech[r][f]) % p
        basis.append(v)
    canon, _ = rref(basis, p)
    return canon


def reduce_mod_rowspace(
    v: Sequence[int], ech: Sequence[Sequence[int]], pivots: Sequence[int], p: int
) -> list[int]:
    """Canonical representative of v modulo the row space given in RREF."""
    out = [x % p for x in v]
    for r, pc in enumerate(pivots):
        f = out[pc]
        if f:
            out = [(x - f * y) % p for x, y in zip(out, ech[r])]
    return out


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> Optional[list[int]]:
    """One solution of A x = rhs with free variables set to 0, or None."""
    if not rows:
        return [] if all(x % p == 0 for x in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    ech, pivots = rref(aug, p)
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None  # pivot in the augmented column: inconsistent
        x[pc] = ech[r][ncols]
    return x
