"""Exact linear algebra helpers.

Two flavours are needed: matrices over Q (the annihilator ansatz, handled
with flint matrices) and small matrices over a rational function field
(dependencies between coordinate vectors, mixed-equation systems).
"""

from __future__ import annotations

from typing import Sequence

import flint

from .field import RationalFunction


def rf_rref(rows: Sequence[Sequence[RationalFunction]], ncols: int) -> tuple[list[list[RationalFunction]], list[int]]:
    """Reduced row echelon form over the rational function field."""
    mat = [list(r) for r in rows if any(not c.is_zero() for c in r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        best = None
        for i in range(r, len(mat)):
            c = mat[i][col]
            if not c.is_zero():
                # prefer the simplest pivot to limit expression swell
                size = len(c.num) + len(c.den)
                if best is None or size < best:
                    pivot_row, best = i, size
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [c * inv if not c.is_zero() else c for c in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero():
                f = mat[i][col]
                mat[i] = [a - f * b if not b.is_zero() else a for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rf_nullspace(rows: Sequence[Sequence[RationalFunction]], ncols: int, n: int) -> list[list[RationalFunction]]:
    """Basis of {z : rows * z = 0}, one vector per free column."""
    rref, pivots = rf_rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    zero = RationalFunction.zero(n)
    one = RationalFunction.one(n)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -rref[i][f]
        basis.append(v)
    return basis


class IncrementalDependency:
    """Feed vectors one at a time; report the first linear dependency.

    After :meth:`push` returns a list ``c``, sum(c[i] * v_i) = 0 over the
    pushed vectors with c[-1] = 1.
    """

    def __init__(self, dim: int, n: int) -> None:
        self.dim = dim
        self.n = n
        self.rows: list[tuple[int, list[RationalFunction], list[RationalFunction]]] = []
        self.count = 0

    def push(self, vec: Sequence[RationalFunction]) -> list[RationalFunction] | None:
        zero = RationalFunction.zero(self.n)
        k = self.count
        self.count += 1
        r = list(vec)
        combo = [zero] * k + [RationalFunction.one(self.n)]
        for pivot, row, rcombo in self.rows:
            c = r[pivot]
            if c.is_zero():
                continue
            r = [a - c * b if not b.is_zero() else a for a, b in zip(r, row)]
            combo = [a - c * b for a, b in zip(combo, rcombo + [zero] * (len(combo) - len(rcombo)))]
        nz = [i for i, c in enumerate(r) if not c.is_zero()]
        if not nz:
            return combo
        pivot = nz[0]
        inv = r[pivot].inverse()
        self.rows.append((pivot, [c * inv for c in r], [c * inv for c in combo]))
        return None


SparseRow = dict[int, int]


def integer_kernel(rows: Sequence[SparseRow], ncols: int) -> list[dict[int, int]]:
    """Kernel basis of an integer matrix by fraction-free elimination.

    One integer vector per free column of the reduced echelon form, with a
    positive entry in that free column.
    """
    if not rows:
        return [{c: 1} for c in range(ncols)]
    M = flint.fmpz_mat(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, v in r.items():
            M[i, j] = v
    R, den, rank = M.rref()
    pivots = []
    j = 0
    for i in range(rank):
        while R[i, j] == 0:
            j += 1
        pivots.append(j)
    pivot_set = set(pivots)
    sign = -1 if den < 0 else 1
    out = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = {f: sign * int(den)}
        for i, p in enumerate(pivots):
            c = R[i, f]
            if c != 0:
                v[p] = -sign * int(c)
        out.append(v)
    return out


def rank_mod_p(rows: Sequence[SparseRow], ncols: int, p: int) -> int:
    if not rows:
        return 0
    M = flint.nmod_mat(len(rows), ncols, p)
    for i, r in enumerate(rows):
        for j, v in r.items():
            M[i, j] = v % p
    return M.rank()


def independent_rows_mod_p(rows: Sequence[SparseRow], ncols: int, p: int) -> list[int]:
    """Indices of a maximal set of rows that stay independent modulo p."""
    if not rows:
        return []
    T = flint.nmod_mat(ncols, len(rows), p)
    for i, r in enumerate(rows):
        for j, v in r.items():
            T[j, i] = v % p
    R, rank = T.rref()
    picked = []
    j = 0
    for i in range(rank):
        while R[i, j] == 0:
            j += 1
        picked.append(j)
    return picked
