"""Exact rank computations for integer matrices.

Rank decisions feed homology dimensions and cone dimensions, so everything
here is exact: fraction-free elimination over the rationals (rows carry
integer entries and are rescaled by their gcd to curb growth) or modular
elimination over a prime field. There is no floating point anywhere.

Matrices above a size threshold are eliminated with vectorised int64 numpy
operations; an overflow guard falls back to arbitrary-precision Python ints
whenever entries could leave the safe range.
"""

from __future__ import annotations

from math import gcd

import numpy as np

_NUMPY_MIN_CELLS = 2000
_INT64_SAFE = 1 << 59


def rank_int_rows(rows, p: int | None = None) -> int:
    """Rank of the matrix whose rows are the given equal-length int sequences.

    With ``p=None`` the rank is over the rationals; with a prime ``p`` it is
    over GF(p). The input is not modified.
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    if p is not None:
        return _rank_modp(work, ncols, p)
    if len(work) * ncols >= _NUMPY_MIN_CELLS:
        arr = _to_int64(work)
        if arr is not None:
            r = _rank_q_numpy(arr)
            if r is not None:
                return r
    return _rank_q_python(work, ncols)


def _to_int64(rows):
    hi = max(max(map(abs, r), default=0) for r in rows)
    if hi >= _INT64_SAFE:
        return None
    return np.array(rows, dtype=np.int64)


def _rank_q_python(rows, ncols) -> int:
    rank = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = -1
        for i in range(rank, nrows):
            v = rows[i][c]
            if v:
                piv = i
                if v == 1 or v == -1:
                    break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pv = prow[c]
        for i in range(rank + 1, nrows):
            row = rows[i]
            v = row[c]
            if not v:
                continue
            if pv == 1:
                for j in range(c, ncols):
                    row[j] -= v * prow[j]
            elif pv == -1:
                for j in range(c, ncols):
                    row[j] += v * prow[j]
            else:
                g = gcd(pv, v)
                a, b = pv // g, v // g
                for j in range(c, ncols):
                    row[j] = a * row[j] - b * prow[j]
                g = 0
                for j in range(c, ncols):
                    g = gcd(g, row[j])
                    if g == 1:
                        break
                if g > 1:
                    for j in range(c, ncols):
                        row[j] //= g
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_q_numpy(mat) -> int | None:
    """Fraction-free elimination on an int64 array; None on overflow risk."""
    nrows, ncols = mat.shape
    rank = 0
    for c in range(ncols):
        col = mat[rank:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        units = nz[np.abs(col[nz]) == 1]
        pick = (units[0] if units.size else nz[0]) + rank
        if pick != rank:
            mat[[rank, pick]] = mat[[pick, rank]]
        prow = mat[rank]
        pv = int(prow[c])
        below = mat[rank + 1 :]
        vals = below[:, c]
        live = vals != 0
        if live.any():
            hi = int(np.abs(below[live]).max())
            hp = int(np.abs(prow).max())
            vm = int(np.abs(vals[live]).max())
            if abs(pv) * hi + vm * hp >= _INT64_SAFE:
                return None
            if pv == 1 or pv == -1:
                below[live] -= np.outer(vals[live] * pv, prow)
            else:
                upd = pv * below[live] - np.outer(vals[live], prow)
                g = np.gcd.reduce(np.abs(upd), axis=1)
                g[g == 0] = 1
                below[live] = upd // g[:, None]
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_modp(rows, ncols, p) -> int:
    nrows = len(rows)
    for r in rows:
        for j in range(ncols):
            r[j] %= p
    rank = 0
    for c in range(ncols):
        piv = -1
        for i in range(rank, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = pow(prow[c], p - 2, p)
        for i in range(rank + 1, nrows):
            row = rows[i]
            if not row[c]:
                continue
            f = row[c] * inv % p
            for j in range(c, ncols):
                row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


class IntRowReducer:
    """Incremental row-echelon accumulator for exact rank over the rationals.

    Vectors are integer sequences over a fixed column space. ``add`` reduces
    the vector against the stored basis and keeps it when it is independent.
    The final rank is independent of insertion order; intermediate basis rows
    are deterministic for a fixed insertion order.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec) -> bool:
        """Reduce ``vec`` against the basis; return True if the rank grew."""
        vec = list(vec)
        while True:
            c = -1
            for j, v in enumerate(vec):
                if v:
                    c = j
                    break
            if c < 0:
                return False
            base = self.rows.get(c)
            if base is None:
                g = 0
                for v in vec:
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    vec = [v // g for v in vec]
                self.rows[c] = vec
                return True
            pv, v = base[c], vec[c]
            g = gcd(pv, v)
            a, b = pv // g, v // g
            vec = [a * x - b * y for x, y in zip(vec, base)]

    def add_rows(self, rows) -> None:
        for row in rows:
            self.add(row)

    def basis_rows(self):
        return [self.rows[c] for c in sorted(self.rows)]
