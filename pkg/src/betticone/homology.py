"""Exact reduced simplicial homology dimensions over a field.

The chain complex is augmented, so the complex {empty face} has a
one-dimensional homology in degree -1 and adding the empty face's boundary
map makes degree-0 homology count components minus one. Ranks of boundary
matrices are computed exactly: fraction-free integer elimination over the
rationals, modular elimination over a prime field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import SimplicialComplex
from .linalg import rank_int_rows

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in _SMALL_PRIMES:
        if p % q == 0:
            return p == q
    # deterministic Miller-Rabin, valid far beyond 64 bits of interest here
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (default) or GF(p) for a prime p."""

    characteristic: int | None = None

    def __post_init__(self):
        p = self.characteristic
        if p is not None and not _is_prime(p):
            raise ValueError(f"field characteristic must be prime, got {p}")

    @property
    def p(self) -> int | None:
        return self.characteristic

    @property
    def label(self) -> str:
        return "Q" if self.characteristic is None else f"GF({self.characteristic})"

    @classmethod
    def from_string(cls, text: str) -> "FieldSpec":
        t = text.strip().lower()
        if t in ("q", "rationals", "0"):
            return cls()
        if t.isdigit():
            return cls(int(t))
        raise ValueError(f"cannot read field spec {text!r}; use 'q' or a prime")


RATIONALS = FieldSpec()


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced homology dimensions of a complex, degrees -1 through dim.

    ``dims[k]`` is the dimension in degree k-1, so ``dims[0]`` is the
    degree -1 entry (1 exactly for the complex {empty face}).
    """

    dims: tuple[int, ...]

    def betti(self, j: int) -> int:
        k = j + 1
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def nonzero(self) -> tuple[tuple[int, int], ...]:
        """Pairs (degree, dimension) over the nonzero degrees."""
        return tuple((k - 1, v) for k, v in enumerate(self.dims) if v)

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 2


def induced_subcomplex(c: SimplicialComplex, u: int) -> SimplicialComplex:
    """Faces of c contained in the vertex mask u."""
    if u & ~((1 << c.n) - 1):
        raise ValueError("subset mask is outside the ground set")
    by_card = []
    for fs in c.faces_by_card:
        kept = tuple(m for m in fs if m & ~u == 0)
        by_card.append(kept)
    while len(by_card) > 1 and not by_card[-1]:
        by_card.pop()
    return SimplicialComplex(c.n, tuple(by_card))


def reduced_homology_dims(c: SimplicialComplex, field: FieldSpec = RATIONALS) -> HomologyProfile:
    """Homology dimensions of a downward-closed complex over the field."""
    nz = dict(profile_nonzero(c.faces_by_card, field.p))
    ncards = len(c.faces_by_card)
    while ncards > 1 and not c.faces_by_card[ncards - 1]:
        ncards -= 1
    dims = tuple(nz.get(t - 1, 0) for t in range(ncards))
    return HomologyProfile(dims)


def profile_nonzero(faces_by_card, p: int | None) -> tuple[tuple[int, int], ...]:
    """Nonzero reduced homology (degree, dim) pairs from faces grouped by size.

    ``faces_by_card[k]`` holds the k-vertex faces as bitmasks; entry 0 must be
    the empty face alone. Degrees run from -1 (empty complex) upward.
    """
    cards = [list(fs) for fs in faces_by_card]
    while len(cards) > 1 and not cards[-1]:
        cards.pop()
    top = len(cards) - 1
    f = [len(fs) for fs in cards]
    # ranks[c] = rank of the boundary map from c-vertex chains to (c-1)-vertex
    ranks = [0] * (top + 2)
    if top >= 1:
        ranks[1] = 1 if f[1] else 0
    if top >= 2:
        ranks[2] = f[1] - _skeleton_components(cards[1], cards[2])
    for c in range(3, top + 1):
        ranks[c] = _boundary_rank(cards[c - 1], cards[c], p)
    out = []
    for t in range(top + 1):
        d = f[t] - ranks[t] - ranks[t + 1]
        if d:
            out.append((t - 1, d))
    return tuple(out)


def _skeleton_components(vertices, edges) -> int:
    """Connected components of the 1-skeleton (vertices given as bitmasks)."""
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(parent)
    for e in edges:
        a = e & -e
        b = e ^ a
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps


def _boundary_rank(subfaces, faces, p: int | None) -> int:
    """Rank of the simplicial boundary map from ``faces`` to ``subfaces``."""
    if not faces or not subfaces:
        return 0
    index = {m: i for i, m in enumerate(subfaces)}
    ncols = len(subfaces)
    rows = []
    for mask in faces:
        row = [0] * ncols
        sign = 1
        m = mask
        while m:
            b = m & -m
            row[index[mask ^ b]] = sign
            sign = -sign
            m ^= b
        rows.append(row)
    return rank_int_rows(rows, p)
