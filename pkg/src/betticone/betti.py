"""Betti diagrams of edge ideals.

The ground truth is the subset-sum over induced subcomplexes of the
independence complex: beta_{i,d} is the total dimension, over all d-subsets
U of the vertices, of the reduced homology of the induced subcomplex in
degree d-i-2. Closed forms for complete graphs and cycle complements, the
disjoint-edge transfer rule, and the isolated-vertex padding rule are
implemented alongside and verified against that engine in the test suite.
"""

from __future__ import annotations

from .errors import CapacityError
from .graphs import (
    MAX_COMPLEX_VERTICES,
    Graph,
    _independence_table,
    complement,
    disjoint_union,
    empty_graph,
)
from .homology import RATIONALS, FieldSpec, profile_nonzero

__all__ = [
    "BettiDiagram",
    "hochster_diagram",
    "diagram_complete",
    "diagram_cycle_complement",
    "suspend_diagram",
    "pad_complement_diagram",
    "hk_functional",
    "hk_vector",
    "regularity",
    "check_support_Cn",
    "check_support_Cnh",
]


class BettiDiagram:
    """Sparse table of graded Betti numbers beta_{i,d}.

    Only strictly positive values are stored. ``n_context`` records the
    ambient vertex count for support checks and rendering; equality compares
    the cells alone, so padding a graph with isolated vertices yields an
    equal diagram.
    """

    __slots__ = ("cells", "n_context")

    def __init__(self, entries, n_context: int):
        cells = {}
        for (i, d), v in dict(entries).items():
            v = int(v)
            if v < 0:
                raise ValueError(f"negative Betti number {v} at ({i},{d})")
            if v:
                cells[(int(i), int(d))] = v
        self.cells = cells
        self.n_context = int(n_context)

    def get(self, i: int, d: int) -> int:
        return self.cells.get((i, d), 0)

    def support(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.cells))

    def items_sorted(self):
        return [(k, self.cells[k]) for k in sorted(self.cells)]

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def __eq__(self, other):
        if not isinstance(other, BettiDiagram):
            return NotImplemented
        return self.cells == other.cells

    __hash__ = None

    def __repr__(self):
        return f"BettiDiagram({self.to_canonical()!r}, n_context={self.n_context})"

    # -- serialisation ------------------------------------------------------

    def to_canonical(self) -> str:
        """Stable "(i,d)=v;..." list, sorted by (i, d); empty string if empty."""
        return ";".join(f"({i},{d})={v}" for (i, d), v in self.items_sorted())

    @classmethod
    def from_canonical(cls, text: str, n_context: int) -> "BettiDiagram":
        entries = {}
        text = text.strip()
        if text:
            for part in text.split(";"):
                pos, _, val = part.partition("=")
                i, d = pos.strip()[1:-1].split(",")
                entries[(int(i), int(d))] = int(val)
        return cls(entries, n_context)

    def to_csv(self) -> str:
        """Grid with one row per d-i-1 value, one column per i, blanks for 0."""
        if self.is_empty:
            return "d-i-1\n"
        max_i = max(i for i, _ in self.cells)
        max_row = max(d - i - 1 for i, d in self.cells)
        lines = ["d-i-1," + ",".join(str(i) for i in range(max_i + 1))]
        for row in range(1, max_row + 1):
            vals = [str(self.get(i, i + row + 1) or "") for i in range(max_i + 1)]
            lines.append(f"{row}," + ",".join(vals))
        return "\n".join(lines) + "\n"

    def render_matrix(self) -> str:
        """Matrix layout: column i, row d-i-1.

        Zero cells inside the support window for ``n_context`` vertices are
        drawn as a dot; cells outside that window are left blank.
        """
        if self.is_empty:
            return "(empty diagram)"
        n = self.n_context
        max_i = max(i for i, _ in self.cells)
        max_row = max(d - i - 1 for i, d in self.cells)
        header = [""] + [str(i) for i in range(max_i + 1)]
        grid = [header]
        for row in range(1, max_row + 1):
            line = [str(row)]
            for i in range(max_i + 1):
                d = i + row + 1
                v = self.get(i, d)
                if v:
                    line.append(str(v))
                elif i + 2 <= d <= min(2 * i + 2, n):
                    line.append("·")
                else:
                    line.append("")
            grid.append(line)
        widths = [max(len(r[c]) for r in grid) for c in range(len(header))]
        out = []
        for r in grid:
            out.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(out)


# ---------------------------------------------------------------------------
# the subset-homology engine

# Profiles of independence complexes keyed by the induced subgraph they come
# from (vertex count, relabelled adjacency) plus the field characteristic.
# Small keys are the workhorse of every sweep and are kept forever; larger
# keys are kept until the table gets big and then dropped wholesale.
_SMALL_KEY_VERTICES = 6
_BIG_CACHE_LIMIT = 200_000
_small_profiles: dict = {}
_big_profiles: dict = {}


def clear_profile_cache() -> None:
    _small_profiles.clear()
    _big_profiles.clear()


def _subgraph_key(adj, u: int):
    """Relabelled adjacency rows of the subgraph induced on the mask u."""
    pos = {}
    rows = []
    m = u
    idx = 0
    while m:
        b = m & -m
        pos[b] = 1 << idx
        idx += 1
        m ^= b
    m = u
    while m:
        b = m & -m
        row = 0
        t = adj[b.bit_length() - 1] & u
        while t:
            tb = t & -t
            row |= pos[tb]
            t ^= tb
        rows.append(row)
        m ^= b
    return (idx, tuple(rows))


def _faces_in_subset(is_ind, u: int):
    """Independent submasks of u grouped by cardinality."""
    by_card = [[] for _ in range(u.bit_count() + 1)]
    s = u
    while True:
        if is_ind[s]:
            by_card[s.bit_count()].append(s)
        if not s:
            break
        s = (s - 1) & u
    return by_card


def subset_profile(adj, is_ind, u: int, p: int | None):
    """Cached nonzero homology profile of the induced subcomplex on u."""
    k, rows = _subgraph_key(adj, u)
    key = (p, k, rows)
    if k <= _SMALL_KEY_VERTICES:
        prof = _small_profiles.get(key)
        if prof is None:
            prof = profile_nonzero(_faces_in_subset(is_ind, u), p)
            _small_profiles[key] = prof
        return prof
    prof = _big_profiles.get(key)
    if prof is None:
        prof = profile_nonzero(_faces_in_subset(is_ind, u), p)
        if len(_big_profiles) >= _BIG_CACHE_LIMIT:
            _big_profiles.clear()
        _big_profiles[key] = prof
    return prof


def _hochster_partial(adj, n, p, lo, hi):
    is_ind = _independence_table(adj, n)
    acc: dict[tuple[int, int], int] = {}
    for u in range(lo, hi):
        d = u.bit_count()
        if d < 2 or is_ind[u]:
            continue
        for j, dim in subset_profile(adj, is_ind, u, p):
            i = d - j - 2
            if i >= 0:
                key = (i, d)
                acc[key] = acc.get(key, 0) + dim
    return acc


def hochster_diagram(g: Graph, field: FieldSpec = RATIONALS, workers: int = 1) -> BettiDiagram:
    """Betti diagram of the edge ideal of g over the given field.

    One sweep over all vertex subsets; each subset contributes the homology
    profile of its induced subcomplex of the independence complex. Subsets
    inducing no edge are contractible (or trivial) and are skipped. With
    ``workers > 1`` the subset range is split across processes; the result
    is a deterministic sum, independent of the worker count.
    """
    if g.n > MAX_COMPLEX_VERTICES:
        raise CapacityError(
            f"diagram computation is capped at {MAX_COMPLEX_VERTICES} vertices, got {g.n}"
        )
    p = field.p
    total = 1 << g.n
    if workers <= 1 or total < 1 << 10:
        acc = _hochster_partial(g.adj, g.n, p, 0, total)
    else:
        import multiprocessing as mp

        step = (total + workers - 1) // workers
        spans = [(g.adj, g.n, p, lo, min(lo + step, total)) for lo in range(0, total, step)]
        acc = {}
        with mp.Pool(processes=workers) as pool:
            for part in pool.starmap(_hochster_partial, spans):
                for key, v in part.items():
                    acc[key] = acc.get(key, 0) + v
    return BettiDiagram(acc, g.n)


# ---------------------------------------------------------------------------
# closed forms and transfer rules

def _binom(n, k):
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


def diagram_complete(m: int) -> BettiDiagram:
    """Diagram of the complete graph on m vertices: a single row.

    beta_{i,i+2} = (i+1) * C(m, i+2) for i = 0..m-2.
    """
    if m < 0:
        raise ValueError("vertex count must be non-negative")
    entries = {(i, i + 2): (i + 1) * _binom(m, i + 2) for i in range(max(m - 1, 0))}
    return BettiDiagram(entries, m)


def diagram_cycle_complement(m: int) -> BettiDiagram:
    """Diagram of the graph whose complement is the m-cycle.

    beta_{i,i+2} = m(i+1)/(m-i-2) * C(m-2, i+2) for i = 0..m-4, plus a single
    1 at (m-3, m). Only defined for m >= 4: at m = 3 the complement of the
    triangle has no edges and an empty diagram, which the closed form does
    not reproduce, so that case is rejected rather than silently wrong.
    """
    if m < 3:
        raise ValueError(f"cycles need at least 3 vertices, got {m}")
    if m == 3:
        raise ValueError(
            "closed form is restricted to m >= 4: the complement of the "
            "3-cycle is edgeless with an empty diagram, while the formula "
            "would give a lone entry at (0,3)"
        )
    entries = {}
    for i in range(m - 3):
        num = m * (i + 1) * _binom(m - 2, i + 2)
        den = m - i - 2
        assert num % den == 0, f"non-integral closed-form value at i={i}, m={m}"
        entries[(i, i + 2)] = num // den
    entries[(m - 3, m)] = 1
    return BettiDiagram(entries, m)


def suspend_diagram(b: BettiDiagram) -> BettiDiagram:
    """Diagram after adding one disjoint edge to the underlying graph.

    result_{i,d} = b_{i,d} + b_{i-1,d-2}, with the virtual entry
    b_{-1,0} = 1: the empty subcomplex carries one unit of degree -1
    homology, which is what makes the generator count at (0,2) grow by one.
    """
    entries = dict(b.cells)
    shifted = [((i + 1, d + 2), v) for (i, d), v in b.cells.items()]
    shifted.append(((0, 2), 1))
    for key, v in shifted:
        entries[key] = entries.get(key, 0) + v
    return BettiDiagram(entries, b.n_context + 2)


def pad_complement_diagram(
    b: BettiDiagram,
    l: int,
    m: int,
    graph: Graph | None = None,
    field: FieldSpec = RATIONALS,
) -> BettiDiagram:
    """Complement-side diagram after padding with isolated vertices.

    Given ``b`` = the diagram of the complement of a graph G on l vertices,
    returns the diagram of the complement of G + (m-l isolated vertices).
    Cells with d-i >= 3 follow the partial-sum rule
    value(i,d) = sum_{j<=i} b_{j, j+d-i}. The first row (d-i = 2) is nonzero
    throughout but its values are not determined by ``b`` alone: pass
    ``graph=G`` to fill them exactly from the subset-homology engine,
    otherwise they are omitted and the result is the rows-2-and-up part.
    """
    if l >= m:
        raise ValueError(f"padding requires l < m, got l={l}, m={m}")
    entries = {}
    for i in range(m + 1):
        for d in range(i + 3, min(2 * i + 2, m) + 1):
            v = sum(b.get(j, j + d - i) for j in range(i + 1))
            if v:
                entries[(i, d)] = v
    if graph is not None:
        if graph.n != l:
            raise ValueError(f"graph has {graph.n} vertices, expected l={l}")
        padded = complement(disjoint_union(graph, empty_graph(m - l)))
        full = hochster_diagram(padded, field)
        for (i, d), v in full.cells.items():
            if d - i == 2:
                entries[(i, d)] = v
    return BettiDiagram(entries, m)


# ---------------------------------------------------------------------------
# linear functionals and shape checks

def hk_functional(b: BettiDiagram, j: int) -> int:
    """The alternating degree-power sum: sum over cells of (-1)^i d^j v."""
    if j < 0:
        raise ValueError("degree must be non-negative")
    return sum((-1 if i & 1 else 1) * d**j * v for (i, d), v in b.cells.items())


def hk_vector(b: BettiDiagram, max_j: int) -> list[int]:
    """Values of the alternating functionals for j = 0..max_j."""
    return [hk_functional(b, j) for j in range(max_j + 1)]


def regularity(b: BettiDiagram) -> int:
    """Largest d-i over the support; undefined for the empty diagram."""
    if b.is_empty:
        raise ValueError("regularity of an empty diagram is undefined")
    return max(d - i for i, d in b.cells)


def check_support_Cn(b: BettiDiagram, n: int) -> bool:
    """True iff every cell satisfies i+2 <= d <= min(2i+2, n)."""
    return all(i + 2 <= d <= min(2 * i + 2, n) for i, d in b.cells)


def check_support_Cnh(b: BettiDiagram, n: int, h: int) -> bool:
    """Height-restricted support: additionally d-i <= min(h, n-h) + 1."""
    bound = min(h, n - h) + 1
    return check_support_Cn(b, n) and all(d - i <= bound for i, d in b.cells)
