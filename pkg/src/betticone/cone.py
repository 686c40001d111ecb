"""Cones of edge-ideal Betti diagrams: index grids, orders and dimensions.

The diagrams of edge ideals on [n] occupy a triangular grid of cells
(i, d) with i+2 <= d <= min(2i+2, n); restricting to ideals of a fixed
height h cuts the grid to the rows d-i-1 <= min(h, n-h) and carves out the
subspace where the alternating functionals of degrees 1..h-1 vanish. The
cone dimensions are established two ways: exhaustive enumeration of all
labelled graphs (small n) and explicit witness families whose diagrams are
triangular with respect to a total order on the grid (any n). Witness
construction is never trusted: initiality, height and rank are re-checked
at runtime and a failure raises, since it would mean a bug here.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple

from .betti import BettiDiagram, hochster_diagram
from .errors import CapacityError, VerificationError
from .graphs import (
    MAX_COMPLEX_VERTICES,
    Graph,
    complement,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    height,
    serialize_graph,
    single_edge,
)
from .homology import RATIONALS, FieldSpec
from .linalg import IntRowReducer, rank_int_rows
from . import sweep

ENUM_EXHAUSTIVE_MAX_N = 7


class IndexPair(NamedTuple):
    i: int
    d: int


@dataclass(frozen=True)
class IndexSet:
    """Ordered grid of candidate Betti cells for graphs on [n].

    With ``h`` set, only cells with d-i <= min(h, n-h)+1 remain and the
    members are listed in the height-restricted order; otherwise the plain
    row-major order is used.
    """

    n: int
    h: int | None
    members: tuple[IndexPair, ...]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, pair):
        return tuple(pair) in self._posmap()

    def index(self, pair) -> int:
        pos = self._posmap().get(tuple(pair))
        if pos is None:
            raise ValueError(f"{tuple(pair)} is not a member of this index set")
        return pos

    def _posmap(self):
        pm = getattr(self, "_pm", None)
        if pm is None:
            pm = {tuple(p): k for k, p in enumerate(self.members)}
            object.__setattr__(self, "_pm", pm)
        return pm


def sort_key_plain(pair):
    i, d = pair
    return (d - i, i)


def sort_key_h(pair, h: int):
    i, d = pair
    r = d - i
    if r == 2:
        return (r, 0, i)
    if i < h:
        return (r, 0, -i)
    return (r, 1, i)


def cmp_plain(p, q) -> int:
    """-1, 0 or 1: row-major order, rows first, then ascending i."""
    if tuple(p) == tuple(q):
        return 0
    return -1 if sort_key_plain(p) < sort_key_plain(q) else 1


def cmp_h(p, q, h: int) -> int:
    """Height-restricted order.

    Rows compare first. Within row 1, ascending i. Within a deeper row the
    cells with i < h come first in descending i, then the cells with i >= h
    in ascending i; the mixed case is forced by totality.
    """
    (i, d), (i2, d2) = tuple(p), tuple(q)
    if (i, d) == (i2, d2):
        return 0
    r, r2 = d - i, d2 - i2
    if r != r2:
        return -1 if r < r2 else 1
    if r == 2:
        return -1 if i < i2 else 1
    if i < h and i2 < h:
        return -1 if i > i2 else 1
    if i >= h and i2 >= h:
        return -1 if i < i2 else 1
    return -1 if i < h else 1


def index_set(n: int, h: int | None = None) -> IndexSet:
    """The candidate-cell grid for graphs on [n], optionally height-restricted."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if h is not None and not 0 <= h < n:
        raise ValueError(f"height must satisfy 0 <= h < n, got h={h}, n={n}")
    cells = [
        IndexPair(i, d)
        for i in range(max(n - 1, 0))
        for d in range(i + 2, min(2 * i + 2, n) + 1)
    ]
    if h is None:
        cells.sort(key=sort_key_plain)
    else:
        bound = min(h, n - h) + 1
        cells = [c for c in cells if c.d - c.i <= bound]
        cells.sort(key=lambda c: sort_key_h(c, h))
    return IndexSet(n, h, tuple(cells))


def is_initial(b: BettiDiagram, pair, iset: IndexSet) -> bool:
    """True iff b is nonzero at ``pair`` and zero at every later member."""
    pos = iset.index(pair)
    i, d = tuple(pair)
    if not b.get(i, d):
        return False
    return all(not b.get(*q) for q in iset.members[pos + 1 :])


def formula_dim(n: int, h: int | None = None) -> int:
    """Closed-form cone dimension: r*r or r*r+r for n = 2r or 2r+1; with a
    height it is h(n-h-1)+1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if h is None:
        r = n // 2
        return r * r if n % 2 == 0 else r * r + r
    if not 1 <= h <= n - 1:
        raise ValueError(f"height must satisfy 1 <= h <= n-1, got h={h}, n={n}")
    return h * (n - h - 1) + 1


def hk_subspace_dim(n: int, h: int) -> int:
    """Dimension of the height-h support cells cut by the degree-1..h-1
    alternating functionals; the constraint matrix has Vandermonde structure
    and full row rank, so this equals h(n-h-1)+1."""
    if not 1 <= h <= n - 1:
        raise ValueError(f"height must satisfy 1 <= h <= n-1, got h={h}, n={n}")
    cells = index_set(n, h).members
    rows = []
    for j in range(1, h):
        rows.append([(-(d**j) if i & 1 else d**j) for i, d in cells])
    return len(cells) - rank_int_rows(rows)


def diagram_rank(diagrams) -> int:
    """Rank over the rationals of the diagrams as sparse integer vectors."""
    diagrams = list(diagrams)
    support = sorted({cell for b in diagrams for cell in b.cells})
    idx = {c: k for k, c in enumerate(support)}
    rows = []
    for b in diagrams:
        vec = [0] * len(support)
        for cell, v in b.cells.items():
            vec[idx[cell]] = v
        rows.append(vec)
    return rank_int_rows(rows)


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class WitnessRecord:
    pair: IndexPair
    description: str
    graph: Graph
    diagram: BettiDiagram


@dataclass(frozen=True)
class ConeReport:
    """Outcome of a cone-dimension computation.

    ``certified`` is True exactly when the achieved lower bound (a rank)
    meets the matching upper bound (grid size or constrained-subspace
    dimension) in this run.
    """

    n: int
    h: int | None
    method: str
    dimension: int
    upper_bound: int | None
    certified: bool
    witnesses: tuple[WitnessRecord, ...] | None
    stats: dict

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("dimension must be non-negative")


def render_report(report: ConeReport) -> str:
    """Stable key-sorted text form; only elapsed_s varies between runs."""
    lines = {
        "n": str(report.n),
        "h": "none" if report.h is None else str(report.h),
        "method": report.method,
        "dimension": str(report.dimension),
        "upper_bound": "none" if report.upper_bound is None else str(report.upper_bound),
        "certified": "true" if report.certified else "false",
        "stats.graphs_visited": str(report.stats.get("graphs_visited", 0)),
        "stats.distinct_diagrams": str(report.stats.get("distinct_diagrams", 0)),
        "stats.elapsed_s": f"{report.stats.get('elapsed_s', 0.0):.6f}",
    }
    if report.witnesses is not None:
        for k, w in enumerate(report.witnesses):
            base = f"witness.{k:03d}"
            lines[f"{base}.cell"] = f"({w.pair.i},{w.pair.d})"
            lines[f"{base}.construction"] = w.description
            lines[f"{base}.graph"] = serialize_graph(w.graph).replace("\n", ";")
            lines[f"{base}.diagram"] = w.diagram.to_canonical()
    return "\n".join(f"{k}: {v}" for k, v in sorted(lines.items())) + "\n"


def parse_report(text: str) -> ConeReport:
    """Inverse of ``render_report`` (witness graphs and diagrams included)."""
    kv = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, val = line.partition(":")
        kv[key.strip()] = val.strip()
    n = int(kv["n"])
    h = None if kv["h"] == "none" else int(kv["h"])
    upper = None if kv["upper_bound"] == "none" else int(kv["upper_bound"])
    stats = {
        "graphs_visited": int(kv["stats.graphs_visited"]),
        "distinct_diagrams": int(kv["stats.distinct_diagrams"]),
        "elapsed_s": float(kv["stats.elapsed_s"]),
    }
    witnesses = None
    indexes = sorted(
        {key.split(".")[1] for key in kv if key.startswith("witness.")}
    )
    if indexes:
        from .graphs import parse_graph

        ws = []
        for ix in indexes:
            cell = kv[f"witness.{ix}.cell"][1:-1].split(",")
            pair = IndexPair(int(cell[0]), int(cell[1]))
            g = parse_graph(kv[f"witness.{ix}.graph"].replace(";", "\n"))
            b = BettiDiagram.from_canonical(kv[f"witness.{ix}.diagram"], g.n)
            ws.append(WitnessRecord(pair, kv[f"witness.{ix}.construction"], g, b))
        witnesses = tuple(ws)
    return ConeReport(
        n=n,
        h=h,
        method=kv["method"],
        dimension=int(kv["dimension"]),
        upper_bound=upper,
        certified=kv["certified"] == "true",
        witnesses=witnesses,
        stats=stats,
    )


# ---------------------------------------------------------------------------
# witness families

def _l_suffix(steps: int) -> str:
    if steps == 0:
        return ""
    return " + L" if steps == 1 else f" + {steps}L"


def _with_edges(base: Graph, steps: int) -> Graph:
    g = base
    for _ in range(steps):
        g = disjoint_union(g, single_edge())
    return g


def witnesses_Cn(n: int, field: FieldSpec = RATIONALS) -> ConeReport:
    """Triangular witness family spanning the unrestricted cone on [n].

    Row-1 cells (i, i+2) take the complete graph on i+2 vertices; every
    deeper cell takes the witness of the cell one row up, two degrees down,
    plus one disjoint edge. Each witness has exactly d vertices. Initiality
    and the final rank are verified against freshly computed diagrams.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    t0 = time.perf_counter()
    iset = index_set(n)
    records = []
    for i, d in iset.members:
        steps = d - i - 2
        base_m = d - 2 * steps
        g = _with_edges(complete_graph(base_m), steps)
        desc = f"K_{base_m}" + _l_suffix(steps)
        diag = hochster_diagram(g, field)
        if g.n != d:
            raise VerificationError(f"witness {desc} for ({i},{d}) has {g.n} vertices")
        if not is_initial(diag, (i, d), iset):
            raise VerificationError(f"witness {desc} is not ({i},{d})-initial")
        records.append(WitnessRecord(IndexPair(i, d), desc, g, diag))
    rank = diagram_rank([w.diagram for w in records])
    if rank != len(iset):
        raise VerificationError(
            f"witness diagrams for n={n} have rank {rank}, expected {len(iset)}"
        )
    elapsed = time.perf_counter() - t0
    return ConeReport(
        n=n,
        h=None,
        method="witnesses",
        dimension=rank,
        upper_bound=len(iset),
        certified=rank == len(iset),
        witnesses=tuple(records),
        stats={
            "graphs_visited": len(records),
            "distinct_diagrams": len({w.diagram.to_canonical() for w in records}),
            "elapsed_s": elapsed,
        },
    )


def _witness_graph_cnh(i: int, d: int, h: int) -> tuple[Graph, str]:
    """Witness construction for one height-restricted cell.

    Row 1 (d = i+2, with d > h): complement of (h isolated vertices plus a
    complete graph on d-h). Deeper cells walk up one row and down one height
    per disjoint-edge step; the walk stops on row 2 while i stays below the
    current height (cycle-complement base) or continues to row 1 (complete
    base).
    """
    rho = d - i - 1
    if rho == 1:
        if d <= h:
            raise VerificationError(f"row-1 cell ({i},{d}) needs d > h = {h}")
        base = complement(disjoint_union(empty_graph(h), complete_graph(d - h)))
        return base, f"complement(E_{h} + K_{d - h})"
    if i < h:
        steps = rho - 2
        level = h - steps
        dprime = d - 2 * steps
        pad = level + 2 - dprime
        if pad < 0:
            raise VerificationError(f"cycle base unavailable for ({i},{d}), h={h}")
        core = cycle_graph(dprime)
        if pad:
            base = complement(disjoint_union(core, empty_graph(pad)))
            desc = f"complement(C_{dprime} + E_{pad})"
        else:
            base = complement(core)
            desc = f"complement(C_{dprime})"
        return _with_edges(base, steps), desc + _l_suffix(steps)
    steps = rho - 1
    level = h - steps
    dprime = d - 2 * steps
    if level < 1 or dprime <= level:
        raise VerificationError(f"complete base unavailable for ({i},{d}), h={h}")
    base = complement(disjoint_union(empty_graph(level), complete_graph(dprime - level)))
    desc = f"complement(E_{level} + K_{dprime - level})"
    return _with_edges(base, steps), desc + _l_suffix(steps)


def witnesses_Cnh(n: int, h: int, field: FieldSpec = RATIONALS) -> ConeReport:
    """Witness family spanning the height-h cone on [n].

    Covers the height-restricted grid minus its first h-1 row-1 cells, which
    is exactly h(n-h-1)+1 cells. Every witness is checked to have height h,
    at most n vertices, and an initial diagram with respect to the
    height-restricted order; the diagram set must reach full rank.
    """
    if not 1 <= h <= n - 1:
        raise ValueError(f"height must satisfy 1 <= h <= n-1, got h={h}, n={n}")
    t0 = time.perf_counter()
    iset = index_set(n, h)
    excluded = {(i, i + 2) for i in range(h - 1)}
    expected = h * (n - h - 1) + 1
    records = []
    for i, d in iset.members:
        if (i, d) in excluded:
            continue
        g, desc = _witness_graph_cnh(i, d, h)
        if g.n > max(d, h + d - i - 1) or g.n > n:
            raise VerificationError(
                f"witness {desc} for ({i},{d}) has too many vertices ({g.n})"
            )
        hg = height(g)
        if hg != h:
            raise VerificationError(f"witness {desc} has height {hg}, expected {h}")
        diag = hochster_diagram(g, field)
        if not is_initial(diag, (i, d), iset):
            raise VerificationError(f"witness {desc} is not ({i},{d})-initial")
        records.append(WitnessRecord(IndexPair(i, d), desc, g, diag))
    if len(records) != expected:
        raise VerificationError(
            f"built {len(records)} witnesses for (n={n}, h={h}), expected {expected}"
        )
    rank = diagram_rank([w.diagram for w in records])
    if rank != expected:
        raise VerificationError(
            f"witness diagrams for (n={n}, h={h}) have rank {rank}, expected {expected}"
        )
    elapsed = time.perf_counter() - t0
    return ConeReport(
        n=n,
        h=h,
        method="witnesses",
        dimension=rank,
        upper_bound=hk_subspace_dim(n, h),
        certified=rank == hk_subspace_dim(n, h),
        witnesses=tuple(records),
        stats={
            "graphs_visited": len(records),
            "distinct_diagrams": len({w.diagram.to_canonical() for w in records}),
            "elapsed_s": elapsed,
        },
    )


# ---------------------------------------------------------------------------
# exhaustive enumeration

def enumerate_cone_dim(
    n: int,
    h: int | None = None,
    *,
    dedupe: bool = True,
    early_stop: bool = False,
    field: FieldSpec = RATIONALS,
    workers: int = 1,
) -> ConeReport:
    """Exact rank of the diagrams of all labelled graphs on [n].

    Graphs are visited as edge bitmasks, optionally filtered to a fixed
    height. ``dedupe`` collapses identical diagrams before rank reduction;
    ``early_stop`` stops as soon as the rank reaches the known upper bound
    (grid size, or the constrained-subspace dimension when a height is
    given), which still certifies the dimension. Exhaustive runs are capped
    at n = 7 unless early stopping is requested.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_COMPLEX_VERTICES:
        raise CapacityError(f"enumeration is capped at {MAX_COMPLEX_VERTICES} vertices")
    if n > ENUM_EXHAUSTIVE_MAX_N and not early_stop:
        raise CapacityError(
            f"exhaustive enumeration is capped at n = {ENUM_EXHAUSTIVE_MAX_N} "
            f"(2^{n * (n - 1) // 2} graphs); use early_stop=True or the witness "
            "families for larger n"
        )
    if h is not None and not 0 <= h < n:
        raise ValueError(f"height must satisfy 0 <= h < n, got h={h}, n={n}")
    t0 = time.perf_counter()
    cells = index_set(n).members
    if h is None:
        upper = len(cells)
    elif h == 0:
        upper = 0
    else:
        upper = hk_subspace_dim(n, h)
    total = 1 << (n * (n - 1) // 2)
    args = [
        (n, field.p, lo, hi, h, dedupe, cells) for lo, hi in sweep.chunk_ranges(total)
    ]
    red = IntRowReducer(len(cells))
    visited = 0
    distinct: set = set()
    for rows, count, seen in sweep.iter_chunk_results(sweep.enum_chunk, args, workers):
        visited += count
        distinct |= seen
        red.add_rows(rows)
        if early_stop and red.rank >= upper:
            break
    rank = red.rank
    elapsed = time.perf_counter() - t0
    return ConeReport(
        n=n,
        h=h,
        method="enumeration",
        dimension=rank,
        upper_bound=upper,
        certified=rank == upper,
        witnesses=None,
        stats={
            "graphs_visited": visited,
            "distinct_diagrams": len(distinct),
            "elapsed_s": elapsed,
        },
    )
