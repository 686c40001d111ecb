"""Labelled simple graphs, named families, parsers and combinatorial solvers.

Graphs live on the vertex set {1..n} and are stored as per-vertex neighbour
bitmasks (bit v-1 stands for vertex v), which keeps every operation a few
word-level instructions. The hard cap n <= 32 keeps masks in one machine
word; independence complexes are capped at n <= 16 because their face
enumeration is exponential.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .errors import CapacityError, GraphParseError

MAX_GRAPH_VERTICES = 32
MAX_COMPLEX_VERTICES = 16


@dataclass(frozen=True)
class Graph:
    """Simple graph on {1..n} as a tuple of neighbour bitmasks.

    ``adj[i]`` is the neighbour mask of vertex i+1. Masks are symmetric and
    loop-free; instances are immutable and safe to share between workers.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if self.n > MAX_GRAPH_VERTICES:
            raise CapacityError(
                f"graphs are capped at {MAX_GRAPH_VERTICES} vertices, got {self.n}"
            )
        if len(self.adj) != self.n:
            raise ValueError("adjacency table length must equal vertex count")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask & ~full:
                raise ValueError(f"neighbour mask of vertex {v + 1} out of range")
            if mask >> v & 1:
                raise ValueError(f"loop at vertex {v + 1}")
        for v, mask in enumerate(self.adj):
            m = mask
            while m:
                b = m & -m
                if not self.adj[b.bit_length() - 1] >> v & 1:
                    raise ValueError("adjacency table is not symmetric")
                m ^= b

    def edges(self) -> list[tuple[int, int]]:
        """Edge list as sorted 1-indexed pairs (u, v) with u < v."""
        out = []
        for v in range(self.n):
            m = self.adj[v] >> (v + 1) << (v + 1)
            while m:
                b = m & -m
                out.append((v + 1, b.bit_length()))
                m ^= b
        return out

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ValueError("vertex label out of range")
        return bool(self.adj[u - 1] >> (v - 1) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v - 1].bit_count()

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


def graph_from_edges(n: int, edges) -> Graph:
    """Build a graph on {1..n} from 1-indexed edge pairs."""
    adj = [0] * n
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"loop edge ({u},{v})")
        adj[u - 1] |= 1 << (v - 1)
        adj[v - 1] |= 1 << (u - 1)
    return Graph(n, tuple(adj))


def complete_graph(m: int) -> Graph:
    full = (1 << m) - 1
    return Graph(m, tuple(full ^ (1 << v) for v in range(m)))


def empty_graph(m: int) -> Graph:
    return Graph(m, (0,) * m)


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {m}")
    return graph_from_edges(m, [(i, i + 1) for i in range(1, m)] + [(m, 1)])


def single_edge() -> Graph:
    """The one-edge graph on two vertices."""
    return graph_from_edges(2, [(1, 2)])


def make_named(family: str, m: int = 0) -> Graph:
    """Build a named family member: complete, empty, cycle or single_edge.

    ``single_edge`` ignores m and always has two vertices.
    """
    if family == "complete":
        return complete_graph(m)
    if family == "empty":
        return empty_graph(m)
    if family == "cycle":
        return cycle_graph(m)
    if family == "single_edge":
        return single_edge()
    raise ValueError(f"unknown family {family!r}")


def complement(g: Graph) -> Graph:
    """Same vertices, an edge exactly where g has none."""
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((full ^ m ^ (1 << v)) for v, m in enumerate(g.adj)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Disjoint union; the labels of h are shifted up by g.n."""
    n = g.n + h.n
    if n > MAX_GRAPH_VERTICES:
        raise CapacityError(f"disjoint union would have {n} > {MAX_GRAPH_VERTICES} vertices")
    adj = list(g.adj) + [m << g.n for m in h.adj]
    return Graph(n, tuple(adj))


def strip_isolated(g: Graph) -> Graph:
    """Induced subgraph on the non-isolated vertices, relabelled in order."""
    keep = [v for v in range(g.n) if g.adj[v]]
    pos = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        m, c = g.adj[v], 0
        while m:
            b = m & -m
            c |= 1 << pos[b.bit_length() - 1]
            m ^= b
        adj.append(c)
    return Graph(len(keep), tuple(adj))


# ---------------------------------------------------------------------------
# parsing and serialisation

_TOKEN = re.compile(rb"\S+")


def parse_graph(text: str, format: str = "edge_list") -> Graph:
    """Decode a graph from text in ``edge_list`` or ``graph6`` format.

    edge_list: first token is n, then one "u v" pair per edge with
    1 <= u < v <= n. graph6: the standard 6-bit encoding.
    ``serialize_graph`` is the exact inverse of both.
    """
    if format == "edge_list":
        return _parse_edge_list(text)
    if format == "graph6":
        return _parse_graph6(text)
    raise ValueError(f"unknown graph format {format!r}")


def _parse_edge_list(text: str) -> Graph:
    data = text.encode()
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(data)]
    if not tokens:
        raise GraphParseError("empty input, expected a vertex count", 0)
    raw, off = tokens[0]
    if not raw.isdigit():
        raise GraphParseError(f"expected vertex count, got {raw.decode()!r}", off)
    n = int(raw)
    if n > MAX_GRAPH_VERTICES:
        raise CapacityError(f"vertex count {n} exceeds the cap {MAX_GRAPH_VERTICES}")
    body = tokens[1:]
    if len(body) % 2:
        raise GraphParseError("dangling vertex token at end of edge list", body[-1][1])
    adj = [0] * n
    for k in range(0, len(body), 2):
        (ru, offu), (rv, offv) = body[k], body[k + 1]
        if not ru.isdigit():
            raise GraphParseError(f"expected a vertex label, got {ru.decode()!r}", offu)
        if not rv.isdigit():
            raise GraphParseError(f"expected a vertex label, got {rv.decode()!r}", offv)
        u, v = int(ru), int(rv)
        if not 1 <= u <= n:
            raise GraphParseError(f"vertex {u} out of range 1..{n}", offu)
        if not 1 <= v <= n:
            raise GraphParseError(f"vertex {v} out of range 1..{n}", offv)
        if u == v:
            raise GraphParseError(f"loop edge {u} {v}", offu)
        if u > v:
            raise GraphParseError(f"edges must be written u v with u < v, got {u} {v}", offu)
        adj[u - 1] |= 1 << (v - 1)
        adj[v - 1] |= 1 << (u - 1)
    return Graph(n, tuple(adj))


_G6_HEADER = ">>graph6<<"


def _parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER) :]
    if not s:
        raise GraphParseError("empty graph6 string", 0)
    first = ord(s[0])
    if first == 126:
        raise GraphParseError(
            f"extended graph6 vertex counts are not supported (cap {MAX_GRAPH_VERTICES})", 0
        )
    if not 63 <= first <= 125:
        raise GraphParseError(f"invalid graph6 byte {s[0]!r}", 0)
    n = first - 63
    if n > MAX_GRAPH_VERTICES:
        raise CapacityError(f"vertex count {n} exceeds the cap {MAX_GRAPH_VERTICES}")
    npairs = n * (n - 1) // 2
    nbytes = (npairs + 5) // 6
    if len(s) - 1 != nbytes:
        raise GraphParseError(
            f"graph6 body for n={n} needs {nbytes} bytes, got {len(s) - 1}", 1
        )
    bits = []
    for k, ch in enumerate(s[1:]):
        b = ord(ch)
        if not 63 <= b <= 126:
            raise GraphParseError(f"invalid graph6 byte {ch!r}", 1 + k)
        b -= 63
        bits.extend((b >> shift) & 1 for shift in range(5, -1, -1))
    for k in range(npairs, len(bits)):
        if bits[k]:
            raise GraphParseError("nonzero padding bits in graph6 body", len(s) - 1)
    adj = [0] * n
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            idx += 1
    return Graph(n, tuple(adj))


def serialize_graph(g: Graph, format: str = "edge_list") -> str:
    if format == "edge_list":
        lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
        return "\n".join(lines)
    if format == "graph6":
        bits = []
        for v in range(1, g.n):
            for u in range(v):
                bits.append(g.adj[u] >> v & 1)
        while len(bits) % 6:
            bits.append(0)
        out = [chr(g.n + 63)]
        for k in range(0, len(bits), 6):
            val = 0
            for b in bits[k : k + 6]:
                val = val << 1 | b
            out.append(chr(val + 63))
        return "".join(out)
    raise ValueError(f"unknown graph format {format!r}")


# ---------------------------------------------------------------------------
# combinatorial solvers

def height(g: Graph) -> int:
    """Minimum vertex cover size of g (the codimension of its edge ideal).

    Exact: branches on an uncovered edge for each candidate size, ascending,
    so the first size that admits a cover is returned.
    """
    return _cover_number(g.adj, g.n)


def _cover_number(adj, n: int) -> int:
    if not any(adj):
        return 0
    for k in range(1, n + 1):
        if _has_cover(adj, n, 0, k):
            return k
    raise AssertionError("unreachable: the full vertex set is always a cover")


def _has_cover(adj, n, cover, budget) -> bool:
    # find an uncovered edge; branch on covering either endpoint
    u = -1
    for v in range(n):
        if not cover >> v & 1 and adj[v] & ~cover:
            u = v
            break
    if u < 0:
        return True
    if budget == 0:
        return False
    rest = adj[u] & ~cover
    if _has_cover(adj, n, cover | 1 << u, budget - 1):
        return True
    w = rest & -rest
    return _has_cover(adj, n, cover | w, budget - 1)


def min_maximal_matching_size(g: Graph) -> int:
    """Minimum size of an inclusion-maximal matching in g.

    Searches matchings through their saturated vertex sets: a matching is
    maximal exactly when its endpoints form a vertex cover, so the answer is
    the smallest |S|/2 over vertex covers S whose induced subgraph has a
    perfect matching.
    """
    return _min_maximal_matching(g.adj, g.n)


def _min_maximal_matching(adj, n: int) -> int:
    if not any(adj):
        return 0
    for size in range(1, n // 2 + 1):
        for vs in combinations(range(n), 2 * size):
            s = 0
            for v in vs:
                s |= 1 << v
            if _covers_all(adj, n, s) and _has_perfect_matching(adj, s):
                return size
    raise AssertionError("unreachable: a maximum matching saturates a cover")


def _covers_all(adj, n, s) -> bool:
    for v in range(n):
        if not s >> v & 1 and adj[v] & ~s:
            return False
    return True


def _has_perfect_matching(adj, mask) -> bool:
    if not mask:
        return True
    b = mask & -mask
    v = b.bit_length() - 1
    rest = mask ^ b
    cand = adj[v] & rest
    while cand:
        wb = cand & -cand
        if _has_perfect_matching(adj, rest ^ wb):
            return True
        cand ^= wb
    return False


# ---------------------------------------------------------------------------
# independence complexes

@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed face family on {1..n}, faces stored as bitmasks.

    ``faces_by_card[k]`` lists the masks with k bits set, ascending; the
    empty face is always present, so ``faces_by_card[0] == (0,)``.
    """

    n: int
    faces_by_card: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.faces_by_card) - 2

    @property
    def num_faces(self) -> int:
        return sum(len(fs) for fs in self.faces_by_card)

    def face_counts(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces_by_card)

    def has_face(self, mask: int) -> bool:
        k = mask.bit_count()
        return k < len(self.faces_by_card) and mask in self.faces_by_card[k]

    def all_faces(self):
        for fs in self.faces_by_card:
            yield from fs

    @classmethod
    def from_faces(cls, n: int, masks) -> "SimplicialComplex":
        """Build from an explicit face set, validating downward closure."""
        seen = set(masks)
        seen.add(0)
        for mask in list(seen):
            m = mask
            while m:
                b = m & -m
                if mask ^ b not in seen:
                    raise ValueError("face family is not downward closed")
                m ^= b
        top = max(mask.bit_count() for mask in seen)
        by_card = [[] for _ in range(top + 1)]
        for mask in seen:
            by_card[mask.bit_count()].append(mask)
        return cls(n, tuple(tuple(sorted(fs)) for fs in by_card))

    @classmethod
    def from_maximal(cls, n: int, faces) -> "SimplicialComplex":
        """Downward closure of the given faces (1-indexed vertex iterables)."""
        seen = {0}
        stack = [face_mask(f) for f in faces]
        while stack:
            mask = stack.pop()
            if mask in seen:
                continue
            seen.add(mask)
            m = mask
            while m:
                b = m & -m
                stack.append(mask ^ b)
                m ^= b
        top = max(mask.bit_count() for mask in seen)
        by_card = [[] for _ in range(top + 1)]
        for mask in seen:
            by_card[mask.bit_count()].append(mask)
        return cls(n, tuple(tuple(sorted(fs)) for fs in by_card))


def face_mask(vertices) -> int:
    """Bitmask of a 1-indexed vertex collection."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def _independence_table(adj, n: int) -> bytearray:
    """table[s] == 1 iff the vertex mask s is independent."""
    table = bytearray(1 << n)
    table[0] = 1
    for s in range(1, 1 << n):
        b = s & -s
        r = s ^ b
        table[s] = table[r] and not adj[b.bit_length() - 1] & r
    return table


def independence_complex(g: Graph) -> SimplicialComplex:
    """All independent sets of g; equals the clique complex of complement(g)."""
    if g.n > MAX_COMPLEX_VERTICES:
        raise CapacityError(
            f"independence complexes are capped at {MAX_COMPLEX_VERTICES} vertices, got {g.n}"
        )
    table = _independence_table(g.adj, g.n)
    by_card: list[list[int]] = [[]]
    for s in range(1 << g.n):
        if table[s]:
            k = s.bit_count()
            while k >= len(by_card):
                by_card.append([])
            by_card[k].append(s)
    return SimplicialComplex(g.n, tuple(tuple(fs) for fs in by_card))
