"""Exhaustive sweeps over all labelled graphs on a small vertex set.

Graphs on [n] are identified with edge bitmasks over the C(n,2) vertex
pairs in lexicographic order. Each graph's diagram is assembled from cached
subset profiles: the homology profile of the subcomplex induced on a vertex
subset u depends only on (u, edges inside u), which makes a single integer
a perfect cache key. Only the full vertex set is never cached (its key
would be distinct for every graph).

Work is split over contiguous edge-mask ranges; chunk results merge in
index order, so ranks and counters do not depend on the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import VerificationError
from .graphs import _cover_number, _min_maximal_matching
from .homology import profile_nonzero
from .linalg import IntRowReducer

CHUNK = 1 << 14

_tables_by_n: dict = {}
_caches: dict = {}


def _tables(n: int):
    tab = _tables_by_n.get(n)
    if tab is None:
        pairs = [(u, v) for v in range(1, n) for u in range(v)]
        pairs = sorted(pairs)
        npairs = len(pairs)
        full = (1 << n) - 1
        within = [0] * (1 << n)
        for k, (u, v) in enumerate(pairs):
            bit = 1 << k
            uv = (1 << u) | (1 << v)
            for s in range(1 << n):
                if s & uv == uv:
                    within[s] |= bit
        nontriv = tuple(
            u for u in range(1 << n) if u.bit_count() >= 2 and u != full
        )
        tab = (n, pairs, npairs, full, within, nontriv)
        _tables_by_n[n] = tab
    return tab


def _cache(n: int, p: int | None) -> dict:
    c = _caches.get((n, p))
    if c is None:
        c = {}
        _caches[(n, p)] = c
    return c


def clear_sweep_caches() -> None:
    _caches.clear()


def _adj_of_mask(gm: int, pairs, n: int):
    adj = [0] * n
    m = gm
    while m:
        b = m & -m
        u, v = pairs[b.bit_length() - 1]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        m ^= b
    return adj


def _independence(adj, n: int) -> bytearray:
    table = bytearray(1 << n)
    table[0] = 1
    for s in range(1, 1 << n):
        b = s & -s
        r = s ^ b
        table[s] = table[r] and not adj[b.bit_length() - 1] & r
    return table


def _faces_in_subset(is_ind, u: int):
    by_card = [[] for _ in range(u.bit_count() + 1)]
    s = u
    while True:
        if is_ind[s]:
            by_card[s.bit_count()].append(s)
        if not s:
            break
        s = (s - 1) & u
    return by_card


def diagram_items(gm: int, n: int, p: int | None) -> dict:
    """Betti cells {(i,d): v} of the graph with edge mask gm on [n]."""
    _, pairs, npairs, full, within, nontriv = _tables(n)
    cache = _cache(n, p)
    adj = _adj_of_mask(gm, pairs, n)
    is_ind = _independence(adj, n)
    acc: dict = {}
    for u in nontriv:
        if is_ind[u]:
            continue
        key = (u << npairs) | (gm & within[u])
        prof = cache.get(key)
        if prof is None:
            prof = profile_nonzero(_faces_in_subset(is_ind, u), p)
            cache[key] = prof
        if prof:
            d = u.bit_count()
            for j, dim in prof:
                i = d - j - 2
                if i >= 0:
                    cell = (i, d)
                    acc[cell] = acc.get(cell, 0) + dim
    # the full vertex set: an isolated vertex makes the complex a cone,
    # so only graphs with minimum degree >= 1 can contribute
    if n >= 2 and not is_ind[full] and all(adj):
        prof = profile_nonzero(_faces_in_subset(is_ind, full), p)
        for j, dim in prof:
            i = n - j - 2
            if i >= 0:
                cell = (i, n)
                acc[cell] = acc.get(cell, 0) + dim
    return acc


def enum_chunk(args):
    """Rank-basis rows and diagram keys for one edge-mask range."""
    n, p, lo, hi, hfilter, dedupe, cells = args
    _, pairs, npairs, full, within, nontriv = _tables(n)
    idx = {c: k for k, c in enumerate(cells)}
    red = IntRowReducer(len(cells))
    seen: set = set()
    visited = 0
    for gm in range(lo, hi):
        visited += 1
        if hfilter is not None:
            adj = _adj_of_mask(gm, pairs, n)
            if _cover_number(adj, n) != hfilter:
                continue
        acc = diagram_items(gm, n, p)
        key = tuple(sorted(acc.items()))
        new = key not in seen
        if new:
            seen.add(key)
        if dedupe and not new:
            continue
        vec = [0] * len(cells)
        for cell, v in acc.items():
            k = idx.get(cell)
            if k is None:
                raise VerificationError(
                    f"graph {gm} on [{n}] has a Betti cell {cell} outside the "
                    "expected support"
                )
            vec[k] = v
        red.add(vec)
    return red.basis_rows(), visited, seen


@dataclass
class CorpusReport:
    """Aggregate checks over every labelled graph on [n]."""

    n: int
    graphs: int = 0
    hk_bad: list = field(default_factory=list)
    support_bad: list = field(default_factory=list)
    support_h_bad: list = field(default_factory=list)
    regularity_bad: list = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not (
            self.hk_bad or self.support_bad or self.support_h_bad or self.regularity_bad
        )


_MAX_EXAMPLES = 5


def check_chunk(args):
    """Vanishing/support/regularity checks for one edge-mask range."""
    n, p, lo, hi = args
    _, pairs, npairs, full, within, nontriv = _tables(n)
    count = 0
    hk_bad, sup_bad, suph_bad, reg_bad = [], [], [], []
    for gm in range(lo, hi):
        count += 1
        if gm == 0:
            continue
        acc = diagram_items(gm, n, p)
        adj = _adj_of_mask(gm, pairs, n)
        h = _cover_number(adj, n)
        for j in range(1, h):
            s = 0
            for (i, d), v in acc.items():
                s += (-v if i & 1 else v) * d**j
            if s and len(hk_bad) < _MAX_EXAMPLES:
                hk_bad.append((gm, f"HK_{j} = {s}"))
        bound = min(h, n - h) + 1
        for i, d in acc:
            if not (i + 2 <= d <= min(2 * i + 2, n)):
                if len(sup_bad) < _MAX_EXAMPLES:
                    sup_bad.append((gm, f"cell ({i},{d})"))
            elif d - i > bound:
                if len(suph_bad) < _MAX_EXAMPLES:
                    suph_bad.append((gm, f"cell ({i},{d}) with height {h}"))
        if acc:
            reg = max(d - i for i, d in acc)
            alpha = _min_maximal_matching(adj, n)
            if reg > alpha + 1 and len(reg_bad) < _MAX_EXAMPLES:
                reg_bad.append((gm, f"regularity {reg} > {alpha} + 1"))
    return count, hk_bad, sup_bad, suph_bad, reg_bad


def iter_chunk_results(func, argslist, workers: int):
    """Apply ``func`` over chunk argument tuples, in order, optionally pooled."""
    if workers <= 1 or len(argslist) <= 1:
        for a in argslist:
            yield func(a)
        return
    import multiprocessing as mp

    with mp.Pool(processes=workers) as pool:
        yield from pool.imap(func, argslist)


def chunk_ranges(total: int):
    return [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]


def corpus_check(n: int, p: int | None = None, workers: int = 1) -> CorpusReport:
    """Run the vanishing/support/regularity checks over all graphs on [n]."""
    import time

    t0 = time.perf_counter()
    total = 1 << (n * (n - 1) // 2)
    args = [(n, p, lo, hi) for lo, hi in chunk_ranges(total)]
    rep = CorpusReport(n)
    for count, hk_bad, sup_bad, suph_bad, reg_bad in iter_chunk_results(
        check_chunk, args, workers
    ):
        rep.graphs += count
        rep.hk_bad.extend(hk_bad)
        rep.support_bad.extend(sup_bad)
        rep.support_h_bad.extend(suph_bad)
        rep.regularity_bad.extend(reg_bad)
    rep.elapsed_s = time.perf_counter() - t0
    return rep


def mask_to_edges(gm: int, n: int) -> list[tuple[int, int]]:
    """1-indexed edge list of the graph with edge mask gm on [n]."""
    _, pairs, _, _, _, _ = _tables(n)
    out = []
    m = gm
    while m:
        b = m & -m
        u, v = pairs[b.bit_length() - 1]
        out.append((u + 1, v + 1))
        m ^= b
    return out
