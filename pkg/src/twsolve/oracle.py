"""Brute-force reference algorithms for small instances.

Everything here is deliberately independent of the solver: dynamic
programming over vertex elimination orders for exact treewidth, and
exhaustive elimination-order enumeration for minimal triangulations and
potential maximal cliques.  Used by the test suite as ground truth and by
the `oracle` CLI subcommand for cross-checks.
"""

from __future__ import annotations

from itertools import permutations

from .errors import CapExceededError
from .graph import Graph, bits, set_of

ORACLE_VERTEX_CAP = 22


def treewidth_exact(g: Graph) -> int:
    """Exact treewidth by DP over eliminated-prefix subsets, O(2^n poly)."""
    if g.n > ORACLE_VERTEX_CAP:
        raise CapExceededError(f"oracle limited to {ORACLE_VERTEX_CAP} vertices, got {g.n}")
    if g.n == 0:
        return -1
    return _elimination_dp(g)[g.full_mask]


def _elim_degree(g: Graph, eliminated: int, v: int) -> int:
    """Bag size minus one when v is eliminated after the set `eliminated`."""
    vbit = 1 << (v - 1)
    comp = g.reach_mask(vbit, eliminated | vbit)
    return (g.nbr_mask(comp) & ~eliminated).bit_count()


def _elimination_dp(g: Graph) -> dict[int, int]:
    n = g.n
    dp = {0: -1}
    by_count: list[list[int]] = [[] for _ in range(n + 1)]
    by_count[0].append(0)
    for size in range(n):
        nxt = by_count[size + 1]
        for s in by_count[size]:
            base = dp[s]
            rem = g.full_mask & ~s
            while rem:
                low = rem & -rem
                rem ^= low
                v = low.bit_length()
                t = s | low
                w = max(base, _elim_degree(g, s, v))
                old = dp.get(t)
                if old is None:
                    dp[t] = w
                    nxt.append(t)
                elif w < old:
                    dp[t] = w
    return dp


def treewidth_exact_td(g: Graph) -> tuple[int, list[frozenset[int]], list[tuple[int, int]]]:
    """Exact treewidth plus a witnessing tree-decomposition.

    Returns (width, bags, tree_edges) built from an optimal elimination
    order; bags are frozensets of vertex ids, tree edges are 0-based bag
    index pairs.
    """
    if g.n == 0:
        return -1, [], []
    dp = _elimination_dp(g)
    width = dp[g.full_mask]
    order = []
    s = g.full_mask
    while s:
        rem = s
        while rem:
            low = rem & -rem
            rem ^= low
            v = low.bit_length()
            prev = s & ~low
            if max(dp[prev], _elim_degree(g, prev, v)) <= width and dp[prev] <= dp[s]:
                order.append(v)
                s = prev
                break
        else:  # pragma: no cover - dp traceback always finds a vertex
            raise AssertionError("elimination DP traceback failed")
    order.reverse()
    return width, *td_from_elimination_order(g, order)


def td_from_elimination_order(
    g: Graph, order: list[int]
) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """Bags and tree edges of the elimination tree-decomposition of `order`."""
    adj = list(g.adj_bits)
    pos = {v: i for i, v in enumerate(order)}
    bags_mask = []
    for v in order:
        vbit = 1 << (v - 1)
        nb = adj[v - 1]
        bags_mask.append(nb | vbit)
        m = nb
        while m:
            low = m & -m
            m ^= low
            adj[low.bit_length() - 1] |= nb & ~low
        for u in bits(nb):
            adj[u - 1] &= ~vbit
    edges = []
    for i, v in enumerate(order):
        later = [u for u in bits(bags_mask[i]) if pos[u] > i]
        if later:
            j = pos[min(later, key=lambda u: pos[u])]
            edges.append((i, j))
    bags = [set_of(m) for m in bags_mask]
    return bags, edges


def elimination_fill(g: Graph, order: tuple[int, ...]) -> int:
    """Edge mask (upper-triangle bit per pair) of the elimination fill graph."""
    adj = list(g.adj_bits)
    acc = list(g.adj_bits)
    for v in order:
        vbit = 1 << (v - 1)
        nb = adj[v - 1]
        m = nb
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            adj[u] |= nb & ~low
            acc[u] |= nb & ~low
        for u in bits(nb):
            adj[u - 1] &= ~vbit
        adj[v - 1] = 0
    key = 0
    idx = 0
    for u in range(1, g.n + 1):
        for v in range(u + 1, g.n + 1):
            if (acc[u - 1] >> (v - 1)) & 1:
                key |= 1 << idx
            idx += 1
    return key


def _graph_from_edge_key(n: int, key: int) -> Graph:
    edges = []
    idx = 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (key >> idx) & 1:
                edges.append((u, v))
            idx += 1
    return Graph(n, edges)


def minimal_triangulations(g: Graph) -> list[Graph]:
    """All minimal triangulations, by exhausting elimination orders.

    Every minimal triangulation is the fill of some elimination order, so
    deduplicating fills and keeping the edge-minimal ones is exhaustive.
    Factorial in n; intended for n <= 7.
    """
    if g.n > 8:
        raise CapExceededError("minimal triangulation enumeration limited to 8 vertices")
    fills = set()
    for order in permutations(range(1, g.n + 1)):
        fills.add(elimination_fill(g, order))
    minimal = [
        key for key in fills if not any(other != key and other & key == other for other in fills)
    ]
    return [_graph_from_edge_key(g.n, key) for key in sorted(minimal)]


def max_cliques(g: Graph) -> list[frozenset[int]]:
    """Maximal cliques via Bron-Kerbosch (fine for oracle-scale graphs)."""
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        pivot_pool = p | x
        piv = (pivot_pool & -pivot_pool).bit_length() - 1
        best = piv
        best_cnt = (p & g.adj_bits[piv]).bit_count()
        m = pivot_pool
        while m:
            low = m & -m
            m ^= low
            c = (p & g.adj_bits[low.bit_length() - 1]).bit_count()
            if c > best_cnt:
                best_cnt = c
                best = low.bit_length() - 1
        cand = p & ~g.adj_bits[best]
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            bk(r | low, p & g.adj_bits[v], x & g.adj_bits[v])
            p &= ~low
            x |= low
    if g.n:
        bk(0, g.full_mask, 0)
    return sorted((set_of(m) for m in out), key=sorted)


def pmcs_brute(g: Graph) -> set[frozenset[int]]:
    """Potential maximal cliques straight from the definition.

    Union of maximal-clique sets over all minimal triangulations; the
    independent oracle against which the local test is validated.
    """
    out: set[frozenset[int]] = set()
    for h in minimal_triangulations(g):
        out.update(max_cliques(h))
    return out
