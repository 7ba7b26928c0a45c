"""Tree-decompositions: validation, width, triangulations, the greedy upper
bound, uncontraction, and both minimalization procedures.

A tree-decomposition is a tree of bags covering all vertices and edges with
connected per-vertex occurrence subtrees; by convention no two nodes carry
the same bag.  Minimalizing means replacing the decomposition by a clique
tree of a minimal triangulation inside fill(g, t); the optimal variant
searches all such triangulations for the best width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DecompositionError, GraphInputError
from .graph import Contractor, Graph, bits, mask_of, set_of


class TreeDecomposition:
    """Tree whose nodes are bags; tree_edges are 0-based node index pairs."""

    __slots__ = ("bags", "tree_edges")

    def __init__(
        self,
        bags: Iterable[Iterable[int]],
        tree_edges: Iterable[tuple[int, int]] = (),
    ):
        self.bags = [frozenset(b) for b in bags]
        self.tree_edges = [tuple(sorted(e)) for e in tree_edges]

    def width(self) -> int:
        if not self.bags:
            raise DecompositionError("empty decomposition has no width")
        return max(len(b) for b in self.bags) - 1

    def bag_set(self) -> set[frozenset[int]]:
        return set(self.bags)

    def neighbors_of(self, i: int) -> list[int]:
        out = []
        for a, b in self.tree_edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def __len__(self) -> int:
        return len(self.bags)

    def __repr__(self):
        return f"TreeDecomposition({len(self.bags)} bags, width={self.width()})"


def width(t: TreeDecomposition) -> int:
    return t.width()


def validate(g: Graph, t: TreeDecomposition) -> tuple[bool, str]:
    """Check all decomposition invariants against g.

    Returns (ok, report); the report names the first violated condition
    with a witness.
    """
    k = len(t.bags)
    if k == 0:
        return (g.n == 0, "empty decomposition" if g.n else "ok")
    for a, b in t.tree_edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return False, f"tree: bad edge ({a},{b})"
    if len(t.tree_edges) != k - 1:
        return False, f"tree: {k} nodes need {k - 1} edges, got {len(t.tree_edges)}"
    seen = {0}
    stack = [0]
    nbrs: list[list[int]] = [[] for _ in range(k)]
    for a, b in t.tree_edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    while stack:
        i = stack.pop()
        for j in nbrs[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != k:
        return False, f"tree: node {min(set(range(k)) - seen)} unreachable"
    if len(set(t.bags)) != k:
        dup = next(b for i, b in enumerate(t.bags) if b in t.bags[:i])
        return False, f"distinct bags: bag {sorted(dup)} repeated"
    masks = [mask_of(b) for b in t.bags]
    union = 0
    for m in masks:
        union |= m
    if union != g.full_mask:
        if union & ~g.full_mask:
            return False, f"coverage: unknown vertex {next(bits(union & ~g.full_mask))}"
        v = next(bits(g.full_mask & ~union))
        return False, f"vertex coverage: vertex {v} in no bag"
    for u, v in g.edges():
        e = (1 << (u - 1)) | (1 << (v - 1))
        if not any(m & e == e for m in masks):
            return False, f"edge coverage: edge ({u},{v}) in no bag"
    for v in range(1, g.n + 1):
        vbit = 1 << (v - 1)
        nodes = {i for i, m in enumerate(masks) if m & vbit}
        start = next(iter(nodes))
        reached = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in nbrs[i]:
                if j in nodes and j not in reached:
                    reached.add(j)
                    stack.append(j)
        if reached != nodes:
            return False, f"connectivity: bags of vertex {v} not a subtree"
    return True, "ok"


@dataclass(frozen=True)
class Triangulation:
    """Chordal supergraph of a base graph on the same vertex set."""

    graph: Graph
    base: Graph


def fill(g: Graph, t: TreeDecomposition) -> Triangulation:
    """g plus the chords turning every bag into a clique."""
    ok, report = validate(g, t)
    if not ok:
        raise DecompositionError(f"invalid decomposition: {report}")
    return Triangulation(_fill_graph(g, t.bags), g)


def _fill_graph(g: Graph, bags: Iterable[frozenset[int]]) -> Graph:
    adj = list(g.adj_bits)
    for bag in bags:
        m = mask_of(bag)
        rem = m
        while rem:
            low = rem & -rem
            rem ^= low
            adj[low.bit_length() - 1] |= m & ~low
    return Graph.from_masks(adj)


# -- chordal graph machinery -------------------------------------------------


def peo(g: Graph) -> list[int] | None:
    """Perfect elimination order via maximum cardinality search, or None.

    The returned order lists vertices in elimination order (reverse of the
    MCS numbering); for a chordal graph each vertex's later neighbors form
    a clique.
    """
    n = g.n
    weight = [0] * (n + 1)
    numbered = 0
    order_rev = []
    for _ in range(n):
        v = max(
            (u for u in range(1, n + 1) if not (numbered >> (u - 1)) & 1),
            key=lambda u: (weight[u], -u),
        )
        order_rev.append(v)
        numbered |= 1 << (v - 1)
        for u in bits(g.adj_bits[v - 1] & ~numbered):
            weight[u] += 1
    order = list(reversed(order_rev))
    later = 0
    pos = {v: i for i, v in enumerate(order)}
    for i in range(n - 1, -1, -1):
        later |= 1 << (order[i] - 1)
    eliminated = 0
    for v in order:
        vbit = 1 << (v - 1)
        eliminated |= vbit
        later_nbrs = g.adj_bits[v - 1] & ~eliminated
        if later_nbrs:
            first = min(bits(later_nbrs), key=lambda u: pos[u])
            rest = later_nbrs & ~(1 << (first - 1))
            if rest & ~g.adj_bits[first - 1]:
                return None
    return order


def is_chordal(g: Graph) -> bool:
    return peo(g) is not None


def maximal_cliques_chordal(g: Graph) -> list[frozenset[int]]:
    order = peo(g)
    if order is None:
        raise GraphInputError("graph is not chordal")
    eliminated = 0
    cliques: list[int] = []
    for v in order:
        vbit = 1 << (v - 1)
        eliminated |= vbit
        cliques.append(vbit | (g.adj_bits[v - 1] & ~eliminated))
    maximal = [
        c for i, c in enumerate(cliques)
        if not any(j != i and c & cj == c for j, cj in enumerate(cliques))
    ]
    out = []
    seen = set()
    for c in maximal:
        if c not in seen:
            seen.add(c)
            out.append(set_of(c))
    return out


def clique_tree(h: Graph) -> TreeDecomposition:
    """Clique tree of a chordal graph (max-weight spanning tree on overlaps)."""
    cliques = maximal_cliques_chordal(h)
    k = len(cliques)
    if k == 0:
        return TreeDecomposition([], [])
    masks = [mask_of(c) for c in cliques]
    in_tree = [False] * k
    in_tree[0] = True
    best = [ (masks[0] & masks[i]).bit_count() for i in range(k) ]
    parent = [0] * k
    edges = []
    for _ in range(k - 1):
        j = max(
            (i for i in range(k) if not in_tree[i]),
            key=lambda i: (best[i], -i),
        )
        in_tree[j] = True
        edges.append((parent[j], j))
        for i in range(k):
            if not in_tree[i]:
                w = (masks[j] & masks[i]).bit_count()
                if w > best[i]:
                    best[i] = w
                    parent[i] = j
    return TreeDecomposition(cliques, edges)


def minimal_triangulation_inside(g: Graph, h: Graph) -> Graph:
    """Minimal triangulation of g that is a subgraph of the triangulation h.

    Greedy fixpoint: drop any single fill edge whose removal keeps the graph
    chordal; a triangulation is minimal exactly when no such edge exists.
    For chordal h, removing uv preserves chordality iff the common
    neighborhood of u and v is a clique (a broken longer cycle would force a
    second missing chord already absent from h).
    """
    adj = list(h.adj_bits)
    fill = [(u, v) for (u, v) in h.edges() if not g.has_edge(u, v)]
    changed = True
    while changed and fill:
        changed = False
        keep = []
        for u, v in fill:
            common = adj[u - 1] & adj[v - 1]
            m = common
            clique = True
            while m:
                low = m & -m
                m ^= low
                if common & ~(adj[low.bit_length() - 1] | low):
                    clique = False
                    break
            if clique:
                adj[u - 1] &= ~(1 << (v - 1))
                adj[v - 1] &= ~(1 << (u - 1))
                changed = True
            else:
                keep.append((u, v))
        fill = keep
    return Graph.from_masks(adj)


# -- greedy upper bound --------------------------------------------------------


def greedy_td(g: Graph) -> TreeDecomposition:
    """Minimal tree-decomposition from a min-fill elimination, minimalized.

    Ties broken by smaller degree then smaller vertex id, so the result is
    deterministic.  Width is an upper bound on tw(g).
    """
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("greedy_td expects a nonempty connected graph")
    adj = list(g.adj_bits)
    alive = g.full_mask
    fill_adj = list(g.adj_bits)

    def fill_count(v: int) -> int:
        nb = adj[v - 1] & alive
        cnt = 0
        m = nb
        while m:
            low = m & -m
            m ^= low
            cnt += (nb & ~adj[low.bit_length() - 1] & ~low).bit_count()
        return cnt // 2

    while alive:
        v = min(
            bits(alive),
            key=lambda u: (fill_count(u), (adj[u - 1] & alive).bit_count(), u),
        )
        vbit = 1 << (v - 1)
        nb = adj[v - 1] & alive & ~vbit
        m = nb
        while m:
            low = m & -m
            m ^= low
            u = low.bit_length() - 1
            adj[u] |= nb & ~low
            fill_adj[u] |= nb & ~low
        alive &= ~vbit
    filled = Graph.from_masks(fill_adj)
    return minimalize_filled(g, filled)


def minimalize_filled(g: Graph, h: Graph) -> TreeDecomposition:
    hmin = minimal_triangulation_inside(g, h)
    return clique_tree(hmin)


def minimalize(g: Graph, t: TreeDecomposition) -> TreeDecomposition:
    """Clique tree of a minimal triangulation inside fill(g, t).

    Never increases width; every output bag is a potential maximal clique.
    """
    ok, report = validate(g, t)
    if not ok:
        raise DecompositionError(f"invalid decomposition: {report}")
    return minimalize_filled(g, _fill_graph(g, t.bags))


OPT_MINIMALIZE_BAG_CAP = 24


def admissible_separators(g: Graph, t: TreeDecomposition, cap: int = 2_000_000):
    """Minimal separators of g that are cliques of fill(g, t)."""
    from .pmc import minimal_separators

    filled = _fill_graph(g, t.bags)
    return [s for s in minimal_separators(g, cap) if filled.is_clique_mask(mask_of(s))]


_MINOPT_CACHE: dict = {}
_MINOPT_CACHE_MAX = 60_000


def minimalize_optimally(g: Graph, t: TreeDecomposition) -> TreeDecomposition:
    """Smallest-width minimalization of t.

    Candidate bags are the subsets of fill(g, t)'s maximal cliques that pass
    the PMC test; every separator such a bag uses is then a clique of the
    fill, which is exactly the admissibility restriction.  The block
    recurrence over those bags yields the optimum; bags larger than
    OPT_MINIMALIZE_BAG_CAP fall back to the plain minimalization.
    """
    from .pmc import _is_pmc_mask, bt_dp_masks

    ok, report = validate(g, t)
    if not ok:
        raise DecompositionError(f"invalid decomposition: {report}")
    key = (g, frozenset(t.bags))
    hit = _MINOPT_CACHE.get(key)
    if hit is not None:
        return hit
    filled = _fill_graph(g, t.bags)
    plain = minimalize_filled(g, filled)
    result = plain
    target = plain.width()
    # a bag of t that is already a PMC survives every minimalization, so
    # the widest such bag floors what any search could achieve
    forced = max(
        (len(b) - 1 for b in t.bags if _is_pmc_mask(g, mask_of(b))), default=-1
    )
    if target <= forced:
        _MINOPT_CACHE[key] = plain
        return plain
    if g.is_connected() and target >= 1:
        fill_cliques = maximal_cliques_chordal(filled)
        if max(len(c) for c in fill_cliques) <= OPT_MINIMALIZE_BAG_CAP:
            candidates: set[int] = set()
            for clique in fill_cliques:
                base = mask_of(clique)
                # bags of any strictly better decomposition have <= target
                # vertices, so larger subsets cannot help
                sub = base
                while True:
                    if (
                        sub
                        and sub.bit_count() <= target
                        and _is_pmc_mask(g, sub)
                    ):
                        candidates.add(sub)
                    if sub == 0:
                        break
                    sub = (sub - 1) & base
            if candidates:
                tables = bt_dp_masks(g, candidates)
                val = tables.root_value()
                if val < target:
                    best = tables.decompositions(val, 1)[0]
                    result = minimalize_filled(g, _fill_graph(g, best.bags))
    if len(_MINOPT_CACHE) >= _MINOPT_CACHE_MAX:
        _MINOPT_CACHE.clear()
    _MINOPT_CACHE[key] = result
    return result


# -- uncontraction ---------------------------------------------------------------


def merge_duplicate_bags(t: TreeDecomposition) -> TreeDecomposition:
    """Collapse nodes carrying equal bags (duplicates arise from mapping bags
    through a contractor or joining decompositions); keeps the tree valid.

    The dropped node's neighbors reattach to the next node on the path
    toward its twin: every bag on that path contains the shared bag, so the
    occurrence subtrees stay connected and no cycle forms.
    """
    bags = list(t.bags)
    edges = {tuple(e) for e in t.tree_edges}
    while True:
        index = {}
        pair = None
        for i, b in enumerate(bags):
            if b in index:
                pair = (index[b], i)
                break
            index[b] = i
        if pair is None:
            break
        keep, drop = pair
        nbrs = [j for (a, j) in edges if a == drop] + [a for (a, j) in edges if j == drop]
        target = keep if keep in nbrs else _step_toward(edges, drop, keep)
        edges = {e for e in edges if drop not in e}
        for j in nbrs:
            if j != target:
                edges.add(tuple(sorted((target, j))))
        bags.pop(drop)

        def shift(i):
            return i - 1 if i > drop else i

        edges = {tuple(sorted((shift(a), shift(b)))) for (a, b) in edges}
    return TreeDecomposition(bags, sorted(edges))


def _step_toward(edges: set[tuple[int, int]], src: int, dst: int) -> int:
    """First node after src on the unique src-dst tree path."""
    nbrs: dict[int, list[int]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    parent = {src: None}
    queue = [src]
    while queue:
        node = queue.pop()
        if node == dst:
            break
        for j in nbrs.get(node, ()):
            if j not in parent:
                parent[j] = node
                queue.append(j)
    node = dst
    while parent[node] != src:
        node = parent[node]
    return node


def uncontract_td(t: TreeDecomposition, gamma: Contractor) -> TreeDecomposition:
    """Replace every bag X by its preimage under gamma.

    Valid for the uncontracted graph whenever t was valid for the quotient;
    width grows to at most the largest preimage bag minus one.
    """
    m = len(gamma)
    for b in t.bags:
        for w in b:
            if not (1 <= w <= m):
                raise GraphInputError(
                    f"bag vertex {w} outside contracted vertex range 1..{m}"
                )
    out = TreeDecomposition(
        [gamma.preimage_set(b) for b in t.bags], t.tree_edges
    )
    return merge_duplicate_bags(out)
