"""Minimal separators, potential maximal cliques, blocks, and the weighted
Bouchitte-Todinca dynamic programming over an arbitrary PMC set.

A vertex set X is a potential maximal clique (PMC) iff (a) no component C
of G-X has N(C) = X and (b) every nonadjacent pair of X is covered by the
neighborhood of a common component.  Given a set Pi of PMCs, the best
tree-decomposition using only bags from Pi follows the block recurrence

    best(B) = min over caps X of B:  max(w(X), max over C in C(B-X) best(C))

where a block is a connected set whose neighborhood is a minimal separator
(or the whole vertex set), a cap of B is a PMC X with N(B) <= X <= B+N(B),
and w is an arbitrary bag weight (cardinality minus one by default).
Blocks are generated constructively from each X: for every component D of
G-X, the component of G-N(D) containing X-N(D) is a block capped by X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

from .decomposition import TreeDecomposition
from .errors import CapExceededError, GraphInputError
from .graph import Graph, bits, mask_of, set_of

INF = math.inf

WeightFn = Callable[[frozenset[int]], int]


@dataclass(frozen=True)
class Block:
    """Connected component together with its separator neighborhood."""

    component: frozenset[int]
    separator: frozenset[int]

    @classmethod
    def of(cls, g: Graph, component: Iterable[int]) -> "Block":
        comp = frozenset(component)
        mask = mask_of(comp)
        if not g.is_connected_mask(mask):
            raise GraphInputError(f"block component {sorted(comp)} is not connected")
        return cls(comp, set_of(g.nbr_mask(mask)))


def is_minimal_separator(g: Graph, s: Iterable[int]) -> bool:
    """True iff g minus s has at least two components with full neighborhood s."""
    smask = mask_of(s)
    g._check_subset(smask)
    return _is_min_sep_mask(g, smask)


def _is_min_sep_mask(g: Graph, smask: int) -> bool:
    if smask == 0 or smask == g.full_mask:
        return False
    full = 0
    for comp in g.components_mask(g.full_mask & ~smask):
        if g.nbr_mask(comp) == smask:
            full += 1
            if full >= 2:
                return True
    return False


def minimal_separators(g: Graph, cap: int = 2_000_000) -> list[frozenset[int]]:
    """All minimal separators of a connected graph.

    Neighborhood-expansion enumeration: seed with N(C) for components C of
    G - N[v], then close under S -> N(C) for components C of G - (S u N(x)),
    x in S.  Candidates are filtered through the two-full-components test,
    so the output is sound; completeness of the expansion is the classical
    result.  Raises CapExceededError beyond `cap` separators.
    """
    if not g.is_connected():
        raise GraphInputError("minimal separator enumeration expects a connected graph")
    found: set[int] = set()
    stack: list[int] = []

    def consider(smask: int) -> None:
        if smask and smask not in found and _is_min_sep_mask(g, smask):
            found.add(smask)
            if len(found) > cap:
                raise CapExceededError(f"more than {cap} minimal separators")
            stack.append(smask)

    for v in range(1, g.n + 1):
        closed = g.adj_bits[v - 1] | (1 << (v - 1))
        for comp in g.components_mask(g.full_mask & ~closed):
            consider(g.nbr_mask(comp))
    while stack:
        s = stack.pop()
        for x in bits(s):
            blocked = s | g.adj_bits[x - 1]
            for comp in g.components_mask(g.full_mask & ~blocked):
                consider(g.nbr_mask(comp))
    return sorted((set_of(m) for m in found), key=sorted)


def is_pmc(g: Graph, x: Iterable[int]) -> bool:
    """Local PMC test: no full component plus cliquishness."""
    xmask = mask_of(x)
    g._check_subset(xmask)
    return _is_pmc_mask(g, xmask)


def _is_pmc_mask(g: Graph, xmask: int) -> bool:
    if xmask == 0:
        return False
    cache = g._pmc_cache
    hit = cache.get(xmask)
    if hit is not None:
        return hit
    out = _is_pmc_mask_uncached(g, xmask)
    if len(cache) < 400000:
        cache[xmask] = out
    return out


def _is_pmc_mask_uncached(g: Graph, xmask: int) -> bool:
    adj = g.adj_bits
    cover = {}
    for comp in g.components_mask(g.full_mask & ~xmask):
        nb = g.nbr_mask(comp)
        if nb == xmask:
            return False
        m = nb
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            cover[v] = cover.get(v, 0) | nb
    m = xmask
    while m:
        low = m & -m
        m ^= low
        v = low.bit_length() - 1
        if xmask & ~(adj[v] | low | cover.get(v, 0)):
            return False
    return True


ALL_PMCS_VERTEX_CAP = 16


def all_pmcs(g: Graph, cap: int = ALL_PMCS_VERTEX_CAP) -> set[frozenset[int]]:
    """Exact PMC set by filtering every vertex subset; test-oracle scale only."""
    if g.n > cap:
        raise CapExceededError(f"all_pmcs limited to {cap} vertices, got {g.n}")
    out = set()
    for xmask in range(1, g.full_mask + 1):
        if _is_pmc_mask(g, xmask):
            out.add(set_of(xmask))
    return out


def caps(g: Graph, pi: Iterable[frozenset[int]], b: Block) -> list[frozenset[int]]:
    """PMCs of pi that can be the root bag of a partial decomposition of b."""
    bmask = mask_of(b.component)
    smask = mask_of(b.separator)
    region = bmask | smask
    out = []
    for x in pi:
        xmask = mask_of(x)
        if xmask & smask == smask and xmask & ~region == 0:
            out.append(x)
    return sorted(out, key=sorted)


# -- weighted BT dynamic programming ---------------------------------------------


@dataclass
class BtResult:
    value: float
    decompositions: list[TreeDecomposition]
    table: dict[Block, float] = field(default_factory=dict)


class BtTables:
    """Mask-level DP state; reusable for tracebacks and useful-bag marking."""

    __slots__ = ("g", "value", "sep_of", "caps_of", "comps_of_cap", "weight")

    def __init__(self, g, value, sep_of, caps_of, comps_of_cap, weight):
        self.g = g
        self.value = value
        self.sep_of = sep_of
        self.caps_of = caps_of
        self.comps_of_cap = comps_of_cap
        self.weight = weight

    def root_value(self) -> float:
        return self.value.get(self.g.full_mask, INF)

    def usable_caps(self, bmask: int, bound: float) -> list[int]:
        out = []
        for x in self.caps_of.get(bmask, ()):
            if self.weight[x] > bound:
                continue
            if all(
                self.value.get(d, INF) <= bound
                for d in self.comps_of_cap[x]
                if d & bmask == d
            ):
                out.append(x)
        return out

    def mark_useful(self, bound: float) -> set[int]:
        """Caps reachable in some admitted decomposition of width <= bound."""
        full = self.g.full_mask
        marked: set[int] = set()
        seen: set[int] = set()
        stack = [full]
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            for x in self.usable_caps(b, bound):
                marked.add(x)
                for d in self.comps_of_cap[x]:
                    if d & b == d and d not in seen:
                        stack.append(d)
        return marked

    def decompositions(
        self, bound: float, limit: int, prefer=None
    ) -> list[TreeDecomposition]:
        """Up to `limit` distinct decompositions of width exactly <= bound.

        `prefer` optionally orders the caps tried at each block, which
        biases which optima get collected when `limit` truncates.
        """
        full = self.g.full_mask
        if self.value.get(full, INF) > bound:
            return []
        memo: dict[int, list] = {}

        def build(bmask: int) -> list:
            got = memo.get(bmask)
            if got is not None:
                return got
            out = []
            usable = self.usable_caps(bmask, bound)
            if prefer is not None:
                usable.sort(key=prefer)
            for x in usable:
                inner = [d for d in self.comps_of_cap[x] if d & bmask == d]
                child_lists = [build(d) for d in inner]
                if any(not lst for lst in child_lists):
                    continue
                for combo in product(*child_lists):
                    out.append((x, combo))
                    if len(out) >= limit:
                        memo[bmask] = out
                        return out
            memo[bmask] = out
            return out

        result = []
        seen_bagsets = set()
        for tree in build(full):
            bags: list[int] = []
            edges: list[tuple[int, int]] = []

            def walk(node, parent_idx):
                x, children = node
                idx = len(bags)
                bags.append(x)
                if parent_idx is not None:
                    edges.append((parent_idx, idx))
                for ch in children:
                    walk(ch, idx)

            walk(tree, None)
            key = frozenset(bags)
            if key in seen_bagsets:
                continue
            seen_bagsets.add(key)
            result.append(
                TreeDecomposition([set_of(b) for b in bags], edges)
            )
            if len(result) >= limit:
                break
        return result


def bt_dp_masks(
    g: Graph,
    pi_masks: Iterable[int],
    weight_mask: Callable[[int], float] | None = None,
    deadline=None,
) -> BtTables:
    """Evaluate the block recurrence over the given PMC masks."""
    full = g.full_mask
    caps_of: dict[int, list[int]] = {full: []}
    sep_of: dict[int, int] = {full: 0}
    comps_of_cap: dict[int, tuple[int, ...]] = {}
    weight: dict[int, float] = {}
    ticker = 0
    for x in sorted(set(pi_masks)):
        ticker += 1
        if deadline is not None and ticker % 64 == 0:
            deadline.check()
        comps = g.components_mask(full & ~x)
        comps_of_cap[x] = comps
        weight[x] = (x.bit_count() - 1) if weight_mask is None else weight_mask(x)
        caps_of[full].append(x)
        seen_here = set()
        for d in comps:
            s = g.nbr_mask(d)
            seed = x & ~s
            if seed == 0:
                continue
            b = g.reach_mask(seed & -seed, full & ~s)
            if (seed & ~b) or b in seen_here:
                continue
            seen_here.add(b)
            if g.nbr_mask(b) != s:
                continue
            if b not in sep_of:
                sep_of[b] = s
                caps_of[b] = []
            caps_of[b].append(x)
    value: dict[int, float] = {}
    for b in sorted(sep_of, key=lambda m: (m.bit_count(), m)):
        best = INF
        for x in caps_of[b]:
            worst = weight[x]
            if worst >= best:
                continue
            for d in comps_of_cap[x]:
                if d & b == d:
                    dv = value.get(d, INF)
                    if dv > worst:
                        worst = dv
                        if worst >= best:
                            break
            if worst < best:
                best = worst
        value[b] = best
    return BtTables(g, value, sep_of, caps_of, comps_of_cap, weight)


def bt_dp(
    g: Graph,
    pi: Iterable[frozenset[int]],
    w: WeightFn | None = None,
    max_solutions: int = 16,
    deadline=None,
) -> BtResult:
    """Best decomposition over bags from pi under bag weight w.

    Value is infinity when pi admits no full decomposition.  Up to
    `max_solutions` distinct optimal decompositions are returned.
    """
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("bt_dp expects a nonempty connected graph")
    pi_masks = [mask_of(x) for x in pi]
    weight_mask = None if w is None else (lambda m: w(set_of(m)))
    tables = bt_dp_masks(g, pi_masks, weight_mask, deadline=deadline)
    val = tables.root_value()
    decomps = [] if val is INF else tables.decompositions(val, max_solutions)
    table = {
        Block(set_of(b), set_of(tables.sep_of[b])): v
        for b, v in tables.value.items()
    }
    return BtResult(val, decomps, table)


def tw_pi(g: Graph, pi: Iterable[frozenset[int]]) -> float:
    """Smallest width of a decomposition with all bags in pi (inf if none)."""
    return bt_dp_masks(g, [mask_of(x) for x in pi]).root_value()
