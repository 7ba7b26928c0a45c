"""Immutable simple graphs with stable 1..n vertex ids, plus contractors.

Vertex sets cross the public API as frozensets of ids.  Internally every
set is a bitmask (bit i-1 stands for vertex i), which is what makes the
separator / clique machinery in the rest of the package fast enough.
Bitmask helpers live here so all modules share one convention.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import ContractorError, GraphInputError


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return frozenset(out)


def bits(mask: int) -> Iterator[int]:
    """Yield vertex ids of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length()
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class Graph:
    """Simple undirected graph on vertices 1..n.

    Immutable after construction; `adj_bits[i]` is the neighbor bitmask of
    vertex i+1.  Self loops and parallel edges are rejected.
    """

    __slots__ = (
        "n",
        "adj_bits",
        "full_mask",
        "_edge_list",
        "_comp_cache",
        "_nbr_cache",
        "_pmc_cache",
    )

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphInputError(f"vertex count must be >= 0, got {n}")
        adj = [0] * n
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphInputError(f"edge ({u},{v}) outside vertex range 1..{n}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            bu, bv = 1 << (u - 1), 1 << (v - 1)
            if adj[u - 1] & bv:
                raise GraphInputError(f"duplicate edge ({u},{v})")
            adj[u - 1] |= bv
            adj[v - 1] |= bu
        self.n = n
        self.adj_bits = tuple(adj)
        self.full_mask = (1 << n) - 1
        self._edge_list: tuple[tuple[int, int], ...] | None = None
        self._comp_cache: dict[int, tuple[int, ...]] = {}
        self._nbr_cache: dict[int, int] = {}
        self._pmc_cache: dict[int, bool] = {}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_masks(cls, adj: list[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g.adj_bits = tuple(adj)
        g.full_mask = (1 << g.n) - 1
        g._edge_list = None
        g._comp_cache = {}
        g._nbr_cache = {}
        g._pmc_cache = {}
        return g

    def with_fill(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with extra edges added (existing ones tolerated)."""
        adj = list(self.adj_bits)
        for u, v in pairs:
            if u == v:
                continue
            adj[u - 1] |= 1 << (v - 1)
            adj[v - 1] |= 1 << (u - 1)
        return Graph.from_masks(adj)

    # -- basic queries ---------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return set_of(self.adj_bits[v - 1])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj_bits[v - 1].bit_count()

    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edge_list is None:
            out = []
            for u in range(1, self.n + 1):
                m = self.adj_bits[u - 1] >> u  # neighbors with id > u
                while m:
                    low = m & -m
                    out.append((u, u + low.bit_length()))
                    m ^= low
            self._edge_list = tuple(out)
        return self._edge_list

    def num_edges(self) -> int:
        return len(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.adj_bits[u - 1] & (1 << (v - 1)))

    def __eq__(self, other):
        if isinstance(other, Graph):
            return self.n == other.n and self.adj_bits == other.adj_bits
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.adj_bits))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges()})"

    def _check_vertex(self, v: int) -> None:
        if not (1 <= v <= self.n):
            raise GraphInputError(f"unknown vertex id {v} (valid: 1..{self.n})")

    def _check_subset(self, mask: int) -> None:
        if mask & ~self.full_mask:
            bad = next(bits(mask & ~self.full_mask))
            raise GraphInputError(f"unknown vertex id {bad} (valid: 1..{self.n})")

    # -- mask-level operations (hot paths) --------------------------------------

    def nbr_mask(self, mask: int) -> int:
        """Open neighborhood of a vertex-set mask."""
        cache = self._nbr_cache
        hit = cache.get(mask)
        if hit is not None:
            return hit
        out = 0
        m = mask
        adj = self.adj_bits
        while m:
            low = m & -m
            out |= adj[low.bit_length() - 1]
            m ^= low
        out &= ~mask
        if len(cache) < 300000:
            cache[mask] = out
        return out

    def components_mask(self, sub: int) -> tuple[int, ...]:
        """Connected components of the induced subgraph on `sub`, as masks.

        Ordered by smallest member.  Cached per graph: the BT recurrences ask
        for the same complements over and over.
        """
        hit = self._comp_cache.get(sub)
        if hit is not None:
            return hit
        comps = []
        rem = sub
        adj = self.adj_bits
        while rem:
            comp = rem & -rem
            frontier = comp
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    low = m & -m
                    nxt |= adj[low.bit_length() - 1]
                    m ^= low
                frontier = nxt & sub & ~comp
                comp |= frontier
            comps.append(comp)
            rem &= ~comp
        result = tuple(comps)
        if len(self._comp_cache) < 200000:
            self._comp_cache[sub] = result
        return result

    def reach_mask(self, seed: int, sub: int) -> int:
        """Vertices of `sub` reachable from `seed & sub` inside g[sub]."""
        comp = seed & sub
        frontier = comp
        adj = self.adj_bits
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= adj[low.bit_length() - 1]
                m ^= low
            frontier = nxt & sub & ~comp
            comp |= frontier
        return comp

    def is_clique_mask(self, mask: int) -> bool:
        m = mask
        adj = self.adj_bits
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if mask & ~(adj[v] | low):
                return False
        return True

    def is_connected_mask(self, sub: int) -> bool:
        if sub == 0:
            return True
        return self.reach_mask(sub & -sub, sub) == sub

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return self.is_connected_mask(self.full_mask)

    def induced(self, vertices: frozenset[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph renumbered 1..|vertices| plus old->new id map."""
        mask = mask_of(vertices)
        self._check_subset(mask)
        old = sorted(vertices)
        old_to_new = {v: i + 1 for i, v in enumerate(old)}
        adj = [0] * len(old)
        for i, v in enumerate(old):
            m = self.adj_bits[v - 1] & mask
            while m:
                low = m & -m
                adj[i] |= 1 << (old_to_new[low.bit_length()] - 1)
                m ^= low
        return Graph.from_masks(adj), old_to_new


# -- spec-surface set operations ------------------------------------------------


def neighborhood(g: Graph, u: frozenset[int] | set[int]) -> frozenset[int]:
    """Open neighborhood N(u): vertices adjacent to u but outside it."""
    mask = mask_of(u)
    g._check_subset(mask)
    return set_of(g.nbr_mask(mask))


def components(g: Graph, u: frozenset[int] | set[int]) -> list[frozenset[int]]:
    """Connected components of g[u], each sorted, ordered by smallest member."""
    mask = mask_of(u)
    g._check_subset(mask)
    return [set_of(c) for c in g.components_mask(mask)]


def is_clique(g: Graph, u: frozenset[int] | set[int]) -> bool:
    mask = mask_of(u)
    g._check_subset(mask)
    return g.is_clique_mask(mask)


class Contractor:
    """Partition of V(g) into connected parts, with both mapping views.

    Parts are stored sorted by smallest member; `mapping[v]` is the 1-based
    part index of vertex v and doubles as the id of the contracted vertex.
    """

    __slots__ = ("parts", "mapping", "_masks")

    def __init__(self, g: Graph, parts: Iterable[Iterable[int]]):
        masks = []
        seen = 0
        for part in parts:
            pm = mask_of(part)
            if pm == 0:
                raise ContractorError("empty part")
            if pm & seen:
                raise ContractorError("parts overlap")
            if pm & ~g.full_mask:
                raise ContractorError("part uses unknown vertex ids")
            if not g.is_connected_mask(pm):
                raise ContractorError(f"part {sorted(set_of(pm))} is not connected")
            seen |= pm
            masks.append(pm)
        if seen != g.full_mask:
            missing = sorted(set_of(g.full_mask & ~seen))
            raise ContractorError(f"parts do not cover vertices {missing}")
        masks.sort(key=lambda m: m & -m)
        self._masks = tuple(masks)
        self.parts = tuple(set_of(m) for m in masks)
        mapping = {}
        for i, m in enumerate(masks):
            for v in bits(m):
                mapping[v] = i + 1
        self.mapping = mapping

    @classmethod
    def identity(cls, g: Graph) -> "Contractor":
        return cls(g, [[v] for v in range(1, g.n + 1)])

    @classmethod
    def single(cls, g: Graph) -> "Contractor":
        """Everything into one part (graph must be connected)."""
        return cls(g, [range(1, g.n + 1)])

    def __len__(self) -> int:
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, Contractor):
            return self._masks == other._masks
        return NotImplemented

    def __hash__(self):
        return hash(self._masks)

    def __repr__(self):
        return f"Contractor({[sorted(p) for p in self.parts]})"

    def part_of(self, v: int) -> int:
        return self.mapping[v]

    def preimage(self, w: int) -> frozenset[int]:
        """Part of the partition contracting to vertex w of the quotient."""
        return self.parts[w - 1]

    def preimage_set(self, u: Iterable[int]) -> frozenset[int]:
        out = 0
        for w in u:
            out |= self._masks[w - 1]
        return set_of(out)

    def preimage_mask(self, umask: int) -> int:
        out = 0
        masks = self._masks
        while umask:
            low = umask & -umask
            out |= masks[low.bit_length() - 1]
            umask ^= low
        return out

    def image_mask(self, vmask: int) -> int:
        out = 0
        for i, m in enumerate(self._masks):
            if m & vmask:
                out |= 1 << i
        return out

    def is_identity(self) -> bool:
        return all(len(p) == 1 for p in self.parts)


def contract(g: Graph, gamma: Contractor) -> Graph:
    """G/gamma on vertex ids 1..len(gamma), simple by construction."""
    k = len(gamma)
    adj = [0] * k
    for u, v in g.edges():
        pu, pv = gamma.mapping[u] - 1, gamma.mapping[v] - 1
        if pu != pv:
            adj[pu] |= 1 << pv
            adj[pv] |= 1 << pu
    return Graph.from_masks(adj)


def contract_edge(g: Graph, e: tuple[int, int]) -> tuple[Graph, Contractor]:
    """Contract one edge; returns (G/e, the 2-vertex-part contractor)."""
    u, v = e
    if not g.has_edge(u, v):
        raise GraphInputError(f"({u},{v}) is not an edge")
    parts = [[u, v]] + [[w] for w in range(1, g.n + 1) if w != u and w != v]
    gamma = Contractor(g, parts)
    return contract(g, gamma), gamma


def compose(g: Graph, outer: Contractor, inner: Contractor) -> Contractor:
    """Contractor of g equivalent to applying `outer` then `inner`.

    `inner` must be a contractor of contract(g, outer).
    """
    if len(outer) != sum(len(p) for p in inner.parts) or any(
        w > len(outer) for p in inner.parts for w in p
    ):
        raise ContractorError("inner contractor does not match outer's quotient")
    parts = [outer.preimage_set(p) for p in inner.parts]
    return Contractor(g, parts)


def quotient_contractor(
    g: Graph, fine: Contractor, coarse: Contractor
) -> Contractor:
    """Contractor of contract(g, fine) that refines `fine` into `coarse`.

    Requires every part of `fine` to lie inside a part of `coarse`; then
    contract(contract(g, fine), result) == contract(g, coarse).
    """
    gf = contract(g, fine)
    part_index: list[int] = []
    for pm in fine._masks:
        hits = {coarse.mapping[v] for v in bits(pm)}
        if len(hits) != 1:
            raise ContractorError("fine contractor does not refine coarse one")
        part_index.append(hits.pop())
    groups: dict[int, list[int]] = {}
    for w, idx in enumerate(part_index, start=1):
        groups.setdefault(idx, []).append(w)
    return Contractor(gf, [groups[i] for i in sorted(groups)])
