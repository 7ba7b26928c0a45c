"""Incremental bottom-up search for feasible blocks at a fixed width target.

A block B is feasible when some partial decomposition of B in g has width
at most k; the search discovers feasible blocks through the same block
recurrence the DP uses, but driven by a priority queue so that a full
decomposition can surface long before the block space is exhausted.  Only
"small" blocks are kept (a block is small when its separator has a larger
full component elsewhere): a rooted-clique-tree argument shows small
blocks plus V(G) suffice to decide feasibility, which is what makes the
exhaustive `finish` pass an exact decision procedure.

State talks to the outside world through PMC sets: `import_pmcs` merges
externally found bags in, `useful_pmcs` exports the bags of the best
decompositions found so far.
"""

from __future__ import annotations

import heapq

from .errors import GraphInputError, StateError
from .graph import Graph, bits, mask_of, set_of
from .pmc import INF, _is_min_sep_mask, _is_pmc_mask, bt_dp_masks


def _order_key(mask: int) -> tuple[int, int]:
    # total order on vertex sets: cardinality, then bitmask as lex proxy
    return (mask.bit_count(), mask)


class BlockSearch:
    """Search state for deciding tw(g) <= k, fed by imported PMC sets."""

    def __init__(self, g: Graph, k: int):
        if k < 0:
            raise GraphInputError(f"width target must be >= 0, got {k}")
        if g.n == 0 or not g.is_connected():
            raise GraphInputError("block search expects a nonempty connected graph")
        self.g = g
        self.k = k
        self.pi: set[int] = set()
        self.feasible: dict[int, int] = {}
        self.full_feasible = False
        self.steps = 0
        self.deadline = None
        self._width: float | None = INF
        self._vertex_seeded = False
        self._leaf_seeded = False
        self._exhausted = False

    # -- observations ----------------------------------------------------------

    def width(self) -> float:
        """tw over the decompositions admitted by the current PMC set."""
        if self._width is None:
            self._width = bt_dp_masks(self.g, self.pi, deadline=self.deadline).root_value()
        return self._width

    def useful_pmcs(self) -> set[frozenset[int]]:
        """Root bags of the partial decompositions of width <= width()."""
        w = self.width()
        if w is INF:
            raise StateError("no full decomposition known yet")
        tables = bt_dp_masks(self.g, self.pi, deadline=self.deadline)
        return {set_of(x) for x in tables.mark_useful(w)}

    def pmc_set(self) -> set[frozenset[int]]:
        return {set_of(x) for x in self.pi}

    # -- imports ----------------------------------------------------------------

    def import_pmcs(self, pmcs) -> "BlockSearch":
        """Merge external PMCs in and refresh the feasible-block table."""
        new = set()
        for x in pmcs:
            xmask = mask_of(x)
            if xmask not in self.pi and xmask not in new:
                if not _is_pmc_mask(self.g, xmask):
                    raise GraphInputError(
                        f"not a potential maximal clique: {sorted(frozenset(x))}"
                    )
                new.add(xmask)
        if not new:
            return self
        self.pi |= new
        self._width = None
        self._exhausted = False
        limit = self.k + 1
        restricted = [x for x in self.pi if x.bit_count() <= limit]
        tables = bt_dp_masks(self.g, restricted, deadline=self.deadline)
        for bmask, val in tables.value.items():
            if val > self.k:
                continue
            if bmask == self.g.full_mask:
                self.full_feasible = True
            elif bmask not in self.feasible:
                smask = tables.sep_of[bmask]
                if self._is_small(bmask, smask):
                    self.feasible[bmask] = smask
        return self

    # -- generation --------------------------------------------------------------

    def improve(self, budget: int) -> "BlockSearch":
        """Run generation largest-block-first until the cumulative step
        counter reaches `budget` (an absolute cap, so repeated calls with a
        growing budget spend the difference)."""
        if budget <= self.steps or self.full_feasible:
            return self
        self._seed_vertices()
        heap = [(-b.bit_count(), -b, b) for b in self.feasible]
        heapq.heapify(heap)
        stop = budget
        while heap and self.steps < stop and not self.full_feasible:
            _, _, b = heapq.heappop(heap)
            self._generate_from(
                b, stop, lambda nb: heapq.heappush(heap, (-nb.bit_count(), -nb, nb))
            )
        return self

    def finish(self) -> bool:
        """Exhaustive generation smallest-first; decides tw(g) <= k exactly."""
        if self.full_feasible:
            return True
        self._seed_vertices()
        self._seed_leaves()
        if not self._exhausted:
            heap = [(b.bit_count(), b) for b in self.feasible]
            heapq.heapify(heap)
            while heap and not self.full_feasible:
                _, b = heapq.heappop(heap)
                self._generate_from(
                    b, None, lambda nb: heapq.heappush(heap, (nb.bit_count(), nb))
                )
            if not self.full_feasible:
                self._exhausted = True
        return self.full_feasible or self.width() <= self.k

    # -- internals ----------------------------------------------------------------

    def _tick(self) -> None:
        self.steps += 1
        if self.deadline is not None and self.steps % 256 == 0:
            self.deadline.check()

    def _is_small(self, bmask: int, smask: int) -> bool:
        key = _order_key(bmask)
        for comp in self.g.components_mask(self.g.full_mask & ~smask):
            if comp != bmask and self.g.nbr_mask(comp) == smask and _order_key(comp) > key:
                return True
        return False

    def _seed_vertices(self) -> None:
        """Feasible single-vertex blocks: {v} with N(v) a minimal separator."""
        if self._vertex_seeded:
            return
        self._vertex_seeded = True
        g = self.g
        for v in range(1, g.n + 1):
            vbit = 1 << (v - 1)
            smask = g.adj_bits[v - 1]
            closed = smask | vbit
            if closed.bit_count() > self.k + 1:
                continue
            if not _is_min_sep_mask(g, smask):
                continue
            if not _is_pmc_mask(g, closed):
                continue
            if self._is_small(vbit, smask):
                if vbit not in self.feasible:
                    self.feasible[vbit] = smask
                    self.pi.add(closed)
                    self._width = None

    def _seed_leaves(self) -> None:
        """All blocks whose closed neighborhood is a small-enough PMC.

        These are exactly the blocks with a single-bag partial decomposition
        (no child components), the base cases of the recurrence.  Connected
        sets are grown breadth-first; |N[B]| only grows with B, so the size
        cap prunes soundly.
        """
        if self._leaf_seeded:
            return
        self._leaf_seeded = True
        g = self.g
        limit = self.k + 1
        seen: set[int] = set()
        frontier: list[tuple[int, int]] = []
        for v in range(1, g.n + 1):
            vbit = 1 << (v - 1)
            closed = vbit | g.adj_bits[v - 1]
            if closed.bit_count() <= limit:
                seen.add(vbit)
                frontier.append((vbit, closed))
        while frontier:
            bmask, closed = frontier.pop()
            self._tick()
            self._try_leaf(bmask, closed)
            grow = closed & ~bmask
            while grow:
                low = grow & -grow
                grow ^= low
                nb = bmask | low
                if nb in seen:
                    continue
                nclosed = closed | g.adj_bits[low.bit_length() - 1]
                if nclosed.bit_count() <= limit:
                    seen.add(nb)
                    frontier.append((nb, nclosed))

    def _try_leaf(self, bmask: int, closed: int) -> None:
        g = self.g
        if not _is_pmc_mask(g, closed):
            return
        if bmask == g.full_mask:
            self.full_feasible = True
            self.pi.add(closed)
            self._width = None
            return
        smask = closed & ~bmask
        comps = g.components_mask(g.full_mask & ~smask)
        key = _order_key(bmask)
        small = False
        fulls = 0
        for comp in comps:
            if g.nbr_mask(comp) == smask:
                fulls += 1
                if comp != bmask and _order_key(comp) > key:
                    small = True
        if fulls < 2 or not small:
            return
        if bmask not in self.feasible:
            self.feasible[bmask] = smask
            self.pi.add(closed)
            self._width = None

    def search_new_feasible(self, b: frozenset[int]) -> list[frozenset[int]]:
        """Public wrapper: new feasible blocks combining b (as largest member)."""
        bmask = mask_of(b)
        if bmask not in self.feasible:
            raise StateError(f"block {sorted(b)} is not a known feasible block")
        found: list[int] = []
        self._generate_from(bmask, None, found.append)
        return [set_of(m) for m in found]

    def _generate_from(self, bmask: int, stop: int | None, push) -> None:
        """Enumerate candidate caps X over N(b), disjoint from b.

        Every vertex subset X with N(b) <= X <= V - b and |X| <= k+1 is
        visited unless pruned; pruning keeps only states whose nonadjacent
        pairs still have a common witness component, which is monotone in X.
        Each PMC found is combined with known feasible blocks through the
        recurrence.
        """
        g = self.g
        smask = self.feasible[bmask]
        if smask.bit_count() > self.k + 1:
            return
        pool = g.full_mask & ~bmask & ~smask
        limit = self.k + 1

        def visit(xmask: int, pool_rest: int) -> bool:
            self._tick()
            if stop is not None and self.steps >= stop:
                return False
            ok_pmc, fixable = self._pmc_status(xmask)
            if not fixable:
                return True
            if ok_pmc:
                self._try_caps(bmask, xmask, push)
                if self.full_feasible:
                    return False
            if xmask.bit_count() >= limit:
                return True
            rest = pool_rest
            while rest:
                low = rest & -rest
                rest ^= low
                if not visit(xmask | low, rest):
                    return False
            return True

        visit(smask, pool)

    def _pmc_status(self, xmask: int) -> tuple[bool, bool]:
        """(is a PMC now, cliquishness still fixable by adding vertices)."""
        g = self.g
        full_comp = False
        cover: dict[int, int] = {}
        for comp in g.components_mask(g.full_mask & ~xmask):
            nb = g.nbr_mask(comp)
            if nb == xmask:
                full_comp = True
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
            if xmask & ~(g.adj_bits[v] | low | cover.get(v, 0)):
                return False, False
        return not full_comp, True

    def _try_caps(self, bmask: int, xmask: int, push) -> None:
        """Apply the recurrence with cap X; register any new feasible block."""
        g = self.g
        full = g.full_mask
        comps = g.components_mask(full & ~xmask)
        key = _order_key(bmask)
        feas = self.feasible
        # the whole graph: all components must be feasible, b the largest
        all_ok = True
        best = None
        for c in comps:
            if c != bmask and c not in feas:
                all_ok = False
                break
            if best is None or _order_key(c) > best:
                best = _order_key(c)
        if all_ok and best == key:
            self.full_feasible = True
            self.pi.add(xmask)
            self._width = None
            return
        seen_here: set[int] = set()
        for d in comps:
            if d == bmask:
                continue
            sep = g.nbr_mask(d)
            seed = xmask & ~sep
            if seed == 0:
                continue
            bnew = g.reach_mask(seed & -seed, full & ~sep)
            if (seed & ~bnew) or bnew in seen_here:
                continue
            seen_here.add(bnew)
            if not (bnew & bmask):
                continue
            if g.nbr_mask(bnew) != sep:
                continue
            if bnew in feas:
                continue
            inner_ok = True
            largest = None
            for c in comps:
                if c & bnew == c:
                    if c != bmask and c not in feas:
                        inner_ok = False
                        break
                    ck = _order_key(c)
                    if largest is None or ck > largest:
                        largest = ck
            if not inner_ok or largest != key:
                continue
            if not self._is_small(bnew, sep):
                continue
            feas[bnew] = sep
            self.pi.add(xmask)
            self._width = None
            push(bnew)
