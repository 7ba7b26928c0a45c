"""The certifying treewidth solver.

Outer loop: start from the greedy upper bound and repeatedly ask whether
the width can drop by one.  The decision procedure recurses on edge
contractions: tw(G/e) <= tw(G) <= tw(G/e) + 1, so a NO certificate for any
contraction settles the question, while YES certificates (PMC sets of the
contracted graph) are pulled back through the contraction and fed to the
block search on G.  If neither resolves the call, an exhaustive block
search settles it, and a NO at that point makes G itself the obstruction:
every edge contraction of G was already shown to stay within the target.

A solved instance yields a Certificate: an optimal decomposition plus a
minimal contraction obstruction with the contractor witnessing it.

Speedups: safe separators (almost-clique separators and rooted-contractor
collapses) both as preprocessing and inside the recursion, deficiency-based
edge ordering, and suppressed edges (a contraction already covered by an
ancestor's result imports its certificate instead of recursing).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .decomposition import (
    TreeDecomposition,
    _fill_graph,
    greedy_td,
    merge_duplicate_bags,
    minimal_triangulation_inside,
    minimalize,
    validate,
)
from .errors import GraphInputError, SolveTimeout, StateError
from .graph import (
    Contractor,
    Graph,
    bits,
    compose,
    contract,
    contract_edge,
    mask_of,
    quotient_contractor,
    set_of,
)
from .pmc import INF, _is_min_sep_mask, bt_dp_masks
from .search import BlockSearch
from .transfer import contract_pmcs, uncontract_pmcs

log = logging.getLogger(__name__)


class Deadline:
    """Cooperative wall-clock deadline checked inside solver loops."""

    __slots__ = ("expires",)

    def __init__(self, seconds: float | None):
        self.expires = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self.expires is not None and time.monotonic() > self.expires:
            raise SolveTimeout("solve deadline expired")

    def remaining(self) -> float | None:
        if self.expires is None:
            return None
        return self.expires - time.monotonic()


@dataclass
class SolverConfig:
    unit_budget: int = 1000
    max_solutions: int = 16
    use_safe_separators: bool = True
    side_cap: int = 14
    heuristic_budget: int = 2000
    seed: int | None = None
    timeout_s: float | None = None
    check_invariants: bool = False  # slow; verifies transfer bounds in-flight


@dataclass(frozen=True)
class Certificate:
    """Optimal decomposition plus minimal contraction obstruction."""

    width: int
    decomposition: TreeDecomposition
    obstruction: Graph
    witness: Contractor


@dataclass
class DecideResult:
    answer: bool
    pmcs: set[frozenset[int]] | None = None
    obstruction: Graph | None = None
    witness: Contractor | None = None


class _Frame:
    """Per-call record of edges whose contractions are known feasible."""

    __slots__ = ("graph", "records")

    def __init__(self, graph: Graph):
        self.graph = graph
        self.records: dict[tuple[int, int], set[frozenset[int]]] = {}


@dataclass
class _Runtime:
    cfg: SolverConfig
    deadline: Deadline
    rng: Random | None
    stats: dict = field(default_factory=dict)

    def bump(self, key: str) -> None:
        self.stats[key] = self.stats.get(key, 0) + 1


# -- edge ordering (deficiency heuristic) -----------------------------------------


def _nonadjacent_pairs(g: Graph, mask: int) -> int:
    cnt = 0
    m = mask
    while m:
        low = m & -m
        m ^= low
        cnt += (mask & ~g.adj_bits[low.bit_length() - 1] & ~low).bit_count()
    return cnt // 2


def edge_value(g: Graph, u: int, v: int) -> Fraction:
    """Contraction preference: 0 when one endpoint's remaining neighborhood
    is a clique (contraction then provably preserves the width)."""
    du = g.adj_bits[u - 1].bit_count()
    dv = g.adj_bits[v - 1].bit_count()
    defic_uv = _nonadjacent_pairs(g, g.adj_bits[v - 1] & ~(1 << (u - 1)))
    defic_vu = _nonadjacent_pairs(g, g.adj_bits[u - 1] & ~(1 << (v - 1)))
    return min(Fraction(defic_uv, dv), Fraction(defic_vu, du))


def order_edges(g: Graph, rng: Random | None = None) -> list[tuple[int, int]]:
    """Edges sorted by nondecreasing deficiency value, canonical ties.

    With an rng, ties are shuffled within their value group.
    """
    groups: dict[Fraction, list[tuple[int, int]]] = {}
    for u, v in g.edges():
        groups.setdefault(edge_value(g, u, v), []).append((u, v))
    out = []
    for val in sorted(groups):
        block = groups[val]
        if rng is not None:
            rng.shuffle(block)
        out.extend(block)
    return out


# -- clique lower bound and its obstruction ---------------------------------------


def greedy_clique(g: Graph) -> frozenset[int]:
    """A large clique found greedily; |clique| - 1 lower-bounds tw(g)."""
    best = 0
    best_cnt = 0
    for v in range(1, g.n + 1):
        clique = 1 << (v - 1)
        cand = g.adj_bits[v - 1]
        while cand:
            u = max(bits(cand), key=lambda w: ((g.adj_bits[w - 1] & cand).bit_count(), -w))
            clique |= 1 << (u - 1)
            cand &= g.adj_bits[u - 1]
        if clique.bit_count() > best_cnt:
            best = clique
            best_cnt = clique.bit_count()
    return set_of(best)


def clique_obstruction(g: Graph, clique: frozenset[int]) -> tuple[Graph, Contractor]:
    """Contract a connected g onto a clique: yields the complete graph K_t.

    Vertices are grown outward from the clique in rounds, so every part is
    connected and contains exactly one clique vertex.
    """
    seeds = sorted(clique)
    owner = {v: i for i, v in enumerate(seeds)}
    frontier = list(seeds)
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(set_of(g.adj_bits[v - 1])):
                if u not in owner:
                    owner[u] = owner[v]
                    nxt.append(u)
        frontier = nxt
    parts: dict[int, list[int]] = {}
    for v, i in owner.items():
        parts.setdefault(i, []).append(v)
    gamma = Contractor(g, [parts[i] for i in sorted(parts)])
    return contract(g, gamma), gamma


# -- safe separators ---------------------------------------------------------------


@dataclass
class SplitLeaf:
    """One safe-separator subproblem, realized as a contraction of the root.

    `roots[w - 1]` is the root-graph vertex that leaf vertex w stands for
    (the anchor of its contracted part); distinct parts have distinct
    anchors, so relabeling solved bags through `roots` preserves widths.
    A pre `solved` decomposition (in root ids) marks a side piece that needs
    no recursion; such leaves are not contractions of the root, so they
    carry a `fallback` clique witness (split-time graph, its contractor from
    the root, clique vertices) for the case where they alone attain the
    final width.
    """

    graph: Graph
    to_leaf: Contractor | None
    roots: tuple[int, ...]
    boundary: list[frozenset[int]] = field(default_factory=list)
    solved: TreeDecomposition | None = None
    fallback: tuple[Graph, Contractor, frozenset[int]] | None = None


@dataclass
class SplitPlan:
    graph: Graph
    leaves: list[SplitLeaf]
    joins: list[tuple[int, int, frozenset[int]]]  # leaf indices plus separator in root ids

    def is_trivial(self) -> bool:
        return len(self.leaves) == 1 and self.leaves[0].solved is None


def _triangulation_separators(g: Graph) -> list[frozenset[int]]:
    """Minimal separators of a greedy minimal triangulation of g."""
    td = greedy_td(g)
    h = minimal_triangulation_inside(g, _fill_graph(g, td.bags))
    tree = _clique_tree_edges(h)
    seps = {b1 & b2 for b1, b2 in tree}
    return sorted((s for s in seps if s), key=lambda s: (len(s), sorted(s)))


def _clique_tree_edges(h: Graph) -> list[tuple[frozenset[int], frozenset[int]]]:
    from .decomposition import clique_tree

    t = clique_tree(h)
    return [(t.bags[a], t.bags[b]) for a, b in t.tree_edges]


def _rooted_contractor_parts(
    g: Graph, cmask: int, smask: int
) -> list[frozenset[int]] | None:
    """Partition of C u S into connected parts, one S-vertex each, whose
    contraction of g[C u S] is complete; greedy assignment, None on failure."""
    seeds = sorted(bits(smask))
    part = {s: 1 << (s - 1) for s in seeds}
    unassigned = cmask
    progress = True
    while unassigned and progress:
        progress = False
        for s in sorted(seeds, key=lambda x: part[x].bit_count()):
            grab = g.nbr_mask(part[s]) & unassigned
            if grab:
                low = grab & -grab
                part[s] |= low
                unassigned &= ~low
                progress = True
    if unassigned:
        return None
    masks = [part[s] for s in seeds]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if not (g.nbr_mask(masks[i]) & masks[j]):
                return None
    return [set_of(m) for m in masks]


def _side_graph(g: Graph, cmask: int, smask: int) -> tuple[Graph, dict[int, int]]:
    sub, old_to_new = g.induced(set_of(cmask | smask))
    filled = sub.with_fill(
        [
            (old_to_new[a], old_to_new[b])
            for a in bits(smask)
            for b in bits(smask)
            if a < b
        ]
    )
    return filled, old_to_new


def find_safe_contractor(
    g: Graph, lb: int, cfg: SolverConfig, deadline: Deadline | None = None
):
    """Search for a rooted-contractor safe separator (theorem condition 2).

    Returns (gamma, side_td, smask, roots) where contract(g, gamma) is
    (g - C) u K(S), side_td is a width <= lb decomposition of
    g[C u S] u K(S) in root-graph ids, or None.  Soundness only needs the
    exact side check, so failures of the heuristic merely lose a shortcut.
    """
    if g.n < 3:
        return None
    budget = cfg.heuristic_budget
    try:
        seps = _triangulation_separators(g)
    except GraphInputError:
        return None
    for s in seps:
        smask = mask_of(s)
        if not _is_min_sep_mask(g, smask):
            continue
        for cmask in g.components_mask(g.full_mask & ~smask):
            if deadline is not None:
                deadline.check()
            budget -= 1
            if budget <= 0:
                return None
            if g.nbr_mask(cmask) != smask:
                continue
            if (cmask | smask).bit_count() > cfg.side_cap:
                continue
            if (cmask | smask) == g.full_mask:
                continue
            parts = _rooted_contractor_parts(g, cmask, smask)
            if parts is None:
                continue
            side, old_to_new = _side_graph(g, cmask, smask)
            if len(greedy_clique(side)) - 1 > lb:
                continue
            bs = BlockSearch(side, lb)
            bs.deadline = deadline
            if not bs.finish():
                continue
            tables = bt_dp_masks(side, bs.pi)
            local_td = tables.decompositions(tables.root_value(), 1)[0]
            new_to_old = {n: o for o, n in old_to_new.items()}
            side_td = TreeDecomposition(
                [frozenset(new_to_old[x] for x in bag) for bag in local_td.bags],
                local_td.tree_edges,
            )
            outside = [
                [v] for v in range(1, g.n + 1) if not ((1 << (v - 1)) & (cmask | smask))
            ]
            gamma = Contractor(g, [sorted(p) for p in parts] + outside)
            # anchor of a rooted part is its unique S vertex
            roots = tuple(
                min(set_of(mask_of(p) & smask)) if (mask_of(p) & smask) else min(p)
                for p in gamma.parts
            )
            return gamma, side_td, smask, roots
    return None


def stitch_certificate(
    g: Graph,
    pi: set[frozenset[int]],
    gamma: Contractor,
    roots: tuple[int, ...],
    side_td: TreeDecomposition,
    sep: frozenset[int],
    k: int,
) -> set[frozenset[int]]:
    """Combine a certificate of the collapsed graph with the side piece.

    pi certifies tw <= k for contract(g, gamma); the side decomposition has
    width <= k.  Relabeling both through the part anchors and joining at a
    bag containing the separator gives a width <= k decomposition of g,
    whose minimalized bags are PMCs of g.
    """
    tables = bt_dp_masks(contract(g, gamma), [mask_of(x) for x in pi])
    val = tables.root_value()
    if val is INF or val > k:
        raise StateError("certificate does not reach the target width")
    t1 = tables.decompositions(val, 1)[0]
    relabeled = TreeDecomposition(
        [frozenset(roots[w - 1] for w in bag) for bag in t1.bags], t1.tree_edges
    )
    combined = _join_at_separator(relabeled, side_td, sep)
    ok, report = validate(g, combined)
    if not ok:
        raise StateError(f"stitched decomposition invalid: {report}")
    result = minimalize(g, combined)
    if result.width() > k:
        raise StateError("stitched decomposition exceeds the target width")
    return set(result.bags)


def _join_at_separator(
    t1: TreeDecomposition, t2: TreeDecomposition, sep: frozenset[int]
) -> TreeDecomposition:
    i = next(idx for idx, b in enumerate(t1.bags) if sep <= b)
    j = next(idx for idx, b in enumerate(t2.bags) if sep <= b)
    off = len(t1.bags)
    bags = list(t1.bags) + list(t2.bags)
    edges = list(t1.tree_edges) + [(a + off, b + off) for a, b in t2.tree_edges]
    edges.append((i, j + off))
    return merge_duplicate_bags(TreeDecomposition(bags, edges))


def preprocess_safe_separators(g: Graph, cfg: SolverConfig | None = None) -> SplitPlan:
    """Split g along safe separators of a fixed minimal triangulation.

    Recursively: find an almost-clique minimal separator (condition 1) or a
    rooted-contractor collapse (condition 2) and split; every produced leaf
    is a contraction of g, so certificates compose back.  With no safe
    separator the plan holds g itself.
    """
    cfg = cfg or SolverConfig()
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("safe separator preprocessing expects a connected graph")
    plan = SplitPlan(
        g,
        [SplitLeaf(g, Contractor.identity(g), tuple(range(1, g.n + 1)))],
        [],
    )
    changed = True
    while changed:
        changed = False
        for idx, leaf in enumerate(plan.leaves):
            if leaf.solved is not None or leaf.graph.n < 3:
                continue
            split = _split_once(leaf.graph, cfg)
            if split is not None:
                _apply_split(plan, idx, split)
                changed = True
                break
    return plan


def _split_once(g: Graph, cfg: SolverConfig):
    """One safe split of g, or None: (kind, data) with leaf constructions.

    The rooted-contractor condition needs a lower bound on tw of *this*
    graph, so the clique bound is taken fresh from g.
    """
    try:
        seps = _triangulation_separators(g)
    except GraphInputError:
        return None
    for s in seps:
        smask = mask_of(s)
        if not _is_min_sep_mask(g, smask):
            continue
        ac = _almost_clique_vertex(g, smask)
        if ac is not None:
            return ("cond1", smask, ac)
    clique = greedy_clique(g)
    found = find_safe_contractor(g, len(clique) - 1, cfg)
    if found is not None:
        return ("cond2", found, clique)
    return None


def _almost_clique_vertex(g: Graph, smask: int) -> int | None:
    for v in bits(smask):
        if g.is_clique_mask(smask & ~(1 << (v - 1))):
            return v
    return None


def _cond1_leaves(g: Graph, smask: int, v: int) -> list[tuple[Contractor, tuple[int, ...]]]:
    """Per-component contractions for an almost-clique separator S = S0 + v.

    For target component D, every other component adjacent to v joins one
    part rooted at v (together with any full component, which makes the
    merged vertex adjacent to all of S); remaining components collapse onto
    an arbitrary separator neighbor.  The quotient keeps D u S intact and
    carries K(S).
    """
    comps = g.components_mask(g.full_mask & ~smask)
    out = []
    vbit = 1 << (v - 1)
    for dmask in comps:
        anchor: dict[int, int] = {}
        for other in comps:
            if other == dmask:
                continue
            root = v if (g.nbr_mask(other) & vbit) else min(bits(g.nbr_mask(other)))
            anchor[other] = root
        parts: dict[int, int] = {}
        for other, root in anchor.items():
            parts[root] = parts.get(root, 1 << (root - 1)) | other
        used = 0
        for m in parts.values():
            used |= m
        part_list = [set_of(m) for m in parts.values()]
        for w in bits(g.full_mask & ~used):
            part_list.append(frozenset([w]))
        gamma = Contractor(g, part_list)
        roots = []
        for p in gamma.parts:
            if len(p) == 1:
                roots.append(next(iter(p)))
            else:
                roots.append(next(r for r, m in parts.items() if set_of(m) == p))
        out.append((gamma, tuple(roots)))
    return out


def _apply_split(plan: SplitPlan, idx: int, split) -> None:
    leaf = plan.leaves[idx]
    g = leaf.graph
    if split[0] == "cond1":
        _, smask, v = split
        pieces = _cond1_leaves(g, smask, v)
        sep_local = set_of(smask)
    else:
        gamma, side_td, smask, roots = split[1]
        pieces = [(gamma, roots)]
        sep_local = set_of(smask)
    new_leaves: list[SplitLeaf] = []
    for gamma, roots in pieces:
        sub = contract(g, gamma)
        to_leaf = (
            None
            if leaf.to_leaf is None
            else compose(plan.graph, leaf.to_leaf, gamma)
        )
        global_roots = tuple(leaf.roots[r - 1] for r in roots)
        boundary = [frozenset(_local_of(roots, sep_local))]
        new_leaves.append(SplitLeaf(sub, to_leaf, global_roots, boundary))
    if split[0] == "cond2":
        side_global = TreeDecomposition(
            [frozenset(leaf.roots[v - 1] for v in bag) for bag in split[1][1].bags],
            split[1][1].tree_edges,
        )
        side_leaf = SplitLeaf(
            Graph(0),
            None,
            (),
            [frozenset(leaf.roots[v - 1] for v in sep_local)],
            solved=side_global,
            fallback=(g, leaf.to_leaf, split[2]),
        )
        new_leaves.append(side_leaf)
    sep_global = frozenset(leaf.roots[v - 1] for v in sep_local)
    base = len(plan.leaves)
    first_new = idx
    indices = [idx] + list(range(base, base + len(new_leaves) - 1))
    plan.leaves[idx] = new_leaves[0]
    plan.leaves.extend(new_leaves[1:])
    # old joins touching idx must move to a new leaf containing their separator
    for jpos, (a, b, sep) in enumerate(plan.joins):
        if idx in (a, b):
            target = _leaf_containing(plan, indices, sep)
            plan.joins[jpos] = (
                (target, b, sep) if a == idx else (a, target, sep)
            )
    for li in indices[1:]:
        plan.joins.append((indices[0], li, sep_global))


def _local_of(roots: tuple[int, ...], vertices) -> list[int]:
    inv = {r: w for w, r in enumerate(roots, start=1)}
    return [inv[v] for v in vertices if v in inv]


def _leaf_containing(plan: SplitPlan, candidates: list[int], sep: frozenset[int]) -> int:
    for li in candidates:
        leaf = plan.leaves[li]
        pool = set(leaf.roots) if leaf.solved is None else set().union(*leaf.solved.bags)
        if sep <= pool:
            return li
    raise StateError(f"no split leaf carries separator {sorted(sep)}")


def reassemble(plan: SplitPlan, leaf_tds: list[TreeDecomposition]) -> TreeDecomposition:
    """Glue solved leaf decompositions back into one for plan.graph."""
    relabeled = []
    for leaf, td in zip(plan.leaves, leaf_tds):
        if leaf.solved is not None:
            relabeled.append(leaf.solved)
        else:
            relabeled.append(
                TreeDecomposition(
                    [frozenset(leaf.roots[w - 1] for w in bag) for bag in td.bags],
                    td.tree_edges,
                )
            )
    offsets = []
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    for td in relabeled:
        offsets.append(len(bags))
        bags.extend(td.bags)
        edges.extend((a + offsets[-1], b + offsets[-1]) for a, b in td.tree_edges)
    for a, b, sep in plan.joins:
        ia = offsets[a] + next(i for i, bag in enumerate(relabeled[a].bags) if sep <= bag)
        ib = offsets[b] + next(i for i, bag in enumerate(relabeled[b].bags) if sep <= bag)
        edges.append((ia, ib))
    return merge_duplicate_bags(TreeDecomposition(bags, edges))


# -- the recursive decision procedure ----------------------------------------------


def _descend(
    chain: list[tuple[_Frame, Contractor]], frame: _Frame, gamma: Contractor
) -> list[tuple[_Frame, Contractor]]:
    """Chain for the child call: every ancestor contractor now targets the
    child graph, and the current frame joins the ancestry."""
    return [(f, compose(f.graph, c, gamma)) for f, c in chain] + [(frame, gamma)]


def _suppression_theta(
    chain: list[tuple[_Frame, Contractor]],
    g: Graph,
    e: tuple[int, int],
    ge: Graph,
    gamma_e: Contractor,
    rt: _Runtime,
):
    """Certificate for tw(g/e) <= k inherited from an ancestor edge, if any."""
    u, v = e
    for frame, kappa in reversed(chain):
        for (u2, v2), pmcs in frame.records.items():
            if {kappa.mapping[u2], kappa.mapping[v2]} == {u, v}:
                gj = frame.graph
                kappa_e = compose(gj, kappa, gamma_e)
                gje, gamma_rec = contract_edge(gj, (u2, v2))
                gamma_q = quotient_contractor(gj, gamma_rec, kappa_e)
                rt.bump("suppressed_edges")
                return contract_pmcs(
                    pmcs, gje, gamma_q,
                    max_solutions=rt.cfg.max_solutions, quotient=ge,
                )
    return None


def _k1_result(g: Graph) -> DecideResult:
    gamma = Contractor.single(g)
    return DecideResult(False, obstruction=contract(g, gamma), witness=gamma)


def decide_width(
    g: Graph,
    k: int,
    pi: set[frozenset[int]],
    rt: _Runtime,
    chain: list[tuple[_Frame, Contractor]] | None = None,
) -> DecideResult:
    """Decide tw(g) <= k given pi with tw_pi(g) <= k + 1.

    YES answers carry a PMC set certifying the width; NO answers carry a
    minimal contraction obstruction of width k + 1 with its witness
    (relative to g).
    """
    chain = chain or []
    rt.deadline.check()
    if k < 0:
        return _k1_result(g)
    s = BlockSearch(g, k)
    s.deadline = rt.deadline
    s.import_pmcs(pi)
    if s.width() > k + 1:
        raise GraphInputError(
            f"caller violated the precondition: tw over pi is {s.width()} > {k + 1}"
        )
    if s.width() <= k:
        return DecideResult(True, s.useful_pmcs())

    if rt.cfg.use_safe_separators:
        lb = len(greedy_clique(g)) - 1
        if lb <= k:
            found = find_safe_contractor(g, lb, rt.cfg, rt.deadline)
            if found is not None:
                gamma_p, side_td, smask, roots = found
                gq = contract(g, gamma_p)
                theta = contract_pmcs(
                    s.useful_pmcs(), g, gamma_p,
                    max_solutions=rt.cfg.max_solutions, quotient=gq,
                )
                rt.bump("safe_contractions")
                res = decide_width(gq, k, theta, rt, _descend(chain, _Frame(g), gamma_p))
                if not res.answer:
                    return DecideResult(
                        False,
                        obstruction=res.obstruction,
                        witness=compose(g, gamma_p, res.witness),
                    )
                stitched = stitch_certificate(
                    g, res.pmcs, gamma_p, roots, side_td, set_of(smask), k
                )
                return DecideResult(True, stitched)

    frame = _Frame(g)
    edges = order_edges(g, rt.rng)
    for i, e in enumerate(edges):
        rt.deadline.check()
        ge, gamma_e = contract_edge(g, e)
        psi = _suppression_theta(chain, g, e, ge, gamma_e, rt)
        if psi is not None and rt.cfg.check_invariants:
            assert bt_dp_masks(ge, [mask_of(x) for x in psi]).root_value() <= k, (
                "suppression produced a certificate above the target width"
            )
        if psi is None:
            theta = contract_pmcs(
                s.useful_pmcs(), g, gamma_e,
                max_solutions=rt.cfg.max_solutions, quotient=ge,
            )
            if rt.cfg.check_invariants:
                assert (
                    bt_dp_masks(ge, [mask_of(x) for x in theta]).root_value()
                    <= s.width()
                ), "contracted certificate exceeds the source width"
            res = decide_width(ge, k, theta, rt, _descend(chain, frame, gamma_e))
            if not res.answer:
                return DecideResult(
                    False,
                    obstruction=res.obstruction,
                    witness=compose(g, gamma_e, res.witness),
                )
            psi = res.pmcs
        frame.records[e] = psi
        lifted = uncontract_pmcs(
            psi, g, gamma_e, max_solutions=rt.cfg.max_solutions, quotient=ge
        )
        before = s.width()
        s.import_pmcs(lifted)
        if s.width() < before:
            rt.bump("uncontract_improved")
        s.improve(rt.cfg.unit_budget * (i + 1))
        if s.width() <= k:
            return DecideResult(True, s.useful_pmcs())
    s.finish()
    if s.width() <= k:
        return DecideResult(True, s.useful_pmcs())
    rt.bump("finish_no")
    return DecideResult(
        False, obstruction=g, witness=Contractor.identity(g)
    )


# -- top level ----------------------------------------------------------------------


def _solve_connected_core(g: Graph, rt: _Runtime) -> Certificate:
    t = greedy_td(g)
    pi = set(t.bags)
    k = t.width()
    while True:
        rt.deadline.check()
        res = decide_width(g, k - 1, pi, rt)
        if res.answer:
            k -= 1
            pi = res.pmcs
        else:
            tables = bt_dp_masks(g, [mask_of(x) for x in pi])
            dec = tables.decompositions(tables.root_value(), 1)[0]
            return Certificate(k, dec, res.obstruction, res.witness)


def _solve_connected(g: Graph, rt: _Runtime) -> Certificate:
    if rt.cfg.use_safe_separators:
        plan = preprocess_safe_separators(g, rt.cfg)
        if not plan.is_trivial():
            return _solve_plan(g, plan, rt)
    return _solve_connected_core(g, rt)


def _solve_plan(g: Graph, plan: SplitPlan, rt: _Runtime) -> Certificate:
    certs: list[Certificate | None] = []
    tds = []
    for leaf in plan.leaves:
        if leaf.solved is not None:
            certs.append(None)
            tds.append(leaf.solved)
        else:
            cert = _solve_connected_core(leaf.graph, rt)
            certs.append(cert)
            tds.append(cert.decomposition)
    combined = reassemble(plan, tds)
    ok, report = validate(g, combined)
    if not ok:
        raise StateError(f"safe-separator reassembly invalid: {report}")
    width = combined.width()
    for leaf, cert in zip(plan.leaves, certs):
        if cert is not None and cert.width == width:
            witness = compose(g, leaf.to_leaf, cert.witness)
            return Certificate(width, combined, cert.obstruction, witness)
    # width attained only by a fixed side piece; then it equals that piece's
    # clique lower bound and contracting onto the clique is the obstruction
    for leaf in plan.leaves:
        if leaf.solved is not None and leaf.solved.width() == width:
            split_graph, to_split, clique = leaf.fallback
            if len(clique) - 1 != width:
                continue
            h, gamma = clique_obstruction(split_graph, clique)
            return Certificate(width, combined, h, compose(g, to_split, gamma))
    raise StateError(
        "safe-separator width not witnessed by any leaf"
    )  # pragma: no cover - the bound argument makes this unreachable


def compute_treewidth(g: Graph, cfg: SolverConfig | None = None) -> Certificate:
    """tw(g) with certificates: optimal decomposition plus minimal
    contraction obstruction.  Disconnected inputs are solved per component
    and joined; the obstruction then keeps one collapsed vertex per
    untouched component."""
    cfg = cfg or SolverConfig()
    if g.n == 0:
        raise GraphInputError("empty graph has no decomposition")
    rt = _Runtime(cfg, Deadline(cfg.timeout_s), Random(cfg.seed) if cfg.seed is not None else None)
    comps = g.components_mask(g.full_mask)
    if len(comps) == 1:
        cert = _solve_connected(g, rt)
        log.debug("solver stats: %s", rt.stats)
        return cert
    parts: list[Certificate] = []
    maps = []
    for cmask in comps:
        sub, old_to_new = g.induced(set_of(cmask))
        parts.append(_solve_connected(sub, rt))
        maps.append({n: o for o, n in old_to_new.items()})
    width = max(c.width for c in parts)
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    anchors = []
    for cert, back in zip(parts, maps):
        off = len(bags)
        anchors.append(off)
        bags.extend(frozenset(back[v] for v in bag) for bag in cert.decomposition.bags)
        edges.extend((a + off, b + off) for a, b in cert.decomposition.tree_edges)
    for i in range(1, len(anchors)):
        edges.append((anchors[i - 1], anchors[i]))
    combined = TreeDecomposition(bags, edges)
    widest = max(range(len(parts)), key=lambda i: parts[i].width)
    witness_parts: list[frozenset[int]] = []
    for i, (cert, back) in enumerate(zip(parts, maps)):
        if i == widest:
            witness_parts.extend(
                frozenset(back[v] for v in p) for p in cert.witness.parts
            )
        else:
            witness_parts.append(frozenset(back.values()))
    witness = Contractor(g, witness_parts)
    log.debug("solver stats: %s", rt.stats)
    return Certificate(width, combined, contract(g, witness), witness)


# -- certificate verification ---------------------------------------------------------


def decide_tw_le(h: Graph, k: int) -> bool:
    """Exact decision tw(h) <= k via exhaustive block search, any h."""
    if k < 0:
        return h.n == 0
    for cmask in h.components_mask(h.full_mask):
        sub, _ = h.induced(set_of(cmask))
        if sub.n == 1:
            continue
        if not BlockSearch(sub, k).finish():
            return False
    return True


def verify_certificate(g: Graph, c: Certificate) -> tuple[bool, str]:
    """Re-check every certificate invariant independently of the solver path.

    Uses only decomposition validation, contraction, and the exhaustive
    block-search decision on the obstruction and its contractions.
    """
    ok, report = validate(g, c.decomposition)
    if not ok:
        return False, f"decomposition: {report}"
    if c.decomposition.width() != c.width:
        return False, (
            f"width: decomposition has width {c.decomposition.width()}, "
            f"certificate claims {c.width}"
        )
    try:
        image = contract(g, c.witness)
    except Exception as exc:  # noqa: BLE001 - report, do not crash
        return False, f"witness: not a valid contractor of the graph ({exc})"
    if image != c.obstruction:
        return False, "witness: contracting the graph does not give the obstruction"
    if not decide_tw_le(c.obstruction, c.width):
        return False, f"obstruction: width exceeds {c.width}"
    if decide_tw_le(c.obstruction, c.width - 1):
        return False, f"obstruction: width below {c.width}, not an obstruction"
    for e in c.obstruction.edges():
        he, _ = contract_edge(c.obstruction, e)
        if not decide_tw_le(he, c.width - 1):
            return False, (
                f"minimality: contracting edge {e} keeps width above {c.width - 1}"
            )
    return True, "ok"
