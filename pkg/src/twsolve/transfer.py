"""Moving PMC sets between a graph and its contractions.

Both directions run the weighted block recurrence with a parity-encoded bag
weight: a bag U scores 2*|mapped(U)| when its mapped set is already a PMC
of the target graph (minimalization must keep it, so an oversized bag is
hopeless) and 2*|mapped(U)| - 1 otherwise (minimalization may still shrink
it).  Optimal decompositions under that weight are then mapped over and
minimalized optimally, and their bags pooled.
"""

from __future__ import annotations

from typing import Iterable

from .decomposition import (
    TreeDecomposition,
    merge_duplicate_bags,
    minimalize,
    minimalize_optimally,
    validate,
)
from .errors import DecompositionError, GraphInputError
from .graph import Contractor, Graph, contract, mask_of
from .pmc import INF, _is_pmc_mask, bt_dp_masks


def image_td(t: TreeDecomposition, gamma: Contractor) -> TreeDecomposition:
    """Map every bag through gamma and merge duplicate adjacent bags."""
    mapped = TreeDecomposition(
        [frozenset(gamma.mapping[v] for v in bag) for bag in t.bags],
        t.tree_edges,
    )
    return merge_duplicate_bags(mapped)


def _prefer_odd(weight: dict[int, float]):
    # odd parity = not a PMC preimage = minimalization may still rescue it
    return lambda x: (weight[x] % 2 == 0, weight[x])


def uncontract_pmcs(
    pi: Iterable[frozenset[int]],
    g: Graph,
    gamma: Contractor,
    max_solutions: int = 16,
    quotient: Graph | None = None,
) -> set[frozenset[int]]:
    """PMCs of g obtained by uncontracting a PMC set of g/gamma.

    The result Pi' satisfies tw_{Pi'}(g) <= tw_pi(g/gamma) + 1 for single
    edge contractors, with equality to tw_pi(g/gamma) whenever some
    weight-optimal decomposition uncontracts without an oversized bag.
    """
    q = contract(g, gamma) if quotient is None else quotient

    cache: dict[int, float] = {}

    def weight(umask: int) -> float:
        w = cache.get(umask)
        if w is None:
            pre = gamma.preimage_mask(umask)
            size = pre.bit_count()
            w = 2 * size if _is_pmc_mask(g, pre) else 2 * size - 1
            cache[umask] = w
        return w

    tables = bt_dp_masks(q, [mask_of(x) for x in pi], weight)
    val = tables.root_value()
    if val is INF:
        raise GraphInputError("pi admits no decomposition of the contracted graph")
    out: set[frozenset[int]] = set()
    for t in tables.decompositions(val, max_solutions, prefer=_prefer_odd(tables.weight)):
        lifted = minimalize_optimally(g, _checked(g, merge_duplicate_bags(
            TreeDecomposition([gamma.preimage_set(b) for b in t.bags], t.tree_edges)
        )))
        out.update(lifted.bags)
    return out


def contract_pmcs(
    pi: Iterable[frozenset[int]],
    g: Graph,
    gamma: Contractor,
    max_solutions: int = 16,
    quotient: Graph | None = None,
) -> set[frozenset[int]]:
    """PMCs of g/gamma obtained by contracting a PMC set of g.

    The result Theta satisfies tw_Theta(g/gamma) <= tw_pi(g), possibly one
    less when contraction shrinks every widest bag.
    """
    q = contract(g, gamma) if quotient is None else quotient

    cache: dict[int, float] = {}

    def weight(umask: int) -> float:
        w = cache.get(umask)
        if w is None:
            img = gamma.image_mask(umask)
            size = img.bit_count()
            w = 2 * size if _is_pmc_mask(q, img) else 2 * size - 1
            cache[umask] = w
        return w

    tables = bt_dp_masks(g, [mask_of(x) for x in pi], weight)
    val = tables.root_value()
    if val is INF:
        raise GraphInputError("pi admits no decomposition of the source graph")
    out: set[frozenset[int]] = set()
    for t in tables.decompositions(val, max_solutions, prefer=_prefer_odd(tables.weight)):
        projected = minimalize(q, _checked(q, image_td(t, gamma)))
        out.update(projected.bags)
    return out


def _checked(g: Graph, t: TreeDecomposition) -> TreeDecomposition:
    ok, report = validate(g, t)
    if not ok:  # pragma: no cover - guards internal invariants
        raise DecompositionError(f"mapped decomposition invalid: {report}")
    return t
