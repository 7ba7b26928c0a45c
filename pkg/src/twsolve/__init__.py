"""Certifying exact treewidth solver.

Computes tw(G) together with a certificate pair: an optimal
tree-decomposition and a minimal contraction obstruction (a contraction H
of G with tw(H) = tw(G) such that every single-edge contraction of H drops
the width).
"""

from .graph import Contractor, Graph, compose, components, contract, contract_edge, is_clique, neighborhood
from .decomposition import (
    TreeDecomposition,
    Triangulation,
    fill,
    greedy_td,
    minimalize,
    minimalize_optimally,
    uncontract_td,
    validate,
    width,
)
from .pmc import Block, BtResult, all_pmcs, bt_dp, caps, is_minimal_separator, is_pmc, minimal_separators, tw_pi
from .transfer import contract_pmcs, image_td, uncontract_pmcs
from .search import BlockSearch
from .solver import Certificate, SolverConfig, compute_treewidth, verify_certificate

__all__ = [
    "Graph",
    "Contractor",
    "neighborhood",
    "components",
    "contract",
    "contract_edge",
    "compose",
    "is_clique",
    "TreeDecomposition",
    "Triangulation",
    "validate",
    "width",
    "fill",
    "greedy_td",
    "minimalize",
    "minimalize_optimally",
    "uncontract_td",
    "Block",
    "BtResult",
    "is_minimal_separator",
    "minimal_separators",
    "is_pmc",
    "all_pmcs",
    "caps",
    "bt_dp",
    "tw_pi",
    "uncontract_pmcs",
    "contract_pmcs",
    "image_td",
    "BlockSearch",
    "Certificate",
    "SolverConfig",
    "compute_treewidth",
    "verify_certificate",
]

__version__ = "0.1.0"
