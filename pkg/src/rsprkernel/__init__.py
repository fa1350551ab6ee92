"""Kernelization of rooted tree pairs for rSPR distance and hybridization number."""

from .forests import (
    AgreementForest,
    CapExceededError,
    is_acyclic_forest,
    is_agreement_forest,
    maaf_bruteforce,
    maf_bruteforce,
    tbr_bruteforce,
)
from .networks import (
    CyclicGenerator,
    LeafLabeledGraph,
    attach,
    displays,
    enumerate_sides,
    extract_generator,
    forest_from_graph,
    graph_from_forest,
    reticulation_count,
    validate_graph,
)
from .newick_io import parse_graph, parse_tree, write_dot, write_graph, write_tree
from .parsimony import BinaryCharacter, dmp2, fitch_score
from .reductions import KernelResult, Mode, Rule, kernelize, verify_kernel_bound
from .solver import SolverLimitError, hybridization_number, rspr_distance
from .tight import build_tight, verify_tightness
from .tree import RHO, Chain, RootedTree, is_isomorphic, restrict

__version__ = "0.1.0"
