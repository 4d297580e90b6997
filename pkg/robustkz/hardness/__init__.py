# Balanced codes, partite graphs and the k-Center hardness gadget
from robustkz.hardness.codes import CodeBook, build_code
from robustkz.hardness.gadget import (
    GapReport,
    check_complement_chain,
    check_gadget_distances,
    complement_code_instance,
    mcis_to_kcenter,
    verify_gap,
)
from robustkz.hardness.graphs import (
    PartiteGraph,
    complete_partite_graph,
    has_multicolored_independent_set,
    load_partite_graph,
    normalize_partite_graph,
    random_partite_graph,
)

__all__ = [
    "CodeBook",
    "GapReport",
    "PartiteGraph",
    "build_code",
    "check_complement_chain",
    "check_gadget_distances",
    "complement_code_instance",
    "complete_partite_graph",
    "has_multicolored_independent_set",
    "load_partite_graph",
    "mcis_to_kcenter",
    "normalize_partite_graph",
    "random_partite_graph",
    "verify_gap",
]
