"""Finite quasigroups and loops given by Cayley tables."""

from .core import (
    AttributeStore,
    Element,
    Loop,
    Quasigroup,
    RawTable,
    all_subloops,
    as_loop,
    as_quasigroup,
    closure,
    cyclic_group,
    direct_product,
    elementary_abelian,
    format_table,
    generators_smallest,
    is_latin,
    is_normalized,
    isomorphic_copy_by_normal_subloop,
    isomorphic_copy_by_perm,
    loop_by_cayley_table,
    make_quasigroup,
    normalize_table,
    parse_raw_table,
    principal_isotope,
    quasigroup_by_cayley_table,
    raw_table,
    read_table,
    right_cosets,
    right_transversal,
    subloop,
    subquasigroup,
)
from .errors import LoopError
from .perm import PermGroup, Permutation

__version__ = "0.1.0"

__all__ = [
    "AttributeStore",
    "Element",
    "Loop",
    "LoopError",
    "PermGroup",
    "Permutation",
    "Quasigroup",
    "RawTable",
    "all_subloops",
    "as_loop",
    "as_quasigroup",
    "closure",
    "cyclic_group",
    "direct_product",
    "elementary_abelian",
    "format_table",
    "generators_smallest",
    "is_latin",
    "is_normalized",
    "isomorphic_copy_by_normal_subloop",
    "isomorphic_copy_by_perm",
    "loop_by_cayley_table",
    "make_quasigroup",
    "normalize_table",
    "parse_raw_table",
    "principal_isotope",
    "quasigroup_by_cayley_table",
    "raw_table",
    "read_table",
    "right_cosets",
    "right_transversal",
    "subloop",
    "subquasigroup",
]
