"""Self-similar (tree) representations of wreath products from virtual endomorphisms."""
from .abelian import AbelianDescriptor, AbelianElement, AbelianHom, SubgroupLattice, hnf_reduce
from .catalog import catalog, catalog_triple, triple_names
from .config import format_triple, load_triple, parse_element, parse_triple, parse_word
from .lab import CoreCertificate, LabReport, core_witness, find_disjoint_shift, run_lab
from .similarity import SimilarityTriple, apply_f, coset_index, make_triple, validate_triple
from .tree import act, bisim_equal, compile, compose, kernel_search, portrait, stabilizer_pair, state_closure
from .wreath import GroupDescriptor, WreathElement, XDescriptor, conjugate, format_element

__all__ = [
    "AbelianDescriptor", "AbelianElement", "AbelianHom", "SubgroupLattice", "hnf_reduce",
    "catalog", "catalog_triple", "triple_names",
    "format_triple", "load_triple", "parse_element", "parse_triple", "parse_word",
    "CoreCertificate", "LabReport", "core_witness", "find_disjoint_shift", "run_lab",
    "SimilarityTriple", "apply_f", "coset_index", "make_triple", "validate_triple",
    "act", "bisim_equal", "compile", "compose", "kernel_search", "portrait", "stabilizer_pair", "state_closure",
    "GroupDescriptor", "WreathElement", "XDescriptor", "conjugate", "format_element",
]
