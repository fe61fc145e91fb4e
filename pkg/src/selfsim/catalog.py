"""Built-in instances."""
from __future__ import annotations

import re

from .abelian import AbelianDescriptor
from .similarity import (AbelianPair, SimilarityTriple, VirtualEndo, abelian_pair, lift_pair, make_triple,
                         module_generators, subgroup, theorem2_build)
from .wreath import GroupDescriptor, XDescriptor

ENTRIES = {
    "adding-machine": "pair (Z, 2Z, x -> x/2); the binary odometer",
    "lamplighter": "Z/2 wr Z, A0 = even lamp count, Y = X, f(b + b^t) = b, f(t) = t; m = 2",
    "thm2-Z": "L^omega wr C2 built from the adding machine; m = 2[L:M] = 4",
    "zwrz-pair-2": "Z wr Z, H = A<t^2>, f: t^2 -> t, b -> b, b^t -> 1; A is in the f-core",
    "zwrz-pair-generic(m)": "Z wr Z, H = A<t^m>, f: t^m -> t, b -> b, b^(t^i) -> 1 for 0 < i < m",
}

_GENERIC = re.compile(r"zwrz-pair-generic[(:-](\d+)\)?$")


def adding_machine() -> AbelianPair:
    return abelian_pair([0], [[2]], [[1]], simple_claimed=True)


def lamplighter() -> SimilarityTriple:
    G = GroupDescriptor(AbelianDescriptor.of(2), XDescriptor(1))
    sub = subgroup(G, [[1]], [((0,), 0)], [])
    endo = VirtualEndo.build(sub, [[1]], [G.delta((0,))])
    gens = [("b", G.delta((0,))), ("t", G.top_element((1,)))]
    return make_triple(sub, endo, generators=gens, name="lamplighter")


def zwrz_pair(m: int) -> SimilarityTriple:
    if m < 2:
        raise ValueError("index must be at least 2")
    G = GroupDescriptor(AbelianDescriptor.of(0), XDescriptor(1))
    sub = subgroup(G, [[m]])
    images = []
    for (_, c, _), _g in module_generators(sub):
        images.append(G.delta((0,)) if c == (0,) else G.identity)
    endo = VirtualEndo.build(sub, [[1]], images)
    gens = [("b", G.delta((0,))), ("t", G.top_element((1,)))]
    name = "zwrz-pair-2" if m == 2 else f"zwrz-pair-generic({m})"
    return make_triple(sub, endo, generators=gens, name=name)


def catalog(name: str):
    """Return the named instance: an :class:`AbelianPair` or a :class:`SimilarityTriple`."""
    if name == "adding-machine":
        return adding_machine()
    if name == "lamplighter":
        return lamplighter()
    if name == "thm2-Z":
        return theorem2_build(adding_machine(), name="thm2-Z")
    if name == "zwrz-pair-2":
        return zwrz_pair(2)
    match = _GENERIC.match(name)
    if match:
        return zwrz_pair(int(match.group(1)))
    raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(ENTRIES)}")


def catalog_triple(name: str) -> SimilarityTriple:
    """Like :func:`catalog`, lifting abelian pairs to triples with trivial base."""
    item = catalog(name)
    if isinstance(item, AbelianPair):
        return lift_pair(item, name=name)
    return item


def triple_names(generic_m=(4,)) -> list:
    """Concrete names of every catalog triple."""
    return ["adding-machine", "lamplighter", "thm2-Z", "zwrz-pair-2"] + [
        f"zwrz-pair-generic({m})" for m in generic_m]
