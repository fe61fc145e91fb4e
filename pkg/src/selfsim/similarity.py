"""Similarity triples ``(G, H, f)`` on wreath products ``B wr X``.

Subgroups are kept in the normalized shape ``H = A0 . Y`` with ``Y <= X`` of
finite index and ``A0 = A cap H``.  ``A0`` is described by folding: sum each
base element over the cosets of ``Y`` (giving an element of
``sum_{X/Y} B``), read off a finite list of *watched* coordinates, and ask
that the resulting vector lie in a finite-index lattice ``S``.  Subgroups of
this form are ``Y``-invariant automatically.

The virtual endomorphism ``f`` sends ``Y`` into ``X`` and ``A0`` into ``A``
and satisfies ``f(shift(a, y)) = shift(f(a), f(y))``.  It is stored as the
images of a fixed, finite list of ``Z[Y]``-module generators of ``A0`` (see
:func:`module_generators`), plus a copy-shift rule for the infinitely many
coordinates of an ``omega`` base group.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .abelian import AbelianDescriptor, AbelianElement, AbelianHom, Key, SubgroupLattice, Vector, hnf_reduce
from .wreath import GroupDescriptor, WreathElement, XDescriptor, XElement, format_element

Watch = Tuple[XElement, Key]


class InvalidTriple(ValueError):
    """The triple data is inconsistent (e.g. a transversal missing a coset)."""


class NotInSubgroup(ValueError):
    pass


@dataclass(frozen=True)
class WreathSubgroupSpec:
    group: GroupDescriptor
    y_lattice: SubgroupLattice
    watched: Tuple[Watch, ...] = ()
    s_lattice: SubgroupLattice = None

    def __post_init__(self):
        top = self.group.top
        if self.y_lattice.ambient != top.abelian:
            raise ValueError("Y must be a lattice in the top group")
        if not self.y_lattice.finite:
            raise ValueError("Y has infinite index in X")
        if len(set(self.watched)) != len(self.watched):
            raise ValueError("watched coordinates repeat")
        for c, key in self.watched:
            if self.y_lattice.coset_rep(c) != tuple(c):
                raise ValueError(f"watched position {c} is not a canonical X/Y representative")
            self.group.base.factor(key)
        if self.s_lattice is None:
            object.__setattr__(self, "s_lattice", hnf_reduce([], self.watched_descriptor))
        if self.s_lattice.ambient != self.watched_descriptor:
            raise ValueError("S must be a lattice in the watched coordinates")
        if not self.s_lattice.finite:
            raise ValueError("A0 has infinite index in A")

    @property
    def watched_descriptor(self) -> AbelianDescriptor:
        return AbelianDescriptor(tuple(self.group.base.factor(k) for _, k in self.watched))

    @property
    def index(self) -> int:
        return self.y_lattice.index * self.s_lattice.index

    @cached_property
    def _watch_index(self) -> Dict[Watch, int]:
        return {w: i for i, w in enumerate(self.watched)}

    def x_class(self, x: Sequence[int]) -> XElement:
        return self.y_lattice.coset_rep(x)

    def x_classes(self) -> List[XElement]:
        return [tuple(v) for v in self.y_lattice.residues()]

    def fold(self, g: WreathElement) -> List[int]:
        """Watched coordinates of the base of ``g`` summed over ``Y``-cosets."""
        out = [0] * len(self.watched)
        if not self.watched:
            return out
        widx = self._watch_index
        for x, b in g.base:
            c = self.x_class(x)
            for key, v in b.coords:
                i = widx.get((c, key))
                if i is not None:
                    out[i] += v
        return out

    def invariant(self, g: WreathElement) -> Tuple[Vector, XElement]:
        """Complete invariant of the right coset ``H g``."""
        return self.s_lattice.coset_rep(self.fold(g)), self.x_class(g.top)

    def contains(self, g: WreathElement) -> bool:
        return self.y_lattice.member(g.top) and self.s_lattice.member(self.fold(g))

    def placement(self, vec: Sequence[int]) -> WreathElement:
        return self.group.element(
            (c, AbelianElement.make(self.group.base, [(key, v)])) for (c, key), v in zip(self.watched, vec))

    def representative(self, inv: Tuple[Vector, XElement]) -> WreathElement:
        s, c = inv
        return self.placement(s) * self.group.top_element(c)

    def canonical_transversal(self) -> List[WreathElement]:
        """Coset representatives ordered lexicographically by (watched residue, X/Y class)."""
        return [self.representative((tuple(s), c))
                for s in self.s_lattice.residues() for c in self.x_classes()]


def subgroup(group: GroupDescriptor, y_basis=(), watched=(), s_basis=()) -> WreathSubgroupSpec:
    y = hnf_reduce(y_basis, group.top.abelian)
    watched = tuple((group.top.reduce(c), k) for c, k in watched)
    desc = AbelianDescriptor(tuple(group.base.factor(k) for _, k in watched))
    return WreathSubgroupSpec(group, y, watched, hnf_reduce(s_basis, desc))


@dataclass(frozen=True)
class Tail:
    """For copies ``j >= start`` of an omega base: ``f(delta_{c,(j,i)}) = delta_{c,(j+shift,i)}``."""

    start: int
    shift: int = 0


def module_generators(sub: WreathSubgroupSpec, tails: Dict[XElement, Tail] = None) -> List[tuple]:
    """The ``Z[Y]``-module generators of ``A0`` in their fixed order.

    Returns ``(tag, element)`` pairs with tags ``("coord", c, key)`` for
    unwatched coordinates, ``("diff", c, key, r)`` for
    ``shift(delta, y_r) - delta`` at a watched coordinate and
    ``("s", r)`` for the placement of the ``r``-th row of ``S``.
    """
    tails = tails or {}
    G = sub.group
    base = G.base
    out = []
    for c in sub.x_classes():
        if base.is_omega:
            if c not in tails:
                raise InvalidTriple(f"omega base needs a tail rule for X/Y class {c}")
            keys = [(j, i) for j in range(tails[c].start) for i in base.inner_keys()]
        else:
            keys = list(base.inner_keys())
        for key in keys:
            if base.factor(key).modulus == 1:
                continue
            delta = G.delta(c, key)
            if (c, key) in sub._watch_index:
                for r, y in enumerate(sub.y_lattice.basis):
                    out.append((("diff", c, key, r), delta.shift(G.top.reduce(y)).add_base(delta.scale_base(-1))))
            else:
                out.append((("coord", c, key), delta))
    for c, key in sub.watched:
        if base.is_omega and key[0] >= tails[c].start:
            raise InvalidTriple(f"watched coordinate {key} lies inside the tail of class {c}")
    for r, row in enumerate(sub.s_lattice.basis):
        out.append((("s", r), sub.placement(row)))
    return out


@dataclass(frozen=True)
class VirtualEndo:
    subgroup: WreathSubgroupSpec
    on_y: AbelianHom
    images: Tuple[WreathElement, ...]
    tails: Tuple[Tuple[XElement, Tail], ...] = ()

    def __post_init__(self):
        gens = self.generators
        if len(gens) != len(self.images):
            raise InvalidTriple(f"expected {len(gens)} generator images, got {len(self.images)}")
        for img in self.images:
            if not img.in_base():
                raise InvalidTriple(f"image {format_element(img)} leaves the base group A")
        if self.on_y.domain != self.subgroup.y_lattice or self.on_y.codomain != self.subgroup.group.top.abelian:
            raise InvalidTriple("on_y must map Y into X")

    @classmethod
    def build(cls, sub: WreathSubgroupSpec, y_images: Sequence[Sequence[int]], images: Sequence[WreathElement],
              tails: Dict[XElement, Tail] = None) -> "VirtualEndo":
        X = sub.group.top.abelian
        on_y = AbelianHom(sub.y_lattice, X, tuple(AbelianElement.from_vector(X, v) for v in y_images))
        return cls(sub, on_y, tuple(images), tuple(sorted((tails or {}).items())))

    @cached_property
    def generators(self) -> List[tuple]:
        return module_generators(self.subgroup, dict(self.tails))

    @cached_property
    def _lookup(self):
        coord, diff = {}, {}
        s_images = []
        for (tag, _), img in zip(self.generators, self.images):
            if tag[0] == "coord":
                coord[tag[1:]] = img
            elif tag[0] == "diff":
                diff[tag[1:]] = img
            else:
                s_images.append(img)
        return coord, diff, s_images

    @cached_property
    def _y_images(self) -> List[XElement]:
        return [tuple(img.vector()) for img in self.on_y.images]

    @cached_property
    def _cache(self) -> dict:
        return {}

    def f_y(self, y: Sequence[int]) -> XElement:
        top = self.subgroup.group.top
        try:
            return top.reduce(self.on_y.apply_vector(y).vector())
        except ValueError:
            raise NotInSubgroup(f"top {tuple(y)} is not in Y") from None

    def coord_image(self, c: XElement, key: Key) -> WreathElement:
        coord = self._lookup[0]
        if (c, key) in coord:
            return coord[(c, key)]
        tail = dict(self.tails).get(c)
        if tail is None or not isinstance(key, tuple) or key[0] < tail.start:
            raise InvalidTriple(f"no image for generator at {c}, {key}")
        return self.subgroup.group.delta(c, (key[0] + tail.shift, key[1]))

    def _multiple(self, c, key, r: int, n: int) -> WreathElement:
        """``f(shift(delta, n*y_r) - delta)`` at a watched coordinate."""
        top = self.subgroup.group.top
        d = self._lookup[1][(c, key, r)]
        fy = self._y_images[r]
        items = []
        if n > 0:
            for i in range(n):
                items.extend(d.shift(top.scale(fy, i)).base)
        else:
            for i in range(1, -n + 1):
                items.extend(d.shift(top.scale(fy, -i)).scale_base(-1).base)
        return self.subgroup.group.element(items)

    def diff_image(self, c, key, coeffs: Sequence[int]) -> WreathElement:
        """``f(shift(delta, y) - delta)`` for ``y = sum coeffs[r] * y_r``."""
        ck = (c, key, tuple(coeffs))
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        top = self.subgroup.group.top
        total = self.subgroup.group.identity
        offset = top.zero
        for r, n in enumerate(coeffs):
            if n:
                total = self._multiple(c, key, r, n).shift(offset).add_base(total)
                offset = top.add(offset, top.scale(self._y_images[r], n))
        self._cache[ck] = total
        return total

    def apply_base(self, g: WreathElement) -> WreathElement:
        """Image of the base part of ``g``, which must lie in ``A0``."""
        sub = self.subgroup
        G = sub.group
        top = G.top
        widx = sub._watch_index
        folded = [0] * len(sub.watched)
        items = []
        for x, b in g.base:
            c = sub.x_class(x)
            y = top.sub(x, c)
            coeffs = fy = None
            for key, v in b.coords:
                w = widx.get((c, key))
                if w is not None:
                    folded[w] += v
                    if any(y):
                        if coeffs is None:
                            coeffs = sub.y_lattice.express(y)
                        items.extend(self.diff_image(c, key, coeffs).scale_base(v).base)
                else:
                    if fy is None:
                        fy = self.f_y(y)
                    items.extend(self.coord_image(c, key).shift(fy).scale_base(v).base)
        try:
            coeffs = sub.s_lattice.express(folded)
        except ValueError:
            raise NotInSubgroup(f"{format_element(g)} is not in A0") from None
        s_images = self._lookup[2]
        for n, img in zip(coeffs, s_images):
            if n:
                items.extend(img.scale_base(n).base)
        return G.element(items)

    def __call__(self, h: WreathElement) -> WreathElement:
        fy = self.f_y(h.top)
        return WreathElement(h.group, self.apply_base(h).base, fy)

    def problems(self) -> List[str]:
        """Well-definedness failures on the module relations (empty when consistent)."""
        sub = self.subgroup
        G = sub.group
        out = []
        for (tag, gen), img in zip(self.generators, self.images):
            if tag[0] == "s":
                continue
            n = G.base.factor(tag[2]).modulus
            if n and not img.scale_base(n).is_identity():
                out.append(f"generator {tag} has order {n} but its image does not")
        s_images = self._lookup[2]
        for rel in sub.s_lattice.relations():
            total = G.identity
            for n, img in zip(rel, s_images):
                total = total.add_base(img.scale_base(n))
            if not total.is_identity():
                out.append(f"S relation {rel} maps to {format_element(total)}")
        for c, key in sub.watched:
            for rel in sub.y_lattice.relations():
                if not self.diff_image(c, key, rel).is_identity():
                    out.append(f"Y relation {rel} breaks the image of shifts at {c}, {key}")
            nr = len(sub.y_lattice.basis)
            for r in range(nr):
                for s in range(r + 1, nr):
                    a = [0] * nr
                    a[r] = a[s] = 1
                    one = self.diff_image(c, key, a)
                    # same sum, generators taken in the other order
                    fy_s = self._y_images[s]
                    other = self._multiple(c, key, r, 1).shift(fy_s).add_base(self._multiple(c, key, s, 1))
                    if one != other:
                        out.append(f"shift images at {c}, {key} do not commute for Y rows {r}, {s}")
        return out


@dataclass(frozen=True)
class SimilarityTriple:
    group: GroupDescriptor
    subgroup: WreathSubgroupSpec
    endo: VirtualEndo
    transversal: Tuple[WreathElement, ...]
    generators: Tuple[Tuple[str, WreathElement], ...] = ()
    name: str = ""

    @property
    def m(self) -> int:
        return self.subgroup.index

    @cached_property
    def _coset_table(self) -> Dict[tuple, int]:
        table = {}
        for i, x in enumerate(self.transversal, start=1):
            table.setdefault(self.subgroup.invariant(x), i)
        return table

    def coset_index(self, g: WreathElement) -> int:
        try:
            return self._coset_table[self.subgroup.invariant(g)]
        except KeyError:
            raise InvalidTriple(f"no transversal element in the coset of {format_element(g)}") from None

    def contains(self, g: WreathElement) -> bool:
        return self.subgroup.contains(g)

    def apply_f(self, h: WreathElement) -> WreathElement:
        if not self.contains(h):
            raise NotInSubgroup(f"{format_element(h)} is not in H")
        return self.endo(h)

    def generator(self, name: str) -> WreathElement:
        for n, g in self.generators:
            if n == name:
                return g
        raise KeyError(name)

    @cached_property
    def compiler(self):
        from .tree import Compiler
        return Compiler(self)


def make_triple(sub: WreathSubgroupSpec, endo: VirtualEndo, transversal=None, generators=(), name="") -> SimilarityTriple:
    if transversal is None:
        transversal = sub.canonical_transversal()
    return SimilarityTriple(sub.group, sub, endo, tuple(transversal), tuple(generators), name)


def coset_index(t: SimilarityTriple, g: WreathElement) -> int:
    return t.coset_index(g)


def apply_f(t: SimilarityTriple, h: WreathElement) -> WreathElement:
    return t.apply_f(h)


# -- abelian pairs ------------------------------------------------------------

@dataclass(frozen=True)
class AbelianPair:
    L: AbelianDescriptor
    M: SubgroupLattice
    phi: AbelianHom
    simple_claimed: bool = False

    def __post_init__(self):
        if self.M.ambient != self.L or self.phi.domain != self.M or self.phi.codomain != self.L:
            raise ValueError("pair data does not fit together")
        if not self.M.finite:
            raise ValueError("M has infinite index in L")

    @property
    def index(self) -> int:
        return self.M.index


def abelian_pair(moduli: Sequence[int], m_basis, phi_images, simple_claimed=False) -> AbelianPair:
    L = AbelianDescriptor.of(*moduli)
    M = hnf_reduce(m_basis, L)
    phi = AbelianHom(M, L, tuple(AbelianElement.from_vector(L, v) for v in phi_images))
    return AbelianPair(L, M, phi, simple_claimed)


def _as_top(L: AbelianDescriptor) -> XDescriptor:
    moduli = L.moduli
    free = sum(1 for n in moduli if n == 0)
    if any(moduli[:free]) or 1 in moduli:
        raise ValueError(f"{L} must list free factors first and have no trivial factors")
    return XDescriptor(free, tuple(moduli[free:]))


def lift_pair(pair: AbelianPair, name: str = "") -> SimilarityTriple:
    """The pair as a triple on ``1 wr L`` (trivial base group)."""
    X = _as_top(pair.L)
    G = GroupDescriptor(AbelianDescriptor(), X)
    sub = subgroup(G, pair.M.basis)
    endo = VirtualEndo.build(sub, [img.vector() for img in pair.phi.images], [])
    gens = [(f"t{i + 1}" if X.dim > 1 else "t", G.top_element([int(j == i) for j in range(X.dim)]))
            for i in range(X.dim)]
    return make_triple(sub, endo, generators=gens, name=name)


def theorem2_build(pair: AbelianPair, name: str = "") -> SimilarityTriple:
    """The triple on ``L^omega wr C2`` built from a pair ``(L, M, phi)``.

    With ``beta = (beta_1, beta_2)`` the two ``X``-coordinates of a base
    element and copies indexed from 0:
    ``H = {beta : beta_1[0] in M}`` and
    ``f(beta) = ((phi(beta_1[0]) + beta_1[1], beta_1[2], ...), (beta_2[1], beta_2[0], beta_2[2], ...))``.
    """
    L = pair.L
    B = AbelianDescriptor.omega(L)
    G = GroupDescriptor(B, XDescriptor(0, (2,)))
    inner = list(L.inner_keys())
    x0, x1 = (0,), (1,)
    sub = subgroup(G, (), [(x0, (0, i)) for i in inner], pair.M.basis)
    tails = {x0: Tail(2, -1), x1: Tail(2, 0)}
    images = {}
    for i in inner:
        images[("coord", x0, (1, i))] = G.delta(x0, (0, i))
        images[("coord", x1, (0, i))] = G.delta(x1, (1, i))
        images[("coord", x1, (1, i))] = G.delta(x1, (0, i))
    for r, img in enumerate(pair.phi.images):
        images[("s", r)] = G.element([(x0, AbelianElement.make(B, [((0, i), v) for i, v in img.coords]))])
    gens = module_generators(sub, tails)
    endo = VirtualEndo.build(sub, [], [images[tag] for tag, _ in gens], tails)
    e1 = G.delta(x0, (0, 0))
    gens = [("e1", e1), ("e2", G.delta(x0, (1, 0))), ("s", G.top_element(x1)),
            ("d", e1 * G.delta(x1, (0, 0)))]
    return make_triple(sub, endo, generators=gens, name=name)


# -- sampling and validation -----------------------------------------------------

def random_base_value(base: AbelianDescriptor, rng: random.Random, magnitude: int = 3, copies: int = 3):
    if base.is_omega:
        keys = [(j, i) for j in range(copies) for i in base.inner_keys()]
    else:
        keys = list(base.inner_keys())
    if not keys:
        return AbelianElement.zero(base)
    chosen = rng.sample(keys, rng.randint(1, min(2, len(keys))))
    return AbelianElement.make(base, [(k, rng.randint(-magnitude, magnitude)) for k in chosen])


def random_x(top: XDescriptor, rng: random.Random, radius: int = 3) -> XElement:
    return top.reduce([rng.randint(-radius, radius) for _ in range(top.dim)])


def random_element(group: GroupDescriptor, rng: random.Random, support: int = 3, radius: int = 3,
                   magnitude: int = 3, top: bool = True) -> WreathElement:
    items = [(random_x(group.top, rng, radius), random_base_value(group.base, rng, magnitude))
             for _ in range(rng.randint(0, support))]
    return group.element(items, random_x(group.top, rng, radius) if top else None)


def random_subgroup_element(t: SimilarityTriple, rng: random.Random, **kw) -> WreathElement:
    g = random_element(t.group, rng, **kw)
    return g * t.subgroup.representative(t.subgroup.invariant(g)).inverse()


@dataclass
class AxiomResult:
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None

    def line(self) -> str:
        s = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        if self.detail:
            s += f": {self.detail}"
        if self.witness:
            s += f" [witness {self.witness}]"
        return s


@dataclass
class ValidationReport:
    results: List[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def text(self) -> str:
        return "\n".join(r.line() for r in self.results)


def validate_triple(t: SimilarityTriple, samples: int = 200, seed: int = 0) -> ValidationReport:
    rng = random.Random(seed)
    rep = ValidationReport()
    add = rep.results.append
    sub = t.subgroup

    add(AxiomResult("transversal-size", len(t.transversal) == t.m, f"{len(t.transversal)} elements, index {t.m}"))
    first = t.transversal[0] if t.transversal else None
    add(AxiomResult("transversal-identity-first", first is not None and first.is_identity()))

    seen: Dict[tuple, int] = {}
    dup = None
    for i, x in enumerate(t.transversal, start=1):
        inv = sub.invariant(x)
        if inv in seen and dup is None:
            dup = f"x{seen[inv]} = {format_element(t.transversal[seen[inv] - 1])}, x{i} = {format_element(x)}"
        seen.setdefault(inv, i)
    add(AxiomResult("transversal-distinct-cosets", dup is None, "", dup))

    witness = None
    for _ in range(samples):
        g = random_element(t.group, rng)
        h = random_subgroup_element(t, rng)
        try:
            if t.coset_index(h * g) != t.coset_index(g):
                witness = f"h = {format_element(h)}, g = {format_element(g)}"
        except InvalidTriple:
            witness = f"g = {format_element(g)} lies in no listed coset"
        if witness:
            break
    add(AxiomResult("coset-coherence", witness is None, f"{samples} samples", witness))

    witness = None
    for _ in range(samples):
        h1, h2 = random_subgroup_element(t, rng), random_subgroup_element(t, rng)
        if not (t.contains(h1) and t.contains(h2) and t.contains(h1 * h2) and t.contains(h1.inverse())):
            witness = f"{format_element(h1)}, {format_element(h2)}"
            break
    add(AxiomResult("subgroup-closure", witness is None, f"{samples} samples", witness))

    probs = t.endo.problems()
    add(AxiomResult("endomorphism-well-defined", not probs, "; ".join(probs)))

    witness = None
    for _ in range(samples):
        h1, h2 = random_subgroup_element(t, rng), random_subgroup_element(t, rng)
        if t.endo(h1 * h2) != t.endo(h1) * t.endo(h2):
            witness = f"{format_element(h1)}, {format_element(h2)}"
            break
    add(AxiomResult("homomorphism", witness is None, f"{samples} sampled pairs", witness))
    return rep
