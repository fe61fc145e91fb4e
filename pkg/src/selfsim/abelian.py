"""Exact arithmetic in abelian groups given by cyclic factors.

Two shapes of group are supported: finite direct sums of cyclic groups
(``Z``, ``Z/n``) and countable direct sums ``omega(L)`` of copies of such a
group.  Elements are finite-support maps, so both shapes are handled the same
way.  Subgroups of the finitely generated shape are integer lattices kept in
Hermite normal form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

Key = Union[int, Tuple[int, int]]
Vector = Tuple[int, ...]

INFINITE = math.inf


@dataclass(frozen=True)
class CyclicFactor:
    """``Z/modulus``; modulus 0 is the infinite cyclic group."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError(f"negative modulus {self.modulus}")

    def reduce(self, value: int) -> int:
        return value % self.modulus if self.modulus else value

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"


@dataclass(frozen=True)
class AbelianDescriptor:
    """Direct sum of cyclic factors, or ``omega(L)``; no factors at all is the trivial group."""

    factors: Tuple[CyclicFactor, ...] = ()
    omega_of: "AbelianDescriptor | None" = None

    def __post_init__(self):
        if self.factors and self.omega_of is not None:
            raise ValueError("descriptor takes factors or omega_of, not both")
        if self.omega_of is not None and self.omega_of.is_omega:
            raise ValueError("nested omega descriptors are not supported")

    @classmethod
    def of(cls, *moduli: int) -> "AbelianDescriptor":
        return cls(tuple(CyclicFactor(n) for n in moduli))

    @classmethod
    def omega(cls, inner: "AbelianDescriptor") -> "AbelianDescriptor":
        return cls((), inner)

    @property
    def is_omega(self) -> bool:
        return self.omega_of is not None

    @property
    def rank(self) -> int:
        if self.is_omega:
            raise ValueError("omega descriptor has no finite rank")
        return len(self.factors)

    @property
    def moduli(self) -> Vector:
        return tuple(f.modulus for f in self.factors)

    def factor(self, key: Key) -> CyclicFactor:
        if self.omega_of is not None:
            if not (isinstance(key, tuple) and len(key) == 2 and key[0] >= 0):
                raise KeyError(f"bad omega key {key!r}")
            return self.omega_of.factors[key[1]]
        if not isinstance(key, int) or not 0 <= key < len(self.factors):
            raise KeyError(f"bad key {key!r} for {self}")
        return self.factors[key]

    def inner_keys(self) -> range:
        """Factor indices of one copy (the whole group when finitely generated)."""
        return range(len(self.omega_of.factors if self.omega_of else self.factors))

    def exponent_divides(self, m: int) -> bool:
        """True iff ``m * g == 0`` for every element."""
        base = self.omega_of or self
        return all(n and m % n == 0 for n in base.moduli)

    def __str__(self):
        if self.omega_of is not None:
            return f"omega({self.omega_of})"
        return " + ".join(str(f) for f in self.factors) or "1"


def _reduce_coords(desc: AbelianDescriptor, coords: Iterable[Tuple[Key, int]]):
    acc: dict = {}
    for key, value in coords:
        acc[key] = acc.get(key, 0) + value
    out = []
    for key in sorted(acc):
        v = desc.factor(key).reduce(acc[key])
        if v:
            out.append((key, v))
    return tuple(out)


@dataclass(frozen=True)
class AbelianElement:
    desc: AbelianDescriptor = field(repr=False)
    coords: Tuple[Tuple[Key, int], ...] = ()

    @classmethod
    def make(cls, desc: AbelianDescriptor, coords: "Mapping[Key, int] | Iterable[Tuple[Key, int]]" = ()):
        items = coords.items() if isinstance(coords, Mapping) else coords
        return cls(desc, _reduce_coords(desc, items))

    @classmethod
    def from_vector(cls, desc: AbelianDescriptor, vec: Sequence[int]) -> "AbelianElement":
        if len(vec) != desc.rank:
            raise ValueError(f"vector {tuple(vec)} does not match {desc}")
        return cls.make(desc, enumerate(vec))

    @classmethod
    def zero(cls, desc: AbelianDescriptor) -> "AbelianElement":
        return cls(desc, ())

    def vector(self) -> Vector:
        out = [0] * self.desc.rank
        for k, v in self.coords:
            out[k] = v
        return tuple(out)

    def get(self, key: Key) -> int:
        for k, v in self.coords:
            if k == key:
                return v
        return 0

    def _check(self, other: "AbelianElement"):
        if self.desc != other.desc:
            raise ValueError(f"descriptor mismatch: {self.desc} vs {other.desc}")

    def __add__(self, other: "AbelianElement") -> "AbelianElement":
        self._check(other)
        if not other.coords:
            return self
        if not self.coords:
            return other
        return AbelianElement(self.desc, _reduce_coords(self.desc, self.coords + other.coords))

    def __neg__(self) -> "AbelianElement":
        return self.scale(-1)

    def __sub__(self, other: "AbelianElement") -> "AbelianElement":
        return self + (-other)

    def scale(self, n: int) -> "AbelianElement":
        if n == 1:
            return self
        return AbelianElement(self.desc, _reduce_coords(self.desc, ((k, n * v) for k, v in self.coords)))

    __rmul__ = scale

    def __bool__(self):
        return bool(self.coords)

    def __str__(self):
        return format_abelian(self)


def add(a: AbelianElement, b: AbelianElement) -> AbelianElement:
    return a + b


def format_abelian(a: AbelianElement) -> str:
    """Dense vector ``[v0, v1]``, or ``{copy:[...], ...}`` for omega groups."""
    if not a.desc.is_omega:
        return "[" + ", ".join(str(v) for v in a.vector()) + "]"
    width = len(a.desc.omega_of.factors)
    copies: dict = {}
    for (j, i), v in a.coords:
        copies.setdefault(j, [0] * width)[i] = v
    body = ", ".join(f"{j}:[" + ", ".join(map(str, vec)) + "]" for j, vec in sorted(copies.items()))
    return "{" + body + "}"


# -- Hermite normal form ----------------------------------------------------

def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite(rows: Sequence[Sequence[int]], ncols: int):
    """Row-style Hermite normal form with the unimodular transform.

    Returns ``(hnf, transform, pivots, kernel)``: ``hnf[r] = sum_k transform[r][k]*rows[k]``,
    pivots strictly increasing with positive pivot entries and the entries
    above each pivot reduced into ``[0, pivot)``; ``kernel`` are the rows of
    the transform that annihilate ``rows``.
    """
    a = [list(r) for r in rows]
    k = len(a)
    u = [[int(i == j) for j in range(k)] for i in range(k)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == k:
            break
        for i in range(r + 1, k):
            if a[i][c] == 0:
                continue
            p, q = a[r][c], a[i][c]
            g, x, y = xgcd(p, q)
            pg, qg = p // g, q // g
            a[r], a[i] = ([x * s + y * t for s, t in zip(a[r], a[i])],
                          [-qg * s + pg * t for s, t in zip(a[r], a[i])])
            u[r], u[i] = ([x * s + y * t for s, t in zip(u[r], u[i])],
                          [-qg * s + pg * t for s, t in zip(u[r], u[i])])
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
            u[r] = [-v for v in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [s - q * t for s, t in zip(a[i], a[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return ([tuple(v) for v in a[:r]], [tuple(v) for v in u[:r]],
            tuple(pivots), [tuple(v) for v in u[r:]])


@dataclass(frozen=True)
class SubgroupLattice:
    """Subgroup of a finitely generated abelian group, as a lattice in Z^n.

    The lattice is the preimage of the subgroup: the generating rows plus the
    relation rows ``n_i * e_i`` of every finite factor.  Its HNF, index and
    the transform back to the user's basis are fixed at construction.
    """

    ambient: AbelianDescriptor
    basis: Tuple[Vector, ...]
    hnf: Tuple[Vector, ...] = field(compare=False, repr=False)
    pivots: Tuple[int, ...] = field(compare=False, repr=False)
    transform: Tuple[Vector, ...] = field(compare=False, repr=False)
    kernel: Tuple[Vector, ...] = field(compare=False, repr=False)
    index: "int | float" = field(compare=False)

    @property
    def finite(self) -> bool:
        return self.index != INFINITE

    def _reduce(self, vec: Sequence[int]):
        """Subtract pivot rows; returns (remainder, quotients). ``floor`` mode gives coset reps."""
        v = list(vec)
        quots = []
        for row, c in zip(self.hnf, self.pivots):
            q = v[c] // row[c]
            quots.append(q)
            if q:
                v = [s - q * t for s, t in zip(v, row)]
        return v, quots

    def member(self, vec: Sequence[int]) -> bool:
        rem, _ = self._reduce(vec)
        return not any(rem)

    def express(self, vec: Sequence[int]) -> Vector:
        """Integer coefficients of ``vec`` over ``basis`` (ambient relations dropped)."""
        rem, quots = self._reduce(vec)
        if any(rem):
            raise ValueError(f"{tuple(vec)} is not in the subgroup")
        nb = len(self.basis)
        coeffs = [0] * nb
        for q, urow in zip(quots, self.transform):
            if q:
                for j in range(nb):
                    coeffs[j] += q * urow[j]
        return tuple(coeffs)

    def coset_rep(self, vec: Sequence[int]) -> Vector:
        """Canonical representative of ``vec + subgroup``; reduced ambient coordinates."""
        rem, _ = self._reduce(vec)
        return tuple(f.reduce(v) for f, v in zip(self.ambient.factors, rem))

    def residues(self) -> Iterator[Vector]:
        if not self.finite:
            raise ValueError("infinite index: no finite transversal")
        diag = [self.hnf[i][i] for i in range(len(self.pivots))]
        return itertools.product(*(range(d) for d in diag))

    def transversal(self) -> list:
        return [AbelianElement.from_vector(self.ambient, v) for v in self.residues()]

    def relations(self) -> Iterator[Vector]:
        """Integer relations among ``basis`` rows holding in the ambient group."""
        nb = len(self.basis)
        for row in self.kernel:
            coeffs = row[:nb]
            if any(coeffs):
                yield coeffs

    def contains(self, a: AbelianElement) -> bool:
        return self.member(a.vector())


def hnf_reduce(basis: Iterable[Sequence[int]], ambient: AbelianDescriptor) -> SubgroupLattice:
    basis = tuple(tuple(int(x) for x in row) for row in basis)
    n = ambient.rank
    for row in basis:
        if len(row) != n:
            raise ValueError(f"row {row} does not match ambient rank {n}")
    relations = [tuple(m if j == i else 0 for j in range(n))
                 for i, m in enumerate(ambient.moduli) if m]
    hnf, transform, pivots, kernel = hermite(list(basis) + relations, n)
    if len(pivots) == n:
        index = math.prod(hnf[i][i] for i in range(n))
    else:
        index = INFINITE
    return SubgroupLattice(ambient, basis, tuple(hnf), pivots, tuple(transform), tuple(kernel), index)


def member(lattice: SubgroupLattice, a: AbelianElement) -> bool:
    return lattice.contains(a)


def transversal(lattice: SubgroupLattice) -> list:
    return lattice.transversal()


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism from a subgroup, fixed by the images of its basis rows."""

    domain: SubgroupLattice
    codomain: AbelianDescriptor
    images: Tuple[AbelianElement, ...]

    def __post_init__(self):
        if len(self.images) != len(self.domain.basis):
            raise ValueError("need one image per domain basis row")
        for img in self.images:
            if img.desc != self.codomain:
                raise ValueError(f"image {img} not in {self.codomain}")
        for rel in self.domain.relations():
            if self._combine(rel):
                raise ValueError(f"not well defined: relation {rel} maps to {self._combine(rel)}")

    def _combine(self, coeffs: Sequence[int]) -> AbelianElement:
        out = AbelianElement.zero(self.codomain)
        for c, img in zip(coeffs, self.images):
            if c:
                out = out + img.scale(c)
        return out

    def __call__(self, a: AbelianElement) -> AbelianElement:
        return self.apply_vector(a.vector())

    def apply_vector(self, vec: Sequence[int]) -> AbelianElement:
        try:
            coeffs = self.domain.express(vec)
        except ValueError:
            raise ValueError(f"{tuple(vec)} lies outside the domain") from None
        return self._combine(coeffs)


def apply_hom(h: AbelianHom, a: AbelianElement) -> AbelianElement:
    return h(a)
