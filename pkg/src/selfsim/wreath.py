"""Elements and group law of ``G = B wr X`` for abelian ``B`` and f.g. abelian ``X``.

An element is a pair ``(base, top)``: ``base`` is a finite-support map from
``X`` to ``B`` (an element of the base group ``A``) and ``top`` is an element
of ``X``.  Elements of ``X`` are plain integer tuples, free coordinates first
and then residues modulo the torsion moduli.

Convention: ``(a, x) * (b, y) = (a + shift(b, x), x + y)`` with
``shift(b, x)(z) = b(z - x)``.  So ``shift(b, x)`` is the product
``x * b * x^-1`` and :func:`conjugate` (``by^-1 * g * by``) moves support by
``-x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Tuple

from .abelian import AbelianDescriptor, AbelianElement, CyclicFactor, Key

XElement = Tuple[int, ...]


@dataclass(frozen=True)
class XDescriptor:
    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0 or any(n <= 1 for n in self.torsion):
            raise ValueError(f"bad top group Z^{self.free_rank} x {self.torsion}")

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def abelian(self) -> AbelianDescriptor:
        moduli = (0,) * self.free_rank + tuple(self.torsion)
        return AbelianDescriptor(tuple(CyclicFactor(n) for n in moduli))

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def zero(self) -> XElement:
        return (0,) * self.dim

    def reduce(self, vec: Sequence[int]) -> XElement:
        if len(vec) != self.dim:
            raise ValueError(f"{tuple(vec)} is not an element of {self}")
        d = self.free_rank
        return tuple(vec[:d]) + tuple(v % n for v, n in zip(vec[d:], self.torsion))

    def add(self, x: XElement, y: XElement) -> XElement:
        return self.reduce([a + b for a, b in zip(x, y)])

    def scale(self, x: XElement, n: int) -> XElement:
        return self.reduce([n * a for a in x])

    def neg(self, x: XElement) -> XElement:
        return self.scale(x, -1)

    def sub(self, x: XElement, y: XElement) -> XElement:
        return self.reduce([a - b for a, b in zip(x, y)])

    def __str__(self):
        return str(self.abelian) if self.dim else "1"


@dataclass(frozen=True)
class GroupDescriptor:
    base: AbelianDescriptor
    top: XDescriptor

    def __str__(self):
        return f"({self.base}) wr ({self.top})"

    @property
    def identity(self) -> "WreathElement":
        return WreathElement(self, (), self.top.zero)

    def element(self, base: "Mapping[XElement, AbelianElement] | Iterable" = (), top: Sequence[int] = None):
        """Build an element from a (possibly unreduced) base map."""
        items = base.items() if isinstance(base, Mapping) else base
        top = self.top.zero if top is None else self.top.reduce(top)
        return WreathElement(self, _normalize(self, items), top)

    def delta(self, x: Sequence[int], key: Key = 0, value: int = 1) -> "WreathElement":
        """The base element with a single coordinate ``value`` at position ``x``."""
        return self.element([(tuple(x), AbelianElement.make(self.base, [(key, value)]))])

    def top_element(self, x: Sequence[int]) -> "WreathElement":
        return WreathElement(self, (), self.top.reduce(x))

    def b_key_modulus(self, key: Key) -> int:
        return self.base.factor(key).modulus


def _normalize(group: GroupDescriptor, items) -> tuple:
    acc: dict = {}
    zero = AbelianElement.zero(group.base)
    for x, b in items:
        x = group.top.reduce(x)
        acc[x] = acc.get(x, zero) + b
    return tuple(sorted((x, b) for x, b in acc.items() if b))


@dataclass(frozen=True)
class WreathElement:
    group: GroupDescriptor = field(repr=False)
    base: Tuple[Tuple[XElement, AbelianElement], ...]
    top: XElement

    @property
    def support(self) -> Tuple[XElement, ...]:
        return tuple(x for x, _ in self.base)

    def base_map(self) -> dict:
        return dict(self.base)

    def is_identity(self) -> bool:
        return not self.base and not any(self.top)

    def in_base(self) -> bool:
        return not any(self.top)

    def base_part(self) -> "WreathElement":
        return WreathElement(self.group, self.base, self.group.top.zero)

    def shift(self, x: XElement) -> "WreathElement":
        """Translate the base by ``x`` (the top part is kept)."""
        if not any(x):
            return self
        add = self.group.top.add
        return WreathElement(self.group, tuple(sorted((add(z, x), b) for z, b in self.base)), self.top)

    def scale_base(self, n: int) -> "WreathElement":
        """``n``-fold sum of the base part (top dropped)."""
        return self.group.element(((z, b.scale(n)) for z, b in self.base))

    def add_base(self, other: "WreathElement") -> "WreathElement":
        """Sum of base parts (tops dropped)."""
        if not other.base:
            return self.base_part()
        if not self.base:
            return other.base_part()
        return self.group.element(self.base + other.base)

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        if self.group != other.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")
        if not other.base:
            base = self.base
        else:
            add = self.group.top.add
            moved = ((add(z, self.top), b) for z, b in other.base)
            base = _normalize(self.group, list(self.base) + list(moved)) if self.base else \
                tuple(sorted(moved))
        return WreathElement(self.group, base, self.group.top.add(self.top, other.top))

    def inverse(self) -> "WreathElement":
        # (a, x)^-1 = (-shift(a, -x), -x)
        top = self.group.top
        nx = top.neg(self.top)
        base = tuple(sorted((top.add(z, nx), -b) for z, b in self.base))
        return WreathElement(self.group, base, nx)

    def __pow__(self, n: int) -> "WreathElement":
        if n < 0:
            return self.inverse() ** (-n)
        result, sq = self.group.identity, self
        while n:
            if n & 1:
                result = result * sq
            n >>= 1
            if n:
                sq = sq * sq
        return result

    def __str__(self):
        return format_element(self)


def multiply(g: WreathElement, h: WreathElement) -> WreathElement:
    return g * h


def inverse(g: WreathElement) -> WreathElement:
    return g.inverse()


def conjugate(g: WreathElement, by: WreathElement) -> WreathElement:
    """``g^by = by^-1 * g * by``."""
    return by.inverse() * g * by


def power(g: WreathElement, n: int) -> WreathElement:
    return g ** n


def normal_closure_power_member(g: WreathElement, m: int) -> bool:
    """Membership in ``A^m``: trivial top and every coordinate in ``m * B``."""
    if any(g.top):
        return False
    for _, b in g.base:
        for key, v in b.coords:
            n = b.desc.factor(key).modulus
            d = abs(m) if n == 0 else _gcd(m, n)
            if d == 0 or v % d:
                return False
    return True


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def format_x(x: XElement) -> str:
    return "(" + ", ".join(str(v) for v in x) + ")"


def format_element(g: WreathElement) -> str:
    """Literal ``base{ (x) : b , ... } top( x )`` understood by :mod:`selfsim.config`."""
    body = ", ".join(f"{format_x(x)}:{b}" for x, b in g.base)
    return f"base{{{body}}} top{format_x(g.top)}"
