"""Automorphisms of the rooted m-ary tree and the compiler from similarity triples.

Letters are ``1..m``; a vertex is a tuple of letters read from the root.
Automorphisms act on the right: ``compose(a, b)`` applies ``a`` first.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .similarity import InvalidTriple, SimilarityTriple
from .wreath import WreathElement, format_element

Word = Tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..m}``; ``images[i-1]`` is the image of ``i``."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other(i) for i in self.images))

    def inverse(self) -> "Permutation":
        out = [0] * self.m
        for i, j in enumerate(self.images, start=1):
            out[j - 1] = i
        return Permutation(tuple(out))

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, out = set(), []
        for i in range(1, self.m + 1):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


class TreeAutomorphism:
    """Base class: a root permutation plus sections, each again an automorphism.

    ``key`` identifies the state for memoization; ``trivial`` is a hint that
    is True only when the automorphism is known to be the identity.
    """

    m: int
    key: object
    trivial = False

    @property
    def root_perm(self) -> Permutation:
        raise NotImplementedError

    def section(self, i: int) -> "TreeAutomorphism":
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.key!r}>"


class Identity(TreeAutomorphism):
    trivial = True

    def __init__(self, m: int):
        self.m = m
        self.key = ("e", m)
        self._perm = Permutation.identity(m)

    @property
    def root_perm(self):
        return self._perm

    def section(self, i):
        return self


class CompiledElement(TreeAutomorphism):
    """A group element unfolded through the recursion, one level at a time."""

    def __init__(self, compiler: "Compiler", element: WreathElement):
        self.compiler = compiler
        self.element = element
        self.m = compiler.m
        self.key = ("phi", id(compiler), element)
        self.trivial = element.is_identity()
        self._perm = None
        self._sections = None

    def _unfold(self):
        t = self.compiler.triple
        images, sections = [], []
        for x in t.transversal:
            xg = x * self.element
            j = t.coset_index(xg)
            h = xg * self.compiler.inverse_transversal[j - 1]
            if not t.contains(h):
                raise InvalidTriple(f"coset incoherence: {format_element(h)} is not in H")
            images.append(j)
            sections.append(t.endo(h))
        try:
            self._perm = Permutation(tuple(images))
        except ValueError:
            raise InvalidTriple(f"root action of {format_element(self.element)} is not a permutation") from None
        self._sections = sections

    @property
    def root_perm(self):
        if self._perm is None:
            self._unfold()
        return self._perm

    def section_element(self, i: int) -> WreathElement:
        if self._sections is None:
            self._unfold()
        return self._sections[i - 1]

    def section(self, i):
        return self.compiler(self.section_element(i))


class Compiler:
    """Memo table of compiled elements for one triple; states are shared."""

    def __init__(self, triple: SimilarityTriple):
        self.triple = triple
        self.m = triple.m
        self.inverse_transversal = [x.inverse() for x in triple.transversal]
        self._states: Dict[WreathElement, CompiledElement] = {}

    def __call__(self, g: WreathElement) -> CompiledElement:
        state = self._states.get(g)
        if state is None:
            state = self._states[g] = CompiledElement(self, g)
        return state

    def __len__(self):
        return len(self._states)


def compile(t: SimilarityTriple, g: WreathElement) -> CompiledElement:
    return t.compiler(g)


class _Compose(TreeAutomorphism):
    def __init__(self, a: TreeAutomorphism, b: TreeAutomorphism):
        self.a, self.b = a, b
        self.m = a.m
        self.key = ("*", a.key, b.key)
        self._perm = None
        self._sections = {}

    @property
    def root_perm(self):
        if self._perm is None:
            self._perm = self.a.root_perm.then(self.b.root_perm)
        return self._perm

    def section(self, i):
        s = self._sections.get(i)
        if s is None:
            s = self._sections[i] = compose(self.a.section(i), self.b.section(self.a.root_perm(i)))
        return s


class _Inverse(TreeAutomorphism):
    def __init__(self, a: TreeAutomorphism):
        self.a = a
        self.m = a.m
        self.key = ("~", a.key)
        self._perm = None

    @property
    def root_perm(self):
        if self._perm is None:
            self._perm = self.a.root_perm.inverse()
        return self._perm

    def section(self, i):
        return invert(self.a.section(self.a.root_perm.inverse()(i)))


def compose(a: TreeAutomorphism, b: TreeAutomorphism) -> TreeAutomorphism:
    """``a`` then ``b``: ``act(compose(a, b), w) == act(b, act(a, w))``."""
    if a.m != b.m:
        raise ValueError(f"alphabet mismatch: {a.m} vs {b.m}")
    if a.trivial:
        return b
    if b.trivial:
        return a
    return _Compose(a, b)


def invert(a: TreeAutomorphism) -> TreeAutomorphism:
    if a.trivial:
        return a
    if isinstance(a, _Inverse):
        return a.a
    return _Inverse(a)


def _check_word(m: int, w: Sequence[int]):
    for letter in w:
        if not 1 <= letter <= m:
            raise ValueError(f"letter {letter} outside 1..{m}")


def act(a: TreeAutomorphism, w: Sequence[int]) -> Word:
    _check_word(a.m, w)
    out = []
    for letter in w:
        out.append(a.root_perm(letter))
        a = a.section(letter)
    return tuple(out)


def section_at(a: TreeAutomorphism, v: Sequence[int]) -> TreeAutomorphism:
    _check_word(a.m, v)
    for letter in v:
        a = a.section(letter)
    return a


# -- portraits ---------------------------------------------------------------

@dataclass(frozen=True)
class Portrait:
    """Permutations at every vertex above ``depth``; ``root`` is None at depth 0."""

    root: Optional[Permutation]
    children: Tuple["Portrait", ...] = ()

    @property
    def depth(self) -> int:
        if self.root is None:
            return 0
        return 1 + (self.children[0].depth if self.children else 0)

    def is_trivial(self) -> bool:
        if self.root is None:
            return True
        return self.root.is_identity and all(c.is_trivial() for c in self.children)

    def __str__(self):
        return format_portrait(self)


def portrait(a: TreeAutomorphism, depth: int, _memo: dict = None) -> Portrait:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    memo = {} if _memo is None else _memo

    def build(a, d):
        if d == 0:
            return Portrait(None)
        k = (a.key, d)
        p = memo.get(k)
        if p is None:
            children = tuple(build(a.section(i), d - 1) for i in range(1, a.m + 1)) if d > 1 else ()
            p = memo[k] = Portrait(a.root_perm, children)
        return p

    return build(a, depth)


def format_portrait(p: Portrait) -> str:
    """Nested ``perm[child, ...]`` in cycle notation, e.g. ``(1 2)[ e[], (1 2)[] ]``."""
    if p.root is None:
        return "-"
    if not p.children:
        return f"{p.root}[]"
    return f"{p.root}[ " + ", ".join(format_portrait(c) for c in p.children) + " ]"


def is_trivial_to_depth(a: TreeAutomorphism, depth: int, memo: dict = None) -> bool:
    """True iff ``a`` fixes every vertex of length ``<= depth``."""
    memo = {} if memo is None else memo

    def rec(a, d):
        if d == 0 or a.trivial:
            return True
        k = (a.key, d)
        r = memo.get(k)
        if r is None:
            r = a.root_perm.is_identity and all(rec(a.section(i), d - 1) for i in range(1, a.m + 1))
            memo[k] = r
        return r

    return rec(a, depth)


def agree_to_depth(a: TreeAutomorphism, b: TreeAutomorphism, depth: int) -> bool:
    """Equal action on all words of length ``depth``."""
    seen = set()
    frontier = [(a, b)]
    for _ in range(depth):
        nxt = []
        for x, y in frontier:
            if x.key == y.key or (x.key, y.key) in seen:
                continue
            seen.add((x.key, y.key))
            if x.root_perm != y.root_perm:
                return False
            nxt.extend((x.section(i), y.section(i)) for i in range(1, x.m + 1))
        frontier = nxt
    return True


# -- bisimulation ---------------------------------------------------------------

class Verdict(Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BisimResult:
    verdict: Verdict
    witness: Optional[Word] = None
    pairs: int = 0

    def __str__(self):
        if self.verdict is Verdict.DISTINCT:
            return f"DistinctAt({list(self.witness)})"
        return f"{self.verdict.value.capitalize()} ({self.pairs} pairs)"


def bisim_equal(a: TreeAutomorphism, b: TreeAutomorphism, cap: int = 10_000) -> BisimResult:
    """Three-valued coinductive equality.

    DISTINCT carries the first vertex (breadth-first) moved differently by
    the two sides; UNKNOWN means more than ``cap`` section pairs were needed.
    """
    if a.m != b.m:
        raise ValueError(f"alphabet mismatch: {a.m} vs {b.m}")
    seen = set()
    queue = deque([(a, b, ())])
    while queue:
        x, y, v = queue.popleft()
        if (x.key, y.key) in seen:
            continue
        seen.add((x.key, y.key))
        if len(seen) > cap:
            return BisimResult(Verdict.UNKNOWN, pairs=len(seen))
        if x.key == y.key:
            continue
        px, py = x.root_perm, y.root_perm
        if px != py:
            i = next(i for i in range(1, x.m + 1) if px(i) != py(i))
            return BisimResult(Verdict.DISTINCT, v + (i,), len(seen))
        for i in range(1, x.m + 1):
            queue.append((x.section(i), y.section(i), v + (i,)))
    return BisimResult(Verdict.EQUAL, pairs=len(seen))


# -- explicit automata and closure -----------------------------------------------

class ExplicitState(TreeAutomorphism):
    def __init__(self, automaton: "ExplicitAutomaton", name: str):
        self.automaton = automaton
        self.name = name
        self.m = automaton.m
        self.key = ("aut", id(automaton), name)
        perm, _ = automaton.states[name]
        self.trivial = perm.is_identity and all(s == name for s in automaton.states[name][1])

    @property
    def root_perm(self):
        return self.automaton.states[self.name][0]

    def section(self, i):
        return self.automaton.state(self.automaton.states[self.name][1][i - 1])


@dataclass
class ExplicitAutomaton:
    """Finite Mealy-style automaton: ``states[name] = (permutation, section names)``."""

    m: int
    states: Dict[str, Tuple[Permutation, Tuple[str, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        for name, (perm, secs) in self.states.items():
            if perm.m != self.m or len(secs) != self.m or any(s not in self.states for s in secs):
                raise ValueError(f"state {name} is malformed")
        self._cache = {}

    def state(self, name: str) -> ExplicitState:
        s = self._cache.get(name)
        if s is None:
            s = self._cache[name] = ExplicitState(self, name)
        return s

    def __len__(self):
        return len(self.states)

    def to_dot(self, title: str = "automaton") -> str:
        lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
        for name, (perm, _) in self.states.items():
            lines.append(f'  "{name}" [label="{name}: {perm}"];')
        for name, (perm, secs) in self.states.items():
            for i, s in enumerate(secs, start=1):
                lines.append(f'  "{name}" -> "{s}" [label="{i}|{perm(i)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class StateClosure:
    closed: bool
    automaton: Optional[ExplicitAutomaton]
    generator_states: Tuple[str, ...]
    explored: int

    @property
    def size(self) -> int:
        return len(self.automaton) if self.automaton else 0


def _minimize(states: list, index: Dict[object, int]):
    """Partition refinement on root permutations and section blocks."""
    perms = [s.root_perm for s in states]
    succ = [[index[s.section(i).key] for i in range(1, s.m + 1)] for s in states]
    ids: Dict[object, int] = {}
    block = [ids.setdefault(p, len(ids)) for p in perms]
    while True:
        ids = {}
        new = [ids.setdefault((block[n], tuple(block[j] for j in succ[n])), len(ids)) for n in range(len(states))]
        if len(ids) == len(set(block)):
            return new, succ
        block = new


def state_closure(gens: Sequence[TreeAutomorphism], cap: int = 10_000, names: Sequence[str] = ()) -> StateClosure:
    """All sections of ``gens``, merged up to bisimulation; ``closed`` iff at most ``cap`` raw states."""
    states, index = [], {}
    queue = deque(gens)
    while queue:
        s = queue.popleft()
        if s.key in index:
            continue
        if len(states) >= cap:
            return StateClosure(False, None, (), len(states))
        index[s.key] = len(states)
        states.append(s)
        queue.extend(s.section(i) for i in range(1, s.m + 1))
    if not states:
        return StateClosure(True, ExplicitAutomaton(2), (), 0)
    block, succ = _minimize(states, index)

    label: Dict[int, str] = {}
    for n, s in enumerate(states):
        b = block[n]
        if b not in label and s.root_perm.is_identity and all(block[j] == b for j in succ[n]):
            label[b] = "e"
    for name, g in zip(names, gens):
        label.setdefault(block[index[g.key]], name)
    counter = itertools.count()
    for n in range(len(states)):
        if block[n] not in label:
            label[block[n]] = f"q{next(counter)}"
    table = {}
    for n, s in enumerate(states):
        name = label[block[n]]
        if name not in table:
            table[name] = (s.root_perm, tuple(label[block[j]] for j in succ[n]))
    aut = ExplicitAutomaton(states[0].m, table)
    return StateClosure(True, aut, tuple(label[block[index[g.key]]] for g in gens), len(states))


# -- orbits ------------------------------------------------------------------

def level_orbits(gens: Sequence[TreeAutomorphism], level: int, m: int = None) -> List[List[Word]]:
    """Orbits of the generated group on the vertices of length ``level``."""
    if m is None:
        if not gens:
            raise ValueError("need generators or an explicit alphabet size")
        m = gens[0].m
    words = list(itertools.product(range(1, m + 1), repeat=level))
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for g in gens:
        for w in words:
            a, b = find(w), find(act(g, w))
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: Dict[Word, List[Word]] = {}
    for w in words:
        orbits.setdefault(find(w), []).append(w)
    return sorted(orbits.values())


def level1_transitive(gens: Sequence[TreeAutomorphism], m: int = None) -> bool:
    return len(level_orbits(gens, 1, m)) == 1


# -- kernel search ------------------------------------------------------------------

Letter = Tuple[int, int]


@dataclass(frozen=True)
class KernelWitness:
    word: Tuple[Letter, ...]
    element: WreathElement
    depth_checked: int

    def format(self, names: Sequence[str] = ()) -> str:
        return format_word(self.word, names)


def format_word(word: Sequence[Letter], names: Sequence[str] = ()) -> str:
    if not word:
        return "e"
    parts = []
    for i, e in word:
        n = names[i] if i < len(names) else f"g{i + 1}"
        parts.append(n if e == 1 else f"{n}^-1")
    return "·".join(parts)


def reduced_words(ngens: int, radius: int):
    """Freely reduced words of length 1..radius, shortest first, in a fixed order."""
    letters = [(i, e) for i in range(ngens) for e in (1, -1)]
    layer = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for a in letters:
                if w and w[-1] == (a[0], -a[1]):
                    continue
                nxt.append(w + (a,))
        yield from nxt
        layer = nxt


def kernel_search(t: SimilarityTriple, gens: Sequence[WreathElement], radius: int, depth: int) -> List[KernelWitness]:
    """Nontrivial elements, as reduced words of length <= ``radius``, acting trivially to ``depth``."""
    if radius < 1 or depth < 1:
        raise ValueError("radius and depth must be >= 1")
    inv = [g.inverse() for g in gens]
    products = {(): t.group.identity}
    memo: dict = {}
    out = []
    for w in reduced_words(len(gens), radius):
        i, e = w[-1]
        g = products[w] = products[w[:-1]] * (gens[i] if e == 1 else inv[i])
        if g.is_identity():
            continue
        if is_trivial_to_depth(compile(t, g), depth, memo):
            out.append(KernelWitness(w, g, depth))
    return out


# -- stabilizer pairs ------------------------------------------------------------------

def free_reduce(word: Sequence[Letter]) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for a in word:
        if out and out[-1] == (a[0], -a[1]):
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse_word(word: Sequence[Letter]) -> Tuple[Letter, ...]:
    return tuple((i, -e) for i, e in reversed(word))


class IntransitiveError(ValueError):
    pass


@dataclass
class StabilizerData:
    """Schreier generators of the stabilizer of letter 1, with their sections there."""

    triple: SimilarityTriple
    index: int
    words: List[Tuple[Letter, ...]]
    elements: List[WreathElement]
    sections: List[WreathElement]

    def verify(self, depth: int = 8, cap: int = 10_000) -> bool:
        """Section at [1] of each compiled generator against the compiled ``f``-image."""
        for h, s in zip(self.elements, self.sections):
            a = section_at(compile(self.triple, h), (1,))
            b = compile(self.triple, s)
            if not agree_to_depth(a, b, depth) or bisim_equal(a, b, cap).verdict is Verdict.DISTINCT:
                return False
        return True


def stabilizer_pair(t: SimilarityTriple, gens: Sequence[WreathElement], require_transitive: bool = True) -> StabilizerData:
    compiled = [compile(t, g) for g in gens]
    reps: Dict[int, Tuple[Tuple[Letter, ...], WreathElement]] = {1: ((), t.group.identity)}
    order = [1]
    for j in order:
        w, el = reps[j]
        for i, (g, a) in enumerate(zip(gens, compiled)):
            k = a.root_perm(j)
            if k not in reps:
                reps[k] = (w + ((i, 1),), el * g)
                order.append(k)
    if require_transitive and len(order) != t.m:
        raise IntransitiveError(f"orbit of letter 1 has {len(order)} of {t.m} letters")
    words, elements, seen = [], [], set()
    for j in order:
        w, el = reps[j]
        for i, (g, a) in enumerate(zip(gens, compiled)):
            wk, ek = reps[a.root_perm(j)]
            h = el * g * ek.inverse()
            if h.is_identity() or h in seen:
                continue
            seen.add(h)
            words.append(free_reduce(w + ((i, 1),) + inverse_word(wk)))
            elements.append(h)
    sections = [t.apply_f(h) for h in elements]
    return StabilizerData(t, len(order), words, elements, sections)
