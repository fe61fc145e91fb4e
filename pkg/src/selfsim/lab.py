"""Bounded checks of the obstruction to self-similarity of ``B wr X``.

For a triple on ``B wr X`` with ``X`` torsion free and ``B`` of exponent not
dividing ``m``, the subgroup ``A^m`` (generated by the ``m``-th powers of the
base group) is normal, sits inside ``H`` and is ``f``-invariant, so it lies in
the f-core.  The functions here test each ingredient on finite windows and
samples and package the result as a :class:`CoreCertificate`.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .similarity import NotInSubgroup, SimilarityTriple, random_element
from .tree import KernelWitness, compile, is_trivial_to_depth, kernel_search
from .wreath import (WreathElement, XElement, conjugate, format_element, format_x,
                     normal_closure_power_member)


class OutOfHypothesis(ValueError):
    """The triple is not of the shape ``B wr X`` with ``B`` finitely generated and ``X`` torsion free."""


def hypothesis_problem(t: SimilarityTriple) -> Optional[str]:
    G = t.group
    if not G.top.torsion_free:
        return f"X has torsion ({G.top})"
    if G.base.is_omega:
        return f"B = {G.base} is not finitely generated"
    return None


def require_hypothesis(t: SimilarityTriple):
    problem = hypothesis_problem(t)
    if problem:
        raise OutOfHypothesis(problem)


# -- disjoint shifts ----------------------------------------------------------------

def _shift_order(nonnegative: bool):
    yield 0
    for n in itertools.count(1):
        yield n
        if not nonnegative:
            yield -n


def find_disjoint_shift(z: Sequence[int], zs: Sequence[Sequence[int]], xs: Sequence[Sequence[int]],
                        nonnegative: bool = False) -> int:
    """Smallest ``|k|`` (``k >= 0`` first on ties) with ``k*z + zs`` disjoint from ``xs``.

    ``X`` is a free abelian group of rank ``len(z)``.  Every pair ``(zi, xj)``
    forbids at most one ``k``, so the scan stops after ``len(zs)*len(xs) + 1``
    candidates.  With ``nonnegative`` only ``k >= 0`` is tried.
    """
    z = tuple(z)
    if not any(z):
        raise ValueError("z must be nontrivial")
    forbidden = set()
    for a in zs:
        for b in xs:
            diff = [bj - aj for aj, bj in zip(a, b)]
            # k*z = diff has at most one solution
            i = next(i for i, v in enumerate(z) if v)
            if diff[i] % z[i]:
                continue
            k = diff[i] // z[i]
            if all(k * zj == dj for zj, dj in zip(z, diff)):
                forbidden.add(k)
    return next(k for k in _shift_order(nonnegative) if k not in forbidden)


# -- lemma checks -----------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma4Result:
    x: XElement
    image: WreathElement

    @property
    def holds(self) -> bool:
        return not self.image.is_identity()

    def __bool__(self):
        return self.holds

    def line(self, m: int) -> str:
        head = f"x={format_x(self.x)} f(x^{m})={format_element(self.image)}"
        if self.holds:
            return head + " nontrivial: ok"
        return head + f" TRIVIAL: red flag, A^(m(x^m - 1)) with m={m} would lie in ker f"


def lemma4_check(t: SimilarityTriple, x: Sequence[int]) -> Lemma4Result:
    """``f(x^m)`` must be nontrivial for nontrivial ``x`` in ``X``."""
    G = t.group
    x = G.top.reduce(x)
    if not any(x):
        raise ValueError("x must be nontrivial")
    xm = G.top_element(G.top.scale(x, t.m))
    if not t.contains(xm):
        raise NotInSubgroup(f"x^m = {format_element(xm)} is not in H")
    return Lemma4Result(x, t.apply_f(xm))


@dataclass(frozen=True)
class Lemma5Entry:
    key: object
    x: XElement
    image: Optional[WreathElement]
    passed: bool

    def line(self) -> str:
        head = f"key {self.key} x={format_x(self.x)}"
        if self.image is None:
            return head + " m*delta not in H: skipped"
        return f"{head} f={format_element(self.image)} {'ok' if self.passed else 'FAIL'}"


@dataclass(frozen=True)
class Lemma5Report:
    window: int
    entries: Tuple[Lemma5Entry, ...]
    exhaustive: bool

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def checked(self) -> int:
        return sum(e.image is not None for e in self.entries)

    def lines(self) -> List[str]:
        head = f"window {self.window}: {'pass' if self.passed else 'FAIL'}, {self.checked} generators checked"
        if self.exhaustive:
            head += ", exhaustive by translation"
        return [head] + [e.line() for e in self.entries]


def lemma5_check(t: SimilarityTriple, window: int) -> Lemma5Report:
    """f-invariance of ``A^m`` on the generators ``m * (b shifted by x)``, ``x`` in ``[-window, window]^d``.

    The images satisfy ``f(shift(a, y)) = shift(f(a), f(y))`` for ``y`` in ``Y``
    and ``A^m`` is normal, so when every ``X/Y`` class meets the window and no
    generator falls outside ``H`` the window check covers all of ``A^m``.
    """
    require_hypothesis(t)
    if window < 0:
        raise ValueError("window must be >= 0")
    G, m = t.group, t.m
    entries = []
    covered, skipped = set(), False
    for key in G.base.inner_keys():
        for x in itertools.product(range(-window, window + 1), repeat=G.top.dim):
            x = G.top.reduce(x)
            gen = G.delta(x, key, m)
            if gen.is_identity():
                # m*B kills this factor, nothing to check
                continue
            if not t.contains(gen):
                entries.append(Lemma5Entry(key, x, None, False))
                skipped = True
                continue
            img = t.apply_f(gen)
            entries.append(Lemma5Entry(key, x, img, normal_closure_power_member(img, m)))
            covered.add((key, t.subgroup.x_class(x)))
    classes = {(key, c) for key in G.base.inner_keys() for c in t.subgroup.x_classes()
               if not G.delta(G.top.zero, key, m).is_identity()}
    entries.sort(key=lambda e: (e.key, e.x))
    return Lemma5Report(window, tuple(entries), not skipped and classes <= covered)


@dataclass(frozen=True)
class Lemma2Report:
    branch: str
    b_m_trivial: bool
    mapped_into_a: Tuple[int, int]
    l_intersection: Tuple[WreathElement, ...]
    am_in_a0: Tuple[int, int]
    witness: Optional[WreathElement] = None
    reason: str = ""

    def lines(self, m: int) -> List[str]:
        if self.branch == "out-of-hypothesis":
            return [f"branch: out-of-hypothesis ({self.reason})"]
        out = [f"branch: {self.branch}",
               f"B^m trivial: {'yes' if self.b_m_trivial else 'no'} ({m}*B {'=' if self.b_m_trivial else '!='} 0)",
               f"A0 samples mapped into A: {self.mapped_into_a[0]}/{self.mapped_into_a[1]}",
               f"A^m <= A0 samples: {self.am_in_a0[0]}/{self.am_in_a0[1]}"]
        out += [f"l_intersection sample: {format_element(g)}" for g in self.l_intersection]
        if self.witness is not None:
            out.append(f"violation witness: {format_element(self.witness)}")
        return out


def _random_a0(t: SimilarityTriple, rng: random.Random) -> WreathElement:
    a = random_element(t.group, rng, top=False)
    return a * t.subgroup.representative(t.subgroup.invariant(a)).inverse()


def lemma2_branch(t: SimilarityTriple, samples: int = 50, seed: int = 0, keep: int = 5) -> Lemma2Report:
    """Which side of the dichotomy ``m*B = 0`` or ``f(A0) <= A`` holds, on samples.

    Branch ``violated`` (neither side holds) means the triple is invalid.
    """
    problem = hypothesis_problem(t)
    if problem:
        return Lemma2Report("out-of-hypothesis", False, (0, 0), (), (0, 0), reason=problem)
    G, m = t.group, t.m
    rng = random.Random(seed)
    b_m_trivial = G.base.exponent_divides(m)
    inside, kept, witness = 0, [], None
    for _ in range(samples):
        a = _random_a0(t, rng)
        img = t.apply_f(a)
        if img.in_base():
            inside += 1
            if len(kept) < keep and not img.is_identity() and img not in kept:
                kept.append(img)
        elif witness is None:
            witness = a
    am_inside = sum(t.contains(random_element(G, rng, top=False).scale_base(m)) for _ in range(samples))
    if b_m_trivial:
        branch = "B_m_trivial"
    elif samples == 0:
        branch = "inconclusive"
    elif witness is None:
        branch = "A0f_in_A"
    else:
        branch = "violated"
    return Lemma2Report(branch, b_m_trivial, (inside, samples), tuple(kept), (am_inside, samples),
                        None if branch != "violated" else witness)


# -- certificates ----------------------------------------------------------------------

@dataclass(frozen=True)
class CheckEntry:
    kind: str
    subject: str
    passed: bool

    def line(self) -> str:
        return f"{self.kind:<13} {self.subject} {'pass' if self.passed else 'FAIL'}"


@dataclass(frozen=True)
class CoreCertificate:
    subgroup_desc: str
    witness: WreathElement
    generators: Tuple[WreathElement, ...]
    checks: Tuple[CheckEntry, ...]
    depth: int
    lemma5: Lemma5Report

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> List[str]:
        out = [f"subgroup: {self.subgroup_desc}", f"witness: {format_element(self.witness)}"]
        out += [f"generator: {format_element(g)}" for g in self.generators]
        out += [c.line() for c in self.checks]
        out.append(f"verdict: {'certified' if self.ok else 'NOT certified'}")
        return out


def witness_key(t: SimilarityTriple):
    """First base factor on which multiplication by ``m`` is not zero, or None."""
    for key in t.group.base.inner_keys():
        if not t.group.delta(t.group.top.zero, key, t.m).is_identity():
            return key
    return None


def core_witness(t: SimilarityTriple, window: int = 10, depth: int = 10, seed: int = 0,
                 samples: int = 20) -> Optional[CoreCertificate]:
    """Certificate that ``A^m`` is a nontrivial part of the f-core, or None when ``m*B = 0``."""
    require_hypothesis(t)
    G, m = t.group, t.m
    key = witness_key(t)
    if key is None:
        return None
    rng = random.Random(seed)
    witness = G.delta(G.top.zero, key, m)
    gens = tuple(G.delta((x,) + (0,) * (G.top.dim - 1), key, m) for x in range(-2, 3))
    checks = [CheckEntry("nontrivial", format_element(witness), not witness.is_identity())]
    checks.append(CheckEntry("in-H", format_element(witness), t.contains(witness)))
    for _ in range(samples):
        g = random_element(G, rng, top=False).scale_base(m)
        checks.append(CheckEntry("in-H", format_element(g), t.contains(g)))
    for _ in range(samples):
        g = random_element(G, rng, top=False).scale_base(m)
        by = random_element(G, rng)
        conj = conjugate(g, by)
        checks.append(CheckEntry("normal", f"{format_element(g)} by {format_element(by)}",
                                 normal_closure_power_member(conj, m)))
    lemma5 = lemma5_check(t, window)
    checks.append(CheckEntry("f-invariant", f"window {window}, {lemma5.checked} generators", lemma5.passed))
    image = t.apply_f(witness)
    checks.append(CheckEntry("f-step", f"f(witness)={format_element(image)}", normal_closure_power_member(image, m)))
    checks.append(CheckEntry("kernel", f"portrait trivial to depth {depth}",
                             is_trivial_to_depth(compile(t, witness), depth)))
    return CoreCertificate(f"A^{m}", witness, gens, tuple(checks), depth, lemma5)


def corroborate(t: SimilarityTriple, cert: CoreCertificate, gens: Sequence[WreathElement], radius: int,
                depth: int) -> Optional[KernelWitness]:
    """A kernel-search hit over ``gens`` whose element is the certificate's witness."""
    for w in kernel_search(t, gens, radius, depth):
        if w.element == cert.witness:
            return w
    return None


# -- report --------------------------------------------------------------------------------

@dataclass
class LabReport:
    name: str
    m: int
    shape: str
    out_of_hypothesis: str = ""
    lemma2: Optional[Lemma2Report] = None
    lemma4: Optional[List[Lemma4Result]] = None
    lemma5: Optional[Lemma5Report] = None
    certificate: Optional[CoreCertificate] = None
    note: str = ""
    errors: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.ok

    def exit_code(self) -> int:
        if self.out_of_hypothesis or self.errors:
            return 1
        return 2 if self.certified else 0

    def text(self) -> str:
        lines = [f"lab report: {self.name} (m = {self.m}, {self.shape})"]
        if self.out_of_hypothesis:
            lines.append(f"out of hypothesis: {self.out_of_hypothesis}")
        if self.lemma2 is not None:
            lines += ["[lemma2]"] + self.lemma2.lines(self.m)
        if self.lemma4 is not None:
            lines += ["[lemma4]"] + [r.line(self.m) for r in self.lemma4]
        if self.lemma5 is not None:
            lines += ["[lemma5]"] + self.lemma5.lines()
        if self.certificate is not None:
            lines += ["[certificate]"] + self.certificate.lines()
        if self.note:
            lines.append(f"note: {self.note}")
        lines += [f"error: {e}" for e in self.errors]
        return "\n".join(lines) + "\n"


def lemma4_points(dim: int, count: int, rng: random.Random, radius: int = 3) -> List[XElement]:
    """Unit vectors followed by distinct random nonzero points, sorted."""
    pts = {tuple(int(i == j) for j in range(dim)) for i in range(dim)}
    for _ in range(count):
        x = tuple(rng.randint(-radius, radius) for _ in range(dim))
        if any(x):
            pts.add(x)
    return sorted(pts)


def run_lab(t: SimilarityTriple, window: int = 10, depth: int = 10, samples: int = 50, seed: int = 0) -> LabReport:
    G = t.group
    report = LabReport(t.name or "triple", t.m, f"B = {G.base}, X = {G.top}")
    problem = hypothesis_problem(t)
    if problem:
        report.out_of_hypothesis = problem
        report.lemma2 = lemma2_branch(t, samples, seed)
        return report
    rng = random.Random(seed)
    report.lemma2 = lemma2_branch(t, samples, seed)
    if report.lemma2.branch == "violated":
        report.errors.append("neither m*B = 0 nor f(A0) <= A: the triple is not valid")
    report.lemma4 = []
    for x in lemma4_points(G.top.dim, 4, rng):
        try:
            r = lemma4_check(t, x)
        except NotInSubgroup as e:
            report.errors.append(str(e))
            continue
        report.lemma4.append(r)
    report.lemma5 = lemma5_check(t, window)
    report.certificate = core_witness(t, window, depth, seed)
    if report.certificate is None:
        exponent = math.lcm(*G.base.moduli) if G.base.moduli else 1
        report.note = (f"torsion exponent {exponent} branch: the exponent of B divides m = {t.m}, "
                       "so A^m is trivial and gives no obstruction")
    elif not report.certificate.ok:
        report.errors.append("A^m certificate checks failed")
    return report
