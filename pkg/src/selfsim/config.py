"""Text formats: group descriptors, element literals, triple config files.

Element literal::

    base{ (x) : b , ... } top(x)

where ``(x)`` is an integer vector of the top group and ``b`` is a dense
vector ``[v0, v1, ...]`` over the base factors, or ``{copy:[...], ...}`` for
an ``omega`` base.  Example: ``base{(0):[1], (1):[-1]} top(2)``.

Triple file (``#`` starts a comment)::

    name = lamplighter
    [group]
    base = Z/2                  # Z, Z/n, sums "Z + Z/3", "1", omega(...)
    top = Z                     # free factors first
    [subgroup]
    Y = (1)                     # rows generating Y inside X
    watch = (0):0               # watched (X/Y class):(base key); omega keys copy.inner
    S =                         # rows [..] generating S in the watched coordinates
    [transversal]
    base{} top(0)               # one element per line, the first is the identity
    base{(0):[1]} top(0)
    [endomorphism]
    Y (1) -> (1)                # image of each Y row, in order
    A0 base{(0):[1], (1):[1]} top(0) -> base{(0):[1]} top(0)
    tail (0) 2 -1               # omega base only: class, first copy, copy shift
    [generators]
    b = base{(0):[1]} top(0)

``A0`` lines list the module generators of ``A0`` in the order of
:func:`selfsim.similarity.module_generators`; each line restates the
generator so files stay readable and mistakes are caught.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import List, Tuple

from .abelian import AbelianDescriptor, AbelianElement
from .similarity import SimilarityTriple, Tail, VirtualEndo, make_triple, subgroup
from .wreath import GroupDescriptor, WreathElement, XDescriptor, format_element, format_x


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(->|-?\d+|[A-Za-z_][A-Za-z_0-9-]*|[{}()\[\]:,./+^*·])")


def tokenize(text: str) -> List[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {text[pos:pos + 20]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Tokens:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def int(self) -> int:
        tok = self.next()
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}") from None

    def ints(self, close: str) -> Tuple[int, ...]:
        out = []
        while self.peek() != close:
            out.append(self.int())
            if self.peek() == ",":
                self.next()
        self.expect(close)
        return tuple(out)

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"trailing input {' '.join(self.toks[self.i:])!r}")


# -- descriptors ----------------------------------------------------------

def parse_descriptor(text: str) -> AbelianDescriptor:
    text = text.strip()
    m = re.fullmatch(r"omega\((.*)\)", text)
    if m:
        return AbelianDescriptor.omega(parse_descriptor(m.group(1)))
    if text == "1":
        return AbelianDescriptor()
    moduli = []
    for part in text.split("+"):
        part = part.strip()
        fm = re.fullmatch(r"Z(?:/(\d+))?(?:\^(\d+))?", part)
        if not fm:
            raise ParseError(f"bad group factor {part!r}")
        moduli.extend([int(fm.group(1) or 0)] * int(fm.group(2) or 1))
    return AbelianDescriptor.of(*moduli)


def parse_top(text: str) -> XDescriptor:
    d = parse_descriptor(text)
    if d.is_omega:
        raise ParseError("top group must be finitely generated")
    moduli = d.moduli
    free = sum(1 for n in moduli if n == 0)
    if any(moduli[:free]):
        raise ParseError("list the free factors of the top group first")
    return XDescriptor(free, tuple(moduli[free:]))


def format_top(x: XDescriptor) -> str:
    return str(x)


# -- elements ------------------------------------------------------------------

def _parse_x(tk: _Tokens) -> Tuple[int, ...]:
    tk.expect("(")
    return tk.ints(")")


def _parse_b(tk: _Tokens, base: AbelianDescriptor) -> AbelianElement:
    if base.is_omega:
        tk.expect("{")
        coords = []
        while tk.peek() != "}":
            j = tk.int()
            tk.expect(":")
            tk.expect("[")
            vec = tk.ints("]")
            if len(vec) != len(base.omega_of.factors):
                raise ParseError(f"copy vector {vec} does not match {base.omega_of}")
            coords.extend(((j, i), v) for i, v in enumerate(vec))
            if tk.peek() == ",":
                tk.next()
        tk.expect("}")
        return AbelianElement.make(base, coords)
    tk.expect("[")
    vec = tk.ints("]")
    if len(vec) != base.rank:
        raise ParseError(f"vector {vec} does not match {base}")
    return AbelianElement.from_vector(base, vec)


def _parse_element(tk: _Tokens, group: GroupDescriptor) -> WreathElement:
    tk.expect("base")
    tk.expect("{")
    items = []
    while tk.peek() != "}":
        x = _parse_x(tk)
        if len(x) != group.top.dim:
            raise ParseError(f"position {x} does not match {group.top}")
        tk.expect(":")
        items.append((x, _parse_b(tk, group.base)))
        if tk.peek() == ",":
            tk.next()
    tk.expect("}")
    tk.expect("top")
    top = _parse_x(tk)
    if len(top) != group.top.dim:
        raise ParseError(f"top {top} does not match {group.top}")
    return group.element(items, top)


def parse_element(text: str, group: GroupDescriptor) -> WreathElement:
    tk = _Tokens(text)
    g = _parse_element(tk, group)
    tk.done()
    return g


def parse_word(text: str, triple: SimilarityTriple) -> WreathElement:
    """Element literal, or a product of generator names: ``b*t^2``, ``t^-1 b``, ``e``."""
    text = text.strip()
    if text.startswith("base"):
        return parse_element(text, triple.group)
    names = dict(triple.generators)
    g = triple.group.identity
    for part in re.split(r"[\s*·]+", text):
        if not part or part in ("e", "1"):
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", part)
        if not m or m.group(1) not in names:
            raise ParseError(f"unknown generator in {part!r}; known: {', '.join(names) or 'none'}")
        g = g * names[m.group(1)] ** int(m.group(2) or 1)
    return g


def _key_text(key) -> str:
    return f"{key[0]}.{key[1]}" if isinstance(key, tuple) else str(key)


def _parse_key(text: str, base: AbelianDescriptor):
    if base.is_omega:
        m = re.fullmatch(r"(\d+)\.(\d+)", text)
        if not m:
            raise ParseError(f"omega key must be copy.inner, got {text!r}")
        return (int(m.group(1)), int(m.group(2)))
    return int(text)


# -- triples -------------------------------------------------------------------------

SECTIONS = ("group", "subgroup", "transversal", "endomorphism", "generators")


def format_triple(t: SimilarityTriple) -> str:
    G, sub, endo = t.group, t.subgroup, t.endo
    lines = []
    if t.name:
        lines.append(f"name = {t.name}")
    lines += ["[group]", f"base = {G.base}", f"top = {format_top(G.top)}", "", "[subgroup]",
              "Y = " + " ".join(format_x(r) for r in sub.y_lattice.basis),
              "watch = " + ", ".join(f"{format_x(c)}:{_key_text(k)}" for c, k in sub.watched),
              "S = " + " ".join("[" + ", ".join(map(str, r)) + "]" for r in sub.s_lattice.basis),
              "", "[transversal]"]
    lines += [format_element(x) for x in t.transversal]
    lines += ["", "[endomorphism]"]
    for row, img in zip(sub.y_lattice.basis, endo.on_y.images):
        lines.append(f"Y {format_x(row)} -> {format_x(img.vector())}")
    for (_, gen), img in zip(endo.generators, endo.images):
        lines.append(f"A0 {format_element(gen)} -> {format_element(img)}")
    for c, tail in endo.tails:
        lines.append(f"tail {format_x(c)} {tail.start} {tail.shift}")
    if t.generators:
        lines += ["", "[generators]"]
        lines += [f"{n} = {format_element(g)}" for n, g in t.generators]
    return "\n".join(lines).replace("= \n", "=\n") + "\n"


def _rows(text: str, open_: str, close: str) -> List[Tuple[int, ...]]:
    tk = _Tokens(text)
    rows = []
    while tk.peek() is not None:
        tk.expect(open_)
        rows.append(tk.ints(close))
        if tk.peek() == ",":
            tk.next()
    return rows


def parse_triple(text: str) -> SimilarityTriple:
    sections = {s: [] for s in SECTIONS}
    header = []
    current = header
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            if m.group(1) not in sections:
                raise ParseError(f"line {lineno}: unknown section [{m.group(1)}]")
            current = sections[m.group(1)]
            continue
        current.append((lineno, line))

    def settings(entries):
        out = {}
        for lineno, line in entries:
            if "=" not in line:
                raise ParseError(f"line {lineno}: expected key = value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
        return out

    name = settings(header).get("name", "")
    grp = settings(sections["group"])
    try:
        G = GroupDescriptor(parse_descriptor(grp["base"]), parse_top(grp["top"]))
    except KeyError as e:
        raise ParseError(f"[group] needs {e.args[0]}") from None

    sg = settings(sections["subgroup"])
    y_rows = _rows(sg.get("Y", ""), "(", ")")
    watched = []
    for item in filter(None, (s.strip() for s in re.split(r",(?![^()]*\))", sg.get("watch", "")))):
        m = re.fullmatch(r"\(([^)]*)\)\s*:\s*([\d.]+)", item)
        if not m:
            raise ParseError(f"bad watch entry {item!r}")
        c = tuple(int(v) for v in m.group(1).split(",") if v.strip())
        watched.append((c, _parse_key(m.group(2), G.base)))
    s_rows = _rows(sg.get("S", ""), "[", "]")
    sub = subgroup(G, y_rows, watched, s_rows)

    y_images, pairs, tails = [], [], {}
    for lineno, line in sections["endomorphism"]:
        kind, _, rest = line.partition(" ")
        if kind == "tail":
            tk = _Tokens(rest)
            c = G.top.reduce(_parse_x(tk))
            tails[c] = Tail(tk.int(), tk.int())
            tk.done()
            continue
        if "->" not in rest:
            raise ParseError(f"line {lineno}: expected 'source -> image'")
        src, img = (s.strip() for s in rest.split("->", 1))
        if kind == "Y":
            y_images.append((lineno, _rows(src, "(", ")"), _rows(img, "(", ")")))
        elif kind == "A0":
            pairs.append((lineno, parse_element(src, G), parse_element(img, G)))
        else:
            raise ParseError(f"line {lineno}: unknown endomorphism entry {kind!r}")

    if len(y_images) != len(y_rows):
        raise ParseError(f"need {len(y_rows)} Y images, got {len(y_images)}")
    for (lineno, src, _), row in zip(y_images, y_rows):
        if src != [row]:
            raise ParseError(f"line {lineno}: Y images must follow the Y rows in order")
    from .similarity import module_generators
    expected = module_generators(sub, tails)
    if len(pairs) != len(expected):
        raise ParseError(f"need {len(expected)} A0 generator images, got {len(pairs)}")
    for (lineno, src, _), (tag, gen) in zip(pairs, expected):
        if src != gen:
            raise ParseError(f"line {lineno}: expected generator {format_element(gen)} ({tag[0]})")
    endo = VirtualEndo.build(sub, [img[0] for _, _, img in y_images], [img for _, _, img in pairs], tails)

    transversal = [parse_element(line, G) for _, line in sections["transversal"]] or None
    gens = []
    for lineno, line in sections["generators"]:
        n, _, lit = line.partition("=")
        gens.append((n.strip(), parse_element(lit.strip(), G)))
    return make_triple(sub, endo, transversal, gens, name)


def load_triple(source: str) -> SimilarityTriple:
    """A catalog name or the path of a triple file."""
    from .catalog import catalog_triple
    path = Path(source)
    if path.is_file():
        return parse_triple(path.read_text())
    try:
        return catalog_triple(source)
    except KeyError as e:
        raise ParseError(f"{source!r} is neither a file nor a catalog entry ({e.args[0]})") from None
