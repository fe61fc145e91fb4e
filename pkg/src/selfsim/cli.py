"""Command-line front end: ``selfsim <command> ...``.

Triples are given as catalog names or config file paths.  Exit codes:
0 success, 1 invalid input or out-of-hypothesis, 2 kernel witness or core
certificate found, 3 structural check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .catalog import ENTRIES, catalog_triple, triple_names
from .config import ParseError, format_triple, load_triple, parse_word
from .lab import run_lab
from .similarity import InvalidTriple, NotInSubgroup, validate_triple
from .tree import (IntransitiveError, act, compile, format_portrait, format_word, kernel_search,
                   level1_transitive, level_orbits, portrait, stabilizer_pair, state_closure)

EXIT_OK, EXIT_INPUT, EXIT_FOUND, EXIT_STRUCTURE = 0, 1, 2, 3


def _generators(t):
    if not t.generators:
        raise ParseError("the triple lists no generators")
    return [n for n, _ in t.generators], [g for _, g in t.generators]


def cmd_catalog(args, out) -> int:
    if args.action == "list":
        for name in triple_names():
            t = catalog_triple(name)
            key = "zwrz-pair-generic(m)" if name.startswith("zwrz-pair-generic") else name
            print(f"{name:<22} {str(t.group):<22} m={t.m:<3} {ENTRIES[key]}", file=out)
        return EXIT_OK
    if not args.name:
        raise ParseError("catalog show needs a name")
    out.write(format_triple(catalog_triple(args.name)))
    return EXIT_OK


def cmd_compile(args, out) -> int:
    t = load_triple(args.triple)
    g = parse_word(args.element, t)
    a = compile(t, g)
    print(format_portrait(portrait(a, args.depth)), file=out)
    if args.dot:
        closure = state_closure([a], cap=args.cap, names=["g"])
        if not closure.closed:
            print(f"state closure exceeded {args.cap} states; no DOT written", file=sys.stderr)
            return EXIT_INPUT
        Path(args.dot).write_text(closure.automaton.to_dot(t.name or "automaton"))
        print(f"wrote {args.dot} ({closure.size} states)", file=out)
    return EXIT_OK


def cmd_act(args, out) -> int:
    t = load_triple(args.triple)
    g = parse_word(args.element, t)
    try:
        word = [int(c) for c in args.word.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"letters must be integers 1..{t.m}") from None
    print(" ".join(map(str, act(compile(t, g), word))), file=out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    t = load_triple(args.triple)
    names, gens = _generators(t)
    report = validate_triple(t, samples=args.samples, seed=args.seed)
    print(f"triple {t.name or args.triple}: {t.group}, m = {t.m}", file=out)
    print(report.text(), file=out)
    if not report.ok:
        print("structural checks failed; skipping compilation", file=out)
        return EXIT_STRUCTURE
    compiled = [compile(t, g) for g in gens]
    transitive = level1_transitive(compiled, t.m)
    print(f"level-1 transitive: {'yes' if transitive else 'no'}", file=out)
    closure = state_closure(compiled, cap=args.cap, names=names)
    if closure.closed:
        print(f"state closure: closed, {closure.size} states", file=out)
    else:
        print(f"state closure: not closed within {args.cap} states (informational)", file=out)
    structural = transitive
    witnesses = kernel_search(t, gens, args.radius, args.depth) if structural else []
    print(f"kernel search radius {args.radius} depth {args.depth}: {len(witnesses)} witnesses", file=out)
    for w in witnesses:
        print(f"witness {w.format(names)} = {w.element}", file=out)
    if not structural:
        return EXIT_STRUCTURE
    return EXIT_FOUND if witnesses else EXIT_OK


def cmd_falsify(args, out) -> int:
    t = load_triple(args.triple)
    report = run_lab(t, window=args.window, depth=args.depth, samples=args.samples, seed=args.seed)
    out.write(report.text())
    return report.exit_code()


def cmd_orbits(args, out) -> int:
    t = load_triple(args.triple)
    _, gens = _generators(t)
    for orbit in level_orbits([compile(t, g) for g in gens], args.level, t.m):
        print("{" + ", ".join(" ".join(map(str, w)) or "()" for w in orbit) + "}", file=out)
    return EXIT_OK


def cmd_stabilizer(args, out) -> int:
    t = load_triple(args.triple)
    names, gens = _generators(t)
    data = stabilizer_pair(t, gens)
    print(f"stabilizer of 1: index {data.index}, {len(data.words)} Schreier generators", file=out)
    for w, h, s in zip(data.words, data.elements, data.sections):
        print(f"{format_word(w, names)} = {h} -> section {s}", file=out)
    ok = data.verify(depth=args.depth)
    print(f"sections at 1 agree with f-images to depth {args.depth}: {'yes' if ok else 'no'}", file=out)
    return EXIT_OK if ok else EXIT_STRUCTURE


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input; argparse's own code 2 would read as "witness found"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="selfsim", description="Self-similar representations of wreath products.")
    p.add_argument("--seed", type=int, default=0, help="seed for every sampled check (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list or show built-in triples")
    c.add_argument("action", choices=["list", "show"])
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("compile", help="print the portrait of an element")
    c.add_argument("triple")
    c.add_argument("--element", "-e", required=True, help="element literal or word in generator names")
    c.add_argument("--depth", "-d", type=int, default=3)
    c.add_argument("--dot", help="write the state automaton to this DOT file")
    c.add_argument("--cap", "-c", type=int, default=10_000)
    c.set_defaults(func=cmd_compile)

    c = sub.add_parser("act", help="image of a vertex under an element")
    c.add_argument("triple")
    c.add_argument("--element", "-e", required=True)
    c.add_argument("--word", required=True, help="letters 1..m separated by spaces")
    c.set_defaults(func=cmd_act)

    c = sub.add_parser("check", help="validate a triple and search for kernel elements")
    c.add_argument("triple")
    c.add_argument("--radius", "-r", type=int, default=3)
    c.add_argument("--depth", "-d", type=int, default=8)
    c.add_argument("--cap", "-c", type=int, default=10_000)
    c.add_argument("--samples", type=int, default=200)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("falsify", help="run the A^m core certificate checks")
    c.add_argument("triple")
    c.add_argument("--window", "-w", type=int, default=10)
    c.add_argument("--depth", "-d", type=int, default=10)
    c.add_argument("--samples", type=int, default=50)
    c.set_defaults(func=cmd_falsify)

    c = sub.add_parser("orbits", help="orbits of the generators on a tree level")
    c.add_argument("triple")
    c.add_argument("--level", "-l", type=int, default=1)
    c.set_defaults(func=cmd_orbits)

    c = sub.add_parser("stabilizer", help="Schreier generators of the stabilizer of letter 1")
    c.add_argument("triple")
    c.add_argument("--depth", "-d", type=int, default=8)
    c.set_defaults(func=cmd_stabilizer)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ParseError, InvalidTriple, NotInSubgroup, IntransitiveError, KeyError, ValueError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
