"""Write the minimized generator automaton of each catalog triple as a DOT file."""
import argparse
from dataclasses import dataclass
from pathlib import Path

from selfsim.catalog import catalog_triple, triple_names
from selfsim.tree import compile, state_closure


@dataclass
class ExportConfig:
    out_dir: Path = Path("automata")
    cap: int = 10_000


def export(cfg: ExportConfig):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name in triple_names():
        t = catalog_triple(name)
        names = [n for n, _ in t.generators]
        closure = state_closure([compile(t, g) for _, g in t.generators], cfg.cap, names)
        if not closure.closed:
            print(f"{name}: more than {cfg.cap} states, skipped")
            continue
        path = cfg.out_dir / f"{name.replace('(', '-').replace(')', '')}.dot"
        path.write_text(closure.automaton.to_dot(name))
        print(f"{name}: {closure.size} states -> {path}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("automata"))
    p.add_argument("--cap", type=int, default=10_000)
    a = p.parse_args()
    export(ExportConfig(a.out, a.cap))


if __name__ == "__main__":
    main()
