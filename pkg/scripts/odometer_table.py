"""Print the adding-machine portrait and its action as +n on little-endian words."""
import argparse
import itertools
from dataclasses import dataclass

from selfsim.catalog import catalog_triple
from selfsim.tree import act, compile, format_portrait, portrait


def value(word) -> int:
    return sum((x - 1) << i for i, x in enumerate(word))


@dataclass
class TableConfig:
    length: int = 3
    power: int = 1
    depth: int = 3


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--depth", type=int, default=3)
    cfg = TableConfig(**vars(p.parse_args()))
    t = catalog_triple("adding-machine")
    a = compile(t, t.generator("t") ** cfg.power)
    print(f"t^{cfg.power} portrait to depth {cfg.depth}: {format_portrait(portrait(a, cfg.depth))}")
    for w in itertools.product((1, 2), repeat=cfg.length):
        img = act(a, w)
        print(f"{' '.join(map(str, w))} -> {' '.join(map(str, img))}   {value(w)} -> {value(img)}")


if __name__ == "__main__":
    main()
