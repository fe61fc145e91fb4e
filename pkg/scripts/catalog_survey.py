"""Survey every catalog triple: axioms, transitivity, state closure, kernel search."""
import argparse
import time
from dataclasses import dataclass

from selfsim.catalog import catalog_triple, triple_names
from selfsim.similarity import validate_triple
from selfsim.tree import compile, kernel_search, level1_transitive, state_closure


@dataclass
class SurveyConfig:
    radius: int = 3
    depth: int = 8
    cap: int = 10_000
    samples: int = 200
    seed: int = 0
    generic_m: tuple = (3, 4, 5)


def survey(cfg: SurveyConfig):
    rows = []
    for name in triple_names(cfg.generic_m):
        start = time.perf_counter()
        t = catalog_triple(name)
        names = [n for n, _ in t.generators]
        gens = [g for _, g in t.generators]
        valid = validate_triple(t, cfg.samples, cfg.seed).ok
        images = [compile(t, g) for g in gens]
        closure = state_closure(images, cfg.cap, names)
        hits = kernel_search(t, gens, cfg.radius, cfg.depth)
        rows.append((name, t.m, valid, level1_transitive(images, t.m),
                     closure.size if closure.closed else None,
                     hits[0].format(names) if hits else "-", len(hits), time.perf_counter() - start))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    cfg = SurveyConfig(radius=a.radius, depth=a.depth, seed=a.seed)
    print(f"{'triple':<22} {'m':>2}  valid  trans  states  first kernel word (count)   time")
    for name, m, valid, trans, states, first, count, secs in survey(cfg):
        print(f"{name:<22} {m:>2}  {valid!s:<5}  {trans!s:<5}  {states if states is not None else 'open':>6}  "
              f"{first:<18} ({count:>3})  {secs:5.2f}s")


if __name__ == "__main__":
    main()
