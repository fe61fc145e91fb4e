"""Core certificates for the Z wr Z pairs H = A<t^m> across a range of m.

For each m the script builds the certificate for A^m, then checks that a
kernel search over {b, t} at radius m finds b^m independently.
"""
import argparse
from dataclasses import dataclass

from selfsim.catalog import zwrz_pair
from selfsim.lab import corroborate, run_lab


@dataclass
class SweepConfig:
    m_values: tuple = (2, 3, 4, 5, 6)
    window: int = 10
    depth: int = 10
    seed: int = 0
    verbose: bool = False


def sweep(cfg: SweepConfig):
    for m in cfg.m_values:
        t = zwrz_pair(m)
        rep = run_lab(t, cfg.window, cfg.depth, seed=cfg.seed)
        cert = rep.certificate
        hit = corroborate(t, cert, [g for _, g in t.generators], m, cfg.depth) if cert else None
        yield m, rep, hit


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-m", type=int, default=6)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--verbose", action="store_true", help="print the full lab report for each m")
    a = p.parse_args()
    cfg = SweepConfig(tuple(range(2, a.max_m + 1)), a.window, a.depth, verbose=a.verbose)
    for m, rep, hit in sweep(cfg):
        cert = rep.certificate
        print(f"m={m}: {cert.subgroup_desc if cert else 'none'} "
              f"{'certified' if rep.certified else 'not certified'}, exit {rep.exit_code()}, "
              f"kernel word {hit.format(['b', 't']) if hit else '-'}")
        if cfg.verbose:
            print(rep.text())


if __name__ == "__main__":
    main()
