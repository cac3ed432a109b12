"""Classify sampled ratios b/a for V(n1)_1 x V(n2)_b and compare with the R-matrix special set."""

import argparse
from dataclasses import dataclass

from qtoroidal.fusion import generic_irreducibility_scan, qpow_grid
from qtoroidal.rmat import poles, solve_evaluation


@dataclass
class Config:
    n1: int = 1
    n2: int = 1
    lo: int = -4
    hi: int = 4
    window: int = 2


def main(cfg: Config):
    rows = generic_irreducibility_scan(cfg.n1, cfg.n2, qpow_grid(cfg.lo, cfg.hi), window=cfg.window)
    for r in rows:
        detail = "" if r["class"] == "undefined" else f"cyclic={r['cyclic']} singular={r.get('singular_weights')}"
        print(f"{str(r['ratio']):>10}  {r['class']:<9} {detail}")
    if cfg.n1 == 1:
        special = ", ".join(map(str, poles(solve_evaluation(1, cfg.n2))["special"]))
        print(f"R-matrix special set: {special}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int, default=1)
    p.add_argument("--lo", type=int, default=-4)
    p.add_argument("--hi", type=int, default=4)
    a = p.parse_args()
    main(Config(a.n1, a.n2, a.lo, a.hi))
