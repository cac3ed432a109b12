"""Solve R for V(1) against V(n) and print poles, determinant and special ratios."""

import argparse
from dataclasses import dataclass

from qtoroidal.rmat import poles, solve_evaluation, unitarity


@dataclass
class Config:
    max_n: int = 3
    mode: str = "Delta_u1"


def main(cfg: Config):
    for n in range(1, cfg.max_n + 1):
        R = solve_evaluation(1, n, cfg.mode)
        p = poles(R)
        print(f"V(1) x V({n})  nullity={R.nullity}  window={R.window}")
        print(f"  poles     {', '.join(map(str, p['poles']))}")
        print(f"  det zeros {', '.join(map(str, p['det_zeros']))}")
        print(f"  det       {p['det']}")
    R = solve_evaluation(1, 1, cfg.mode)
    print(f"unitarity 2x2: {unitarity(R, R)['factor']}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--mode", default="Delta_u1", choices=["Delta", "Delta_u1"])
    a = p.parse_args()
    main(Config(a.max_n, a.mode))
