"""q-characters of evaluation modules and the multiplicativity check on their tensor products."""

import argparse
from dataclasses import dataclass

from qtoroidal.qchar import TENSOR_MODES, mult_check, qcharacter
from qtoroidal.rep import evaluation_module


@dataclass
class Config:
    max_n: int = 2
    mode: str = "Delta_u1"


def main(cfg: Config):
    for n in range(cfg.max_n + 1):
        chi = qcharacter(evaluation_module(n, "a"))
        print(f"chi_q(V({n})_a) = " + " + ".join(f"{c}*[{m}]" if c != 1 else f"[{m}]" for m, c in chi.terms.items()))
    for n1 in range(1, cfg.max_n + 1):
        for n2 in range(1, cfg.max_n + 1):
            r = mult_check(evaluation_module(n1, "a"), evaluation_module(n2, "b"), cfg.mode)
            print(f"V({n1})_a x V({n2})_b [{cfg.mode}]: {'equal' if r['ok'] else 'DIFF'} ({r['terms']} monomials)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--mode", default="Delta_u1", choices=TENSOR_MODES)
    a = p.parse_args()
    main(Config(a.max_n, a.mode))
