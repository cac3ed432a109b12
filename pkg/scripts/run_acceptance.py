"""Run the acceptance criteria and print one PASS/FAIL line each."""

import argparse
import sys
import time
from dataclasses import dataclass

from qtoroidal.suite import CRITERIA, SuiteConfig, run_criterion


@dataclass
class Config:
    criteria: tuple[int, ...] = tuple(sorted(CRITERIA))
    window: int = 6
    order: int = 6


def main(cfg: Config) -> int:
    failed = 0
    for n in cfg.criteria:
        t0 = time.perf_counter()
        res = run_criterion(n, SuiteConfig(window=cfg.window, order=cfg.order))
        dt = time.perf_counter() - t0
        ok = res["ok"] and dt < res["runtime_limit_s"]
        failed += not ok
        bad = [k for k, v in res.get("parts", {}).items() if v.get("failed")]
        extra = f"  failing: {', '.join(bad)}" if bad else ""
        print(f"[{'PASS' if ok else 'FAIL'}] {n} {res['name']:<22} {dt:7.2f}s{extra}")
    return 1 if failed else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("criteria", nargs="*", type=int)
    a = p.parse_args()
    sys.exit(main(Config(criteria=tuple(a.criteria) or Config.criteria)))
