"""Exhaustive sweep of the gap inequality L_inf >= N - 4K + 6 for K = 2, 3.

Reports instance counts, the shape-table tallies and the tightest cases
(smallest slack) so one can see how close the inequality comes to failing.
"""

import argparse
import time
from dataclasses import dataclass

from treesimple.oracle import crosscheck_gap_bound


@dataclass
class Config:
    alphabet: int = 4
    max_len: int = 6


def main(cfg: Config) -> int:
    bad = 0
    for K in (2, 3):
        t0 = time.perf_counter()
        s = crosscheck_gap_bound(cfg.alphabet, cfg.max_len, K)
        bad += s.mismatches
        print(s.line(), f"({time.perf_counter() - t0:.1f}s)")
        for tag, color, N in s.tightest:
            print(f"    tight: instance={tag} color={color} N={N} slack={s.min_slack}")
        for ex in s.examples:
            print(f"    violation: {ex}")
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--alphabet", type=int, default=Config.alphabet)
    p.add_argument("--max-len", dest="max_len", type=int, default=Config.max_len)
    raise SystemExit(main(Config(**vars(p.parse_args()))))
