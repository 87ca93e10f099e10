"""Run every symbolic-vs-concrete crosscheck on a few codes and print summaries.

    python scripts/run_crosschecks.py --trials 1000 --jobs 4
"""

import argparse
import time
from dataclasses import dataclass

from treesimple.codes import almost_biregular_code, biregular_code
from treesimple.oracle import crosscheck_offaxis, crosscheck_onaxis, crosscheck_rot_rot


@dataclass
class Config:
    trials: int = 1000
    seed: int = 2024
    jobs: int = 1


CODES = [
    ("biregular(3,3)", biregular_code(3, 3), 12),
    ("biregular(3,4)", biregular_code(3, 4), 10),
    ("almost(3,3,k=2)", almost_biregular_code(3, 3, 2), 14),
    ("almost(3,4,k=3)", almost_biregular_code(3, 4, 3), 16),
]


def main(cfg: Config) -> int:
    bad = 0
    for label, code, radius in CODES:
        for fn in (crosscheck_rot_rot, crosscheck_offaxis, crosscheck_onaxis):
            t0 = time.perf_counter()
            s = fn(code, cfg.trials, cfg.seed, radius, cfg.jobs)
            bad += s.mismatches
            print(f"code={label} radius={radius} " + " ".join(s.lines()[:1]),
                  f"({time.perf_counter() - t0:.1f}s)")
            for extra in s.lines()[1:]:
                print("    " + extra)
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--jobs", type=int, default=Config.jobs)
    raise SystemExit(main(Config(**vars(p.parse_args()))))
