"""Lower bounds on the number of rotations needed for the witness family t_n.

For each code with a forbidden configuration, prints the rotation-count
bound for the substituted t_n as n grows, next to the bound read off the
z color alone.
"""

import argparse
from dataclasses import dataclass

from treesimple.codes import almost_biregular_code, biregular_code, extend_code
from treesimple.invariants import find_forbidden_config, unboundedness_certificates


@dataclass
class Config:
    up_to: int = 20


def witness_codes():
    yield "almost(3,3,k=2)+k@1", extend_code(almost_biregular_code(3, 3, 2), {1: (2, 2)}, "k")
    yield "almost(3,4,k=3)+k@2", extend_code(almost_biregular_code(3, 4, 3), {2: (2, 2)}, "k")
    yield "biregular(3,3)+k@0", extend_code(biregular_code(3, 3), {0: (2, 2)}, "k")


def main(cfg: Config) -> None:
    for label, code in witness_codes():
        cfg_ = find_forbidden_config(code)
        if cfg_ is None:
            print(f"{label}: no forbidden configuration")
            continue
        print(f"{label}: z={code.name(cfg_.z_color)} p={cfg_.p} q={cfg_.q}")
        for c in unboundedness_certificates(cfg_, cfg.up_to):
            print(f"  {c.line()} raw={c.cert.raw} z_raw={c.z_raw}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--up-to", dest="up_to", type=int, default=Config.up_to)
    main(Config(**vars(p.parse_args())))
