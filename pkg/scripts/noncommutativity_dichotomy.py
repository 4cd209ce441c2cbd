"""Structure constants of the cyclotomic family versus the golden rotation family.

The cyclotomic constant for cross = 1 decays like 4 pi / N; the rotation
constant along golden convergents settles near 2 sin(pi tau).

    python scripts/noncommutativity_dichotomy.py --max-n 201 --levels 15
"""
from __future__ import annotations

import argparse
import math
from dataclasses import dataclass, fields

from moyal_nonlocal.clockshift import build_basis, structure_constant
from moyal_nonlocal.contfrac import golden


@dataclass
class DichotomyConfig:
    max_n: int = 201
    step: int = 22
    levels: int = 15


def parse(argv=None) -> DichotomyConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(DichotomyConfig):
        p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    return DichotomyConfig(**vars(p.parse_args(argv)))


def main(argv=None) -> None:
    cfg = parse(argv)
    print("cyclotomic-odd, cross = 1")
    print(f"{'N':>5} {'|c|':>10} {'4pi/N':>10}")
    for n in range(3, cfg.max_n + 1, cfg.step):
        c = abs(structure_constant(build_basis(n), (1, 0), (0, 1)))
        print(f"{n:>5} {c:>10.6f} {4 * math.pi / n:>10.6f}")
    print("\nrotation along golden convergents, cross = 1")
    print(f"{'n':>3} {'p/q':>10} {'|c|':>10}")
    cf = golden(cfg.levels)
    for n in range(4, cfg.levels + 1):
        p, q = cf.pq(n)
        c = abs(structure_constant(build_basis(q, "rotation", (p, q)), (1, 0), (0, 1), "rotation"))
        print(f"{n:>3} {f'{p}/{q}':>10} {c:>10.6f}")
    tau = (math.sqrt(5) - 1) / 2
    print(f"limit 2 sin(pi tau) = {2 * math.sin(math.pi * tau):.6f}")


if __name__ == "__main__":
    main()
