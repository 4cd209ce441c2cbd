"""Sine-bracket coefficients approaching the Poisson coefficient as k halves.

    python scripts/classical_limit_table.py --k0 0.4 --halvings 8
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, fields

from moyal_nonlocal.modes import classical_limit_report


@dataclass
class LimitConfig:
    k0: float = 0.4
    halvings: int = 6
    max_cross: int = 3


def parse(argv=None) -> LimitConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(LimitConfig):
        p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    return LimitConfig(**vars(p.parse_args(argv)))


def main(argv=None) -> None:
    cfg = parse(argv)
    ks = [cfg.k0 / 2 ** i for i in range(cfg.halvings)]
    print(f"{'cross':>5} {'k':>10} {'abs_err':>12} {'bound':>12} {'ratio':>7}")
    for c in range(1, cfg.max_cross + 1):
        prev = None
        for row in classical_limit_report((1, 0), (0, c), ks):
            ratio = f"{prev / row.abs_err:7.4f}" if prev else " " * 7
            print(f"{c:>5} {row.k:>10.6g} {row.abs_err:>12.4e} {row.bound:>12.4e} {ratio}")
            prev = row.abs_err


if __name__ == "__main__":
    main()
