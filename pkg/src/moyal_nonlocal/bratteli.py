"""Bratteli diagrams with explicit block-diagonal embeddings.

A diagram stores, for levels ``first_level, first_level + 1, ...``, the
vector of block sizes and the integer multiplicity matrices ``M_n`` (rows:
vertices at ``n + 1``, columns: vertices at ``n``). Embedding a leveled
element stacks, for every upper vertex, the lower blocks in ascending
vertex order with ``M[i][j]`` contiguous copies of block ``j``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .contfrac import ContinuedFraction
from .linalg import direct_sum, operator_norm


def _label(level: int, vertex: int) -> str:
    return f"v{level}.{vertex}"


@dataclass(frozen=True)
class BratteliDiagram:
    levels: tuple[tuple[int, ...], ...]
    multiplicities: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple[tuple[str, ...], ...]
    first_level: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.multiplicities) != len(self.levels) - 1:
            raise ValueError("need exactly one multiplicity matrix between consecutive levels")
        if len(self.labels) != len(self.levels):
            raise ValueError("need one label row per level")
        for dims, names in zip(self.levels, self.labels):
            if len(dims) != len(names) or any(d < 1 for d in dims):
                raise ValueError(f"bad level {dims} / {names}")
        for i, m in enumerate(self.multiplicities):
            mat = np.array(m, dtype=object)
            lower, upper = self.levels[i], self.levels[i + 1]
            if mat.shape != (len(upper), len(lower)):
                raise ValueError(f"M_{self.first_level + i} has shape {mat.shape}, "
                                 f"expected {(len(upper), len(lower))}")
            if (mat < 0).any():
                raise ValueError("multiplicities must be nonnegative")
            if any(sum(row) == 0 for row in m):
                raise ValueError(f"M_{self.first_level + i} has a zero row")
            for r, row in enumerate(m):
                if sum(a * d for a, d in zip(row, lower)) != upper[r]:
                    raise ValueError(f"dimension identity fails between levels "
                                     f"{self.first_level + i} and {self.first_level + i + 1}")

    @property
    def last_level(self) -> int:
        return self.first_level + len(self.levels) - 1

    def dims(self, level: int) -> tuple[int, ...]:
        return self.levels[self._index(level)]

    def multiplicity(self, level: int) -> tuple[tuple[int, ...], ...]:
        """``M_level``, mapping ``level`` into ``level + 1``."""
        i = self._index(level)
        if i >= len(self.multiplicities):
            raise IndexError(f"no level above {level}")
        return self.multiplicities[i]

    def _index(self, level: int) -> int:
        i = level - self.first_level
        if not 0 <= i < len(self.levels):
            raise IndexError(f"level {level} outside {self.first_level}..{self.last_level}")
        return i

    def dimension_defects(self) -> list[tuple[int, ...]]:
        """``dims_{n+1} - M_n dims_n`` per level pair (all zero for a valid diagram)."""
        out = []
        for i, m in enumerate(self.multiplicities):
            lower, upper = self.levels[i], self.levels[i + 1]
            out.append(tuple(u - sum(a * d for a, d in zip(row, lower))
                             for u, row in zip(upper, m)))
        return out

    def to_json(self) -> dict:
        return {
            "levels": [list(d) for d in self.levels],
            "multiplicities": [[list(r) for r in m] for m in self.multiplicities],
            "labels": [list(l) for l in self.labels],
        }


def _build(levels: Sequence[Sequence[int]], mults: Sequence[Sequence[Sequence[int]]],
           first_level: int = 1, name: str = "") -> BratteliDiagram:
    levels = tuple(tuple(int(d) for d in lv) for lv in levels)
    mults = tuple(tuple(tuple(int(a) for a in row) for row in m) for m in mults)
    labels = tuple(tuple(_label(first_level + i, j) for j in range(len(lv)))
                   for i, lv in enumerate(levels))
    return BratteliDiagram(levels, mults, labels, first_level, name)


PENROSE_M = ((1, 1), (1, 0))


def penrose_diagram(n_levels: int) -> BratteliDiagram:
    """``d_{n+1} = d_n + d'_n``, ``d'_{n+1} = d_n`` from ``d_1 = d'_1 = 1``."""
    if n_levels < 1:
        raise ValueError("n_levels must be positive")
    levels = [(1, 1)]
    for _ in range(n_levels - 1):
        d, dp = levels[-1]
        levels.append((d + dp, d))
    return _build(levels, [PENROSE_M] * (n_levels - 1), name="penrose")


def pv_diagram(cf: ContinuedFraction, n_levels: int) -> BratteliDiagram:
    """Levels ``(q_n, q_{n-1})`` for ``n = 1..n_levels`` with ``M_n = [[a_{n+1}, 1], [1, 0]]``."""
    if n_levels < 1:
        raise ValueError("n_levels must be positive")
    if len(cf) < n_levels:
        raise ValueError(f"need {n_levels} convergents, continued fraction has {len(cf)}")
    levels = [(cf.pq(n)[1], cf.pq(n - 1)[1]) for n in range(1, n_levels + 1)]
    mults = [((cf.a(n + 1), 1), (1, 0)) for n in range(1, n_levels)]
    return _build(levels, mults, name=f"pv-{cf.tag}")


def poset_algebra_diagram(n_levels: int) -> BratteliDiagram:
    """``M_n(C) + C`` with ``(L, l) -> (diag(L, l), l)``."""
    if n_levels < 1:
        raise ValueError("n_levels must be positive")
    levels = [(n, 1) for n in range(1, n_levels + 1)]
    return _build(levels, [((1, 1), (0, 1))] * (n_levels - 1), name="two-point-poset")


@dataclass(frozen=True)
class LeveledElement:
    level: int
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(np.asarray(b, dtype=np.complex128)
                                                 for b in self.blocks))

    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    def __matmul__(self, other: "LeveledElement") -> "LeveledElement":
        if self.level != other.level:
            raise ValueError("elements live on different levels")
        return LeveledElement(self.level, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def adjoint(self) -> "LeveledElement":
        return LeveledElement(self.level, tuple(b.conj().T for b in self.blocks))

    def norm(self) -> float:
        return max(operator_norm(b) for b in self.blocks)

    def distance(self, other: "LeveledElement") -> float:
        return max(operator_norm(a - b) for a, b in zip(self.blocks, other.blocks))


def _check_element(d: BratteliDiagram, e: LeveledElement) -> None:
    for b in e.blocks:
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"blocks must be square, got {b.shape}")
    if e.dims() != d.dims(e.level):
        raise ValueError(f"block sizes {e.dims()} do not match level {e.level} dims {d.dims(e.level)}")


def embed(d: BratteliDiagram, e: LeveledElement) -> LeveledElement:
    _check_element(d, e)
    m = d.multiplicity(e.level)
    upper = []
    for row in m:
        parts = [blk for blk, count in zip(e.blocks, row) for _ in range(count)]
        upper.append(direct_sum(*parts))
    return LeveledElement(e.level + 1, tuple(upper))


def embed_to(d: BratteliDiagram, e: LeveledElement, level: int) -> LeveledElement:
    if level < e.level:
        raise ValueError("cannot embed downwards")
    while e.level < level:
        e = embed(d, e)
    return e


def identity_element(d: BratteliDiagram, level: int) -> LeveledElement:
    return LeveledElement(level, tuple(np.eye(n, dtype=np.complex128) for n in d.dims(level)))


def random_element(d: BratteliDiagram, level: int, rng: np.random.Generator) -> LeveledElement:
    blocks = tuple(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                   for n in d.dims(level))
    return LeveledElement(level, blocks)


def check_homomorphism(d: BratteliDiagram, level: int, samples: int,
                       rng: np.random.Generator) -> float:
    """Largest product or adjoint defect of ``embed`` over random pairs."""
    if level >= d.last_level:
        raise ValueError(f"level {level} has no level above it")
    worst = 0.0
    for _ in range(samples):
        x, y = random_element(d, level, rng), random_element(d, level, rng)
        ex, ey = embed(d, x), embed(d, y)
        worst = max(worst,
                    embed(d, x @ y).distance(ex @ ey),
                    embed(d, x.adjoint()).distance(ex.adjoint()))
    return worst


def to_dot(d: BratteliDiagram) -> str:
    lines = [f'digraph "{d.name or "bratteli"}" {{', "  rankdir=TB;"]
    for i, (dims, names) in enumerate(zip(d.levels, d.labels)):
        nodes = " ".join(f'"{nm}" [label="{nm}:{dim}"];' for nm, dim in zip(names, dims))
        lines.append(f"  {{ rank=same; {nodes} }}")
    for i, m in enumerate(d.multiplicities):
        lower, upper = d.labels[i], d.labels[i + 1]
        for r, row in enumerate(m):
            for c, count in enumerate(row):
                for _ in range(count):
                    lines.append(f'  "{lower[c]}" -> "{upper[r]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(d: BratteliDiagram) -> str:
    return json.dumps(d.to_json())
