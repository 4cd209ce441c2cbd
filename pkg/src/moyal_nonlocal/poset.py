"""Finite T0 spaces as posets.

A finite poset is read as a topological space whose open sets are the
up-sets of ``<=``. Then ``u <= v`` exactly when ``u`` lies in the closure of
``{v}``, i.e. every open set containing ``u`` also contains ``v``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping


@dataclass(frozen=True)
class OpenCover:
    points: tuple[Hashable, ...]
    sets: tuple[tuple[str, frozenset], ...]

    def __post_init__(self):
        if not self.sets:
            raise ValueError("the cover has no sets")
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points")
        pts = set(self.points)
        union = set()
        for name, s in self.sets:
            if not s <= pts:
                raise ValueError(f"set {name!r} contains unknown points {sorted(map(str, s - pts))}")
            union |= s
        if union != pts:
            raise ValueError(f"sets do not cover {sorted(map(str, pts - union))}")

    @classmethod
    def of(cls, points: Iterable[Hashable], sets: Mapping[str, Iterable[Hashable]]) -> "OpenCover":
        return cls(tuple(points), tuple((name, frozenset(s)) for name, s in sets.items()))

    def membership(self, x) -> frozenset[str]:
        return frozenset(name for name, s in self.sets if x in s)


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple[str, ...]
    # leq[i][j] is True when elements[i] <= elements[j]
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError("duplicate elements")
        if len(self.leq) != n or any(len(r) != n for r in self.leq):
            raise ValueError("relation matrix has the wrong shape")
        r = self.leq
        for i in range(n):
            if not r[i][i]:
                raise ValueError(f"not reflexive at {self.elements[i]!r}")
        for i, j in itertools.permutations(range(n), 2):
            if r[i][j] and r[j][i]:
                raise ValueError(f"not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}")
        for i, j, k in itertools.product(range(n), repeat=3):
            if r[i][j] and r[j][k] and not r[i][k]:
                raise ValueError("not transitive")

    @classmethod
    def from_relation(cls, elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "FinitePoset":
        """Reflexive-transitive closure of the given ``(lower, upper)`` pairs."""
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        r = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            r[idx[a]][idx[b]] = True
        for k in range(n):
            for i in range(n):
                if r[i][k]:
                    for j in range(n):
                        r[i][j] = r[i][j] or r[k][j]
        return cls(elements, tuple(tuple(row) for row in r))

    def __len__(self) -> int:
        return len(self.elements)

    def le(self, a: str, b: str) -> bool:
        return self.leq[self.elements.index(a)][self.elements.index(b)]

    def up_set(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self)) if self.leq[i][j])

    def down_set(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self)) if self.leq[j][i])

    def cover_relations(self) -> list[tuple[str, str]]:
        """Hasse edges: ``a < b`` with nothing strictly between."""
        n, r, out = len(self), self.leq, []
        for i, j in itertools.permutations(range(n), 2):
            if r[i][j] and not any(r[i][k] and r[k][j] for k in range(n) if k not in (i, j)):
                out.append((self.elements[i], self.elements[j]))
        return out

    def to_json(self) -> dict:
        return {"elements": list(self.elements),
                "cover_relations": [list(e) for e in self.cover_relations()]}


def quotient_from_cover(cover: OpenCover) -> tuple[FinitePoset, dict]:
    """Identify points with equal membership patterns; order classes by specialisation.

    Classes are named ``"{O1,O2}"`` after the cover sets containing them and
    listed in order of first appearance among ``cover.points``.
    """
    patterns: list[frozenset[str]] = []
    for x in cover.points:
        pat = cover.membership(x)
        if pat not in patterns:
            patterns.append(pat)
    order = [name for name, _ in cover.sets]
    names = ["{" + ",".join(n for n in order if n in pat) + "}" for pat in patterns]
    leq = tuple(tuple(a <= b for b in patterns) for a in patterns)
    poset = FinitePoset(tuple(names), leq)
    mapping = {x: names[patterns.index(cover.membership(x))] for x in cover.points}
    return poset, mapping


def induced_cover(p: FinitePoset) -> OpenCover:
    """The principal up-sets, which generate the up-set topology."""
    sets = {f"U[{e}]": [p.elements[j] for j in sorted(p.up_set(i))] for i, e in enumerate(p.elements)}
    return OpenCover.of(p.elements, sets)


def two_point_ideal_poset() -> FinitePoset:
    """``I1 = {0} <= I2 = K(H)`` ordered by inclusion."""
    return FinitePoset.from_relation(("I1", "I2"), [("I1", "I2")])


def chain(names: Iterable[str]) -> FinitePoset:
    names = tuple(names)
    return FinitePoset.from_relation(names, zip(names, names[1:]))


def discrete(names: Iterable[str]) -> FinitePoset:
    return FinitePoset.from_relation(tuple(names), [])


def is_t0(p: FinitePoset) -> bool:
    """Distinct points have distinct neighbourhood filters (principal up-sets)."""
    ups = [p.up_set(i) for i in range(len(p))]
    return len(set(ups)) == len(ups)


def is_hausdorff(p: FinitePoset) -> bool:
    """Any two distinct points have disjoint smallest neighbourhoods."""
    return all(not (p.up_set(i) & p.up_set(j))
               for i, j in itertools.combinations(range(len(p)), 2))


def is_discrete(p: FinitePoset) -> bool:
    return all(not p.leq[i][j] for i, j in itertools.permutations(range(len(p)), 2))


def _signature(p: FinitePoset, i: int) -> tuple[int, int]:
    return len(p.down_set(i)), len(p.up_set(i))


def isomorphic(p: FinitePoset, r: FinitePoset) -> bool:
    """Order isomorphism by brute force over signature-preserving bijections."""
    n = len(p)
    if n != len(r):
        return False
    sp = [_signature(p, i) for i in range(n)]
    sr = [_signature(r, i) for i in range(n)]
    if sorted(sp) != sorted(sr):
        return False
    candidates = [[j for j in range(n) if sr[j] == sp[i]] for i in range(n)]
    for image in itertools.product(*candidates):
        if len(set(image)) != n:
            continue
        if all(p.leq[i][j] == r.leq[image[i]][image[j]] for i in range(n) for j in range(n)):
            return True
    return False


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_dot(p: FinitePoset, name: str = "poset") -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    lines += [f"  {_quote(e)};" for e in p.elements]
    lines += [f"  {_quote(a)} -> {_quote(b)};" for a, b in p.cover_relations()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(p: FinitePoset) -> str:
    return json.dumps(p.to_json())


def segment_cover(points: int = 9, width: int = 6) -> OpenCover:
    """Points ``0..points-1`` on a line; ``O1`` the first ``width``, ``O2`` the last ``width``."""
    if not 0 < width <= points:
        raise ValueError("need 0 < width <= points")
    pts = list(range(points))
    return OpenCover.of(pts, {"O1": pts[:width], "O2": pts[-width:]})


def singleton_cover(points: int = 3) -> OpenCover:
    pts = list(range(points))
    return OpenCover.of(pts, {f"O{i + 1}": [x] for i, x in enumerate(pts)})


def minimal_nonlocal_cover() -> OpenCover:
    return OpenCover.of(["x", "y"], {"O1": ["x", "y"], "O2": ["y"]})


EXAMPLES = {
    "segment": segment_cover,
    "singletons": singleton_cover,
    "two-point": minimal_nonlocal_cover,
}
