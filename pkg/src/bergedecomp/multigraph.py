"""Loopless multigraphs on the vertex set 1..n."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Literal

from .errors import InvalidRemoval

Pair = tuple[int, int]
EdgeInstance = tuple[int, int, int]  # (x, y, copy index) with x < y
WalkKind = Literal["path", "cycle"]


def norm_pair(x: int, y: int) -> Pair:
    if x == y:
        raise ValueError(f"loop at vertex {x}")
    return (x, y) if x < y else (y, x)


@dataclass(frozen=True)
class Multigraph:
    n: int
    mult: dict[Pair, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        clean: dict[Pair, int] = {}
        for (x, y), m in self.mult.items():
            if m < 0:
                raise ValueError(f"negative multiplicity on {(x, y)}")
            if not (1 <= x <= self.n and 1 <= y <= self.n):
                raise ValueError(f"pair {(x, y)} outside 1..{self.n}")
            if m:
                clean[norm_pair(x, y)] = m
        object.__setattr__(self, "mult", dict(sorted(clean.items())))

    def m(self, x: int, y: int) -> int:
        return self.mult.get(norm_pair(x, y), 0)

    @property
    def edge_count(self) -> int:
        return sum(self.mult.values())

    def degree(self, v: int) -> int:
        return sum(m for (x, y), m in self.mult.items() if v in (x, y))

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for (x, y), m in self.mult.items():
            deg[x] += m
            deg[y] += m
        return deg

    def edge_instances(self) -> Iterator[EdgeInstance]:
        for (x, y), m in self.mult.items():
            for i in range(m):
                yield (x, y, i)

    def matrix(self) -> list[list[int]]:
        """Dense (n+1)x(n+1) multiplicity table, row/column 0 unused."""
        mat = [[0] * (self.n + 1) for _ in range(self.n + 1)]
        for (x, y), m in self.mult.items():
            mat[x][y] = mat[y][x] = m
        return mat

    @classmethod
    def from_matrix(cls, mat: list[list[int]]) -> Multigraph:
        n = len(mat) - 1
        return cls(n, {(x, y): mat[x][y] for x in range(1, n + 1)
                       for y in range(x + 1, n + 1) if mat[x][y]})

    def union(self, other: Multigraph) -> Multigraph:
        if self.n != other.n:
            raise ValueError(f"vertex counts differ: {self.n} vs {other.n}")
        total = Counter(self.mult)
        total.update(other.mult)
        return Multigraph(self.n, dict(total))

    def subtract(self, edges: Iterable[Pair]) -> Multigraph:
        """Remove a multiset of pairs, one edge per occurrence."""
        out = dict(self.mult)
        for x, y in edges:
            p = norm_pair(x, y)
            if out.get(p, 0) == 0:
                raise InvalidRemoval(f"cannot remove {p}: multiplicity exhausted")
            out[p] -= 1
        return Multigraph(self.n, out)

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees())

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[x, y, m] for (x, y), m in self.mult.items()]}

    @classmethod
    def from_json(cls, data: dict) -> Multigraph:
        return cls(int(data["n"]), {norm_pair(int(x), int(y)): int(m)
                                    for x, y, m in data["edges"]})


def complete_multigraph(lam: int, n: int) -> Multigraph:
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return Multigraph(n, {p: lam for p in combinations(range(1, n + 1), 2)} if lam else {})


def near_factor_I(lam: int, n: int) -> list[Pair]:
    """The perfect matching removed from lam*K_n when lam*(n-1) is odd, else empty."""
    if lam * (n - 1) % 2 == 0:
        return []
    return [(v, v + 1) for v in range(1, n, 2)]


@dataclass(frozen=True)
class GraphWalk:
    """A path or cycle through explicit edge instances.

    For a cycle the vertex sequence is read cyclically: edge ``i`` joins
    ``vertices[i]`` and ``vertices[(i + 1) % len]``.
    """

    kind: WalkKind
    vertices: tuple[int, ...]
    edges: tuple[EdgeInstance, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    def steps(self) -> list[Pair]:
        vs = self.vertices
        if self.kind == "cycle":
            return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> GraphWalk:
        return cls(data["kind"], tuple(data["vertices"]),
                   tuple(tuple(e) for e in data["edges"]))
