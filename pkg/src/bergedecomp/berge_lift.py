"""Lifting graph decompositions to Berge decompositions of mu*K_n^(k).

* Case 1 (3 <= k <= n-3): stage H_P and H_C, match every edge instance of
  their union to a distinct k-set containing it, and substitute.
* Case 2 (k = n-2): complements of an edge-coloured ordering of mu*K_n,
  cores chosen as systems of distinct representatives.
* Case 3 (k = n-1): closed-form cores.
"""

from __future__ import annotations

import time
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .assembly import assemble_H, build_HC, build_HP, split_levels
from .errors import (BelowThresholdFailure, DecompositionError, InfeasibleInput,
                     MissingAssignment, NoPerfectMatching, SDRNotFound)
from .graph_decomp import GraphDecomposition, SolverConfig
from .multigraph import EdgeInstance, Multigraph, WalkKind


@dataclass(frozen=True, order=True)
class HyperEdge:
    members: tuple[int, ...]
    copy: int = 0

    def to_json(self) -> dict:
        return {"set": list(self.members), "copy": self.copy}

    @classmethod
    def from_json(cls, data: dict) -> HyperEdge:
        return cls(tuple(sorted(data["set"])), int(data["copy"]))


@dataclass(frozen=True)
class BergeWalk:
    kind: WalkKind
    core: tuple[int, ...]
    hyperedges: tuple[HyperEdge, ...]

    @property
    def length(self) -> int:
        return len(self.hyperedges)

    def to_json(self) -> dict:
        return {"kind": self.kind, "core": list(self.core),
                "edges": [e.to_json() for e in self.hyperedges]}

    @classmethod
    def from_json(cls, data: dict) -> BergeWalk:
        return cls(data["kind"], tuple(data["core"]),
                   tuple(HyperEdge.from_json(e) for e in data["edges"]))


@dataclass
class HyperDecomposition:
    n: int
    k: int
    mu: int
    walks: list[BergeWalk] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "mu": self.mu,
                "walks": [w.to_json() for w in self.walks]}

    @classmethod
    def from_json(cls, data: dict) -> HyperDecomposition:
        return cls(int(data["n"]), int(data["k"]), int(data["mu"]),
                   [BergeWalk.from_json(w) for w in data["walks"]])


# ---------------------------------------------------------------------------
# bipartite matching between edge instances and k-sets


class _KSets:
    """All k-subsets of 1..n, stored through their smaller side.

    Row order is lexicographic in the stored side; when the complement is
    stored, reversed row order is lexicographic in the k-sets themselves.
    """

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.flip = k > n - k
        z = n - k if self.flip else k
        self.rows = np.array(list(combinations(range(1, n + 1), z)), dtype=np.int16)
        if z == 0:
            self.rows = np.zeros((1, 0), dtype=np.int16)
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def containing(self, x: int, y: int) -> np.ndarray:
        """Row indices of k-sets containing {x, y}, lexicographic order."""
        key = (x, y)
        got = self._cache.get(key)
        if got is None:
            hit_x = (self.rows == x).any(axis=1)
            hit_y = (self.rows == y).any(axis=1)
            if self.flip:
                got = np.flatnonzero(~(hit_x | hit_y))[::-1].astype(np.int32)
            else:
                got = np.flatnonzero(hit_x & hit_y).astype(np.int32)
            self._cache[key] = got
        return got

    def members(self, row: int) -> tuple[int, ...]:
        side = [int(v) for v in self.rows[row]]
        if self.flip:
            drop = set(side)
            return tuple(v for v in range(1, self.n + 1) if v not in drop)
        return tuple(side)


def hall_matching(h: Multigraph, n: int, k: int, mu: int) -> dict[EdgeInstance, HyperEdge]:
    """Assign each edge instance of ``h`` a distinct hyperedge of mu*K_n^(k)
    containing its endpoints. Raises NoPerfectMatching with a Hall violator."""
    if h.n != n:
        raise ValueError("multigraph lives on a different vertex count")
    if not 2 <= k <= n:
        raise InfeasibleInput("need 2 <= k <= n")
    ks = _KSets(n, k)
    if h.edge_count != mu * len(ks):
        raise InfeasibleInput(f"|E(h)| = {h.edge_count} but mu*C(n,k) = {mu * len(ks)}")
    inst = list(h.edge_instances())
    owner = np.full(len(inst), -1, dtype=np.int64)  # instance -> k-set row
    load = np.zeros(len(ks), dtype=np.int64)
    holders: list[list[int]] = [[] for _ in range(len(ks))]

    # greedy seed: each instance takes the first k-set with room
    pos = 0
    for (x, y), m in h.mult.items():
        cand = ks.containing(x, y)
        j = 0
        for row in cand[load[cand] < mu]:
            row = int(row)
            while j < m and load[row] < mu:
                owner[pos + j] = row
                load[row] += 1
                holders[row].append(pos + j)
                j += 1
            if j == m:
                break
        pos += m

    for start in np.flatnonzero(owner < 0):
        _augment(int(start), inst, owner, load, holders, ks, mu)

    out: dict[EdgeInstance, HyperEdge] = {}
    for row, hs in enumerate(holders):
        members = ks.members(row)
        for c, i in enumerate(sorted(hs)):
            out[inst[i]] = HyperEdge(members, c)
    return out


def _augment(start: int, inst, owner, load, holders, ks: _KSets, mu: int) -> None:
    seen = np.zeros(len(ks), dtype=bool)
    via = np.full(len(ks), -1, dtype=np.int64)  # k-set row -> instance reaching it
    reached = [start]
    queue = deque([start])
    while queue:
        q = queue.popleft()
        x, y, _ = inst[q]
        cand = ks.containing(x, y)
        cand = cand[~seen[cand]]
        if not len(cand):
            continue
        seen[cand] = True
        via[cand] = q
        free = cand[load[cand] < mu]
        if len(free):
            row = int(free[0])
            load[row] += 1
            while True:
                q = int(via[row])
                old = int(owner[q])
                owner[q] = row
                holders[row].append(q)
                if old < 0:
                    return
                holders[old].remove(q)
                row = old
        for row in cand:
            for p in holders[row]:
                reached.append(p)
                queue.append(p)
    nbhd = int(seen.sum()) * mu
    raise NoPerfectMatching(
        f"Hall's condition fails: {len(reached)} edge instances see {nbhd} hyperedges",
        violator=[inst[i] for i in reached], neighbourhood_size=nbhd)


def hall_neighbourhood(violator: Iterable[EdgeInstance], n: int, k: int, mu: int) -> int:
    """Number of hyperedges of mu*K_n^(k) containing some pair of the violator."""
    pairs = {(x, y) for x, y, _ in violator}
    count = 0
    for K in combinations(range(1, n + 1), k):
        s = set(K)
        if any(x in s and y in s for x, y in pairs):
            count += 1
    return count * mu


def lift(d: GraphDecomposition, eta: dict[EdgeInstance, HyperEdge]) -> list[BergeWalk]:
    if d.leave:
        raise ValueError("cannot lift a packing with a non-empty leave")
    out = []
    for w in d.walks:
        try:
            hes = tuple(eta[tuple(e)] for e in w.edges)
        except KeyError as exc:
            raise MissingAssignment(f"edge instance {exc.args[0]} has no hyperedge") from None
        out.append(BergeWalk(w.kind, tuple(w.vertices), hes))
    return out


# ---------------------------------------------------------------------------
# k = n - 2


def round_robin_coloring(mu: int, n: int) -> list[list[tuple[int, int]]]:
    """Colour classes of mu*K_n by the circle method, repeated mu times."""
    if n < 3:
        raise ValueError("need n >= 3")
    m = n if n % 2 == 0 else n + 1  # odd n: a dummy vertex m sits out
    base: list[list[tuple[int, int]]] = []
    for r in range(m - 1):
        cls = [(r % (m - 1) + 1, m)]
        for i in range(1, m // 2):
            a = (r + i) % (m - 1) + 1
            b = (r - i) % (m - 1) + 1
            cls.append((min(a, b), max(a, b)))
        base.append(sorted(p for p in cls if m == n or m not in p))
    return [list(c) for _ in range(mu) for c in base]


@dataclass
class Case2Block:
    kind: WalkKind
    start: int  # 0-based position of the first edge in the ordering
    length: int
    colors: list[int]
    g_sets: list[frozenset[int]]
    core: tuple[int, ...] = ()


def _check_lists(n: int, k: int, mu: int, cycles: Sequence[int], paths: Sequence[int]) -> None:
    if mu < 1:
        raise InfeasibleInput("mu must be at least 1")
    if not 3 <= k < n:
        raise InfeasibleInput(f"need 3 <= k < n, got k={k}, n={n}")
    bad_c = [m for m in cycles if not 2 <= m <= n]
    bad_p = [m for m in paths if not 1 <= m <= n - 1]
    if bad_c:
        raise InfeasibleInput(f"cycle length(s) {bad_c} outside [2, {n}]")
    if bad_p:
        raise InfeasibleInput(f"path length(s) {bad_p} outside [1, {n - 1}]")
    total = sum(cycles) + sum(paths)
    if total != mu * comb(n, k):
        raise InfeasibleInput(f"lengths sum to {total}, expected mu*C(n,k) = {mu * comb(n, k)}")


def _sdr(sets: Sequence[frozenset[int]]) -> list[int] | None:
    """Kuhn's augmenting-path matching; smallest elements tried first."""
    match: dict[int, int] = {}
    order = [sorted(s) for s in sets]

    def try_set(i: int, seen: set[int]) -> bool:
        for v in order[i]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match or try_set(match[v], seen):
                match[v] = i
                return True
        return False

    for i in range(len(sets)):
        if not try_set(i, set()):
            return None
    rep = [0] * len(sets)
    for v, i in match.items():
        rep[i] = v
    return rep


def case2_layout(n: int, mu: int, cycle_lengths: Sequence[int],
                 path_lengths: Sequence[int]) -> tuple[list[tuple[tuple[int, int], int, int]], list[Case2Block]]:
    """Edge ordering [(pair, copy, colour)] and per-block g-sets and cores."""
    _check_lists(n, n - 2, mu, cycle_lengths, path_lengths)
    order = []
    seen: Counter = Counter()
    for color, cls in enumerate(round_robin_coloring(mu, n)):
        for p in cls:
            order.append((p, seen[p], color))
            seen[p] += 1
    full = frozenset(range(1, n + 1))
    f = [full - set(p) for p, _, _ in order]
    blocks: list[Case2Block] = []
    a = 0
    for kind, lengths in (("cycle", cycle_lengths), ("path", path_lengths)):
        for ell in lengths:
            fs = f[a:a + ell]
            if kind == "cycle":
                g = [fs[-1] & fs[0]] + [fs[j] & fs[j + 1] for j in range(ell - 1)]
            else:
                g = [fs[0]] + [fs[j] & fs[j + 1] for j in range(ell - 1)] + [fs[-1]]
            colors = sorted({order[i][2] for i in range(a, a + ell)})
            rep = _sdr(g)
            if rep is None:
                raise SDRNotFound(f"no system of distinct representatives for block at {a}")
            blocks.append(Case2Block(kind, a, ell, colors, g, tuple(rep)))
            a += ell
    return order, blocks


def case2_decompose(n: int, mu: int, cycle_lengths: Sequence[int],
                    path_lengths: Sequence[int]) -> HyperDecomposition:
    order, blocks = case2_layout(n, mu, cycle_lengths, path_lengths)
    full = set(range(1, n + 1))
    walks = []
    for b in blocks:
        hes = tuple(HyperEdge(tuple(sorted(full - set(order[i][0]))), order[i][1])
                    for i in range(b.start, b.start + b.length))
        walks.append(BergeWalk(b.kind, b.core, hes))
    return HyperDecomposition(n, n - 2, mu, walks)


# ---------------------------------------------------------------------------
# k = n - 1


def case3_decompose(n: int, mu: int, cycle_lengths: Sequence[int],
                    path_lengths: Sequence[int]) -> HyperDecomposition:
    _check_lists(n, n - 1, mu, cycle_lengths, path_lengths)

    def r(i: int) -> int:
        return (i - 1) % n + 1

    def edge(i: int) -> HyperEdge:
        return HyperEdge(tuple(v for v in range(1, n + 1) if v != r(i)), (i - 1) // n)

    walks = []
    a = 0
    for ell in cycle_lengths:
        if ell == 2:
            core = (r(a + 3), r(a + 4))
        else:
            core = tuple(r(i) for i in range(a + 2, a + ell + 2))
        walks.append(BergeWalk("cycle", core, tuple(edge(a + j) for j in range(1, ell + 1))))
        a += ell
    for ell in path_lengths:
        core = tuple(r(i) for i in range(a + 2, a + ell + 3))
        walks.append(BergeWalk("path", core, tuple(edge(a + j) for j in range(1, ell + 1))))
        a += ell
    return HyperDecomposition(n, n - 1, mu, walks)


# ---------------------------------------------------------------------------
# dispatcher


def guaranteed(n: int, k: int) -> bool:
    """Whether the construction is proven to succeed at (n, k)."""
    if k == n - 1:
        return n >= 4
    if k == n - 2:
        return n >= 10
    if k == 3:
        return n >= 108
    if k == 4:
        return n >= 54
    return n >= 38


@dataclass
class RunTrace:
    case: str = ""
    branches: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    stages: dict = field(default_factory=dict)

    def timed(self, name: str, fn, *args):
        t = time.perf_counter()
        out = fn(*args)
        self.timings_ms[name] = round((time.perf_counter() - t) * 1000, 3)
        return out


def decompose(n: int, k: int, mu: int, cycle_lengths: Sequence[int],
              path_lengths: Sequence[int], cfg: SolverConfig | None = None,
              trace: RunTrace | None = None) -> HyperDecomposition:
    """Berge decomposition of mu*K_n^(k) into cycles and paths of the given
    lengths; the result is verified before it is returned."""
    from .verify import verify_berge_decomposition

    cfg = cfg or SolverConfig()
    trace = trace if trace is not None else RunTrace()
    cycles, paths = list(cycle_lengths), list(path_lengths)
    _check_lists(n, k, mu, cycles, paths)
    sure = guaranteed(n, k)
    stage = "setup"
    try:
        if k == n - 1:
            trace.case = "case3"
            stage = "case3"
            d = trace.timed(stage, case3_decompose, n, mu, cycles, paths)
        elif k == n - 2:
            trace.case = "case2"
            stage = "case2"
            d = trace.timed(stage, case2_decompose, n, mu, cycles, paths)
        else:
            trace.case = "case1"
            d = _case1(n, k, mu, cycles, paths, cfg, trace)
    except DecompositionError as exc:
        if sure or isinstance(exc, InfeasibleInput):
            raise
        raise BelowThresholdFailure(f"best-effort run failed in {trace.case}: {exc}",
                                    stage=trace.case, certificate=getattr(exc, "best", None)) from exc
    problems = trace.timed("verify", verify_berge_decomposition, n, k, mu, cycles, paths, d)
    if problems:
        msg = "; ".join(f"{p.code.value}: {p.detail}" for p in problems[:5])
        if sure:
            raise AssertionError(f"constructed decomposition failed verification: {msg}")
        raise BelowThresholdFailure(msg, stage="verify", certificate=d.to_json())
    return d


def _case1(n, k, mu, cycles, paths, cfg, trace: RunTrace) -> HyperDecomposition:
    lam_p, lam_c = split_levels(cycles, paths, n)
    trace.stages["levels"] = {"lambda_paths": lam_p, "lambda_cycles": lam_c}
    hp = trace.timed("build_HP", build_HP, paths, lam_p, n, cfg)
    hc = trace.timed("build_HC", build_HC, cycles, lam_c, n, cfg)
    trace.branches += [hp.branch, hc.branch]
    trace.stages["H_P"] = hp
    trace.stages["H_C"] = hc
    H, dec = trace.timed("assemble_H", assemble_H, hp, hc, mu, n, k)
    eta = trace.timed("hall_matching", hall_matching, H, n, k, mu)
    walks = trace.timed("lift", lift, dec, eta)
    return HyperDecomposition(n, k, mu, walks)
