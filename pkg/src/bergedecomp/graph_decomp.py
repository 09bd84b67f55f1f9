"""Certified path packings, cycle decompositions and cycle packings of
lam*K_n (minus a near one-factor where needed), plus a brute-force oracle
for tiny instances.

Solutions come from the search engines in ``_search``; every result is
checked by :func:`verify_graph_decomposition` before it is returned.
"""

from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Sequence

import numpy as np

from . import _search
from .admissibility import f, is_admissible, packing_feasible, path_packing_feasible
from .errors import InfeasibleInput, InstanceTooLarge, SearchExhausted
from .multigraph import (EdgeInstance, GraphWalk, Multigraph, WalkKind,
                         complete_multigraph, near_factor_I, norm_pair)

WORKERS_ENV = "BERGEDECOMP_WORKERS"


@dataclass(frozen=True)
class SolverConfig:
    """Search settings. ``switch_budget`` is the number of ruin-and-recreate
    moves per restart; ``workers`` > 1 runs restarts in parallel batches."""

    seed: int = 0
    max_restarts: int = 5
    exact_threshold: int = 12
    switch_budget: int = 3000
    workers: int = 1

    def __post_init__(self) -> None:
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        for name in ("max_restarts", "exact_threshold", "switch_budget", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def attempt_seed(self, attempt: int) -> int:
        return (self.seed * 1_000_003 + attempt) & ((1 << 64) - 1)

    @classmethod
    def from_env(cls, **kw) -> SolverConfig:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
        return cls(workers=max(1, workers), **kw)


@dataclass
class GraphDecomposition:
    host: Multigraph
    walks: list[GraphWalk] = field(default_factory=list)
    leave: list[EdgeInstance] = field(default_factory=list)

    @property
    def is_decomposition(self) -> bool:
        return not self.leave

    def lengths(self) -> list[int]:
        return [w.length for w in self.walks]

    def to_json(self) -> dict:
        return {"host": self.host.to_json(),
                "walks": [w.to_json() for w in self.walks],
                "leave": [list(e) for e in self.leave]}

    @classmethod
    def from_json(cls, data: dict) -> GraphDecomposition:
        return cls(Multigraph.from_json(data["host"]),
                   [GraphWalk.from_json(w) for w in data["walks"]],
                   [tuple(e) for e in data.get("leave", [])])


# ---------------------------------------------------------------------------
# solver driver


def _attempt(mat: list[list[int]], lengths: tuple[int, ...], cycle: bool,
             seed: int, ruin_budget: int, exact_budget: int
             ) -> tuple[list[tuple[int, ...]] | None, list[tuple[int, ...]], bool]:
    """One restart. Returns (solution or None, best partial walks, exhausted)."""
    rng = random.Random(seed)
    b = _search.Board(mat)
    if cycle and 4 * lengths.count(2) >= b.edges:
        sol = _search.chain_even_decompose(b.copy(), lengths, rng)
        if sol is not None:
            return sol, sol, False
    placed, pending = _search.heuristic_fill(b, lengths, cycle, rng, ruin_budget)
    if not pending:
        return placed, placed, False
    if exact_budget:
        try:
            sol = _search.exact_decompose(_search.Board(mat), lengths, cycle, rng, exact_budget)
        except ValueError:
            return None, placed, True
        if sol is not None:
            return sol, sol, False
    return None, placed, False


def _run_attempts(mat, lengths, cycle, cfg: SolverConfig, exact: bool):
    args = [(mat, tuple(lengths), cycle, cfg.attempt_seed(a), cfg.switch_budget,
             cfg.switch_budget * 100 if exact else 0)
            for a in range(cfg.max_restarts)]
    best: list = []
    if cfg.workers > 1:
        # batches keep the winner identical to a serial run
        with ProcessPoolExecutor(cfg.workers) as pool:
            for lo in range(0, len(args), cfg.workers):
                batch = list(pool.map(_attempt, *zip(*args[lo:lo + cfg.workers])))
                for sol, part, exhausted in batch:
                    if sol is not None:
                        return sol, part
                    if exhausted:
                        return None, part
                    best = max(best, part, key=len)
        return None, best
    for a in args:
        sol, part, exhausted = _attempt(*a)
        if sol is not None:
            return sol, part
        if exhausted:
            return None, part
        best = max(best, part, key=len)
    return None, best


def _to_decomposition(host: Multigraph, walks: Sequence[tuple[int, ...]],
                      kind: WalkKind) -> GraphDecomposition:
    """Attach edge-instance indices in walk order; unused copies form the leave."""
    used: Counter = Counter()
    out = []
    for w in walks:
        steps = list(zip(w, w[1:] + w[:1])) if kind == "cycle" else list(zip(w, w[1:]))
        edges = []
        for x, y in steps:
            p = norm_pair(x, y)
            edges.append((p[0], p[1], used[p]))
            used[p] += 1
        out.append(GraphWalk(kind, tuple(w), tuple(edges)))
    leave = [(x, y, i) for (x, y), m in host.mult.items() for i in range(used[(x, y)], m)]
    return GraphDecomposition(host, out, leave)


def _solve(host: Multigraph, lengths: Sequence[int], kind: WalkKind,
           cfg: SolverConfig) -> GraphDecomposition:
    """Decompose ``host`` exactly into walks of the given lengths."""
    cycle = kind == "cycle"
    if sum(lengths) != host.edge_count:
        raise InfeasibleInput("lengths do not sum to the host edge count")
    exact = host.n <= cfg.exact_threshold
    sol, best = _run_attempts(host.matrix(), lengths, cycle, cfg, exact)
    if sol is None:
        raise SearchExhausted(
            f"no {kind} decomposition found after {cfg.max_restarts} restarts",
            best=_to_decomposition(host, best, kind))
    d = _to_decomposition(host, sol, kind)
    problems = verify_graph_decomposition(host, d, lengths, kind)
    if problems:
        raise AssertionError(f"solver produced an invalid decomposition: {problems}")
    return d


def decompose_multigraph(host: Multigraph, lengths: Sequence[int], kind: WalkKind,
                         cfg: SolverConfig | None = None) -> GraphDecomposition:
    """Exact decomposition of an arbitrary host into walks of given lengths."""
    return _solve(host, list(lengths), kind, cfg or SolverConfig())


def path_packing(lam: int, n: int, lengths: Sequence[int],
                 cfg: SolverConfig | None = None) -> GraphDecomposition:
    cfg = cfg or SolverConfig()
    lengths = list(lengths)
    host = complete_multigraph(lam, n)
    if lam == 0 or n == 1:
        if lengths:
            raise InfeasibleInput("no edges available")
        return GraphDecomposition(host)
    if not path_packing_feasible(lam, n, lengths):
        raise InfeasibleInput(f"path lengths {lengths} cannot be packed in {lam}K_{n}")
    # a packing with leave L is a decomposition with |L| extra single edges
    spare = lam * comb(n, 2) - sum(lengths)
    d = _solve(host, lengths + [1] * spare, "path", cfg)
    if spare:
        keep, leave, need = [], [], Counter(lengths)
        for w in d.walks:
            if need[w.length]:
                need[w.length] -= 1
                keep.append(w)
            else:
                leave.extend(w.edges)
        d = GraphDecomposition(host, keep, sorted(leave))
    return d


def cycle_host(lam: int, n: int) -> Multigraph:
    return complete_multigraph(lam, n).subtract(near_factor_I(lam, n))


def cycle_decomposition(lam: int, n: int, lengths: Sequence[int],
                        cfg: SolverConfig | None = None) -> GraphDecomposition:
    cfg = cfg or SolverConfig()
    lengths = list(lengths)
    if lam == 0:
        if lengths:
            raise InfeasibleInput("no edges available")
        return GraphDecomposition(complete_multigraph(0, n))
    if not is_admissible(lam, n, lengths):
        raise InfeasibleInput(f"{lengths} is not admissible for lambda={lam}, n={n}")
    return _solve(cycle_host(lam, n), lengths, "cycle", cfg)


def packing_extension(lam: int, n: int, lengths: Sequence[int]) -> list[int]:
    """Lengths to append so the list becomes admissible (leave size r)."""
    lengths = list(lengths)
    r = f(lam, n) - sum(lengths)
    top = max(lengths, default=0)
    ext: list[int] = []
    if r == 0:
        ext = []
    elif lam % 2:
        if r == 2:
            ext = [2]
        elif r >= 3:
            q, rem = divmod(r, 3)
            ext = [3] * q if rem == 0 else [3] * (q - 1) + [3 + rem]
    elif r <= top:
        ext = [r]
    else:
        for m in (top - 1, top, top + 1):
            if 2 <= m <= n and (r - m) % 2 == 0:
                ext = [m] + [2] * ((r - m) // 2)
                break
    if sum(ext) == r and is_admissible(lam, n, lengths + ext):
        return ext
    # small n can push the fixed rule out of range; search for any extension
    found = _search_extension(lam, n, lengths, r)
    if found is None:
        raise InfeasibleInput(f"no admissible extension of {lengths} for lambda={lam}, n={n}")
    return found


def _search_extension(lam: int, n: int, lengths: list[int], r: int) -> list[int] | None:
    fails: set[tuple[int, int]] = set()

    def rec(left: int, cap: int, acc: list[int]) -> list[int] | None:
        if left == 0:
            return acc[:] if is_admissible(lam, n, lengths + acc) else None
        if (left, cap, len(acc)) in fails:
            return None
        for part in range(min(cap, left), 1, -1):
            acc.append(part)
            got = rec(left - part, part, acc)
            acc.pop()
            if got is not None:
                return got
        fails.add((left, cap, len(acc)))
        return None

    if r < 0:
        return None
    return rec(r, n, [])


def cycle_packing(lam: int, n: int, lengths: Sequence[int],
                  cfg: SolverConfig | None = None) -> GraphDecomposition:
    """Pack cycles of the given lengths into lam*K_n - I via an admissible
    extension; the extra cycles become the leave."""
    cfg = cfg or SolverConfig()
    lengths = list(lengths)
    if lam == 0:
        if lengths:
            raise InfeasibleInput("no edges available")
        return GraphDecomposition(complete_multigraph(0, n))
    if not packing_feasible((lam, n, lengths)):
        raise InfeasibleInput(f"{lengths} cannot be packed in {lam}K_{n}-I")
    ext = packing_extension(lam, n, lengths)
    digon_heavy = 2 in ext and n > cfg.exact_threshold
    try:
        quick = replace(cfg, max_restarts=1, switch_budget=min(cfg.switch_budget, 300))
        d = cycle_decomposition(lam, n, lengths + ext, quick if digon_heavy else cfg)
    except SearchExhausted:
        # many appended digons can be hard for the search; any admissible
        # extension gives a packing, so retry with the largest parts
        bulk = _search_extension(lam, n, lengths, f(lam, n) - sum(lengths))
        if not digon_heavy or bulk is None or sorted(bulk) == sorted(ext):
            raise
        d = cycle_decomposition(lam, n, lengths + bulk, cfg)
    keep, leave, need = [], [], Counter(lengths)
    for w in d.walks:
        if need[w.length]:
            need[w.length] -= 1
            keep.append(w)
        else:
            leave.extend(w.edges)
    return GraphDecomposition(d.host, keep, sorted(leave))


# ---------------------------------------------------------------------------
# verification


def verify_graph_decomposition(g: Multigraph, d: GraphDecomposition,
                               lengths: Sequence[int], kind: WalkKind) -> list[str]:
    """Return a list of violations; an empty list means the packing is valid."""
    out: list[str] = []
    seen: set[EdgeInstance] = set()
    for i, w in enumerate(d.walks):
        if w.kind != kind:
            out.append(f"walk {i}: kind {w.kind} expected {kind}")
        vs = w.vertices
        if len(set(vs)) != len(vs):
            out.append(f"walk {i}: repeated vertex")
        if any(not 1 <= v <= g.n for v in vs):
            out.append(f"walk {i}: vertex out of range")
            continue
        want = len(vs) if w.kind == "cycle" else len(vs) - 1
        if len(w.edges) != want or (w.kind == "cycle" and len(vs) < 2) or not w.edges:
            out.append(f"walk {i}: wrong number of edges")
            continue
        for (x, y), e in zip(w.steps(), w.edges):
            x0, y0, idx = e
            if norm_pair(x, y) != (x0, y0):
                out.append(f"walk {i}: edge {e} does not join {x} and {y}")
            elif not 0 <= idx < g.m(x0, y0):
                out.append(f"walk {i}: edge {e} not in host")
            if e in seen:
                out.append(f"walk {i}: edge instance reused {e}")
            seen.add(e)
    for e in d.leave:
        if e in seen:
            out.append(f"leave: edge instance reused {e}")
        seen.add(e)
    if seen != set(g.edge_instances()):
        out.append("coverage mismatch: walks plus leave differ from host edges")
    if Counter(w.length for w in d.walks) != Counter(lengths):
        out.append("length multiset mismatch")
    return out


# ---------------------------------------------------------------------------
# brute-force oracle


_ORACLE_EDGE_CAP = 30


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    index = {p: i for i, p in enumerate(pairs)}
    rows = [[index[tuple(sorted((p[x], p[y])))] for x, y in pairs]
            for p in permutations(range(n))]
    return np.array(rows, dtype=np.int64)


def _canon(n: int, vec: tuple[int, ...]) -> tuple:
    base = max(vec) + 1
    if n > 7 or base ** len(vec) >= 1 << 62:
        return vec
    table = _perm_table(n)
    weights = base ** np.arange(len(vec) - 1, -1, -1, dtype=np.int64)
    codes = np.asarray(vec, dtype=np.int64)[table] @ weights
    return (base, int(codes.min()))


def brute_force_packing_exists(g: Multigraph, lengths: Sequence[int], kind: WalkKind) -> bool:
    """Exhaustive search for edge-disjoint walks of all the given lengths."""
    if g.edge_count > _ORACLE_EDGE_CAP:
        raise InstanceTooLarge(f"{g.edge_count} edges exceeds the oracle cap of {_ORACLE_EDGE_CAP}")
    n = g.n
    lo = 2 if kind == "cycle" else 1
    hi = n if kind == "cycle" else n - 1
    if any(not lo <= m <= hi for m in lengths):
        return False
    if sum(lengths) > g.edge_count:
        return False
    pairs = [(x, y) for x in range(1, n + 1) for y in range(x + 1, n + 1)]
    slot = {p: i for i, p in enumerate(pairs)}
    memo: dict = {}

    def walks(vec: list[int], ell: int):
        if kind == "cycle" and ell == 2:
            for i, p in enumerate(pairs):
                if vec[i] >= 2:
                    yield [i, i]
            return
        nv = ell if kind == "cycle" else ell + 1
        seq: list[int] = []

        def ext():
            if len(seq) == nv:
                if kind == "cycle":
                    if seq[1] < seq[-1] and vec[slot[norm_pair(seq[-1], seq[0])]]:
                        yield seq[:]
                elif seq[0] < seq[-1]:
                    yield seq[:]
                return
            for v in range(1, n + 1):
                if v in seq:
                    continue
                if kind == "cycle" and seq and v < seq[0]:
                    continue
                if seq and not vec[slot[norm_pair(seq[-1], v)]]:
                    continue
                seq.append(v)
                yield from ext()
                seq.pop()

        for s in ext():
            steps = list(zip(s, s[1:] + s[:1])) if kind == "cycle" else list(zip(s, s[1:]))
            yield [slot[norm_pair(x, y)] for x, y in steps]

    def rec(vec: list[int], rest: tuple[int, ...]) -> bool:
        if not rest:
            return True
        key = (_canon(n, tuple(vec)), rest)
        if key in memo:
            return memo[key]
        ok = False
        for ids in walks(vec, rest[0]):
            for i in ids:
                vec[i] -= 1
            ok = rec(vec, rest[1:])
            for i in ids:
                vec[i] += 1
            if ok:
                break
        memo[key] = ok
        return ok

    vec = [g.m(x, y) for x, y in pairs]
    return rec(vec, tuple(sorted(lengths, reverse=True)))
