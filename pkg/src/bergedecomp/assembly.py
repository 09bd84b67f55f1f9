"""Case-1 staging: split the prescribed lengths into two levels and build
the multigraphs H_P (paths) and H_C (cycles) whose union is lifted to the
hypergraph.

Every StagedHost records which construction branch produced it so the CLI
can report it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .admissibility import f, is_admissible, nu2
from .errors import InfeasibleInput, SizeMismatch, SpreadTooLarge
from .graph_decomp import (GraphDecomposition, SolverConfig, cycle_decomposition,
                           cycle_packing, path_packing)
from .multigraph import GraphWalk, Multigraph, WalkKind, near_factor_I, norm_pair

MAX_SPREAD = 5

# branch labels reported by the CLI
HP_EXACT = "hp-exact-levels"
HP_SPLIT = "hp-split-path"
HC_EMPTY = "hc-empty"
HC_ODD_DIGONS = "case1.1-branch-nu2-large"
HC_ODD_ADMISSIBLE = "case1.1-branch-admissible"
HC_EVEN_DIGONS = "case1.2-branch-long-list"
HC_EVEN_ADMISSIBLE = "case1.2-branch-admissible"
BRANCHES = (HP_EXACT, HP_SPLIT, HC_EMPTY, HC_ODD_DIGONS, HC_ODD_ADMISSIBLE,
            HC_EVEN_DIGONS, HC_EVEN_ADMISSIBLE)


@dataclass
class StagedHost:
    graph: Multigraph
    decomposition: GraphDecomposition
    level_bounds: tuple[int, int]
    branch: str = ""
    details: dict = field(default_factory=dict)

    def multiplicity_range(self) -> tuple[int, int]:
        return multiplicity_range(self.graph)

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(),
                "decomposition": self.decomposition.to_json(),
                "level_bounds": list(self.level_bounds),
                "branch": self.branch,
                "details": self.details}


def multiplicity_range(g: Multigraph) -> tuple[int, int]:
    vals = [g.m(x, y) for x in range(1, g.n + 1) for y in range(x + 1, g.n + 1)]
    return (min(vals), max(vals)) if vals else (0, 0)


def split_levels(cycle_lengths: Sequence[int], path_lengths: Sequence[int],
                 n: int) -> tuple[int, int]:
    """Return (lambda_paths, lambda_cycles): how many full copies of K_n each
    list's total covers."""
    pairs = comb(n, 2)
    return sum(path_lengths) // pairs, sum(cycle_lengths) // pairs


def walks_to_decomposition(n: int, walks: Sequence[tuple[WalkKind, Sequence[int]]]
                           ) -> GraphDecomposition:
    """Build the multigraph spanned by the walks and index its edge copies."""
    used: Counter = Counter()
    out = []
    for kind, vs in walks:
        vs = tuple(vs)
        steps = zip(vs, vs[1:] + vs[:1]) if kind == "cycle" else zip(vs, vs[1:])
        edges = []
        for x, y in steps:
            p = norm_pair(x, y)
            edges.append((p[0], p[1], used[p]))
            used[p] += 1
        out.append(GraphWalk(kind, vs, tuple(edges)))
    g = Multigraph(n, dict(used))
    return GraphDecomposition(g, out, [])


def _pieces(d: GraphDecomposition) -> list[tuple[WalkKind, tuple[int, ...]]]:
    return [(w.kind, w.vertices) for w in d.walks]


def _check_bounds(g: Multigraph, lo: int, hi: int, what: str) -> None:
    a, b = multiplicity_range(g)
    if a < lo or b > hi:
        raise AssertionError(f"{what} multiplicities [{a},{b}] outside [{lo},{hi}]")


# ---------------------------------------------------------------------------
# H_P


def build_HP(path_lengths: Sequence[int], lam: int, n: int,
             cfg: SolverConfig | None = None) -> StagedHost:
    cfg = cfg or SolverConfig()
    P = sorted(path_lengths, reverse=True)
    if any(not 1 <= m <= n - 1 for m in P):
        raise InfeasibleInput(f"path lengths must lie in [1, {n - 1}]")
    pairs = comb(n, 2)
    if sum(P) // pairs != lam:
        raise InfeasibleInput(f"path total {sum(P)} is not at level {lam}")
    target = lam * pairs
    s0, acc = 0, 0
    while s0 < len(P) and acc + P[s0] <= target:
        acc += P[s0]
        s0 += 1
    q = target - acc
    q2 = P[s0] - q if s0 < len(P) else 0
    head = P[:s0] + ([q] if q else [])
    tail = ([q2] if q2 else []) + P[s0 + 1:]

    d1 = path_packing(lam, n, head, cfg)
    d2 = path_packing(1, n, tail, cfg) if tail else None
    walks = [w.vertices for w in d1.walks]
    details = {"s0": s0, "q": q, "q_prime": q2}
    branch = HP_EXACT

    if q and q2:
        branch = HP_SPLIT
        qi = next(i for i, w in enumerate(walks) if len(w) - 1 == q)
        qpath = walks.pop(qi)
        q2i = next(i for i, w in enumerate(d2.walks) if w.length == q2)
        q2path = d2.walks[q2i].vertices
        perm = _glue_relabel(n, qpath, q2path)
        glued = qpath + tuple(perm[v] for v in q2path[1:])
        rest2 = [tuple(perm[v] for v in w.vertices)
                 for i, w in enumerate(d2.walks) if i != q2i]
        walks = walks + [glued] + rest2
    elif d2 is not None:
        walks += [w.vertices for w in d2.walks]

    dec = walks_to_decomposition(n, [("path", w) for w in walks])
    g = dec.host
    if lam or P:
        _check_bounds(g, lam, lam + 1, "H_P")
    if Counter(dec.lengths()) != Counter(P):
        raise AssertionError("H_P path lengths do not match the input")
    return StagedHost(g, dec, (lam, lam + 1), branch, details)


def _glue_relabel(n: int, qpath: tuple[int, ...], q2path: tuple[int, ...]) -> dict[int, int]:
    """Vertex permutation sending q2path's first vertex to qpath's last one
    and its other vertices outside qpath."""
    v = qpath[-1]
    fresh = [u for u in range(1, n + 1) if u not in set(qpath)]
    perm = {q2path[0]: v}
    for u, w in zip(q2path[1:], fresh):
        perm[u] = w
    dom = [u for u in range(1, n + 1) if u not in perm]
    cod = sorted(set(range(1, n + 1)) - set(perm.values()))
    perm.update(zip(dom, cod))
    return perm


# ---------------------------------------------------------------------------
# H_C


def build_HC(cycle_lengths: Sequence[int], lam_c: int, n: int,
             cfg: SolverConfig | None = None) -> StagedHost:
    cfg = cfg or SolverConfig()
    C = sorted(cycle_lengths, reverse=True)
    if any(not 2 <= m <= n for m in C):
        raise InfeasibleInput(f"cycle lengths must lie in [2, {n}]")
    pairs = comb(n, 2)
    if sum(C) // pairs != lam_c:
        raise InfeasibleInput(f"cycle total {sum(C)} is not at level {lam_c}")
    bounds = (max(0, lam_c - 2), lam_c + 2)
    if not C:
        return StagedHost(Multigraph(n), GraphDecomposition(Multigraph(n)), bounds, HC_EMPTY)

    fl = f(lam_c, n)
    t0, acc = 0, 0
    while t0 < len(C) and acc + C[t0] <= fl:
        acc += C[t0]
        t0 += 1
    r = fl - acc
    if r == 0:
        M = C[:t0]
    elif r == 1:
        M = C[:t0 - 1] + [C[t0 - 1] + 1]
    else:
        M = C[:t0] + [r]
    assert sum(M) == fl
    details = {"t0": t0, "r": r, "M_size": len(M), "I_size": len(near_factor_I(lam_c, n))}

    pieces: list[tuple[WalkKind, tuple[int, ...]]] = []
    if lam_c % 2 == 1 and 2 * nu2(C) >= (lam_c - 1) * pairs:
        branch = HC_ODD_DIGONS
        ndig = (lam_c - 1) // 2 * pairs
        pieces += _digons(n, (lam_c - 1) // 2)
        rest = C[:len(C) - ndig]
        pieces += _pieces(cycle_packing(3, n, rest, cfg))
    elif lam_c % 2 == 0 and lam_c >= 2 and 2 * (C[0] + len(M) - 2) >= lam_c * pairs:
        branch = HC_EVEN_DIGONS
        ndig = (lam_c - 2) // 2 * pairs
        if nu2(C) < ndig:
            raise AssertionError("too few digons for the long-list branch")
        pieces += _digons(n, (lam_c - 2) // 2)
        rest = C[:len(C) - ndig]
        pieces += _pieces(cycle_packing(4, n, rest, cfg))
    else:
        branch = HC_ODD_ADMISSIBLE if lam_c % 2 else HC_EVEN_ADMISSIBLE
        if not is_admissible(lam_c, n, M) and lam_c:
            raise InfeasibleInput(f"intermediate list is not admissible for lambda'={lam_c}")
        d3 = cycle_decomposition(lam_c, n, M, cfg)
        drop = None if r == 0 else (M[-1])
        kept = []
        for w in d3.walks:
            if drop is not None and w.length == drop:
                drop = None
                continue
            kept.append((w.kind, w.vertices))
        pieces += kept
        rest = ([C[t0 - 1]] if r == 1 else []) + C[t0:]
        if rest:
            pieces += _pieces(cycle_packing(2, n, rest, cfg))

    dec = walks_to_decomposition(n, pieces)
    g = dec.host
    _check_bounds(g, *bounds, "H_C")
    if Counter(dec.lengths()) != Counter(C):
        raise AssertionError("H_C cycle lengths do not match the input")
    return StagedHost(g, dec, bounds, branch, details)


def _digons(n: int, copies: int) -> list[tuple[WalkKind, tuple[int, ...]]]:
    return [("cycle", (x, y)) for _ in range(copies)
            for x in range(1, n + 1) for y in range(x + 1, n + 1)]


# ---------------------------------------------------------------------------
# union


def assemble_H(hp: StagedHost, hc: StagedHost, mu: int, n: int, k: int
               ) -> tuple[Multigraph, GraphDecomposition]:
    if mu < 1:
        raise InfeasibleInput("mu must be at least 1")
    if hp.graph.n != n or hc.graph.n != n:
        raise ValueError("staged hosts live on a different vertex count")
    dec = walks_to_decomposition(n, _pieces(hp.decomposition) + _pieces(hc.decomposition))
    H = dec.host
    if H.edge_count != mu * comb(n, k):
        raise SizeMismatch(f"|E(H)| = {H.edge_count}, expected {mu * comb(n, k)}")
    lo, hi = multiplicity_range(H)
    if hi - lo > MAX_SPREAD:
        raise SpreadTooLarge(f"multiplicities span [{lo},{hi}]")
    return H, dec
