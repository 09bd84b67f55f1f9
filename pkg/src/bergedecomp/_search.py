"""Search engines for placing paths and cycles of prescribed lengths.

Both engines work on a dense multiplicity table ``m`` (1-based, row 0
unused) and mutate it in place. A walk is a tuple of vertices; cycles are
read cyclically. Edge-instance bookkeeping happens in the caller.
"""

from __future__ import annotations

import random
from typing import Sequence

Walk = tuple[int, ...]


class Board:
    """Leave multigraph plus per-vertex degrees, updated incrementally."""

    __slots__ = ("n", "m", "deg", "edges")

    def __init__(self, mat: list[list[int]]):
        self.n = len(mat) - 1
        self.m = [row[:] for row in mat]
        self.deg = [sum(row) for row in self.m]
        self.edges = sum(self.deg) // 2

    def copy(self) -> Board:
        b = Board.__new__(Board)
        b.n, b.m, b.deg, b.edges = self.n, [r[:] for r in self.m], self.deg[:], self.edges
        return b

    def _steps(self, walk: Walk, cycle: bool):
        last = len(walk) if cycle else len(walk) - 1
        for i in range(last):
            yield walk[i], walk[(i + 1) % len(walk)]

    def take(self, walk: Walk, cycle: bool) -> None:
        m, deg = self.m, self.deg
        for x, y in self._steps(walk, cycle):
            m[x][y] -= 1
            m[y][x] -= 1
            deg[x] -= 1
            deg[y] -= 1
        self.edges -= len(walk) if cycle else len(walk) - 1

    def give(self, walk: Walk, cycle: bool) -> None:
        m, deg = self.m, self.deg
        for x, y in self._steps(walk, cycle):
            m[x][y] += 1
            m[y][x] += 1
            deg[x] += 1
            deg[y] += 1
        self.edges += len(walk) if cycle else len(walk) - 1

    def active(self) -> list[int]:
        return [v for v in range(1, self.n + 1) if self.deg[v]]


def walk_edges(walk: Walk, cycle: bool) -> int:
    return len(walk) if cycle else len(walk) - 1


# ---------------------------------------------------------------------------
# randomized walk finders


def _find_digon(b: Board, rng: random.Random) -> Walk | None:
    m, deg = b.m, b.deg
    best, best_key = None, None
    for x in range(1, b.n + 1):
        row = m[x]
        for y in range(x + 1, b.n + 1):
            if row[y] >= 2:
                key = (row[y], deg[x] + deg[y], rng.random())
                if best_key is None or key > best_key:
                    best, best_key = (x, y), key
    return best


def find_walk(b: Board, ell: int, cycle: bool, rng: random.Random,
              node_budget: int = 4000, max_starts: int = 6,
              odd_ends: int = 0, cap: int | None = None) -> Walk | None:
    """Randomized depth-first search for a path/cycle with ``ell`` edges.

    Neighbours are ranked by remaining pair multiplicity and degree so the
    leave stays close to regular; long walks in a sparse leave switch to a
    fewest-onward-options rule. ``odd_ends`` forces that many path
    endpoints onto odd-degree vertices. ``cap`` bounds every degree left
    behind (twice the number of walks still to come): vertices above it
    must be visited, and those above ``cap + 1`` must be interior.
    """
    if cycle and ell == 2:
        return _find_digon(b, rng)
    n, m, deg = b.n, b.m, b.deg
    nverts = ell if cycle else ell + 1
    active = [v for v in range(1, n + 1) if deg[v]]
    if len(active) < nverts or b.edges < ell:
        return None
    if cycle:
        starts = sorted(active, key=lambda v: (deg[v], rng.random()), reverse=True)
    else:
        # interior vertices lose two degrees, endpoints one: end the path at
        # the weakest of the strongest nverts vertices, odd degrees first
        top = sorted(active, key=lambda v: (deg[v], rng.random()), reverse=True)[:nverts]
        floor = deg[top[-1]]
        starts = sorted(active, key=lambda v: (deg[v] % 2, deg[v] >= floor,
                                                -deg[v], rng.random()), reverse=True)
        if odd_ends:
            starts = [v for v in starts if deg[v] % 2]
    sparse = nverts * 4 >= len(active) * 3
    onp = [False] * (n + 1)
    must = [False] * (n + 1)
    inner = [False] * (n + 1)
    n_must = 0
    if cap is not None:
        for v in active:
            if deg[v] > cap:
                must[v] = True
                n_must += 1
                inner[v] = not cycle and deg[v] > cap + 1
        if n_must > nverts:
            return None
        starts = [v for v in starts if not inner[v]]

    def candidates(u: int, depth: int, start: int) -> list[int]:
        # depth = number of vertices already on the path, u = path[-1]
        row = m[u]
        last = depth == nverts - 1
        out = []
        for v in active:
            if onp[v] or not row[v]:
                continue
            if cycle:
                if last:
                    if not m[v][start]:
                        continue
                elif deg[v] < 2:
                    continue
            elif last:
                if need_odd_last and not deg[v] % 2:
                    continue
                if inner[v]:
                    continue
            elif deg[v] < 2:
                continue
            out.append(v)
        if not out:
            return out
        if sparse and not last:
            def score(v: int) -> float:
                onward = sum(1 for w in active if not onp[w] and m[v][w] and w != u)
                return -onward + row[v] * 0.5 + rng.random()
        elif last and not cycle:
            def score(v: int) -> float:
                return (deg[v] % 2) * 8 + row[v] * 0.5 - deg[v] + rng.random() * 2
        else:
            def score(v: int) -> float:
                return row[v] * 2 + deg[v] * 0.25 + rng.random() * 2
        out.sort(key=score)
        return out

    nodes = 0
    need_odd_last = False
    for start in starts[:max_starts]:
        need_odd_last = odd_ends - (deg[start] % 2) > 0
        path = [start]
        onp[start] = True
        missing = n_must - must[start]
        stack = [candidates(start, 1, start)]
        while stack and nodes < node_budget:
            cl = stack[-1]
            if not cl:
                stack.pop()
                v = path.pop()
                onp[v] = False
                missing += must[v]
                continue
            v = cl.pop()
            nodes += 1
            if missing - must[v] > nverts - len(path) - 1:
                continue
            path.append(v)
            if len(path) == nverts:
                for w in path:
                    onp[w] = False
                return tuple(path)
            onp[v] = True
            missing -= must[v]
            stack.append(candidates(v, len(path), start))
        for w in path:
            onp[w] = False
        if nodes >= node_budget:
            break
    return None


# ---------------------------------------------------------------------------
# ruin-and-recreate heuristic


def heuristic_fill(b: Board, lengths: Sequence[int], cycle: bool, rng: random.Random,
                   ruin_budget: int, must_finish: bool = True
                   ) -> tuple[list[Walk], list[int]]:
    """Place walks of the given lengths, longest first, repairing dead ends
    by tearing out a few placed walks near the stuck leave and retrying.

    Returns (placed walks, lengths still pending). ``b`` ends as the leave.
    """
    pending = _order(lengths, cycle)
    placed: list[Walk] = []
    best: tuple[int, list[Walk], list[int]] | None = None
    ruins = 0
    while pending:
        ell = pending[-1]
        w = find_walk(b, ell, cycle, rng, odd_ends=0 if cycle else _odd_ends(b, len(pending)),
                      cap=2 * (len(pending) - 1))
        if w is not None:
            b.take(w, cycle)
            placed.append(w)
            pending.pop()
            continue
        left = sum(pending)
        if best is None or left < best[0]:
            best = (left, placed[:], pending[:])
        if not must_finish or ruins >= ruin_budget or not placed:
            break
        ruins += 1
        if left <= _REPAIR_EDGES and left == b.edges and _repair_exact(b, placed, pending, cycle, rng, ruins):
            continue
        _ruin(b, placed, pending, cycle, rng, ruins)
    if pending and best is not None and best[0] < sum(pending):
        # hand back the best state seen rather than the last one
        for w in placed:
            b.give(w, cycle)
        for w in best[1]:
            b.take(w, cycle)
        return best[1], best[2]
    return placed, pending


_REPAIR_EDGES = 60


def _repair_exact(b: Board, placed: list[Walk], pending: list[int], cycle: bool,
                  rng: random.Random, attempt: int) -> bool:
    """Solve leave + a few nearby placed walks exactly; on success the
    pending list is emptied and ``placed`` updated."""
    hot = {v for v in range(1, b.n + 1) if b.deg[v]}
    touching = [i for i, w in enumerate(placed) if hot.intersection(w)]
    if not touching:
        return False
    k = min(len(touching), rng.randrange(1 + min(1 + attempt // 10, 4)))
    # prefer short walks sharing many vertices with the stuck leave
    weights = [len(hot.intersection(placed[i])) / len(placed[i]) for i in touching]
    chosen_set: set[int] = set()
    while len(chosen_set) < k:
        chosen_set.add(rng.choices(touching, weights)[0])
    chosen = sorted(chosen_set, reverse=True)
    sub = Board([[0] * (b.n + 1) for _ in range(b.n + 1)])
    for x in hot:
        for y in range(1, b.n + 1):
            sub.m[x][y] = b.m[x][y]
    sub.deg = [sum(row) for row in sub.m]
    sub.edges = sum(sub.deg) // 2
    lengths = list(pending)
    for i in chosen:
        sub.give(placed[i], cycle)
        lengths.append(walk_edges(placed[i], cycle))
    try:
        sol = exact_decompose(sub, lengths, cycle, rng, node_budget=300 + 50 * attempt)
    except ValueError:
        return False
    if sol is None:
        return False
    for i in chosen:
        b.give(placed.pop(i), cycle)
    for w in sol:
        b.take(w, cycle)
        placed.append(w)
    pending.clear()
    return True


def _odd_ends(b: Board, paths_left: int) -> int:
    # keep (#odd vertices) <= 2 * (#paths still to place)
    # placing a path with x odd endpoints leaves odd + 2 - 2x odd vertices
    odd = sum(1 for d in b.deg if d % 2)
    return max(0, min(2, (odd - 2 * paths_left) // 2 + 2))


def _ruin(b: Board, placed: list[Walk], pending: list[int], cycle: bool,
          rng: random.Random, ruins: int) -> None:
    hot = {v for v in range(1, b.n + 1) if b.deg[v]}
    # a few walks touching the leave, plus occasionally a random one
    touching = [i for i, w in enumerate(placed) if hot.intersection(w)]
    pool = touching or list(range(len(placed)))
    k = 1 + min(len(pool) - 1, rng.randrange(2 + min(ruins // 50, 4)))
    chosen = set(rng.sample(pool, k))
    if rng.random() < 0.3 and len(placed) > k:
        chosen.add(rng.randrange(len(placed)))
    released = []
    for i in sorted(chosen, reverse=True):
        w = placed.pop(i)
        b.give(w, cycle)
        released.append(walk_edges(w, cycle))
    # stuck lengths go first into the enlarged leave, released ones after
    pending[:] = _order(released, cycle) + pending


def _order(lengths: Sequence[int], cycle: bool) -> list[int]:
    # consumed from the end: digons first, then longest first
    out = sorted(lengths)
    if cycle:
        digons = [l for l in out if l == 2]
        out = [l for l in out if l != 2] + digons
    return out


# ---------------------------------------------------------------------------
# complete anchored backtracking


class _BudgetSpent(Exception):
    pass


def _walks_through(b: Board, v: int, ell: int, cycle: bool, rng: random.Random,
                   tick):
    """Yield every ``ell``-edge walk using an edge at ``v``, each edge set once.

    ``tick`` is called once per extension step and may raise to abort.
    """
    n, m = b.n, b.m
    if cycle:
        if ell == 2:
            nbrs = [u for u in range(1, n + 1) if m[v][u] >= 2]
            rng.shuffle(nbrs)
            for u in nbrs:
                yield (v, u)
            return
        # cycles through v: v is position 0; orientation fixed by path[1] < path[-1]
        path = [v]
        onp = [False] * (n + 1)
        onp[v] = True

        def rec():
            u = path[-1]
            nb = [w for w in range(1, n + 1) if not onp[w] and m[u][w]]
            rng.shuffle(nb)
            for w in nb:
                tick()
                if len(path) == ell - 1:
                    if m[w][v] and path[1] < w:
                        yield tuple(path) + (w,)
                    continue
                path.append(w)
                onp[w] = True
                yield from rec()
                onp[w] = False
                path.pop()

        yield from rec()
        return
    # paths through v with v at any position: enumerate paths starting at v
    # plus paths where v is interior, via left/right extension splits
    for left in range(ell + 1):
        right = ell - left
        if left > right:
            break
        for w in _paths_split(b, v, left, right, rng, tick):
            yield w


def _paths_split(b: Board, v: int, left: int, right: int, rng: random.Random, tick):
    n, m = b.n, b.m
    onp = [False] * (n + 1)
    onp[v] = True

    def ext(seq, need):
        if need == 0:
            yield seq
            return
        u = seq[-1]
        nb = [w for w in range(1, n + 1) if not onp[w] and m[u][w]]
        rng.shuffle(nb)
        for w in nb:
            tick()
            onp[w] = True
            yield from ext(seq + [w], need - 1)
            onp[w] = False

    for r in ext([v], right):
        if left == 0:
            yield tuple(r)
            continue
        for lseq in ext([v], left):
            full = tuple(reversed(lseq)) + tuple(r[1:])
            if left == right and full[0] > full[-1]:
                continue
            yield full


def exact_decompose(b: Board, lengths: Sequence[int], cycle: bool, rng: random.Random,
                    node_budget: int) -> list[Walk] | None:
    """Complete search for a decomposition of the whole leave.

    Anchors at a minimum-degree vertex (one of its edges must lie in some
    walk) and tries pending lengths longest first. Returns None if the
    budget runs out; raises ValueError if the space is exhausted.
    """
    pending: dict[int, int] = {}
    for ell in lengths:
        pending[ell] = pending.get(ell, 0) + 1
    if sum(lengths) != b.edges:
        raise ValueError("lengths do not sum to the edge count")
    out: list[Walk] = []
    nodes = [0]

    def tick() -> None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise _BudgetSpent

    def feasible() -> bool:
        if 2 * sum(pending.values()) < max(b.deg):
            return False
        active = sum(1 for v in range(1, b.n + 1) if b.deg[v])
        longest = max((l for l, c in pending.items() if c), default=0)
        if longest and (longest if cycle else longest + 1) > active:
            return False
        if cycle:
            digons = pending.get(2, 0)
            if digons:
                cap = 0
                for x in range(1, b.n + 1):
                    row = b.m[x]
                    for y in range(x + 1, b.n + 1):
                        cap += row[y] // 2
                if cap < digons:
                    return False
        else:
            odd = sum(1 for v in range(1, b.n + 1) if b.deg[v] % 2)
            if odd > 2 * sum(pending.values()):
                return False
        return True

    def rec() -> bool:
        if b.edges == 0:
            return True
        tick()
        if not feasible():
            return False
        v = min((u for u in range(1, b.n + 1) if b.deg[u]), key=lambda u: b.deg[u])
        for ell in sorted((l for l, c in pending.items() if c), reverse=True):
            for w in _walks_through(b, v, ell, cycle, rng, tick):
                b.take(w, cycle)
                pending[ell] -= 1
                out.append(w)
                if rec():
                    return True
                out.pop()
                pending[ell] += 1
                b.give(w, cycle)
        return False

    try:
        found = rec()
    except _BudgetSpent:
        return None
    if not found:
        raise ValueError("no decomposition exists")
    return out


# ---------------------------------------------------------------------------
# even hosts with many digons


def _chain_plan(lengths: list[int], n: int, rng: random.Random) -> list[int] | None:
    """Shared-arc lengths h_2..h_{p-1} keeping the running symmetric
    difference a single cycle that finally equals the last length."""
    p = len(lengths)
    reach: list[dict[int, list[int]]] = [{lengths[0]: []}]
    for j in range(1, p - 1):
        a = lengths[j]
        nxt: dict[int, list[int]] = {}
        for s in reach[-1]:
            for h in range(1, min(s - 1, a - 1) + 1):
                if a - h - 1 > n - s:
                    continue
                s2 = s + a - 2 * h
                if 3 <= s2 <= n:
                    nxt.setdefault(s2, []).append(s * 1000 + h)
        if not nxt:
            return None
        reach.append(nxt)
    if lengths[-1] not in reach[-1]:
        return None
    # walk back choosing random predecessors
    hs: list[int] = []
    s = lengths[-1]
    for j in range(p - 2, 0, -1):
        code = rng.choice(reach[j][s])
        prev, h = divmod(code, 1000)
        hs.append(h)
        s = prev
    return hs[::-1]


def chain_even_decompose(b: Board, lengths: Sequence[int], rng: random.Random,
                         tries: int = 20) -> list[Walk] | None:
    """Decompose an even-multiplicity board whose list is rich in digons.

    The non-digon cycles are laid so each pair is used zero or two times;
    every leftover pair then splits into digons.
    """
    n, cap = b.n, b.m
    if any(cap[x][y] % 2 for x in range(1, n + 1) for y in range(x + 1, n + 1)):
        return None
    big = [l for l in lengths if l > 2]
    if not big:
        return _all_digons(b)
    if len(big) == 1:
        return None
    for _ in range(tries):
        order = big[:]
        rng.shuffle(order)
        hs = _chain_plan(order, n, rng)
        if hs is None:
            continue
        walks = _chain_realize(b, order, hs, rng)
        if walks is not None:
            for w in walks:
                b.take(w, True)
            return walks + _all_digons(b)
    return None


def _all_digons(b: Board) -> list[Walk]:
    # one digon per pair per round keeps any prefix of the output spread out
    out: list[Walk] = []
    left = {(x, y): b.m[x][y] // 2 for x in range(1, b.n + 1)
            for y in range(x + 1, b.n + 1) if b.m[x][y] >= 2}
    while left:
        for p in list(left):
            out.append(p)
            left[p] -= 1
            if not left[p]:
                del left[p]
    for w in out:
        b.take(w, True)
    return out


def _chain_realize(b: Board, order: list[int], hs: list[int],
                   rng: random.Random) -> list[Walk] | None:
    n, cap = b.n, b.m
    used = [[0] * (n + 1) for _ in range(n + 1)]
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    S = verts[:order[0]]
    walks: list[Walk] = [tuple(S)]
    for i in range(len(S)):
        x, y = S[i], S[(i + 1) % len(S)]
        if cap[x][y] < 2:
            return None
        used[x][y] += 1
        used[y][x] += 1
    for a, h in zip(order[1:-1], hs):
        s = len(S)
        on_s = set(S)
        outside = [v for v in range(1, n + 1) if v not in on_s]
        done = False
        for i in rng.sample(range(s), s):
            rot = S[i:] + S[:i]
            x, y = rot[0], rot[h]
            detour = _fresh_path(x, y, a - h - 1, outside, used, cap, rng)
            if detour is None:
                continue
            walks.append(tuple(rot[:h + 1]) + tuple(reversed(detour)))
            for u, v in zip(rot[:h], rot[1:h + 1]):
                used[u][v] += 1
                used[v][u] += 1
            chain = [x] + detour + [y]
            for u, v in zip(chain, chain[1:]):
                used[u][v] += 1
                used[v][u] += 1
            S = rot[h:] + [x] + detour
            done = True
            break
        if not done:
            return None
    if len(S) != order[-1]:
        return None
    walks.append(tuple(S))
    return walks


def _fresh_path(x: int, y: int, inner: int, outside: list[int], used, cap,
                rng: random.Random, budget: int = 2000) -> list[int] | None:
    """Inner vertices of an x..y path through ``outside`` on unused pairs."""
    def free(u: int, v: int) -> bool:
        return used[u][v] == 0 and cap[u][v] >= 2

    if inner == 0:
        return [] if free(x, y) else None
    path: list[int] = []
    taken: set[int] = set()
    nodes = [0]

    def rec(u: int) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            return False
        if len(path) == inner:
            return free(u, y)
        cand = [w for w in outside if w not in taken and free(u, w)]
        rng.shuffle(cand)
        for w in cand:
            path.append(w)
            taken.add(w)
            if rec(w):
                return True
            path.pop()
            taken.discard(w)
        return False

    return path[:] if rec(x) else None
