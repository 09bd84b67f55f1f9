"""Shared generators for the test suite."""

from __future__ import annotations

import random
from collections import Counter
from math import comb


def random_berge_lists(n: int, total: int, rng: random.Random,
                       path_bias: float = 0.5) -> tuple[list[int], list[int]]:
    """Random cycle lengths in [2, n] and path lengths in [1, n-1] summing to total."""
    cycles: list[int] = []
    paths: list[int] = []
    left = total
    while left:
        if left >= 2 and rng.random() >= path_bias:
            ell = rng.randint(2, min(n, left))
            cycles.append(ell)
        else:
            ell = rng.randint(1, min(n - 1, left))
            paths.append(ell)
        left -= ell
    return cycles, paths


def random_long_lists(n: int, total: int, rng: random.Random) -> tuple[list[int], list[int]]:
    """Case-1 style lists: mostly long walks with a sprinkling of short ones."""
    cycles: list[int] = []
    paths: list[int] = []
    left = total
    while left:
        short = rng.random() < 0.15
        if rng.random() < 0.5 and left >= 2:
            ell = rng.randint(2, 6) if short else rng.randint(n // 2, n)
            ell = min(ell, left)
            if ell < 2:
                continue
            cycles.append(ell)
        else:
            ell = rng.randint(1, 5) if short else rng.randint(n // 2, n - 1)
            ell = min(ell, left)
            paths.append(ell)
        left -= ell
    return cycles, paths


def random_path_lengths(lam: int, n: int, rng: random.Random) -> list[int]:
    budget = rng.randint(0, lam * comb(n, 2))
    out: list[int] = []
    while budget:
        ell = rng.randint(1, min(n - 1, budget))
        out.append(ell)
        budget -= ell
    return out


def even_multigraph(n: int, rng: random.Random) -> Counter:
    """Multiplicities drawn from {0, 2, 4} on every pair of 1..n."""
    return Counter({(x, y): m for x in range(1, n + 1) for y in range(x + 1, n + 1)
                    if (m := rng.choice((0, 2, 4)))})


def random_cycle(avail: Counter, rng: random.Random) -> list[tuple[int, int]] | None:
    """Random cycle in the multigraph ``avail``; every degree must be even."""
    verts = sorted({v for p, m in avail.items() if m for v in p})
    if not verts:
        return None
    walk = [rng.choice(verts)]
    used: Counter = Counter()
    while True:
        u = walk[-1]
        nbrs = [v for v in verts if v != u
                and avail[(min(u, v), max(u, v))] - used[(min(u, v), max(u, v))] > 0]
        v = rng.choice(nbrs)
        used[(min(u, v), max(u, v))] += 1
        if v in walk:
            i = walk.index(v)
            loop = walk[i:] + [v]
            return [(min(a, b), max(a, b)) for a, b in zip(loop, loop[1:])]
        walk.append(v)


def random_cycle_packing(g: Counter, rng: random.Random, full: bool) -> list[list[tuple[int, int]]]:
    """Peel random cycles off an even multigraph; stop early unless ``full``."""
    avail = Counter(g)
    packing = []
    while True:
        c = random_cycle(avail, rng)
        if c is None:
            break
        packing.append(c)
        avail.subtract(Counter(c))
        avail = +avail
        if not full and rng.random() < 0.3:
            break
    return packing


def real_binomial_root(size: int, k: int) -> float:
    """The real s >= k - 1 with C(s, k) = size, by bisection."""
    def binom(s: float) -> float:
        out = 1.0
        for i in range(k):
            out *= (s - i) / (i + 1)
        return out
    lo, hi = float(k - 1), float(k)
    while binom(hi) < size:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if binom(mid) < size:
            lo = mid
        else:
            hi = mid
    return hi
