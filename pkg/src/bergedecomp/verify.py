"""Independent checks on Berge decomposition certificates.

Works on the JSON certificate form only so third-party output can be
audited. Shares no code with the constructors.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Any, Sequence

SHADOW_MAX_N = 16


class Code(str, enum.Enum):
    DuplicateHyperedge = "DuplicateHyperedge"
    CoreNotDistinct = "CoreNotDistinct"
    ContainmentFail = "ContainmentFail"
    CoverageMismatch = "CoverageMismatch"
    LengthMismatch = "LengthMismatch"
    ArityMismatch = "ArityMismatch"


@dataclass(frozen=True)
class Violation:
    code: Code
    walk_index: int | None
    detail: str

    def to_json(self) -> dict:
        return {"code": self.code.value, "walk_index": self.walk_index, "detail": self.detail}


def _as_json(d: Any) -> dict:
    return d if isinstance(d, dict) else d.to_json()


def verify_berge_decomposition(n: int, k: int, mu: int, cycle_lengths: Sequence[int],
                               path_lengths: Sequence[int], d: Any) -> list[Violation]:
    """Return every violation found; an empty list means the certificate is valid.

    Malformed walks or hyperedges (wrong sizes, out-of-range entries) are
    reported alone, since the remaining checks are meaningless for them.
    """
    cert = _as_json(d)
    walks = cert.get("walks", [])

    arity: list[Violation] = []
    for key, want in (("n", n), ("k", k), ("mu", mu)):
        if cert.get(key) != want:
            arity.append(Violation(Code.ArityMismatch, None,
                                   f"certificate {key}={cert.get(key)} expected {want}"))
    for i, w in enumerate(walks):
        core, edges = w.get("core", []), w.get("edges", [])
        kind = w.get("kind")
        if kind not in ("cycle", "path"):
            arity.append(Violation(Code.ArityMismatch, i, f"unknown kind {kind!r}"))
            continue
        want = len(edges) if kind == "cycle" else len(edges) + 1
        if len(core) != want or not edges or (kind == "cycle" and len(edges) < 2):
            arity.append(Violation(Code.ArityMismatch, i,
                                   f"{kind} with {len(edges)} edges has {len(core)} core vertices"))
        if any(not isinstance(v, int) or not 1 <= v <= n for v in core):
            arity.append(Violation(Code.ArityMismatch, i, "core vertex outside 1..n"))
        for j, e in enumerate(edges):
            s, c = e.get("set", []), e.get("copy")
            if (len(s) != k or len(set(s)) != len(s)
                    or any(not isinstance(v, int) or not 1 <= v <= n for v in s)):
                arity.append(Violation(Code.ArityMismatch, i, f"edge {j} is not a {k}-subset of 1..{n}"))
            if not isinstance(c, int) or not 0 <= c < mu:
                arity.append(Violation(Code.ArityMismatch, i, f"edge {j} copy {c} outside 0..{mu - 1}"))
    if arity:
        return arity

    out: list[Violation] = []
    ids: Counter = Counter()
    sets: Counter = Counter()
    cyc: list[int] = []
    pth: list[int] = []
    for i, w in enumerate(walks):
        core = w["core"]
        edges = [(frozenset(e["set"]), e["copy"]) for e in w["edges"]]
        (cyc if w["kind"] == "cycle" else pth).append(len(edges))
        if len(set(core)) != len(core):
            out.append(Violation(Code.CoreNotDistinct, i, f"core {core} repeats a vertex"))
        for j, (s, _) in enumerate(edges):
            a, b = core[j], core[(j + 1) % len(core)]
            if a not in s or b not in s:
                out.append(Violation(Code.ContainmentFail, i,
                                     f"edge {j} {sorted(s)} misses {a} or {b}"))
        for e in edges:
            ids[e] += 1
            sets[e[0]] += 1
    for (s, c), times in sorted(ids.items(), key=lambda t: (sorted(t[0][0]), t[0][1])):
        if times > 1:
            out.append(Violation(Code.DuplicateHyperedge, None,
                                 f"hyperedge {sorted(s)} copy {c} used {times} times"))
    total = comb(n, k)
    wrong = sum(1 for t in sets.values() if t != mu)
    if len(sets) != total or wrong:
        out.append(Violation(Code.CoverageMismatch, None,
                             f"{len(sets)} of {total} k-sets present, {wrong} with multiplicity != {mu}"))
    if Counter(cyc) != Counter(cycle_lengths):
        out.append(Violation(Code.LengthMismatch, None,
                             f"cycle lengths {sorted(cyc)} vs prescribed {sorted(cycle_lengths)}"))
    if Counter(pth) != Counter(path_lengths):
        out.append(Violation(Code.LengthMismatch, None,
                             f"path lengths {sorted(pth)} vs prescribed {sorted(path_lengths)}"))
    return out


# ---------------------------------------------------------------------------
# shadows


def _check_n(family, n: int | None) -> int:
    top = max((max(s) for s in family if s), default=0)
    n = top if n is None else n
    if n > SHADOW_MAX_N:
        raise ValueError(f"shadow enumeration capped at n <= {SHADOW_MAX_N}")
    return n


def lower_shadow(family, ell: int) -> set[frozenset[int]]:
    """All sets obtained by deleting ``ell`` elements from a member."""
    family = [frozenset(s) for s in family]
    _check_n(family, None)
    out: set[frozenset[int]] = set()
    for s in family:
        if not 0 <= ell <= len(s):
            raise ValueError("ell out of range")
        out.update(frozenset(t) for t in combinations(sorted(s), len(s) - ell))
    return out


def upper_shadow(family, ell: int, n: int) -> set[frozenset[int]]:
    """All subsets of 1..n obtained by adding ``ell`` elements to a member."""
    family = [frozenset(s) for s in family]
    _check_n(family, n)
    ground = range(1, n + 1)
    out: set[frozenset[int]] = set()
    for s in family:
        rest = [v for v in ground if v not in s]
        if not 0 <= ell <= len(rest):
            raise ValueError("ell out of range")
        out.update(s | frozenset(t) for t in combinations(rest, ell))
    return out


# ---------------------------------------------------------------------------
# single-fault mutants of a valid certificate


def _copy(cert: dict) -> dict:
    return {**cert, "walks": [{**w, "core": list(w["core"]),
                               "edges": [dict(e, set=list(e["set"])) for e in w["edges"]]}
                              for w in cert["walks"]]}


def _contains(e: dict, *vs: int) -> bool:
    return all(v in e["set"] for v in vs)


def mutate(cert: dict, code: Code, rng: random.Random, cycles: Sequence[int],
           paths: Sequence[int]) -> tuple[dict, list[int], list[int]] | None:
    """Return (certificate, cycles, paths) with one fault of kind ``code``,
    or None when this certificate admits no such fault."""
    c = _copy(_as_json(cert))
    walks = c["walks"]
    cycles, paths = list(cycles), list(paths)
    n, k, mu = c["n"], c["k"], c["mu"]

    if code is Code.DuplicateHyperedge:
        if mu < 2:
            return None
        w = rng.choice(walks)
        e = rng.choice(w["edges"])
        e["copy"] = (e["copy"] + 1 + rng.randrange(mu - 1)) % mu
        return c, cycles, paths

    if code is Code.CoverageMismatch:
        i = rng.randrange(len(walks))
        w = walks.pop(i)
        (cycles if w["kind"] == "cycle" else paths).remove(len(w["edges"]))
        return c, cycles, paths

    if code is Code.LengthMismatch:
        lst = cycles if cycles and (not paths or rng.random() < 0.5) else paths
        i = rng.randrange(len(lst))
        lst[i] += 1
        return c, cycles, paths

    if code is Code.ArityMismatch:
        w = rng.choice(walks)
        e = rng.choice(w["edges"])
        missing = [v for v in range(1, n + 1) if v not in e["set"]]
        if missing and rng.random() < 0.5:
            e["set"] = sorted(e["set"] + [rng.choice(missing)])
        else:
            e["copy"] = mu + rng.randrange(3)
        return c, cycles, paths

    slots = [(i, j) for i, w in enumerate(walks) for j in range(len(w["edges"]))]

    if code is Code.ContainmentFail:
        def needs(i: int, j: int) -> tuple[int, int]:
            core = walks[i]["core"]
            return core[j], core[(j + 1) % len(core)]
        for _ in range(2000):
            (i1, j1), (i2, j2) = rng.sample(slots, 2)
            e1, e2 = walks[i1]["edges"][j1], walks[i2]["edges"][j2]
            if not _contains(e2, *needs(i1, j1)) or not _contains(e1, *needs(i2, j2)):
                walks[i1]["edges"][j1], walks[i2]["edges"][j2] = e2, e1
                return c, cycles, paths
        return None

    if code is Code.CoreNotDistinct:
        order = list(range(len(walks)))
        rng.shuffle(order)
        for i in order:
            w = walks[i]
            core, edges = w["core"], w["edges"]
            ell = len(core)
            for j in rng.sample(range(ell), ell):
                if w["kind"] == "cycle":
                    idx = {(j - 1) % ell, j}
                else:
                    idx = {t for t in (j - 1, j) if 0 <= t < len(edges)}
                touch = [edges[t] for t in idx]
                for u in rng.sample(core, ell):
                    if u != core[j] and all(_contains(e, u) for e in touch):
                        core[j] = u
                        return c, cycles, paths
        return None
    raise ValueError(f"unknown code {code}")
