"""Arithmetic feasibility predicates for cycle and path packings of lam*K_n."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence


def sigma(lengths: Sequence[int]) -> int:
    return sum(lengths)


def nu2(lengths: Sequence[int]) -> int:
    return sum(1 for m in lengths if m == 2)


def f(lam: int, n: int) -> int:
    """Number of edges of lam*K_n minus the near one-factor."""
    edges = lam * n * (n - 1) // 2
    if lam * (n - 1) % 2:
        return edges - n // 2
    return edges


@dataclass(frozen=True)
class PackingInstance:
    lam: int
    n: int
    lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.lam < 1 or self.n < 2:
            raise ValueError("need lambda >= 1 and n >= 2")

    @property
    def r(self) -> int:
        return f(self.lam, self.n) - sum(self.lengths)


def admissibility_conditions(lam: int, n: int, lengths: Sequence[int]) -> dict[str, bool]:
    pairs = comb(n, 2)
    t = len(lengths)
    cond = {
        "parts_in_range": all(2 <= m <= n for m in lengths),
        "sum_matches": sum(lengths) == f(lam, n),
    }
    if lam % 2:
        cond["digon_bound"] = 2 * nu2(lengths) <= (lam - 1) * pairs
    else:
        top = max(lengths, default=0)
        cond["max_plus_count_bound"] = 2 * (top + t - 2) <= lam * pairs
    return cond


def is_admissible(lam: int, n: int, lengths: Sequence[int]) -> bool:
    return all(admissibility_conditions(lam, n, lengths).values())


def packing_conditions(lam: int, n: int, lengths: Sequence[int]) -> dict[str, object]:
    """Evaluate each clause of the cycle-packing criterion; also reports r."""
    pairs = comb(n, 2)
    r = f(lam, n) - sum(lengths)
    t = len(lengths)
    cond: dict[str, object] = {
        "r": r,
        "parts_in_range": all(2 <= m <= n for m in lengths),
        "leave_nonnegative": r >= 0,
    }
    if lam % 2:
        twice_nu2 = 2 * nu2(lengths)
        bound = (lam - 1) * pairs
        cond["odd_branch"] = ((r not in (1, 2) and twice_nu2 <= bound)
                              or (r == 2 and twice_nu2 < bound))
    else:
        top = max(lengths, default=0)
        lhs = 2 * (top + t - 2)
        bound = lam * pairs
        cond["even_branch"] = (r == 0 and lhs <= bound) or (r >= 2 and lhs < bound)
    return cond


def packing_feasible(inst: PackingInstance | tuple) -> bool:
    if not isinstance(inst, PackingInstance):
        inst = PackingInstance(inst[0], inst[1], tuple(inst[2]))
    cond = packing_conditions(inst.lam, inst.n, inst.lengths)
    return all(v for k, v in cond.items() if k != "r")


def path_packing_feasible(lam: int, n: int, lengths: Sequence[int]) -> bool:
    return all(1 <= m <= n - 1 for m in lengths) and sum(lengths) <= lam * comb(n, 2)
