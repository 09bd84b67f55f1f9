import random
from collections import Counter
from math import comb

import pytest

from bergedecomp.assembly import (HC_EMPTY, StagedHost, HC_EVEN_DIGONS, HC_ODD_DIGONS, HP_EXACT, HP_SPLIT,
                                  assemble_H, build_HC, build_HP, multiplicity_range,
                                  split_levels, walks_to_decomposition)
from bergedecomp.errors import InfeasibleInput, SizeMismatch, SpreadTooLarge
from bergedecomp.graph_decomp import verify_graph_decomposition
from bergedecomp.multigraph import Multigraph, complete_multigraph
from helpers import random_long_lists


def test_split_levels():
    assert split_levels([], [1500], 38) == (2, 0)
    assert split_levels([703], [], 38) == (0, 1)
    assert split_levels([], [], 10) == (0, 0)


def test_hp_split_path():
    hp = build_HP((4, 4, 4), 1, 5)
    assert hp.branch == HP_SPLIT
    assert hp.details == {"s0": 2, "q": 2, "q_prime": 2}
    assert hp.graph.edge_count == 12
    assert multiplicity_range(hp.graph) == (1, 2)
    assert sorted(hp.decomposition.lengths()) == [4, 4, 4]
    assert all(len(set(w.vertices)) == len(w.vertices) for w in hp.decomposition.walks)
    assert verify_graph_decomposition(hp.graph, hp.decomposition, [4, 4, 4], "path") == []


def test_hp_exact_level():
    hp = build_HP((3, 3), 1, 4)
    assert hp.branch == HP_EXACT
    assert hp.details == {"s0": 2, "q": 0, "q_prime": 0}
    assert hp.graph == complete_multigraph(1, 4)


def test_hp_empty():
    hp = build_HP((), 0, 6)
    assert hp.graph.edge_count == 0 and hp.decomposition.walks == []


def test_hp_rejects_wrong_level():
    with pytest.raises(InfeasibleInput):
        build_HP((3, 3), 0, 4)
    with pytest.raises(InfeasibleInput):
        build_HP((4,), 0, 4)


def test_hc_odd_level():
    hc = build_HC((5, 5), 1, 5)
    assert hc.branch == HC_ODD_DIGONS
    lo, hi = multiplicity_range(hc.graph)
    assert 0 <= lo and hi <= 3
    assert sorted(hc.decomposition.lengths()) == [5, 5]


def test_hc_three_digons():
    hc = build_HC((2, 2, 2), 2, 3)
    assert hc.graph == complete_multigraph(2, 3)
    assert hc.branch == HC_EVEN_DIGONS
    assert hc.details["r"] == 0


def test_hc_empty():
    hc = build_HC((), 0, 6)
    assert hc.branch == HC_EMPTY and hc.graph.edge_count == 0


def test_hc_rejects_long_cycle():
    with pytest.raises(InfeasibleInput):
        build_HC((7,), 0, 6)


@pytest.mark.parametrize("seed", range(6))
def test_staging_bounds_random(seed):
    rng = random.Random(seed)
    n = rng.choice([12, 14, 16])
    cycles, paths = random_long_lists(n, rng.randint(2, 5) * comb(n, 2), rng)
    lam_p, lam_c = split_levels(cycles, paths, n)
    hp = build_HP(paths, lam_p, n)
    hc = build_HC(cycles, lam_c, n)
    assert lam_p <= multiplicity_range(hp.graph)[0] <= multiplicity_range(hp.graph)[1] <= lam_p + 1
    lo, hi = multiplicity_range(hc.graph)
    assert max(0, lam_c - 2) <= lo and hi <= lam_c + 2
    assert Counter(hc.decomposition.lengths()) == Counter(cycles)
    assert Counter(hp.decomposition.lengths()) == Counter(paths)


def test_assemble_union():
    H, dec = assemble_H(build_HP((3, 3), 1, 4), build_HC((), 0, 4), 1, 4, 2)
    assert H == complete_multigraph(1, 4)
    assert sorted(dec.lengths()) == [3, 3]


def test_assemble_size_mismatch():
    with pytest.raises(SizeMismatch):
        assemble_H(build_HP((3, 3), 1, 4), build_HC((), 0, 4), 1, 4, 3)
    with pytest.raises(InfeasibleInput):
        assemble_H(build_HP((3, 3), 1, 4), build_HC((), 0, 4), 0, 4, 2)


def test_assemble_spread():
    hp = build_HP((), 0, 3)
    dec = walks_to_decomposition(3, [("cycle", (1, 2))] * 4 + [("path", (1, 3))])
    hc = StagedHost(dec.host, dec, (0, 8))
    with pytest.raises(SpreadTooLarge):
        assemble_H(hp, hc, 3, 3, 2)


def test_walks_to_decomposition_indexes_copies():
    dec = walks_to_decomposition(3, [("cycle", (1, 2)), ("path", (2, 1, 3))])
    assert dec.host == Multigraph(3, {(1, 2): 3, (1, 3): 1})
    assert dec.walks[1].edges == ((1, 2, 2), (1, 3, 0))


def test_zero_levels_with_short_lists():
    hp = build_HP((3, 2), 0, 5)
    assert multiplicity_range(hp.graph)[1] <= 1 and sorted(hp.decomposition.lengths()) == [2, 3]
    hc = build_HC((3, 3), 0, 5)
    assert multiplicity_range(hc.graph)[1] <= 2 and sorted(hc.decomposition.lengths()) == [3, 3]
