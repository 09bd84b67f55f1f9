import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from bergedecomp.admissibility import f, is_admissible, packing_feasible
from bergedecomp.errors import InfeasibleInput, InstanceTooLarge, SearchExhausted
from bergedecomp.graph_decomp import (GraphDecomposition, SolverConfig, WORKERS_ENV,
                                      brute_force_packing_exists, cycle_decomposition,
                                      cycle_host, cycle_packing, decompose_multigraph,
                                      packing_extension, path_packing,
                                      verify_graph_decomposition)
from bergedecomp.multigraph import GraphWalk, Multigraph, complete_multigraph


def check(d, host, lengths, kind):
    assert verify_graph_decomposition(host, d, lengths, kind) == []


# --- path packings

def test_path_packing_k3():
    d = path_packing(1, 3, [2, 1])
    check(d, complete_multigraph(1, 3), [2, 1], "path")
    assert d.leave == []


def test_path_packing_single_edge_leaves_rest():
    d = path_packing(1, 4, [1])
    assert len(d.walks) == 1 and len(d.leave) == 5
    check(d, complete_multigraph(1, 4), [1], "path")


def test_path_packing_k4_two_three_paths():
    d = path_packing(1, 4, [3, 3])
    assert d.is_decomposition and sorted(d.lengths()) == [3, 3]


@pytest.mark.parametrize("lam,n,lengths", [(1, 4, [4]), (2, 3, [2, 2, 2, 1]), (0, 4, [1])])
def test_path_packing_infeasible(lam, n, lengths):
    with pytest.raises(InfeasibleInput):
        path_packing(lam, n, lengths)


# --- cycle decompositions

@pytest.mark.parametrize("lam,n,lengths", [
    (1, 5, [5, 5]),
    (2, 3, [2, 2, 2]),
    (1, 7, [3] * 7),
    (3, 6, [6] * 5 + [3] * 2 + [2] * 3),
    (2, 9, [9] * 8),
])
def test_cycle_decomposition(lam, n, lengths):
    d = cycle_decomposition(lam, n, lengths)
    check(d, cycle_host(lam, n), lengths, "cycle")
    assert d.is_decomposition


def test_digons_in_2k3_are_forced():
    d = cycle_decomposition(2, 3, [2, 2, 2])
    assert sorted(tuple(sorted(w.vertices)) for w in d.walks) == [(1, 2), (1, 3), (2, 3)]


def test_cycle_decomposition_rejects_inadmissible():
    with pytest.raises(InfeasibleInput):
        cycle_decomposition(1, 5, [2, 4, 4])


# --- cycle packings

@pytest.mark.parametrize("lam,n,lengths,leave", [
    (1, 5, [3, 3], 4),
    (2, 3, [3], 3),
    (1, 6, [], 12),
    (2, 12, [12] * 5 + [2] * 20, 132 - 100),
])
def test_cycle_packing(lam, n, lengths, leave):
    d = cycle_packing(lam, n, lengths)
    check(d, cycle_host(lam, n), lengths, "cycle")
    assert len(d.leave) == leave


def test_cycle_packing_rejects_r1():
    with pytest.raises(InfeasibleInput):
        cycle_packing(1, 5, [3, 3, 3])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(3, 14), st.lists(st.integers(2, 14), max_size=20))
def test_extension_is_admissible(lam, n, lengths):
    lengths = [m for m in lengths if m <= n]
    if sum(lengths) > f(lam, n) or not packing_feasible((lam, n, lengths)):
        return
    ext = packing_extension(lam, n, lengths)
    assert sum(ext) == f(lam, n) - sum(lengths)
    assert is_admissible(lam, n, lengths + ext)


# --- arbitrary hosts, config, determinism

def test_decompose_multigraph_custom_host():
    host = Multigraph(4, {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): 1, (1, 3): 2})
    assert host.is_even()
    d = decompose_multigraph(host, [2, 4], "cycle")
    check(d, host, [2, 4], "cycle")


def test_impossible_host_raises_with_best_partial():
    host = Multigraph(4, {(1, 2): 1, (2, 3): 1, (1, 3): 1, (3, 4): 2})
    with pytest.raises(SearchExhausted) as exc:
        decompose_multigraph(host, [4, 1], "path", SolverConfig(max_restarts=2))
    assert isinstance(exc.value.best, GraphDecomposition)


def test_same_seed_same_output():
    runs = {json.dumps(cycle_decomposition(1, 11, [11] * 5, SolverConfig(seed=4)).to_json())
            for _ in range(3)}
    assert len(runs) == 1


def test_parallel_restarts_match_serial():
    host = cycle_host(2, 8)
    lengths = [8, 7, 6, 5, 5, 4, 4, 3, 3, 3, 2, 2, 2, 2]
    assert sum(lengths) == host.edge_count
    a = decompose_multigraph(host, lengths, "cycle", SolverConfig(seed=3))
    b = decompose_multigraph(host, lengths, "cycle", SolverConfig(seed=3, workers=2))
    assert a.to_json() == b.to_json()


def test_config_validation_and_env(monkeypatch):
    with pytest.raises(ValueError):
        SolverConfig(max_restarts=0)
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert SolverConfig.from_env(seed=1).workers == 3
    monkeypatch.delenv(WORKERS_ENV)
    assert SolverConfig.from_env().workers == 1


def test_json_round_trip():
    d = cycle_packing(1, 5, [3, 3])
    again = GraphDecomposition.from_json(json.loads(json.dumps(d.to_json())))
    assert again == d


# --- verifier

def test_verifier_flags_reused_edge():
    d = cycle_decomposition(1, 5, [5, 5])
    w0, w1 = d.walks
    bad = GraphWalk("cycle", w1.vertices, (w0.edges[0],) + w1.edges[1:])
    out = verify_graph_decomposition(d.host, GraphDecomposition(d.host, [w0, bad]), [5, 5], "cycle")
    assert any("edge instance reused" in p for p in out)


def test_verifier_flags_length_mismatch():
    host = complete_multigraph(1, 4)
    walk = GraphWalk("cycle", (1, 2, 3, 4), ((1, 2, 0), (2, 3, 0), (3, 4, 0), (1, 4, 0)))
    d = GraphDecomposition(host, [walk], [(1, 3, 0), (2, 4, 0)])
    out = verify_graph_decomposition(host, d, [5, 5], "cycle")
    assert "length multiset mismatch" in out


def test_verifier_flags_coverage():
    host = complete_multigraph(1, 3)
    walk = GraphWalk("path", (1, 2), ((1, 2, 0),))
    out = verify_graph_decomposition(host, GraphDecomposition(host, [walk]), [1], "path")
    assert any(p.startswith("coverage mismatch") for p in out)


# --- brute force oracle

@pytest.mark.parametrize("lam,n,lengths,kind,ok", [
    (1, 5, [3, 3, 3], "cycle", False),
    (1, 5, [3, 3], "cycle", True),
    (1, 3, [3], "cycle", True),
    (2, 3, [2, 2, 2], "cycle", True),
    (1, 4, [3, 3], "path", True),
    (1, 5, [5, 5], "cycle", True),
])
def test_oracle(lam, n, lengths, kind, ok):
    host = cycle_host(lam, n) if kind == "cycle" else complete_multigraph(lam, n)
    assert brute_force_packing_exists(host, lengths, kind) is ok


def test_oracle_size_cap():
    with pytest.raises(InstanceTooLarge):
        brute_force_packing_exists(complete_multigraph(1, 9), [3], "cycle")
