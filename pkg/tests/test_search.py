from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from loosetile.constructions import covered_extremal, random_3graph, space_barrier
from loosetile.cycles import CycleCopy
from loosetile.hypergraph import Hypergraph3
from loosetile.search import (
    INDETERMINATE,
    NONE,
    SOME,
    Matching3,
    Tiling,
    find_factor,
    find_t_disjoint,
    independent_set,
    max_matching3,
    max_tiling,
    verify_matching,
    verify_tiling,
)
from loosetile.hypergraph import bits_of


def test_find_factor_examples():
    K12 = Hypergraph3.complete(12)
    res = find_factor(K12)
    assert res.status == SOME and len(res.tiling) == 2
    assert verify_tiling(K12, res.tiling, require_perfect=True)

    res = find_factor(space_barrier(12).hypergraph)
    assert res.status == NONE and res.exhaustive

    inst = covered_extremal(12, 4)
    res = find_factor(inst.hypergraph)
    assert res.found and verify_tiling(inst.hypergraph, res.tiling, require_perfect=True)
    X = set(inst["X"])
    assert all(len(X & set(c.vertices)) == 2 for c in res.tiling.copies)


def test_divisibility_short_circuit():
    res = find_factor(Hypergraph3.complete(13))
    assert res.status == NONE and res.exhaustive and res.reason == "divisibility" and res.nodes == 0


def test_budget_gives_indeterminate():
    H = random_3graph(24, 0.35, seed=2).hypergraph
    res = find_factor(H, max_nodes=1)
    assert res.status in (INDETERMINATE, SOME)
    if res.status == INDETERMINATE:
        assert not res.exhaustive and res.nodes >= 1


def test_within_restricts_search():
    H = Hypergraph3.complete(14)
    res = find_factor(H, within=range(2, 14))
    assert res.found and res.tiling.covered == frozenset(range(2, 14))


def test_max_tiling_examples():
    assert len(max_tiling(Hypergraph3.complete(18)).tiling) == 3
    res = max_tiling(space_barrier(12).hypergraph)
    assert len(res.tiling) == 1 and res.maximum
    assert len(max_tiling(Hypergraph3.empty(12)).tiling) == 0


def test_max_tiling_barrier_bound():
    res = max_tiling(space_barrier(18).hypergraph)
    assert res.maximum and len(res.tiling) == (18 // 3 - 1) // 2


def test_find_t_disjoint_examples():
    res = find_t_disjoint(Hypergraph3.complete(13), 2)
    assert res.found and len(res.tiling) == 2 and verify_tiling(Hypergraph3.complete(13), res.tiling)
    single = Hypergraph3(12, CycleCopy((0, 2, 4), (1, 3, 5)).edges)
    res = find_t_disjoint(single, 2)
    assert res.status == NONE and res.exhaustive
    with pytest.raises(ValueError):
        find_t_disjoint(single, 3)


def test_barrier_plus_clique_two_copies():
    # barrier with |X| = 3 on 12 vertices next to a disjoint 6-clique
    from loosetile.constructions import disjoint_union

    inst = disjoint_union(space_barrier(12).hypergraph, Hypergraph3.complete(6))
    res = find_t_disjoint(inst.hypergraph, 2)
    assert res.found and verify_tiling(inst.hypergraph, res.tiling)
    assert find_t_disjoint(inst.hypergraph, 3).status == NONE


def test_verify_tiling_diagnostics():
    H = Hypergraph3.complete(12)
    a = CycleCopy((0, 2, 4), (1, 3, 5))
    b = CycleCopy((5, 6, 8), (7, 9, 10))
    v = verify_tiling(H, [a, b])
    assert not v and v.diagnostic == "disjointness at 5 (copies 0 and 1)"
    sparse = Hypergraph3(12, [(0, 1, 2), (2, 3, 4)])
    v = verify_tiling(sparse, [a])
    assert not v and v.diagnostic.startswith("missing edge 0 4 5")
    v = verify_tiling(H, [a], require_perfect=True)
    assert not v and v.diagnostic == "uncovered vertex 6"
    assert verify_tiling(H, [a])
    assert not verify_tiling(H, [CycleCopy((0, 1, 2), (3, 4, 12))])


def test_tiling_json_round_trip():
    res = find_factor(Hypergraph3.complete(12))
    data = res.tiling.to_json()
    assert data["perfect"] is True and data["n"] == 12
    assert Tiling.from_json(data).copies == res.tiling.copies


def test_max_matching_examples():
    m = max_matching3(Hypergraph3.complete(11))
    assert len(m) == 3 and m.maximum and verify_matching(Hypergraph3.complete(11), m)
    B = space_barrier(12).hypergraph
    m = max_matching3(B)
    assert len(m) == 3 and m.maximum and verify_matching(B, m)
    assert len(max_matching3(Hypergraph3.empty(12))) == 0


def test_greedy_matching_is_maximal():
    H = random_3graph(15, 0.2, seed=9).hypergraph
    m = max_matching3(H, mode="greedy")
    assert verify_matching(H, m)
    covered = {v for e in m.edges for v in e}
    assert not any(covered.isdisjoint(e) for e in H.edge_set)
    with pytest.raises(ValueError):
        max_matching3(H, mode="fast")


def test_verify_matching_diagnostics():
    H = Hypergraph3.complete(6)
    assert not verify_matching(H, Matching3(6, [(0, 1, 2), (2, 3, 4)]))
    assert not verify_matching(Hypergraph3.empty(6), [(0, 1, 2)])


def test_independent_set_is_independent():
    H = random_3graph(14, 0.4, seed=0).hypergraph
    I = set(bits_of(independent_set(H, (1 << 14) - 1)))
    assert I and not any(set(e) <= I for e in H.edge_set)


@pytest.mark.parametrize("seed", range(20))
def test_oracle_agreement_sample(seed):
    p = (0.2, 0.4, 0.6)[seed % 3]
    H = random_3graph(12, p, seed=1000 + seed).hypergraph
    res = find_factor(H)
    assert res.status != INDETERMINATE
    assert res.found == oracles.factor_oracle_12(12, H.edges)


@st.composite
def graph_and_extra(draw):
    n = 12
    triples = list(combinations(range(n), 3))
    seed = draw(st.integers(0, 10_000))
    p = draw(st.sampled_from([0.3, 0.45, 0.6]))
    rng = np.random.default_rng(seed)
    keep = rng.random(len(triples)) < p
    extra = rng.random(len(triples)) < 0.05
    base = [t for t, k in zip(triples, keep) if k]
    more = [t for t, k, x in zip(triples, keep, extra) if x and not k]
    return Hypergraph3(n, base), more


@given(graph_and_extra())
def test_adding_edges_keeps_factor(pair):
    H, extra = pair
    if find_factor(H).found:
        assert find_factor(H.with_edges(extra)).found


@given(st.integers(0, 500), st.sampled_from([0.15, 0.3]))
def test_t_disjoint_downward_closed(seed, p):
    H = random_3graph(13, p, seed=seed).hypergraph
    for t in (2, 1):
        if find_t_disjoint(H, t).found:
            assert find_t_disjoint(H, t - 1).found


@given(st.integers(0, 500))
def test_every_tiling_verifies(seed):
    H = random_3graph(12, 0.5, seed=seed).hypergraph
    for T in (max_tiling(H).tiling, find_t_disjoint(H, 1).tiling):
        if T is not None:
            assert verify_tiling(H, T)
