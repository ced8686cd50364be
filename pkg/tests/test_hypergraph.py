import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loosetile.constructions import covered_extremal, random_3graph, space_barrier
from loosetile.hypergraph import FormatError, Hypergraph3, HypergraphError, bits_of, mask_of, parse, serialize

BARRIER = space_barrier(12).hypergraph
X = [0, 1, 2]
Y = list(range(3, 12))


def test_degree_examples():
    assert Hypergraph3.complete(12).degree({0, 1}) == 10
    assert BARRIER.degree({5, 7}) == 3
    assert Hypergraph3.empty(6).degree({0, 1}) == 0


def test_degree_errors():
    with pytest.raises(HypergraphError):
        BARRIER.degree({0, 12})
    with pytest.raises(HypergraphError):
        BARRIER.degree({0, 1, 2})


def test_vertex_degree_counts_edges_through_vertex():
    assert BARRIER.degree({0}) == math.comb(11, 2)
    assert BARRIER.degree({5}) == math.comb(11, 2) - math.comb(8, 2)


def test_min_codegree_examples():
    assert Hypergraph3.complete(12).min_codegree().value == 10
    rep = BARRIER.min_codegree()
    assert rep.value == 3
    assert set(rep.witness) <= set(Y)
    assert BARRIER.degree(rep.witness) == rep.value
    assert covered_extremal(12, 4).hypergraph.min_codegree().value == 4


def test_min_codegree_needs_three_vertices():
    with pytest.raises(HypergraphError):
        Hypergraph3.empty(2).min_codegree()


def test_complement_degree_examples():
    assert Hypergraph3.complete(12).complement_degree({0, 1}, range(12)) == 0
    assert BARRIER.complement_degree({5, 7}, Y) == 7
    assert BARRIER.complement_degree({0}, Y) == 0


def test_edge_counts_examples():
    assert Hypergraph3.complete(6).edge_counts([range(6)]) == 20
    assert BARRIER.edge_counts([Y]) == 0
    assert BARRIER.edge_counts([X, Y, Y]) == 3 * math.comb(9, 2) == 108
    assert BARRIER.edge_counts([[]]) == 0


def test_parse_serialize_examples():
    H = parse("h3 6 1\n0 1 2")
    assert H.n == 6 and H.m == 1
    text = serialize(BARRIER)
    assert len(text.strip().splitlines()) - 1 == 136
    with pytest.raises(FormatError, match="out of range") as info:
        parse("h3 6 1\n0 1 6")
    assert info.value.line == 2


@pytest.mark.parametrize(
    ("text", "line", "message"),
    [
        ("h4 6 1\n0 1 2", 1, "header"),
        ("h3 6 2\n0 1 2\n0 1 2", 3, "duplicate"),
        ("# comment\nh3 6 1\n0 1", 3, "three"),
        ("h3 6 1\n2 1 0", 2, "a < b < c"),
        ("h3 6 2\n0 1 2", 2, "declares"),
    ],
)
def test_parse_errors_carry_line(text, line, message):
    with pytest.raises(FormatError, match=message) as info:
        parse(text)
    assert info.value.line == line


def test_comments_are_ignored():
    assert parse("# a\nh3 4 1\n# b\n0 1 3\n").edge_set == {(0, 1, 3)}


def test_constructor_rejects_bad_edges():
    with pytest.raises(HypergraphError):
        Hypergraph3(4, [(0, 1, 1)])
    with pytest.raises(HypergraphError):
        Hypergraph3(4, [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(HypergraphError):
        Hypergraph3(3, [(0, 1, 3)])


def test_bitset_helpers():
    assert bits_of(mask_of([5, 0, 3])) == [0, 3, 5]
    assert mask_of(np.array([1, 2])) == 6


def test_link_matches_edges():
    H = random_3graph(15, 0.3, seed=4).hypergraph
    for u, v in combinations(range(15), 2):
        expected = {w for w in range(15) if tuple(sorted((u, v, w))) in H.edge_set}
        assert set(bits_of(H.link(u, v))) == expected


@pytest.mark.parametrize("n", range(3, 41))
def test_min_codegree_complete(n):
    assert Hypergraph3.complete(n).min_codegree().value == n - 2


@pytest.mark.parametrize("seed", range(100))
def test_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 31))
    H = random_3graph(n, float(rng.random()), seed=seed).hypergraph
    assert parse(serialize(H)) == H


hypergraphs = st.integers(3, 14).flatmap(
    lambda n: st.builds(
        lambda keep: Hypergraph3(n, [t for t, k in zip(combinations(range(n), 3), keep) if k]),
        st.lists(st.booleans(), min_size=math.comb(n, 3), max_size=math.comb(n, 3)),
    )
)


@given(hypergraphs)
def test_codegree_sum_is_three_times_edges(H):
    total = sum(H.degree({u, v}) for u, v in combinations(range(H.n), 2))
    assert total == 3 * H.m


@given(hypergraphs, st.data())
def test_degree_plus_complement(H, data):
    u, v = data.draw(st.lists(st.integers(0, H.n - 1), min_size=2, max_size=2, unique=True))
    T = data.draw(st.sets(st.integers(0, H.n - 1)))
    assert H.degree_into({u, v}, T) + H.complement_degree({u, v}, T) == len(T - {u, v})


@given(hypergraphs, st.data())
def test_edge_counts_match_enumeration(H, data):
    A = data.draw(st.sets(st.integers(0, H.n - 1)))
    B = data.draw(st.sets(st.integers(0, H.n - 1)))
    C = data.draw(st.sets(st.integers(0, H.n - 1)))
    from itertools import permutations

    def assignable(e, parts):
        return any(all(x in p for x, p in zip(order, parts)) for order in permutations(e))

    E = H.edge_set
    assert H.edge_counts([A]) == sum(1 for e in E if set(e) <= A)
    assert H.edge_counts([A, B, C]) == sum(1 for e in E if assignable(e, (A, B, C)))
    assert H.edge_counts([A, B]) == sum(1 for e in E if assignable(e, (A, B, B)))
