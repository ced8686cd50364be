from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loosetile.almost import (
    CERTIFICATE,
    INDETERMINATE,
    MATCHING,
    almost_perfect_matching,
    pad_to_sparse_set,
)
from loosetile.constructions import covered_extremal, random_3graph, space_barrier
from loosetile.hypergraph import Hypergraph3, bits_of, mask_of
from loosetile.search import max_matching3, verify_matching


def is_maximal(H: Hypergraph3, edges) -> bool:
    covered = {v for e in edges for v in e}
    return all(covered & set(e) for e in H.edge_set)


def test_complete_11():
    H = Hypergraph3.complete(11)
    res = almost_perfect_matching(H, 0.1, 0.2)
    assert res.kind == MATCHING and len(res.matching) == 3
    assert verify_matching(H, res.matching) and 11 - 3 * len(res.matching) <= 0.2 * 11


def test_barrier_certificate():
    inst = space_barrier(12)
    res = almost_perfect_matching(inst.hypergraph, 0.34, 0.05)
    assert res.kind == CERTIFICATE
    cert = res.certificate
    # B has floor(2n/3) = 8 vertices, one fewer than Y
    assert cert.eB == 0 and len(cert.B) == 8 and set(cert.B) < set(inst["Y"]) and cert.check(inst.hypergraph)


def test_edgeless_certificate():
    res = almost_perfect_matching(Hypergraph3.empty(12), 0.34, 0.05)
    assert res.kind == CERTIFICATE and res.certificate.eB == 0 and len(res.certificate.B) == 8


def test_parameter_checks():
    with pytest.raises(ValueError):
        almost_perfect_matching(Hypergraph3.empty(6), 0.0, 0.5)
    with pytest.raises(ValueError):
        almost_perfect_matching(Hypergraph3.empty(6), 0.5, 1.0)


SPLIT_M = [(0, 1, 2), (3, 4, 5), (6, 7, 8)]


def split_instance() -> Hypergraph3:
    """A 3-edge maximal matching on 0..8 whose vertices each see every pair of the 9 leftovers."""
    edges = set(SPLIT_M)
    edges |= {(v, a, b) for v in range(9) for a, b in combinations(range(9, 18), 2)}
    return Hypergraph3(18, edges)


def test_augmentation_splits_matching_edges():
    H = split_instance()
    res = almost_perfect_matching(H, 0.75, 0.05, initial=SPLIT_M)
    assert res.augmentations >= 1
    assert verify_matching(H, res.matching) and is_maximal(H, res.matching.edges)
    assert len(res.matching) > len(SPLIT_M)
    assert res.kind in (MATCHING, CERTIFICATE)
    if res.kind == CERTIFICATE:
        assert res.certificate.check(H)


def test_augmentation_reroutes_through_cross_edge():
    hubs = (0, 3, 6)
    edges = set(SPLIT_M) | {(1, 4, 7)}
    edges |= {(h, a, b) for h in hubs for a, b in combinations(range(9, 18), 2)}
    H = Hypergraph3(18, edges)
    res = almost_perfect_matching(H, 0.75, 0.05, initial=SPLIT_M)
    assert res.augmentations >= 1 and (1, 4, 7) in res.matching.edges
    assert verify_matching(H, res.matching)


def test_pad_to_sparse_set():
    inst = covered_extremal(12, 4)
    start = mask_of(inst["Y"][:3])
    B = pad_to_sparse_set(inst.hypergraph, start, 8)
    assert B.bit_count() == 8 and set(bits_of(B)) == set(inst["Y"])
    assert pad_to_sparse_set(inst.hypergraph, (1 << 12) - 1, 8).bit_count() == 8


@given(st.integers(0, 10_000), st.sampled_from([0.1, 0.3, 0.6]), st.integers(9, 21))
def test_outcomes_are_valid(seed, p, n):
    H = random_3graph(n, p, seed=seed).hypergraph
    res = almost_perfect_matching(H, 0.1, 0.2, seed=seed)
    assert res.kind in (MATCHING, CERTIFICATE, INDETERMINATE)
    if res.matching is not None:
        assert verify_matching(H, res.matching)
        assert is_maximal(H, res.matching.edges)
    if res.kind == MATCHING:
        assert n - 3 * len(res.matching) <= 0.2 * n
    if res.kind == CERTIFICATE:
        assert res.certificate.check(H)


@pytest.mark.parametrize("seed", range(5))
def test_never_false_certificate_when_matching_is_large(seed):
    H = random_3graph(18, 0.4, seed=seed).hypergraph
    exact = max_matching3(H)
    assert 18 - 3 * len(exact) <= 0.2 * 18
    res = almost_perfect_matching(H, 0.1, 0.2, seed=seed)
    if res.kind == CERTIFICATE:
        assert res.certificate.check(H)
    else:
        assert res.kind == MATCHING
