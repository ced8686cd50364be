"""Index-vector statistics, transferrals, reachable 5-sets and odd copies.

Thresholds are absolute counts chosen by the caller; nothing here scales with
an asymptotic constant.
"""

from __future__ import annotations

import math
import time
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.sparse import coo_array
from scipy.sparse.csgraph import connected_components
from scipy.stats import binomtest

from . import _kernels as K
from .cycles import CycleCopy, count_copies_on, enumerate_copies, is_cycle_copy, iter_copies
from .hypergraph import Hypergraph3, HypergraphError, bits_of, mask_of
from .partition import IndexVector, Partition, add, index_vector, index_vector_of_mask, unit


# -- robust index vectors ---------------------------------------------------------


@dataclass
class RobustReport:
    """Per-index-vector counts of edges (arity 3) or cycle copies (arity 6).

    For a sampled arity-6 report ``counts`` holds rounded estimates,
    ``stderr`` their standard errors and ``wilson`` a 95% interval for the
    fraction of 6-sets carrying at least one copy with that vector.
    """

    arity: int
    counts: dict[IndexVector, int]
    threshold: int
    exhaustive: bool
    samples: int = 0
    stderr: dict[IndexVector, float] = field(default_factory=dict)
    wilson: dict[IndexVector, tuple[float, float]] = field(default_factory=dict)

    @property
    def robust(self) -> list[IndexVector]:
        return sorted(v for v, c in self.counts.items() if c >= self.threshold)

    def to_json(self) -> dict:
        out: dict = {
            "arity": self.arity,
            "threshold": self.threshold,
            "exhaustive": self.exhaustive,
            "counts": [{"vec": list(v), "count": int(c)} for v, c in sorted(self.counts.items())],
        }
        if not self.exhaustive:
            out["samples"] = self.samples
            out["stderr"] = [{"vec": list(v), "stderr": s} for v, s in sorted(self.stderr.items())]
            out["wilson"] = [{"vec": list(v), "lo": lo, "hi": hi} for v, (lo, hi) in sorted(self.wilson.items())]
        return out


def _decode(code: int, r: int) -> IndexVector:
    z = code % r
    y = (code // r) % r
    x = code // (r * r)
    vec = [0] * r
    for i in (x, y, z):
        vec[i] += 1
    return tuple(vec)


def edge_vector_counts(H: Hypergraph3, P: Partition) -> dict[IndexVector, int]:
    hist = K.index_histogram(H.edges, P.labels, P.r)
    return {_decode(int(c), P.r): int(hist[c]) for c in np.flatnonzero(hist)}


def robust_vectors(
    H: Hypergraph3,
    P: Partition,
    arity: int,
    threshold: int,
    *,
    enum_cap: int = 200_000,
    samples: int = 20_000,
    seed: int = 0,
) -> RobustReport:
    """Count index vectors of edges or of loose 6-cycle copies.

    Arity 3 is always exact.  Arity 6 enumerates up to ``enum_cap`` copies; past
    that it estimates from ``samples`` uniform 6-sets.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if H.n != P.n:
        raise HypergraphError("partition and hypergraph disagree on n")
    if arity == 3:
        return RobustReport(3, edge_vector_counts(H, P), threshold, True)
    if arity != 6:
        raise ValueError(f"arity must be 3 or 6, got {arity}")
    en = enumerate_copies(H, cap=enum_cap)
    if en.complete:
        counts: dict[IndexVector, int] = {}
        for c in en.copies:
            v = index_vector_of_mask(P, c.mask)
            counts[v] = counts.get(v, 0) + 1
        return RobustReport(6, counts, threshold, True)

    rng = np.random.Generator(np.random.PCG64(seed))
    total = math.comb(H.n, 6)
    per: dict[IndexVector, list[int]] = {}
    hits: dict[IndexVector, int] = {}
    for s in range(samples):
        S = rng.choice(H.n, size=6, replace=False)
        m = mask_of(int(x) for x in S)
        k = count_copies_on(H, m)
        if not k:
            continue
        v = index_vector_of_mask(P, m)
        per.setdefault(v, []).append(k)
        hits[v] = hits.get(v, 0) + 1
    counts = {}
    stderr = {}
    wilson = {}
    for v, ks in per.items():
        x = np.zeros(samples)
        x[: len(ks)] = ks
        counts[v] = int(round(total * x.mean()))
        stderr[v] = float(total * x.std(ddof=1) / math.sqrt(samples))
        ci = binomtest(hits[v], samples).proportion_ci(confidence_level=0.95, method="wilson")
        wilson[v] = (float(ci.low), float(ci.high))
    return RobustReport(6, counts, threshold, False, samples, stderr, wilson)


def find_transferral(report: RobustReport) -> tuple[IndexVector, int, int] | None:
    """Lexicographically first ``(v, i, j)`` with ``v`` and ``v + u_i - u_j`` robust.

    Part indices are 0-based.
    """
    if report.arity != 6:
        raise ValueError("transferrals are read from an arity-6 report")
    robust = report.robust
    rset = set(robust)
    for v in robust:
        r = len(v)
        for i in range(r):
            for j in range(r):
                if i == j or v[j] == 0:
                    continue
                w = list(v)
                w[i] += 1
                w[j] -= 1
                if tuple(w) in rset:
                    return v, i, j
    return None


def vector_completion(H: Hypergraph3, P: Partition, v2: IndexVector, threshold: int) -> int | None:
    """Smallest part index ``i`` whose edge vector ``v2 + u_i`` reaches ``threshold``."""
    if sum(v2) != 2 or len(v2) != P.r or min(v2) < 0:
        raise ValueError(f"{v2} is not a 2-vector over {P.r} parts")
    counts = edge_vector_counts(H, P)
    for i in range(P.r):
        if counts.get(add(v2, unit(P.r, i)), 0) >= threshold:
            return i
    return None


# -- reachable 5-sets ---------------------------------------------------------------


@dataclass
class ReachResult:
    count: int
    witnesses: list[tuple[tuple[int, ...], CycleCopy, CycleCopy]]
    exhaustive: bool


def iter_reachable_5sets(
    H: Hypergraph3,
    x: int,
    y: int,
    avoid: int = 0,
    rng: np.random.Generator | None = None,
) -> Iterator[tuple[int, CycleCopy, CycleCopy]]:
    """5-sets ``S`` with loose cycles on ``S + x`` and ``S + y``.

    A common link pair ``{a, b}`` of ``x`` and ``y`` is extended by a vertex
    ``u`` and by ``v`` in ``N(a, u)`` and ``w`` in ``N(b, u)``; the cycles have
    links ``a, b, u`` and inners ``x`` (or ``y``), ``w``, ``v``.  Sets may
    repeat; the caller deduplicates.
    """
    if x == y:
        raise HypergraphError("reachable sets need x != y")
    n = H.n
    free = ((1 << n) - 1) & ~avoid & ~(1 << x) & ~(1 << y)
    pairs = [(a, b) for a in bits_of(free) for b in bits_of(H.link(x, a) & H.link(y, a) & free) if a < b]
    if rng is not None:
        pairs = [pairs[i] for i in rng.permutation(len(pairs))]
    for a, b in pairs:
        rest = free & ~(1 << a) & ~(1 << b)
        us = bits_of(rest)
        if rng is not None:
            us = [us[i] for i in rng.permutation(len(us))]
        for u in us:
            r2 = rest & ~(1 << u)
            for v in bits_of(H.link(a, u) & r2):
                for w in bits_of(H.link(b, u) & r2 & ~(1 << v)):
                    S = (1 << a) | (1 << b) | (1 << u) | (1 << v) | (1 << w)
                    cx = CycleCopy((a, b, u), (x, w, v))
                    cy = CycleCopy((a, b, u), (y, w, v))
                    yield S, cx, cy


def reachable_5sets(
    H: Hypergraph3,
    x: int,
    y: int,
    cap: int = 1000,
    *,
    avoid: Iterable[int] = (),
    witness_limit: int = 8,
) -> ReachResult:
    """Count distinct reachable 5-sets for ``x`` and ``y`` (up to ``cap``)."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    seen: set[int] = set()
    wit: list[tuple[tuple[int, ...], CycleCopy, CycleCopy]] = []
    for S, cx, cy in iter_reachable_5sets(H, x, y, mask_of(avoid)):
        if S in seen:
            continue
        # both sides are re-checked against the edge set
        if not (is_cycle_copy(H, cx) and is_cycle_copy(H, cy)):
            raise AssertionError("reachable-set construction produced an invalid copy")
        seen.add(S)
        if len(wit) < witness_limit:
            wit.append((tuple(bits_of(S)), cx, cy))
        if len(seen) >= cap:
            return ReachResult(len(seen), wit, False)
    return ReachResult(len(seen), wit, True)


@dataclass
class ClosedPartition:
    partition: Partition
    min_witnesses: tuple[int, ...]
    degenerate: bool
    pair_counts: dict[tuple[int, int], int]


def closed_partition(H: Hypergraph3, pair_threshold: int = 1, cap: int | None = None) -> ClosedPartition:
    """Components of the graph of pairs with at least ``pair_threshold`` reachable 5-sets.

    More than three components are merged smallest-first.  ``min_witnesses``
    gives, per part, the smallest count over its pairs (capped at ``cap``,
    default ``pair_threshold``); ``degenerate`` is set when no pair qualifies.
    """
    if pair_threshold < 1:
        raise ValueError("pair_threshold must be >= 1")
    cap = pair_threshold if cap is None else max(cap, pair_threshold)
    n = H.n
    counts: dict[tuple[int, int], int] = {}
    rows: list[int] = []
    cols: list[int] = []
    for x, y in combinations(range(n), 2):
        c = reachable_5sets(H, x, y, cap, witness_limit=0).count
        counts[(x, y)] = c
        if c >= pair_threshold:
            rows.append(x)
            cols.append(y)
    degenerate = not rows
    graph = coo_array((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=False)
    comps = [sorted(np.flatnonzero(labels == c).tolist()) for c in range(ncomp)]
    while len(comps) > 3:
        comps.sort(key=lambda c: (len(c), c))
        comps = [sorted(comps[0] + comps[1]), *comps[2:]]
    comps.sort()
    P = Partition.of(n, comps)
    mins = []
    for part in P.parts:
        vals = [counts[(a, b)] for a, b in combinations(part, 2)]
        mins.append(min(vals) if vals else 0)
    return ClosedPartition(P, tuple(mins), degenerate, counts)


# -- odd-intersection copies --------------------------------------------------------


@dataclass
class OddCopyResult:
    copy: CycleCopy | None
    exhaustive: bool

    @property
    def found(self) -> bool:
        return self.copy is not None


def odd_intersection_copy(
    H: Hypergraph3,
    A: Iterable[int],
    budget_ms: float | None = None,
    *,
    avoid: Iterable[int] = (),
) -> OddCopyResult:
    """A copy meeting ``A`` in 3, 1 or 5 vertices (tried in that order)."""
    amask = mask_of(A)
    within = ((1 << H.n) - 1) & ~mask_of(avoid)
    inside = bits_of(amask & within)
    outside = bits_of(~amask & within)
    rest = bits_of(((1 << H.n) - 1) & ~within)
    P = Partition.of(H.n, [inside, outside + rest])
    deadline = None if budget_ms is None else time.perf_counter() + budget_ms / 1000.0
    for k in (3, 1, 5):
        for i, c in enumerate(iter_copies(H, within=within, target=(P, (k, 6 - k)))):
            return OddCopyResult(c, True)
        if deadline is not None and time.perf_counter() > deadline:
            return OddCopyResult(None, False)
    return OddCopyResult(None, True)


# -- good pairs -------------------------------------------------------------------


def good_pairs(H: Hypergraph3, P: Partition, vprime: IndexVector, k: int, gamma_abs: float) -> list[tuple[int, int]]:
    """Pairs ``S`` with ``i_P(S) = vprime`` and fewer than ``gamma_abs`` extensions into part ``k``."""
    if sum(vprime) != 2 or len(vprime) != P.r:
        raise ValueError(f"{vprime} is not a 2-vector over {P.r} parts")
    if not 0 <= k < P.r:
        raise ValueError(f"part index {k} out of range")
    mask = np.zeros(H.n, dtype=bool)
    mask[list(P.parts[k])] = True
    deg = K.pair_degree_into(H.edges, H.n, mask)
    out = []
    for a, b in combinations(range(H.n), 2):
        if index_vector(P, (a, b)) == tuple(vprime) and deg[a, b] < gamma_abs:
            out.append((a, b))
    return out


# -- graph triangle facts --------------------------------------------------------------


def triangle_count(adj: np.ndarray) -> int:
    return K.triangle_count(np.asarray(adj, dtype=bool))


@dataclass(frozen=True)
class TriangleCheck:
    applies: bool
    count: int
    bound: float

    @property
    def holds(self) -> bool:
        return not self.applies or self.count >= self.bound


def dense_triangle_check(adj: np.ndarray, gamma: float) -> TriangleCheck:
    """``e(G) >= (1 - gamma) C(v, 2)`` forces ``(1 - 3 gamma) C(v, 3)`` triangles."""
    v = adj.shape[0]
    e = int(np.triu(adj, 1).sum())
    return TriangleCheck(e >= (1 - gamma) * math.comb(v, 2), triangle_count(adj), (1 - 3 * gamma) * math.comb(v, 3))


def tripartite_triangle_check(adj: np.ndarray, parts: tuple[list[int], list[int], list[int]], gamma: float) -> TriangleCheck:
    """Pairwise ``(1 - gamma)``-dense tripartite graphs have ``(1 - 3 gamma) |V1||V2||V3|`` triangles."""
    ok = all(
        adj[np.ix_(parts[i], parts[j])].sum() >= (1 - gamma) * len(parts[i]) * len(parts[j])
        for i, j in ((0, 1), (0, 2), (1, 2))
    )
    a, b, c = parts
    count = int(sum(1 for x in a for y in b if adj[x, y] for z in c if adj[x, z] and adj[y, z]))
    return TriangleCheck(ok, count, (1 - 3 * gamma) * len(a) * len(b) * len(c))


def split_triangle_check(adj: np.ndarray, V1: list[int], V2: list[int], gamma: float, gamma2: float) -> TriangleCheck:
    """Triangles with two vertices in ``V1`` and one in ``V2``.

    Hypotheses: ``|V1| >= gamma2 / gamma``, ``e(V1) >= (1 - gamma) C(|V1|, 2)``
    and ``e(V1, V2) >= gamma2 |V1||V2|``; bound ``(gamma2^2 - 2 gamma) C(|V1|, 2) |V2|``.
    """
    n1, n2 = len(V1), len(V2)
    e1 = int(np.triu(adj[np.ix_(V1, V1)], 1).sum())
    e12 = int(adj[np.ix_(V1, V2)].sum())
    ok = n1 >= gamma2 / gamma and e1 >= (1 - gamma) * math.comb(n1, 2) and e12 >= gamma2 * n1 * n2
    count = int(sum(1 for x, y in combinations(V1, 2) if adj[x, y] for z in V2 if adj[x, z] and adj[y, z]))
    return TriangleCheck(ok, count, (gamma2**2 - 2 * gamma) * math.comb(n1, 2) * n2)
