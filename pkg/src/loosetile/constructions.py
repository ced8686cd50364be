"""Instance generators: the space barrier, near-extremal and ideal-case families,
and binomial random 3-graphs.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``; a given
parameter set plus seed reproduces the same edge set on every platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from .hypergraph import Hypergraph3, HypergraphError, all_triples


def rng_for(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class LabeledInstance:
    hypergraph: Hypergraph3
    designated_sets: dict[str, tuple[int, ...]] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.hypergraph.n

    def __getitem__(self, name: str) -> tuple[int, ...]:
        return self.designated_sets[name]

    def sidecar(self) -> dict:
        return {
            "designated_sets": {k: list(v) for k, v in self.designated_sets.items()},
            "params": self.params,
        }

    def sidecar_json(self, indent: int | None = None) -> str:
        return json.dumps(self.sidecar(), indent=indent, sort_keys=True)


def complete(n: int) -> LabeledInstance:
    return LabeledInstance(Hypergraph3.complete(n), {}, {"family": "complete", "n": n})


def empty(n: int) -> LabeledInstance:
    return LabeledInstance(Hypergraph3.empty(n), {}, {"family": "empty", "n": n})


def _meeting(n: int, X: np.ndarray) -> np.ndarray:
    tri = all_triples(n)
    inx = np.zeros(n, dtype=bool)
    inx[X] = True
    return tri[inx[tri].any(axis=1)]


def space_barrier(n: int) -> LabeledInstance:
    """All triples meeting ``X = {0, ..., n/3 - 2}``: codegree ``n/3 - 1``, no factor."""
    if n < 12 or n % 6:
        raise HypergraphError(f"space_barrier needs n >= 12 with n % 6 == 0, got {n}")
    k = n // 3 - 1
    X = np.arange(k)
    H = Hypergraph3(n, _meeting(n, X))
    return LabeledInstance(
        H,
        {"X": tuple(range(k)), "Y": tuple(range(k, n))},
        {"family": "space-barrier", "n": n},
    )


def covered_extremal(n: int, x_size: int | None = None, noise: float = 0.0, seed: int = 0) -> LabeledInstance:
    """All triples meeting ``X = {0, ..., x_size - 1}`` plus random triples inside ``Y``.

    Noise only adds edges, so the codegree stays at least ``x_size``.
    """
    if n % 6:
        raise HypergraphError(f"covered_extremal needs n % 6 == 0, got {n}")
    if x_size is None:
        x_size = n // 3
    if x_size * 3 < n:
        raise HypergraphError(f"x_size must be at least n/3 = {n // 3}, got {x_size}")
    if x_size > n:
        raise HypergraphError("x_size exceeds n")
    if not 0.0 <= noise <= 1.0:
        raise HypergraphError(f"noise must lie in [0, 1], got {noise}")
    rng = rng_for(seed)
    base = _meeting(n, np.arange(x_size))
    ny = n - x_size
    inside = all_triples(ny) + x_size
    extra = inside[rng.random(len(inside)) < noise] if noise > 0 else inside[:0]
    H = Hypergraph3(n, np.concatenate([base, extra]))
    return LabeledInstance(
        H,
        {"X": tuple(range(x_size)), "Y": tuple(range(x_size, n))},
        {"family": "covered-extremal", "n": n, "x_size": x_size, "noise": noise, "seed": seed},
    )


@dataclass(frozen=True)
class IdealBounds:
    """Worst complement degrees of an ideal-case instance, normalised."""

    vertex: float  # max over x in X of missing Z-pairs / C(|Z|, 2)
    pair: float  # max over good Z-pairs of missing X-extensions / |X|
    bad_degree: float  # max number of bad partners of a Z-vertex / |Z|

    @property
    def worst(self) -> float:
        return max(self.vertex, self.pair, self.bad_degree)


def ideal_bounds(H: Hypergraph3, X: tuple[int, ...], Z: tuple[int, ...], rho: float) -> IdealBounds:
    """Realized bounds, computed by direct enumeration over the edge set.

    A Z-pair is good when it misses at most ``rho * |X|`` X-extensions.
    """
    E = H.edge_set
    nz2 = math.comb(len(Z), 2)
    vmiss = max(
        (sum(tuple(sorted((x, u, v))) not in E for u, v in combinations(Z, 2)) for x in X),
        default=0,
    )
    bad: dict[int, int] = {z: 0 for z in Z}
    worst_good = 0
    for u, v in combinations(Z, 2):
        miss = sum(tuple(sorted((x, u, v))) not in E for x in X)
        if miss <= rho * len(X):
            worst_good = max(worst_good, miss)
        else:
            bad[u] += 1
            bad[v] += 1
    return IdealBounds(
        vmiss / nz2 if nz2 else 0.0,
        worst_good / len(X) if X else 0.0,
        max(bad.values(), default=0) / len(Z) if Z else 0.0,
    )


def ideal_case_instance(n: int, rho: float, seed: int = 0, max_attempts: int = 16) -> LabeledInstance:
    """``X`` of size ``n/3`` and ``Z`` of size ``2n/3`` with controlled missing edges.

    Starting from every triple meeting ``X``, a random graph of bad ``Z``-pairs
    with maximum degree ``floor(rho |Z|)`` is drawn and each bad pair loses
    every ``X``-extension with probability 1/2.  Each good pair loses at most
    ``floor(rho |X|)`` extensions.  Deletions charged to a vertex ``x`` stop at
    ``rho * C(|Z|, 2)``.  The result is checked by enumeration and retried
    with a derived seed if a bound fails.
    """
    if n % 6 or n < 6:
        raise HypergraphError(f"ideal_case_instance needs n % 6 == 0, got {n}")
    if not 0.0 <= rho < 1.0:
        raise HypergraphError(f"rho must lie in [0, 1), got {rho}")
    k = n // 3
    X = tuple(range(k))
    Z = tuple(range(k, n))
    nz = len(Z)
    bad_cap = math.floor(rho * nz)
    good_cap = math.floor(rho * k)
    x_cap = math.floor(rho * math.comb(nz, 2))
    seeds = np.random.SeedSequence(seed).spawn(max_attempts)
    for attempt in range(max_attempts):
        rng = np.random.Generator(np.random.PCG64(seeds[attempt]))
        removed: set[tuple[int, int, int]] = set()
        charge = dict.fromkeys(X, 0)
        bad_deg = dict.fromkeys(Z, 0)
        pairs = list(combinations(Z, 2))
        order = rng.permutation(len(pairs))
        bad: set[tuple[int, int]] = set()
        if bad_cap:
            for idx in order[: len(pairs) // 4]:
                u, v = pairs[idx]
                if bad_deg[u] < bad_cap and bad_deg[v] < bad_cap:
                    bad.add((u, v))
                    bad_deg[u] += 1
                    bad_deg[v] += 1
        for idx in order:
            u, v = pairs[idx]
            if (u, v) in bad:
                xs = [x for x in X if rng.random() < 0.5]
            elif good_cap:
                xs = list(rng.choice(k, size=int(rng.integers(0, good_cap + 1)), replace=False))
            else:
                continue
            for x in xs:
                if charge[x] < x_cap:
                    charge[x] += 1
                    removed.add((int(x), u, v))
        tri = _meeting(n, np.arange(k))
        if removed:
            keep = np.array([tuple(t) not in removed for t in tri.tolist()], dtype=bool)
            tri = tri[keep]
        H = Hypergraph3(n, tri)
        b = ideal_bounds(H, X, Z, rho)
        if b.vertex <= rho and b.pair <= rho and b.bad_degree <= rho:
            return LabeledInstance(
                H,
                {"X": X, "Z": Z},
                {
                    "family": "ideal-case",
                    "n": n,
                    "rho": rho,
                    "seed": seed,
                    "attempt": attempt,
                    "realized": {"vertex": b.vertex, "pair": b.pair, "bad_degree": b.bad_degree},
                },
            )
    raise HypergraphError(f"ideal_case_instance: bounds violated after {max_attempts} attempts")


def random_3graph(n: int, p: float, seed: int = 0) -> LabeledInstance:
    """Each of the ``C(n, 3)`` triples independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise HypergraphError(f"p must lie in [0, 1], got {p}")
    rng = rng_for(seed)
    tri = all_triples(n)
    keep = rng.random(len(tri)) < p
    return LabeledInstance(Hypergraph3(n, tri[keep]), {}, {"family": "random", "n": n, "p": p, "seed": seed})


def disjoint_union(*graphs: Hypergraph3) -> LabeledInstance:
    """Vertex-disjoint union; part ``i`` becomes the designated set ``"P{i}"``."""
    edges = []
    sets: dict[str, tuple[int, ...]] = {}
    off = 0
    for i, G in enumerate(graphs):
        edges.append(G.edges + off)
        sets[f"P{i}"] = tuple(range(off, off + G.n))
        off += G.n
    arr = np.concatenate(edges) if edges else np.zeros((0, 3), dtype=np.int64)
    return LabeledInstance(Hypergraph3(off, arr), sets, {"family": "disjoint-union", "sizes": [G.n for G in graphs]})


GENERATORS = {
    "complete": complete,
    "empty": empty,
    "space-barrier": space_barrier,
    "covered-extremal": covered_extremal,
    "ideal-case": ideal_case_instance,
    "random": random_3graph,
}
