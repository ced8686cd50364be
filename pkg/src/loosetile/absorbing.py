"""Absorbing sets: m-sets whose induced subgraph has a factor both with and
without a given 6-set, and a disjoint family of them that can swallow any
small leftover.

A 6-set ``S`` whose index vector has even coordinates is absorbed by
``A = F + T_1 + ... + T_6`` where ``F`` is a copy with the same index vector
as ``S``, its vertex ``x_i`` is paired with a same-part vertex ``y_i`` of
``S``, and ``T_i`` is a reachable 5-set for ``x_i, y_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cycles import CycleCopy, iter_copies
from .hypergraph import Hypergraph3, HypergraphError, bits_of, mask_of
from .lattice import iter_reachable_5sets, odd_intersection_copy
from .partition import IndexVector, Partition, add, even_6_vectors, index_vector, index_vector_of_mask
from .search import Tiling, find_factor, verify_tiling


@dataclass
class AbsorbConfig:
    t: int = 1
    m: int | None = None
    p: float | None = None  # None: expected family size gamma1 * n / 2
    gamma1: float = 0.1
    alpha: float | None = None  # None: gamma1 ** 2
    seed: int = 0
    max_retries: int = 8
    max_samples: int = 64
    search_budget_ms: float = 5_000

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.m is None:
            self.m = 36 * self.t
        if self.m != 36 * self.t:
            raise ValueError(f"m must equal 36 t = {36 * self.t}")
        if self.alpha is None:
            self.alpha = self.gamma1**2
        if not math.isclose(self.alpha, self.gamma1**2):
            raise ValueError("alpha must equal gamma1 ** 2")


@dataclass
class AbsorbingSet:
    vertices: tuple[int, ...]
    factor: Tiling  # of H[A]
    classes: list[IndexVector] = field(default_factory=list)
    target: tuple[int, ...] | None = None  # the 6-set it was built for, if any
    factor_with_target: Tiling | None = None

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)

    def to_json(self) -> dict:
        out = {
            "vertices": list(self.vertices),
            "classes": [list(c) for c in self.classes],
            "factor": self.factor.to_json(),
        }
        if self.target is not None:
            out["target"] = list(self.target)
            out["factor_with_target"] = self.factor_with_target.to_json()
        return out


def _covers_exactly(T: Tiling, mask: int) -> bool:
    return mask_of(T.covered) == mask and len(T.covered) == 6 * len(T.copies)


def absorbing_msets_for(
    H: Hypergraph3,
    P: Partition,
    S,
    t: int = 1,
    cap: int = 1,
    seed: int = 0,
    notes: list[str] | None = None,
) -> list[AbsorbingSet]:
    """Up to ``cap`` absorbing ``36t``-sets for the 6-set ``S``, each with both factors checked.

    For ``t > 1`` every reachable 5-set is padded with ``t - 1`` further
    disjoint copies so the set reaches ``36t`` vertices.
    """
    S = tuple(sorted(set(S)))
    if len(S) != 6:
        raise HypergraphError("S must have 6 vertices")
    vec = index_vector(P, S)
    if any(c % 2 for c in vec):
        raise HypergraphError(f"index vector {vec} of S has an odd coordinate")
    m = 36 * t
    notes = notes if notes is not None else []
    if H.n < m + 6:
        notes.append("insufficient vertices")
        return []
    rng = np.random.Generator(np.random.PCG64(seed))
    smask = mask_of(S)
    full = (1 << H.n) - 1
    out: list[AbsorbingSet] = []
    lab = P.labels
    for F in iter_copies(H, within=full & ~smask, target=(P, vec)):
        xs = sorted(F.vertices, key=lambda v: (lab[v], v))
        ys = sorted(S, key=lambda v: (lab[v], v))
        used = smask | F.mask
        alone: list[CycleCopy] = []
        withS: list[CycleCopy] = [F]
        ok = True
        for x, y in zip(xs, ys):
            hit = next(iter_reachable_5sets(H, x, y, avoid=used, rng=rng), None)
            if hit is None:
                ok = False
                break
            T, cx, cy = hit
            used |= T
            alone.append(cx)
            withS.append(cy)
            for _ in range(t - 1):
                pad = next(iter_copies(H, within=full & ~used), None)
                if pad is None:
                    ok = False
                    break
                used |= pad.mask
                alone.append(pad)
                withS.append(pad)
            if not ok:
                break
        if not ok:
            continue
        amask = used & ~smask
        fa, fs = Tiling(H.n, alone), Tiling(H.n, withS)
        if not (verify_tiling(H, fa) and verify_tiling(H, fs) and _covers_exactly(fa, amask) and _covers_exactly(fs, used)):
            raise AssertionError("absorbing construction produced an invalid factor")
        out.append(AbsorbingSet(tuple(bits_of(amask)), fa, [vec], S, fs))
        if len(out) >= cap:
            break
    if not out:
        notes.append("no copy with a matching index vector extends")
    return out


# -- families ---------------------------------------------------------------------


@dataclass
class FamilyStats:
    sampled: int
    expected_size: float
    intersecting_pairs: int
    expected_intersecting: float
    kept: int
    non_absorbing: int
    retries: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


@dataclass
class AbsorbingFamily:
    n: int
    partition: Partition
    msets: list[AbsorbingSet]
    exceptional: list[CycleCopy]
    stats: FamilyStats
    config: AbsorbConfig

    @property
    def W(self) -> frozenset[int]:
        vs = {v for a in self.msets for v in a.vertices}
        vs.update(v for c in self.exceptional for v in c.vertices)
        return frozenset(vs)

    @property
    def factor(self) -> Tiling:
        return Tiling(self.n, [c for a in self.msets for c in a.factor.copies] + list(self.exceptional))

    @property
    def capacity(self) -> int:
        return len(self.msets)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.config.m,
            "msets": [a.to_json() for a in self.msets],
            "exceptional": [c.to_json() for c in self.exceptional],
            "W": sorted(self.W),
            "stats": self.stats.to_json(),
        }


class AbsorbError(HypergraphError):
    pass


def exceptional_copies(H: Hypergraph3, P: Partition, budget_ms: float | None = None) -> list[CycleCopy]:
    """Odd-intersection copies fixing parity: none for one part, one for two, two for three."""
    if P.r == 1:
        return []
    if P.r == 2:
        res = odd_intersection_copy(H, P.parts[0], budget_ms)
        if res.copy is None:
            raise AbsorbError("missing F_0: no copy meets the parts in odd sizes")
        return [res.copy]
    if P.r != 3:
        raise AbsorbError(f"partitions with {P.r} parts are not supported")
    f1 = odd_intersection_copy(H, P.parts[0], budget_ms).copy
    if f1 is None:
        raise AbsorbError("missing F_1: no copy meets V_1 in an odd number of vertices")
    odd = [k for k in (1, 2) if index_vector_of_mask(P, f1.mask)[k] % 2]
    i = odd[0]
    j = 3 - i
    f2 = odd_intersection_copy(H, P.parts[j], budget_ms, avoid=f1.vertices).copy
    if f2 is None:
        raise AbsorbError("missing F_2: no copy avoiding F_1 meets the third part oddly")
    return [f1, f2]


def parity_choice(u_vec: IndexVector, exc_vecs: list[IndexVector]) -> tuple[int, ...] | None:
    """Smallest subset of exceptional copies making every coordinate of the union even."""
    k = len(exc_vecs)
    for size in range(k + 1):
        for combo in combinations(range(k), size):
            v = u_vec
            for c in combo:
                v = add(v, exc_vecs[c])
            if all(x % 2 == 0 for x in v):
                return combo
    return None


def _representative(P: Partition, vec: IndexVector, avoid: int, rng: np.random.Generator) -> tuple[int, ...] | None:
    picks: list[int] = []
    for i, k in enumerate(vec):
        pool = [v for v in P.parts[i] if not avoid >> v & 1]
        if len(pool) < k:
            return None
        picks.extend(int(v) for v in rng.choice(pool, size=k, replace=False))
    return tuple(sorted(picks))


def build_absorbing_family(
    H: Hypergraph3,
    P: Partition,
    cfg: AbsorbConfig | None = None,
) -> AbsorbingFamily:
    """Sample m-sets, keep a disjoint absorbing subfamily and attach parity-fixing copies.

    The independent selection of every m-set with probability ``p`` is
    simulated by drawing ``N = round(p C(n, m))`` uniform m-sets (at most
    ``max_samples``); the realized size and number of intersecting pairs of
    that draw are checked against twice their expectations.  Disjoint random
    m-sets are vanishingly rare unless ``n`` is far above ``m^2``, so the
    kept family is built from ``N`` further draws, each uniform over the
    vertices not yet taken.  It must hold
    ``max(1, floor(alpha n / 6)) + |exceptional|`` sets, otherwise
    everything is redrawn with a fresh seed.
    """
    cfg = cfg or AbsorbConfig()
    n, m = H.n, cfg.m
    if n < 3 * m:
        raise HypergraphError(f"need n >= 3m = {3 * m}, got n = {n}")
    total = math.comb(n, m)
    p = cfg.p if cfg.p is not None else cfg.gamma1 * n / (2 * total)
    expected = p * total
    N = min(max(1, round(expected)), cfg.max_samples)
    exc = exceptional_copies(H, P, cfg.search_budget_ms)
    emask = mask_of(v for c in exc for v in c.vertices)
    demand = max(1, math.floor(cfg.alpha * n / 6)) + len(exc)
    disjoint_prob = math.comb(n - m, m) / total
    e_pairs = math.comb(N, 2) * (1 - disjoint_prob)
    classes = even_6_vectors(P.r)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.max_retries)
    last = None
    for retry in range(cfg.max_retries):
        rng = np.random.Generator(np.random.PCG64(seeds[retry]))
        drawn = [mask_of(int(v) for v in rng.choice(n, size=m, replace=False)) for _ in range(N)]
        inter = sum(1 for a, b in combinations(drawn, 2) if a & b)
        kept: list[AbsorbingSet] = []
        taken = emask
        bad = 0
        for _ in range(N):
            pool = bits_of(((1 << n) - 1) & ~taken)
            if len(pool) < m:
                break
            a = mask_of(int(v) for v in rng.choice(pool, size=m, replace=False))
            fa = find_factor(H, cfg.search_budget_ms, within=a)
            if not fa.found:
                bad += 1
                continue
            ok_classes = []
            for vec in classes:
                S = _representative(P, vec, a, rng)
                if S is None:
                    continue
                fs = find_factor(H, cfg.search_budget_ms, within=a | mask_of(S))
                if fs.found:
                    ok_classes.append(vec)
            if not ok_classes:
                bad += 1
                continue
            kept.append(AbsorbingSet(tuple(bits_of(a)), fa.tiling, ok_classes))
            taken |= a
        last = FamilyStats(N, expected, inter, e_pairs, len(kept), bad, retry)
        size_ok = N <= max(2 * expected, 1)
        pairs_ok = inter <= max(2 * e_pairs, 0)
        if size_ok and pairs_ok and len(kept) >= demand:
            fam = AbsorbingFamily(n, P, kept, exc, last, cfg)
            if not verify_tiling(H, fam.factor):  # pragma: no cover
                raise AssertionError("family factor failed verification")
            return fam
    raise AbsorbError(f"retries exhausted; last realized statistics {last}")


def absorb(H: Hypergraph3, fam: AbsorbingFamily, U, budget_ms: float | None = 10_000) -> Tiling:
    """Perfect tiling of ``W + U``: fix parity with exceptional copies, split the
    rest into even 6-sets and hand each to an unused absorbing m-set."""
    U = tuple(sorted(set(U)))
    W = fam.W
    if set(U) & W:
        raise AbsorbError("U must avoid the family's vertices")
    if len(U) % 6:
        raise AbsorbError(f"|U| = {len(U)} is not a multiple of 6")
    P = fam.partition
    if not U:
        return fam.factor
    exc_vecs = [index_vector(P, c.vertices) for c in fam.exceptional]
    choice = parity_choice(index_vector(P, U), exc_vecs)
    if choice is None:
        raise AbsorbError("no subset of exceptional copies makes the leftover even")
    left = list(U) + [v for k in choice for v in fam.exceptional[k].vertices]
    n_sets = len(left) // 6
    if n_sets > fam.capacity:
        raise AbsorbError(f"capacity exceeded: {n_sets} six-sets for {fam.capacity} absorbing sets")
    pairs: list[tuple[int, int]] = []
    for part in range(P.r):
        vs = sorted(v for v in left if P.part_of(v) == part)
        pairs.extend(zip(vs[0::2], vs[1::2]))
    six = [tuple(sorted(a for pr in pairs[3 * k : 3 * k + 3] for a in pr)) for k in range(n_sets)]
    free = list(range(len(fam.msets)))
    copies: list[CycleCopy] = []
    for S in six:
        vec = index_vector(P, S)
        order = sorted(free, key=lambda i: vec not in fam.msets[i].classes)
        for i in order:
            r = find_factor(H, budget_ms, within=fam.msets[i].mask | mask_of(S))
            if r.found:
                copies.extend(r.tiling.copies)
                free.remove(i)
                break
        else:
            raise AbsorbError(f"no absorbing set accepts {S}")
    for i in free:
        copies.extend(fam.msets[i].factor.copies)
    copies.extend(c for k, c in enumerate(fam.exceptional) if k not in choice)
    T = Tiling(H.n, copies)
    target = mask_of(W) | mask_of(U)
    if not (verify_tiling(H, T) and mask_of(T.covered) == target):  # pragma: no cover
        raise AssertionError("absorb produced an invalid tiling")
    return T
