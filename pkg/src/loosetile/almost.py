"""Almost-perfect matchings in 3-graphs by augmentation, with an extremal fallback.

The loop keeps a maximal matching ``M`` with uncovered set ``U``.  Pairs
``A_1 .. A_t`` of high codegree are picked inside ``U``; ``D`` collects the
covered vertices extending at least three of them.  Either some matching
edge holds two ``D``-vertices (split it into two edges through the ``A_i``),
or an edge ``e0`` inside ``V_D \\ D`` lets the touched matching edges be
rerouted.  Both steps grow ``M`` by one.  When neither applies,
``V_D \\ D`` spans no edge and, padded to ``floor(2n/3)`` vertices, becomes a
sparse-set certificate.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph3, Triple, bits_of, mask_of
from .search import Matching3

MATCHING = "matching"
CERTIFICATE = "certificate"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ExtremalCertificate:
    B: tuple[int, ...]
    eB: int
    bound: float

    def check(self, H: Hypergraph3) -> bool:
        return len(self.B) == (2 * H.n) // 3 and H.edge_counts([self.B]) == self.eB and self.eB <= self.bound

    def to_json(self) -> dict:
        return {"B": list(self.B), "eB": self.eB, "bound": self.bound}


@dataclass
class AlmostResult:
    kind: str
    matching: Matching3 | None = None
    certificate: ExtremalCertificate | None = None
    augmentations: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"result": self.kind, "augmentations": self.augmentations, "notes": self.notes}
        if self.matching is not None:
            out["matching"] = self.matching.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def greedy_maximal_matching(H: Hypergraph3, rng: np.random.Generator) -> list[Triple]:
    """Edges in ascending degree-sum order (random tie-breaks), kept when disjoint."""
    if H.m == 0:
        return []
    deg = H.degrees
    key = deg[H.edges].sum(axis=1)
    order = np.lexsort((rng.random(H.m), key))
    used = 0
    out: list[Triple] = []
    for e in H.edges[order].tolist():
        em = mask_of(e)
        if not em & used:
            used |= em
            out.append(tuple(e))
    return out


def extend_to_maximal(H: Hypergraph3, M: list[Triple]) -> list[Triple]:
    """Add edges lying wholly in the uncovered set until none is left."""
    used = mask_of(v for e in M for v in e)
    out = list(M)
    for e in H.edges.tolist():
        em = mask_of(e)
        if not em & used:
            used |= em
            out.append(tuple(e))
    return out


def pad_to_sparse_set(H: Hypergraph3, start: int, size: int) -> int:
    """Grow (or trim) the bitset ``start`` to ``size`` vertices, adding edges sparingly."""
    cur = start
    if cur.bit_count() > size:
        return mask_of(bits_of(cur)[:size])
    members = bits_of(cur)
    while cur.bit_count() < size:
        best, best_cost = -1, None
        for v in bits_of(((1 << H.n) - 1) & ~cur):
            cost = sum((H.link(v, u) & cur).bit_count() for u in members)
            if best_cost is None or cost < best_cost:
                best, best_cost = v, cost
                if cost == 0:
                    break
        cur |= 1 << best
        members.append(best)
    return cur


def almost_perfect_matching(
    H: Hypergraph3,
    gamma: float,
    alpha: float,
    time_budget_ms: float | None = None,
    seed: int = 0,
    initial: list[Triple] | None = None,
) -> AlmostResult:
    """A maximal matching missing at most ``alpha n`` vertices, or a certificate
    ``B`` of size ``floor(2n/3)`` with ``e(B) <= gamma n^3``, or indeterminate.

    ``initial`` replaces the greedy starting matching; it must be maximal.
    """
    if not (0 < gamma < 1 and 0 < alpha < 1):
        raise ValueError("gamma and alpha must lie in (0, 1)")
    n = H.n
    rng = np.random.Generator(np.random.PCG64(seed))
    deadline = None if time_budget_ms is None else time.perf_counter() + time_budget_ms / 1000.0
    M = greedy_maximal_matching(H, rng) if initial is None else [tuple(sorted(e)) for e in initial]
    t = math.ceil(3 / gamma)
    low = n / 3 - gamma * n
    bsize = (2 * n) // 3
    bound = gamma * n**3
    aug = 0
    notes: list[str] = []

    def certificate_from(mask: int, why: str) -> AlmostResult:
        B = pad_to_sparse_set(H, mask, bsize)
        verts = tuple(bits_of(B))
        eB = H.edge_counts([verts])
        mres = Matching3(n, sorted(M))
        if eB <= bound:
            return AlmostResult(CERTIFICATE, mres, ExtremalCertificate(verts, eB, bound), aug, [*notes, why])
        return AlmostResult(INDETERMINATE, mres, None, aug, [*notes, why, f"padded set spans {eB} > {bound:g} edges"])

    while True:
        if deadline is not None and time.perf_counter() > deadline:
            return AlmostResult(INDETERMINATE, Matching3(n, sorted(M)), None, aug, [*notes, "budget"])
        covered = mask_of(v for e in M for v in e)
        U = ((1 << n) - 1) & ~covered
        if U.bit_count() <= alpha * n:
            return AlmostResult(MATCHING, Matching3(n, sorted(M)), None, aug, notes)

        # pairs of high codegree inside U, greedily disjoint
        uv = bits_of(U)
        cod = H.codegrees
        cand = [(a, b) for i, a in enumerate(uv) for b in uv[i + 1 :] if cod[a, b] >= low]
        ties = rng.random(len(cand))
        cand = [cand[i] for i in sorted(range(len(cand)), key=lambda i: (-int(cod[cand[i]]), ties[i]))]
        A: list[tuple[int, int]] = []
        taken = 0
        for a, b in cand:
            if not (taken >> a & 1 or taken >> b & 1):
                A.append((a, b))
                taken |= (1 << a) | (1 << b)
                if len(A) == t:
                    break
        if len(A) < t:
            return certificate_from(U, f"only {len(A)} of {t} high-codegree pairs in the uncovered set")

        ext = {v: [i for i, (a, b) in enumerate(A) if H.link(a, b) >> v & 1] for v in bits_of(covered)}
        D = {v for v, xs in ext.items() if len(xs) >= 3}

        def pick(vs: list[int]) -> list[int] | None:
            chosen: list[int] = []
            for v in vs:
                free = [i for i in ext[v] if i not in chosen]
                if not free:
                    return None
                chosen.append(free[0])
            return chosen

        grown = False
        for k, e in enumerate(M):
            hit = [v for v in e if v in D]
            if len(hit) >= 2:
                idx = pick(hit[:2])
                if idx is None:  # pragma: no cover - three options each make this impossible
                    continue
                new = [tuple(sorted((v, *A[i]))) for v, i in zip(hit[:2], idx)]
                M = M[:k] + M[k + 1 :] + new
                grown = True
                break
        if not grown:
            VD = [e for e in M if any(v in D for v in e)]
            W = mask_of(v for e in VD for v in e if v not in D)
            e0 = None
            for a in bits_of(W):
                for b in bits_of(W & ~((2 << a) - 1)):
                    cs = H.link(a, b) & W & ~((2 << b) - 1)
                    if cs:
                        e0 = (a, b, bits_of(cs)[0])
                        break
                if e0:
                    break
            if e0 is None:
                return certificate_from(W, "no edge inside V_D \\ D")
            touched = [e for e in VD if set(e) & set(e0)]
            hubs = [next(v for v in e if v in D) for e in touched]
            idx = pick(hubs)
            if idx is None:  # pragma: no cover
                return AlmostResult(INDETERMINATE, Matching3(n, sorted(M)), None, aug, [*notes, "reroute failed"])
            M = [e for e in M if e not in touched] + [e0] + [tuple(sorted((v, *A[i]))) for v, i in zip(hubs, idx)]
        M = extend_to_maximal(H, M)
        aug += 1
