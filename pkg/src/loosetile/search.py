"""Exact and budgeted search for loose 6-cycle factors, tilings and matchings.

All searches work on Python-int vertex bitsets.  Two cheap certificates
drive the pruning:

* every copy of the loose 6-cycle contains at least two vertices outside any
  independent set ``I`` of the host (a cycle has independence number 4), so
  a remainder ``R`` can hold at most ``|R \\ I| // 2`` disjoint copies;
* every edge meets ``V \\ I`` in at least one vertex.

``I`` is computed once per search by a greedy pass.  On the space barrier
it is exactly the large side, which makes the non-existence proof immediate.
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .cycles import CycleCopy, spanning_copy
from .hypergraph import Hypergraph3, Triple, bits_of, mask_of

SOME = "some"
NONE = "none"
INDETERMINATE = "indeterminate"


class BudgetExceeded(Exception):
    pass


class Budget:
    """Wall-clock (milliseconds) and node-count limits; ``None`` means unlimited."""

    def __init__(self, time_ms: float | None = None, max_nodes: int | None = None) -> None:
        self.deadline = None if time_ms is None else time.perf_counter() + time_ms / 1000.0
        self.max_nodes = max_nodes
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded
        if self.deadline is not None and (self.nodes & 63) == 0 and time.perf_counter() > self.deadline:
            raise BudgetExceeded


@dataclass
class Tiling:
    n: int
    copies: list[CycleCopy] = field(default_factory=list)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for c in self.copies for v in c.vertices)

    @property
    def perfect(self) -> bool:
        return len(self.covered) == self.n and len(self.copies) * 6 == self.n

    def __len__(self) -> int:
        return len(self.copies)

    def to_json(self) -> dict:
        return {"n": self.n, "perfect": self.perfect, "copies": [c.to_json() for c in self.copies]}

    @classmethod
    def from_json(cls, data: dict) -> Tiling:
        return cls(int(data["n"]), [CycleCopy.from_json(c) for c in data["copies"]])


@dataclass
class FactorResult:
    """Outcome of a factor or t-copies search.

    ``status`` is ``"some"``, ``"none"`` or ``"indeterminate"``.  ``exhaustive``
    is set when a ``"none"`` answer is a proof.
    """

    status: str
    tiling: Tiling | None
    exhaustive: bool
    nodes: int
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status == SOME


@dataclass
class TilingResult:
    tiling: Tiling
    maximum: bool
    upper_bound: int
    nodes: int


@dataclass
class Matching3:
    n: int
    edges: list[Triple]
    maximum: bool = False

    def __len__(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "maximum": self.maximum}


# -- shared search helpers -----------------------------------------------------------


def independent_set(H: Hypergraph3, within: int) -> int:
    """A maximal set inside ``within`` spanning no edge (greedy, low degree first)."""
    best = 0
    verts = bits_of(within)
    deg = H.degrees
    orders = [sorted(verts, key=lambda v: (int(deg[v]), v)), verts, verts[::-1]]
    for order in orders:
        chosen = 0
        members: list[int] = []
        for v in order:
            if all(not (H.link(u, v) & chosen) for u in members):
                chosen |= 1 << v
                members.append(v)
        if chosen.bit_count() > best.bit_count():
            best = chosen
    return best


class _CopySource:
    """Lazily yields vertex 6-sets through a vertex that span a copy."""

    def __init__(self, H: Hypergraph3, indep: int) -> None:
        self.H = H
        self.indep = indep
        self.span: dict[int, CycleCopy | None] = {}

    def ordered(self, mask: int) -> list[int]:
        # independent-set vertices first: the others are the scarce resource
        return bits_of(mask & self.indep) + bits_of(mask & ~self.indep)

    def copy_on(self, mask: int) -> CycleCopy | None:
        if mask not in self.span:
            self.span[mask] = spanning_copy(self.H, mask)
        return self.span[mask]

    def through(self, v: int, R: int) -> Iterator[tuple[int, CycleCopy]]:
        H = self.H
        seen: set[int] = set()
        others = self.ordered(R & ~(1 << v))
        pos = {u: i for i, u in enumerate(others)}
        # v as a link vertex
        for i, l2 in enumerate(others):
            m12 = H.link(v, l2) & R
            if not m12:
                continue
            for l3 in others[i + 1 :]:
                m23 = H.link(l2, l3) & R
                m31 = H.link(l3, v) & R
                if not (m23 and m31):
                    continue
                used = (1 << v) | (1 << l2) | (1 << l3)
                for a in self.ordered(m12 & ~used):
                    for b in self.ordered(m23 & ~used & ~(1 << a)):
                        for c in self.ordered(m31 & ~used & ~(1 << a) & ~(1 << b)):
                            mask = used | (1 << a) | (1 << b) | (1 << c)
                            if mask not in seen:
                                seen.add(mask)
                                yield mask, CycleCopy((v, l2, l3), (a, b, c))
        # v as an inner vertex of the edge {l1, v, l2}
        for i, l1 in enumerate(others):
            m = H.link(v, l1) & R
            for l2 in self.ordered(m):
                if pos[l2] < i:
                    continue
                used = (1 << v) | (1 << l1) | (1 << l2)
                for l3 in self.ordered(R & ~used):
                    m23 = H.link(l2, l3) & R & ~used & ~(1 << l3)
                    m31 = H.link(l3, l1) & R & ~used & ~(1 << l3)
                    for b in self.ordered(m23):
                        for c in self.ordered(m31 & ~(1 << b)):
                            mask = used | (1 << l3) | (1 << b) | (1 << c)
                            if mask not in seen:
                                seen.add(mask)
                                yield mask, CycleCopy((l1, l2, l3), (v, b, c))


def _within_mask(H: Hypergraph3, within: Iterable[int] | int | None) -> int:
    if within is None:
        return (1 << H.n) - 1
    if isinstance(within, int):
        return within
    vs = list(within)
    H._check_vertices(vs)
    return mask_of(vs)


# -- perfect factors -------------------------------------------------------------------


def find_factor(
    H: Hypergraph3,
    time_budget_ms: float | None = None,
    *,
    max_nodes: int | None = None,
    within: Iterable[int] | int | None = None,
) -> FactorResult:
    """Search for a perfect tiling of ``H`` (or of ``H[within]``) by loose 6-cycles."""
    root = _within_mask(H, within)
    size = root.bit_count()
    if size % 6:
        return FactorResult(NONE, None, True, 0, "divisibility")
    budget = Budget(time_budget_ms, max_nodes)
    indep = independent_set(H, root)
    src = _CopySource(H, indep)
    dead: set[int] = set()

    def solve(R: int) -> list[CycleCopy] | None:
        budget.tick()
        if not R:
            return []
        if R in dead:
            return None
        k = R.bit_count()
        if 3 * (R & ~indep).bit_count() < k:
            dead.add(R)
            return None
        if k == 6:
            c = src.copy_on(R)
            if c is None:
                dead.add(R)
                return None
            return [c]
        v = (R & -R).bit_length() - 1
        for mask, c in src.through(v, R):
            rest = solve(R & ~mask)
            if rest is not None:
                return [c, *rest]
        dead.add(R)
        return None

    try:
        copies = solve(root)
    except BudgetExceeded:
        return FactorResult(INDETERMINATE, None, False, budget.nodes, "budget")
    if copies is None:
        return FactorResult(NONE, None, True, budget.nodes, "exhausted")
    return FactorResult(SOME, Tiling(H.n, copies), True, budget.nodes)


# -- maximum tilings and t disjoint copies ---------------------------------------------


def max_tiling(
    H: Hypergraph3,
    time_budget_ms: float | None = None,
    *,
    max_nodes: int | None = None,
    within: Iterable[int] | int | None = None,
) -> TilingResult:
    """Largest set of disjoint copies; best-found with ``maximum=False`` on budget exhaustion."""
    root = _within_mask(H, within)
    budget = Budget(time_budget_ms, max_nodes)
    indep = independent_set(H, root)
    src = _CopySource(H, indep)
    memo: dict[int, list[CycleCopy]] = {}
    best: list[list[CycleCopy]] = [[]]

    def bound(R: int) -> int:
        return min(R.bit_count() // 6, (R & ~indep).bit_count() // 2)

    def solve(R: int, path: list[CycleCopy]) -> list[CycleCopy]:
        budget.tick()
        if R in memo:
            return memo[R]
        ub = bound(R)
        out: list[CycleCopy] = []
        if ub > 0:
            v = (R & -R).bit_length() - 1
            for mask, c in src.through(v, R):
                sub = solve(R & ~mask, [*path, c])
                if 1 + len(sub) > len(out):
                    out = [c, *sub]
                    if len(path) + len(out) > len(best[0]):
                        best[0] = [*path, *out]
                    if len(out) == ub:
                        break
            if len(out) < ub:
                sub = solve(R & ~(1 << v), path)
                if len(sub) > len(out):
                    out = sub
        memo[R] = out
        return out

    try:
        result = solve(root, [])
        return TilingResult(Tiling(H.n, result), True, len(result), budget.nodes)
    except BudgetExceeded:
        return TilingResult(Tiling(H.n, best[0]), False, bound(root), budget.nodes)


def find_t_disjoint(
    H: Hypergraph3,
    t: int,
    time_budget_ms: float | None = None,
    *,
    max_nodes: int | None = None,
    within: Iterable[int] | int | None = None,
) -> FactorResult:
    """Exactly ``t`` vertex-disjoint copies, or a proof that none exist."""
    root = _within_mask(H, within)
    if t < 0 or 6 * t > root.bit_count():
        raise ValueError(f"need 0 <= 6t <= n, got t={t} with {root.bit_count()} vertices")
    budget = Budget(time_budget_ms, max_nodes)
    indep = independent_set(H, root)
    src = _CopySource(H, indep)
    dead: set[tuple[int, int]] = set()

    def solve(R: int, need: int) -> list[CycleCopy] | None:
        budget.tick()
        if need == 0:
            return []
        if (R, need) in dead:
            return None
        if min(R.bit_count() // 6, (R & ~indep).bit_count() // 2) < need:
            dead.add((R, need))
            return None
        v = (R & -R).bit_length() - 1
        for mask, c in src.through(v, R):
            rest = solve(R & ~mask, need - 1)
            if rest is not None:
                return [c, *rest]
        rest = solve(R & ~(1 << v), need)
        if rest is not None:
            return rest
        dead.add((R, need))
        return None

    try:
        copies = solve(root, t)
    except BudgetExceeded:
        return FactorResult(INDETERMINATE, None, False, budget.nodes, "budget")
    if copies is None:
        return FactorResult(NONE, None, True, budget.nodes, "exhausted")
    return FactorResult(SOME, Tiling(H.n, copies), True, budget.nodes)


# -- matchings -------------------------------------------------------------------------


def max_matching3(
    H: Hypergraph3,
    mode: str = "exact",
    time_budget_ms: float | None = None,
    *,
    max_nodes: int | None = None,
    within: Iterable[int] | int | None = None,
) -> Matching3:
    """A maximal (``mode="greedy"``) or maximum (``mode="exact"``) matching.

    Exact mode falls back to the best matching found when the budget runs out;
    ``maximum`` records whether optimality was proved.
    """
    root = _within_mask(H, within)
    edges = [e for e in H.edges.tolist() if mask_of(e) & root == mask_of(e)]
    if mode not in ("greedy", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    used = 0
    greedy: list[Triple] = []
    for e in edges:
        em = mask_of(e)
        if not em & used:
            used |= em
            greedy.append(tuple(e))
    if mode == "greedy":
        return Matching3(H.n, greedy, maximum=False)

    budget = Budget(time_budget_ms, max_nodes)
    indep = independent_set(H, root)
    memo: dict[int, list[Triple]] = {}
    best: list[list[Triple]] = [greedy]

    def bound(R: int) -> int:
        return min(R.bit_count() // 3, (R & ~indep).bit_count())

    def solve(R: int, path: list[Triple]) -> list[Triple]:
        budget.tick()
        if R in memo:
            return memo[R]
        ub = bound(R)
        out: list[Triple] = []
        if ub > 0:
            v = (R & -R).bit_length() - 1
            rest = R & ~(1 << v)
            for a in bits_of(rest):
                for b in bits_of(H.link(v, a) & rest & ~((1 << (a + 1)) - 1)):
                    e = (v, a, b)
                    sub = solve(rest & ~(1 << a) & ~(1 << b), [*path, e])
                    if 1 + len(sub) > len(out):
                        out = [e, *sub]
                        if len(path) + len(out) > len(best[0]):
                            best[0] = [*path, *out]
                        if len(out) == ub:
                            break
                if len(out) == ub:
                    break
            if len(out) < ub:
                sub = solve(rest, path)
                if len(sub) > len(out):
                    out = sub
        memo[R] = out
        return out

    try:
        return Matching3(H.n, solve(root, []), maximum=True)
    except BudgetExceeded:
        return Matching3(H.n, best[0], maximum=False)


# -- independent verification ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_tiling(H: Hypergraph3, T: Tiling | Sequence[CycleCopy], require_perfect: bool = False) -> Verdict:
    """Check a tiling against the host using only its edge list."""
    copies = T.copies if isinstance(T, Tiling) else list(T)
    edges = {tuple(sorted(e)) for e in H.edges.tolist()}
    owner: dict[int, int] = {}
    for k, c in enumerate(copies):
        l1, l2, l3 = c.links
        i12, i23, i31 = c.inners
        vs = (l1, l2, l3, i12, i23, i31)
        for v in vs:
            if not 0 <= v < H.n:
                return Verdict(False, f"vertex {v} out of range in copy {k}")
        if len(set(vs)) != 6:
            return Verdict(False, f"copy {k} repeats a vertex")
        for trip in ((l1, i12, l2), (l2, i23, l3), (l3, i31, l1)):
            if tuple(sorted(trip)) not in edges:
                a, b, cc = sorted(trip)
                return Verdict(False, f"missing edge {a} {b} {cc} in copy {k}")
        for v in sorted(vs):
            if v in owner:
                return Verdict(False, f"disjointness at {v} (copies {owner[v]} and {k})")
            owner[v] = k
    if require_perfect:
        for v in range(H.n):
            if v not in owner:
                return Verdict(False, f"uncovered vertex {v}")
    return Verdict(True)


def verify_matching(H: Hypergraph3, M: Matching3 | Sequence[Sequence[int]]) -> Verdict:
    edges = M.edges if isinstance(M, Matching3) else list(M)
    host = {tuple(sorted(e)) for e in H.edges.tolist()}
    seen: set[int] = set()
    for e in edges:
        t = tuple(sorted(e))
        if t not in host:
            return Verdict(False, f"missing edge {t[0]} {t[1]} {t[2]}")
        for v in t:
            if v in seen:
                return Verdict(False, f"disjointness at {v}")
            seen.add(v)
    return Verdict(True)
