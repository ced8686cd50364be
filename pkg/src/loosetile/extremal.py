"""Constructive factor for hypergraphs close to the space barrier.

Pipeline: pick a sparse ``2n/3``-set ``B`` and locally minimise ``e(B)`` by
swaps; classify vertices by their degree into ``B``; build the small tilings
``Q1`` (covering the mid-degree vertices), ``Q2`` (absorbing surplus in
``B'``) and ``R`` (absorbing surplus in ``A'``); finish with the ideal-case
routine, which chains three bipartite matchings on the good-pair graph and
matches the resulting 4-chains to pairs of ``A``-vertices.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .cycles import CycleCopy
from .hypergraph import Hypergraph3, HypergraphError, Triple, bits_of, mask_of
from .matching import hall_violator, hopcroft_karp, matching_size
from .search import Tiling, max_matching3, verify_tiling

EPS1_CAP = 0.24


class ExtremalFailure(RuntimeError):
    """A pipeline stage could not make its choice; ``stage`` names it."""

    def __init__(self, stage: str, detail: str, vertex: int | None = None) -> None:
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail
        self.vertex = vertex


def _mask_array(n: int, vertices) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[list(vertices)] = True
    return m


def eps1_for(eps: float) -> float:
    """``8 sqrt(24 eps)``, capped so the two classification sets stay disjoint."""
    return min(8.0 * math.sqrt(24.0 * eps), EPS1_CAP)


# -- B minimisation ---------------------------------------------------------------


@dataclass
class SwapResult:
    B: tuple[int, ...]
    eB: int
    swaps: int
    local_optimum: bool


def minimize_eB(H: Hypergraph3, B0, max_swaps: int | None = None, time_budget_ms: float | None = None) -> SwapResult:
    """Steepest-descent single swaps between ``B`` and its complement.

    Swapping ``u`` (outside) with ``v`` (inside) changes ``e(B)`` by
    ``deg(u, B) - |N(uv) & B| - deg(v, B)``.
    """
    n = H.n
    B = sorted(set(B0))
    if len(B) != (2 * n) // 3 or len(B) != len(list(B0)):
        raise HypergraphError(f"|B0| must be {(2 * n) // 3}")
    H._check_vertices(B)
    deadline = None if time_budget_ms is None else time.perf_counter() + time_budget_ms / 1000.0
    mask = _mask_array(n, B)
    swaps = 0
    while True:
        degB = K.degree_into(H.edges, n, mask)
        if (max_swaps is not None and swaps >= max_swaps) or (deadline is not None and time.perf_counter() > deadline):
            local = False
            break
        P = K.pair_degree_into(H.edges, n, mask)
        ins = np.flatnonzero(mask)
        outs = np.flatnonzero(~mask)
        if not len(outs):
            local = True
            break
        delta = degB[outs][:, None] - P[np.ix_(outs, ins)] - degB[ins][None, :]
        k = int(np.argmin(delta))
        i, j = divmod(k, len(ins))
        if delta[i, j] >= 0:
            local = True
            break
        mask[outs[i]] = True
        mask[ins[j]] = False
        swaps += 1
    Bf = tuple(np.flatnonzero(mask).tolist())
    return SwapResult(Bf, K.induced_count(H.edges, mask), swaps, local)


# -- classification ---------------------------------------------------------------


@dataclass
class Classification:
    Aprime: tuple[int, ...]
    Bprime: tuple[int, ...]
    V0: tuple[int, ...]
    eps1: float
    B: tuple[int, ...]
    diagnostics: dict[str, int]

    @property
    def q1(self) -> int:
        return len(self.V0)

    @property
    def q(self) -> int:
        n = len(self.Aprime) + len(self.Bprime) + len(self.V0)
        return len(self.Bprime) - (2 * n) // 3

    def size_claim_holds(self) -> bool:
        """All four discrepancies at most ``eps1/64 |B|`` and ``|V0| <= eps1/32 |B|``."""
        b = len(self.B)
        d = self.diagnostics
        four = max(d["A_minus_Aprime"], d["B_minus_Bprime"], d["Aprime_minus_A"], d["Bprime_minus_B"])
        return four <= self.eps1 / 64 * b and d["V0"] <= self.eps1 / 32 * b

    def to_json(self) -> dict:
        return {
            "Aprime": list(self.Aprime),
            "Bprime": list(self.Bprime),
            "V0": list(self.V0),
            "eps1": self.eps1,
            "q1": self.q1,
            "q": self.q,
            "diagnostics": self.diagnostics,
        }


def classify(H: Hypergraph3, B, eps1: float) -> Classification:
    if not 0 <= eps1 < 0.5:
        raise HypergraphError("eps1 must lie in [0, 1/2)")
    n = H.n
    B = tuple(sorted(set(B)))
    degB = K.degree_into(H.edges, n, _mask_array(n, B))
    full = math.comb(len(B), 2)
    Ap = tuple(int(v) for v in np.flatnonzero(degB >= (1 - eps1) * full))
    Bp = tuple(int(v) for v in np.flatnonzero(degB <= eps1 * full))
    V0 = tuple(sorted(set(range(n)) - set(Ap) - set(Bp)))
    sB = set(B)
    sA = set(range(n)) - sB
    diag = {
        "A_minus_Aprime": len(sA - set(Ap)),
        "B_minus_Bprime": len(sB - set(Bp)),
        "Aprime_minus_A": len(set(Ap) - sA),
        "Bprime_minus_B": len(set(Bp) - sB),
        "V0": len(V0),
    }
    return Classification(Ap, Bp, V0, eps1, B, diag)


# -- Q1, Q2, R --------------------------------------------------------------------


@dataclass
class BalanceResult:
    Q1: Tiling
    Q2: Tiling
    R: Tiling
    A1: tuple[int, ...]
    B1: tuple[int, ...]
    A2: tuple[int, ...]
    B2: tuple[int, ...]
    s: int

    def to_json(self) -> dict:
        return {
            "Q1": self.Q1.to_json(),
            "Q2": self.Q2.to_json(),
            "R": self.R.to_json(),
            "A1": list(self.A1),
            "B1": list(self.B1),
            "A2": list(self.A2),
            "B2": list(self.B2),
            "s": self.s,
        }


def _extend_edge(H: Hypergraph3, u: int, v: int, w: int, freeB: int, freeA: int) -> CycleCopy | None:
    """Copy with edges ``{u, v, w}``, ``{u, x, z}``, ``{v, y, z}``; ``x, y`` from
    ``freeB`` and ``z`` from ``freeA``.  Pairs with many ``A``-extensions go first."""
    xs = sorted(bits_of(freeB), key=lambda x: (-(H.link(u, x) & freeA).bit_count(), x))
    ys = sorted(bits_of(freeB), key=lambda y: (-(H.link(v, y) & freeA).bit_count(), y))
    for x in xs:
        nx = H.link(u, x) & freeA
        if not nx:
            break
        for y in ys:
            if y == x:
                continue
            ny = H.link(v, y) & freeA
            if not ny:
                break
            z = nx & ny
            if z:
                zz = (z & -z).bit_length() - 1
                return CycleCopy((u, v, zz), (w, y, x))
    return None


def _r_copy(H: Hypergraph3, freeB: int, freeA: int) -> CycleCopy | None:
    """Copy with links ``u, v, w`` in ``freeB`` and inners in ``freeA``."""
    bs = bits_of(freeB)
    for u in bs:
        for v in bs:
            if v <= u:
                continue
            nuv = H.link(u, v) & freeA
            if not nuv:
                continue
            for w in bs:
                if w <= v:
                    continue
                nuw = H.link(u, w) & freeA
                nvw = H.link(v, w) & freeA
                if not (nuw and nvw):
                    continue
                for x in bits_of(nuv):
                    for y in bits_of(nuw & ~(1 << x)):
                        zs = nvw & ~(1 << x) & ~(1 << y)
                        if zs:
                            z = (zs & -zs).bit_length() - 1
                            return CycleCopy((u, v, w), (x, z, y))
    return None


def cover_and_balance(H: Hypergraph3, cls: Classification, time_budget_ms: float | None = 10_000) -> BalanceResult:
    """Cover ``V0`` and fix the ``A'``/``B'`` size ratio so that ``2|A2| = |B2|``."""
    n = H.n
    if n % 6:
        raise HypergraphError("n must be divisible by 6")
    q2 = max(cls.q, 0)
    Ap, Bp = set(cls.Aprime), set(cls.Bprime)
    Bmask = mask_of(Bp)

    # matching of size q2 inside B'
    M: list[Triple] = []
    if q2:
        mm = max_matching3(H, "greedy", within=Bmask)
        if len(mm) < q2:
            mm = max_matching3(H, "exact", time_budget_ms, within=Bmask)
        if len(mm) < q2:
            raise ExtremalFailure("Q2 matching", f"B' holds a matching of size {len(mm)} < q2 = {q2}")
        M = list(mm.edges[:q2])
    used = mask_of(v for e in M for v in e)

    # one edge per V0 vertex with the other two vertices in B'
    M1: list[Triple] = []
    for w in cls.V0:
        free = Bmask & ~used
        pick = None
        for a in bits_of(free):
            bs = H.link(w, a) & free & ~((2 << a) - 1)
            if bs:
                pick = (w, a, (bs & -bs).bit_length() - 1)
                break
        if pick is None:
            raise ExtremalFailure("Q1 matching", f"no edge from V0 vertex {w} into free B'", w)
        M1.append(pick)
        used |= mask_of(pick)

    freeB = Bmask & ~used
    freeA = mask_of(Ap)
    Q2c: list[CycleCopy] = []
    for e in M:
        c = None
        for w in e:
            u, v = (x for x in e if x != w)
            c = _extend_edge(H, u, v, w, freeB, freeA)
            if c is not None:
                break
        if c is None:
            raise ExtremalFailure("Q2 extension", f"edge {e} has no extension", e[0])
        Q2c.append(c)
        freeB &= ~c.mask
        freeA &= ~c.mask
    Q1c: list[CycleCopy] = []
    for w, u, v in M1:
        c = _extend_edge(H, u, v, w, freeB, freeA)
        if c is None:
            raise ExtremalFailure("Q1 extension", f"V0 vertex {w} has no extension", w)
        Q1c.append(c)
        freeB &= ~c.mask
        freeA &= ~c.mask

    A1 = tuple(bits_of(freeA))
    B1 = tuple(bits_of(freeB))
    diff = 2 * len(A1) - len(B1)
    if diff < 0 or diff % 3:
        raise ExtremalFailure("balance", f"2|A1| - |B1| = {diff} is not a non-negative multiple of 3")
    s = diff // 3
    Rc: list[CycleCopy] = []
    for _ in range(s):
        c = _r_copy(H, freeB, freeA)
        if c is None:
            raise ExtremalFailure("R", "no copy with three vertices on each side")
        Rc.append(c)
        freeB &= ~c.mask
        freeA &= ~c.mask
    A2 = tuple(bits_of(freeA))
    B2 = tuple(bits_of(freeB))
    if 2 * len(A2) != len(B2):  # pragma: no cover - guaranteed by the bookkeeping above
        raise ExtremalFailure("balance", f"2|A2| = {2 * len(A2)} != |B2| = {len(B2)}")
    return BalanceResult(Tiling(n, Q1c), Tiling(n, Q2c), Tiling(n, Rc), A1, B1, A2, B2, s)


# -- ideal case -------------------------------------------------------------------------


@dataclass
class IdealResult:
    tiling: Tiling | None
    attempts: list[str]
    hall_violator: tuple[list[int], list[int]] | None = None
    chains: list[tuple[int, int, int, int]] = field(default_factory=list)
    good_pairs: int = 0

    @property
    def found(self) -> bool:
        return self.tiling is not None


def ideal_factor(
    H: Hypergraph3,
    X,
    Z,
    rho: float,
    seed: int = 0,
    max_attempts: int = 64,
) -> IdealResult:
    """Factor of ``H[X + Z]`` for ``|Z| = 2|X|`` when almost every ``Z``-pair extends into ``X``.

    Copies have links ``z2, z3, x`` and edges ``x z1 z2``, ``x' z2 z3``,
    ``x z3 z4``; either vertex of an ``X``-pair may play ``x``.
    """
    X = tuple(sorted(set(X)))
    Z = tuple(sorted(set(Z)))
    if set(X) & set(Z):
        raise HypergraphError("X and Z must be disjoint")
    if len(Z) != 2 * len(X) or len(X) % 2:
        raise HypergraphError("need |Z| = 2|X| with |X| even")
    n = H.n
    m = len(X) // 2
    if m == 0:
        return IdealResult(Tiling(n, []), ["ok"])
    degX = K.pair_degree_into(H.edges, n, _mask_array(n, X))
    zi = np.array(Z)
    sub = len(X) - degX[np.ix_(zi, zi)]
    good = sub <= rho * len(X)
    np.fill_diagonal(good, False)
    n_good = int(np.triu(good, 1).sum())
    stages: list[str] = []
    violator = None
    seeds = np.random.SeedSequence(seed).spawn(max_attempts)
    isolated = not good.any(axis=1).all()
    for attempt in range(max_attempts):
        if isolated:
            stages.append("G has isolated vertices")
            continue
        rng = np.random.Generator(np.random.PCG64(seeds[attempt]))
        perm = rng.permutation(len(Z))
        parts = [perm[i * m : (i + 1) * m] for i in range(4)]
        matched: list[list[int]] = []
        failed = None
        for i in range(3):
            L, R = parts[i], parts[i + 1]
            adj = [list(np.flatnonzero(good[a, R])) for a in L]
            for row in adj:
                rng.shuffle(row)
            ml = hopcroft_karp(adj, m)
            if matching_size(ml) < m:
                failed = f"M{i + 1} not perfect ({matching_size(ml)} of {m})"
                break
            matched.append(ml)
        if failed:
            stages.append(failed)
            continue
        # chain z1 -> z2 -> z3 -> z4 (indices into Z)
        chains = []
        for a in range(m):
            b = matched[0][a]
            c = matched[1][b]
            d = matched[2][c]
            chains.append(tuple(int(Z[parts[k][idx]]) for k, idx in enumerate((a, b, c, d))))
        xs = [int(X[i]) for i in rng.permutation(len(X))]
        pairs = [(xs[2 * j], xs[2 * j + 1]) for j in range(m)]

        def fits(x: int, xp: int, ch: tuple[int, int, int, int]) -> bool:
            z1, z2, z3, z4 = ch
            return bool(H.link(z1, z2) >> x & 1 and H.link(z2, z3) >> xp & 1 and H.link(z3, z4) >> x & 1)

        gamma: list[list[int]] = []
        orient: dict[tuple[int, int], tuple[int, int]] = {}
        for j, (x, xp) in enumerate(pairs):
            row = []
            for i, ch in enumerate(chains):
                if fits(x, xp, ch):
                    orient[(j, i)] = (x, xp)
                    row.append(i)
                elif fits(xp, x, ch):
                    orient[(j, i)] = (xp, x)
                    row.append(i)
            rng.shuffle(row)
            gamma.append(row)
        ml = hopcroft_karp(gamma, m)
        if matching_size(ml) < m:
            violator = hall_violator(gamma, ml, m)
            stages.append(f"Gamma has no perfect matching ({matching_size(ml)} of {m})")
            continue
        copies = []
        for j, i in enumerate(ml):
            x, xp = orient[(j, i)]
            z1, z2, z3, z4 = chains[i]
            copies.append(CycleCopy((z2, z3, x), (xp, z4, z1)))
        stages.append("ok")
        return IdealResult(Tiling(n, copies), stages, None, chains, n_good)
    return IdealResult(None, stages, violator, [], n_good)


# -- the whole pipeline --------------------------------------------------------------------


@dataclass
class PipelineTrace:
    B: tuple[int, ...] = ()
    eB: int = 0
    swaps: int = 0
    classification: Classification | None = None
    balance: BalanceResult | None = None
    ideal_attempts: list[str] = field(default_factory=list)
    stage_ms: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "B": list(self.B),
            "eB": self.eB,
            "swaps": self.swaps,
            "classification": None if self.classification is None else self.classification.to_json(),
            "balance": None if self.balance is None else self.balance.to_json(),
            "ideal_attempts": self.ideal_attempts,
            "stage_ms": self.stage_ms,
        }


@dataclass
class ExtremalResult:
    tiling: Tiling | None
    trace: PipelineTrace
    failure: ExtremalFailure | None = None

    @property
    def found(self) -> bool:
        return self.tiling is not None


def extremal_solve(
    H: Hypergraph3,
    eps: float,
    B=None,
    *,
    seed: int = 0,
    max_attempts: int = 64,
    time_budget_ms: float | None = 60_000,
) -> ExtremalResult:
    """Perfect tiling of an ``eps``-extremal ``H`` with codegree at least ``n/3``.

    Raises ``HypergraphError`` for inputs outside the contract (``n`` not a
    multiple of 6, codegree below ``n/3``, no sparse ``2n/3``-set).  Stage
    failures are returned in ``failure``.
    """
    n = H.n
    if n % 6 or n == 0:
        raise HypergraphError(f"n must be a positive multiple of 6, got {n}")
    d2 = H.min_codegree()
    if d2.value * 3 < n:
        raise HypergraphError(f"codegree {d2.value} < n/3 = {n // 3} at pair {d2.witness}")
    trace = PipelineTrace()
    clock = time.perf_counter()

    def lap(name: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        trace.stage_ms[name] = (now - clock) * 1000.0
        clock = now

    if B is None:
        deg = H.degrees
        B = sorted(range(n), key=lambda v: (int(deg[v]), v))[: (2 * n) // 3]
    sw = minimize_eB(H, B, time_budget_ms=time_budget_ms)
    trace.B, trace.eB, trace.swaps = sw.B, sw.eB, sw.swaps
    lap("minimize_eB")
    if sw.eB > eps * n**3:
        raise HypergraphError(f"not eps-extremal: best e(B) = {sw.eB} > {eps * n**3:g}")

    eps1 = eps1_for(eps)
    cls = classify(H, sw.B, eps1)
    trace.classification = cls
    lap("classify")
    try:
        bal = cover_and_balance(H, cls, time_budget_ms)
    except ExtremalFailure as exc:
        lap("cover_and_balance")
        return ExtremalResult(None, trace, exc)
    trace.balance = bal
    lap("cover_and_balance")

    ideal = ideal_factor(H, bal.A2, bal.B2, 8.0 * math.sqrt(eps1), seed=seed, max_attempts=max_attempts)
    trace.ideal_attempts = ideal.attempts
    lap("ideal_factor")
    if ideal.tiling is None:
        return ExtremalResult(None, trace, ExtremalFailure("ideal_factor", ideal.attempts[-1] if ideal.attempts else "no attempts"))
    tiling = Tiling(n, [*bal.Q1.copies, *bal.Q2.copies, *bal.R.copies, *ideal.tiling.copies])
    verdict = verify_tiling(H, tiling, require_perfect=True)
    if not verdict.ok:  # pragma: no cover - every stage builds verified edges
        return ExtremalResult(None, trace, ExtremalFailure("verify", verdict.diagnostic))
    return ExtremalResult(tiling, trace)
