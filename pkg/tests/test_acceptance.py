"""Acceptance criteria, one test each; every test logs a PASS/FAIL line via ``record``.

Tolerances (counts, success rates and wall-clock limits) are fixed here and
never relaxed.
"""

import math
import time
from itertools import combinations

import numpy as np
import pytest

import oracles
from acceptance_log import record
from loosetile.absorbing import AbsorbConfig, absorb, build_absorbing_family
from loosetile.almost import CERTIFICATE, MATCHING, almost_perfect_matching
from loosetile.constructions import covered_extremal, ideal_case_instance, random_3graph, space_barrier
from loosetile.cycles import enumerate_copies
from loosetile.extremal import extremal_solve, ideal_factor
from loosetile.hypergraph import Hypergraph3
from loosetile.lattice import dense_triangle_check, robust_vectors, split_triangle_check, tripartite_triangle_check
from loosetile.partition import Partition
from loosetile.search import INDETERMINATE, NONE, find_factor, verify_matching, verify_tiling

pytestmark = pytest.mark.slow

EPS = 1e-3
EXTREMAL_SEEDS = 40
IDEAL_SEEDS = 40
MIN_RATE = 0.95


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_01_barrier_sharpness():
    details, ok = [], True
    for n, limit in ((12, 10.0), (18, 120.0)):
        H = space_barrier(n).hypergraph
        with Clock() as c:
            cod = H.min_codegree().value
            res = find_factor(H, None)
        good = cod == n // 3 - 1 and res.status == NONE and res.exhaustive and c.seconds < limit
        ok &= good
        details.append(f"n={n} codegree={cod} status={res.status} exhaustive={res.exhaustive} {c.seconds:.2f}s<{limit:g}s")
    record(1, "barrier sharpness", ok, "; ".join(details))
    assert ok


def test_02_copy_census():
    H = Hypergraph3.complete(6)
    with Clock() as c:
        got = enumerate_copies(H)
        brute = oracles.c6_census(H.edges)
    ok = len(got.copies) == brute == 120 and got.complete and math.comb(20, 3) == 1140 and c.seconds < 1.0
    record(2, "copy census", ok, f"enumerated={len(got.copies)} brute-force={brute} over 1140 edge-triples {c.seconds:.3f}s<1s")
    assert ok


def test_03_tight_threshold():
    details, ok = [], True
    with Clock() as c:
        for n in (12, 24, 48):
            H = covered_extremal(n, n // 3).hypergraph
            cod = H.min_codegree().value
            res = find_factor(H, None)
            good = cod == n // 3 and res.found and bool(verify_tiling(H, res.tiling, require_perfect=True))
            ok &= good
            details.append(f"n={n} codegree={cod} factor={'verified' if good else res.status}")
    ok &= c.seconds < 60
    record(3, "tight threshold", ok, "; ".join(details) + f"; {c.seconds:.2f}s<60s")
    assert ok


def test_04_oracle_equivalence():
    mismatches = []
    with Clock() as c:
        for k in range(200):
            p = (0.2, 0.4, 0.6)[k % 3]
            H = random_3graph(12, p, seed=10_000 + k).hypergraph
            res = find_factor(H, None)
            if res.status == INDETERMINATE or res.found != oracles.factor_oracle_12(12, H.edges):
                mismatches.append(k)
    ok = not mismatches and c.seconds < 300
    record(4, "oracle equivalence", ok, f"200 instances, mismatches={mismatches} {c.seconds:.1f}s<300s")
    assert ok


def noise_for(n: int) -> float:
    """Y-edge probability whose expected count is half of eps n^3."""
    return 0.5 * EPS * n**3 / math.comb(2 * n // 3, 3)


def test_05_extremal_pipeline():
    details, ok = [], True
    with Clock() as c:
        for n in (24, 48, 96):
            H = covered_extremal(n, n // 3).hypergraph
            res = extremal_solve(H, EPS, seed=0)
            clean = res.found and bool(verify_tiling(H, res.tiling, require_perfect=True))
            wins = 0
            capped = 0
            for seed in range(EXTREMAL_SEEDS):
                inst = covered_extremal(n, n // 3, noise=noise_for(n), seed=seed)
                G = inst.hypergraph
                capped += G.edge_counts([inst["Y"]]) <= EPS * n**3
                r = extremal_solve(G, EPS, seed=seed)
                wins += r.found and bool(verify_tiling(G, r.tiling, require_perfect=True))
            rate = wins / EXTREMAL_SEEDS
            ok &= clean and rate >= MIN_RATE and capped == EXTREMAL_SEEDS
            details.append(f"n={n} clean={'ok' if clean else 'FAIL'} noisy={wins}/{EXTREMAL_SEEDS} e(Y)<=eps n^3 on {capped}")
    ok &= c.seconds < 600
    record(5, "extremal pipeline", ok, "; ".join(details) + f"; {c.seconds:.1f}s<600s")
    assert ok


def gamma_pattern(copy, X: set[int], chains) -> bool:
    xs = [v for v in copy.vertices if v in X]
    zs = {v for v in copy.vertices if v not in X}
    if len(xs) != 2:
        return False
    for chain in chains:
        if set(chain) != zs:
            continue
        z1, z2, z3, z4 = chain
        for x, xp in (xs, xs[::-1]):
            want = {tuple(sorted(t)) for t in ((x, z1, z2), (xp, z2, z3), (x, z3, z4))}
            if want == set(copy.edges):
                return True
    return False


def test_06_ideal_case():
    details, ok = [], True
    with Clock() as c:
        for n, rho in ((12, 0.0), (48, 0.01), (96, 0.01)):
            wins = 0
            pattern_ok = True
            for seed in range(IDEAL_SEEDS):
                inst = ideal_case_instance(n, rho, seed=seed)
                H, X = inst.hypergraph, set(inst["X"])
                res = ideal_factor(H, inst["X"], inst["Z"], rho, seed=seed, max_attempts=64)
                if res.found and verify_tiling(H, res.tiling, require_perfect=True):
                    wins += 1
                    pattern_ok &= all(gamma_pattern(cp, X, res.chains) for cp in res.tiling.copies)
            ok &= wins / IDEAL_SEEDS >= MIN_RATE and pattern_ok
            details.append(f"({n},{rho}) {wins}/{IDEAL_SEEDS} pattern={'exact' if pattern_ok else 'MISMATCH'}")
    ok &= c.seconds < 300
    record(6, "ideal-case routine", ok, "; ".join(details) + f"; {c.seconds:.1f}s<300s")
    assert ok


def test_07_robust_counts():
    inst = space_barrier(12)
    P = Partition.of(12, [inst["X"], inst["Y"]])
    X = set(inst["X"])
    with Clock() as c:
        rep = robust_vectors(inst.hypergraph, P, 3, 1)
        brute: dict[tuple[int, int], int] = {}
        for e in combinations(range(12), 3):
            if set(e) & X:
                k = len(set(e) & X)
                brute[(k, 3 - k)] = brute.get((k, 3 - k), 0) + 1
    want = {(1, 2): 108, (2, 1): 27, (3, 0): 1}
    ok = rep.counts == brute == want and rep.exhaustive and c.seconds < 1.0
    record(7, "robust counts", ok, f"report={dict(sorted(rep.counts.items()))} brute-force={dict(sorted(brute.items()))} {c.seconds:.3f}s<1s")
    assert ok


def almost_instances():
    for seed in range(25):
        yield f"random60#{seed}", random_3graph(60, 0.3, seed=seed).hypergraph
    for seed in range(25):
        n = (24, 36, 48, 60)[seed % 4]
        yield f"covered{n}#{seed}", covered_extremal(n, n // 3, noise=0.02 * (seed % 5), seed=seed).hypergraph


def test_08_almost_matching_dichotomy():
    bad: list[str] = []
    kinds = {MATCHING: 0, CERTIFICATE: 0}
    with Clock() as c:
        for name, H in almost_instances():
            res = almost_perfect_matching(H, 0.1, 0.2, seed=0)
            if res.kind == MATCHING:
                M = res.matching
                covered = {v for e in M.edges for v in e}
                maximal = all(covered & set(e) for e in H.edge_set)
                valid = bool(verify_matching(H, M)) and maximal and H.n - 3 * len(M) <= 0.2 * H.n
            elif res.kind == CERTIFICATE:
                valid = res.certificate.check(H)
            else:
                valid = False
            kinds[res.kind] = kinds.get(res.kind, 0) + 1
            if not valid:
                bad.append(name)
    ok = not bad and c.seconds < 300
    record(8, "almost-matching dichotomy", ok, f"50 instances {kinds} invalid={bad} {c.seconds:.1f}s<300s")
    assert ok


def test_09_absorbing_round_trip():
    H = Hypergraph3.complete(120)
    P = Partition.trivial(120)
    wins = 0
    with Clock() as c:
        for seed in range(20):
            fam = build_absorbing_family(H, P, AbsorbConfig(t=1, seed=seed))
            rng = np.random.default_rng(seed)
            free = sorted(set(range(120)) - fam.W)
            U = sorted(int(v) for v in rng.choice(free, size=6, replace=False))
            T = absorb(H, fam, U)
            wins += bool(verify_tiling(H, T)) and T.covered == fam.W | frozenset(U)
    ok = wins == 20 and c.seconds < 300
    record(9, "absorbing round-trip", ok, f"{wins}/20 seeds {c.seconds:.1f}s<300s")
    assert ok


def random_graph(rng: np.random.Generator, v: int, keep: float) -> np.ndarray:
    adj = np.triu(rng.random((v, v)) < keep, 1)
    return adj | adj.T


def test_10_triangle_fact():
    rng = np.random.default_rng(2024)
    results = {}
    with Clock() as c:
        viol, applied = 0, 0
        for _ in range(500):
            v = int(rng.integers(3, 13))
            gamma = float(rng.choice([0.05, 0.1, 0.2]))
            adj = random_graph(rng, v, 1 - gamma * rng.random())
            chk = dense_triangle_check(adj, gamma)
            brute = oracles.triangles(adj.tolist())
            applied += chk.applies
            viol += chk.count != brute or (chk.applies and brute < chk.bound)
        results["(i)"] = (viol, applied)

        viol, applied = 0, 0
        for _ in range(500):
            sizes = rng.integers(1, 9, size=3)
            cut = np.cumsum(sizes)
            parts = [list(range(0, cut[0])), list(range(cut[0], cut[1])), list(range(cut[1], cut[2]))]
            gamma = float(rng.choice([0.05, 0.1, 0.2]))
            adj = random_graph(rng, int(cut[2]), 1 - gamma * rng.random())
            chk = tripartite_triangle_check(adj, parts, gamma)
            brute = oracles.triangles_tripartite(adj.tolist(), *parts)
            applied += chk.applies
            viol += chk.count != brute or (chk.applies and brute < chk.bound)
        results["(ii)"] = (viol, applied)

        viol, applied = 0, 0
        for _ in range(500):
            n1, n2 = int(rng.integers(2, 9)), int(rng.integers(1, 9))
            gamma = float(rng.choice([0.1, 0.2, 0.3]))
            gamma2 = float(rng.uniform(0.3, 1.0))
            adj = random_graph(rng, n1 + n2, 1 - gamma * rng.random())
            cross = rng.random((n1, n2)) < rng.uniform(gamma2, 1.0)
            adj[:n1, n1:] = cross
            adj[n1:, :n1] = cross.T
            V1, V2 = list(range(n1)), list(range(n1, n1 + n2))
            chk = split_triangle_check(adj, V1, V2, gamma, gamma2)
            brute = oracles.triangles_two_one(adj.tolist(), V1, V2)
            applied += chk.applies
            viol += chk.count != brute or (chk.applies and brute < chk.bound)
        results["(iii)"] = (viol, applied)
    ok = all(v == 0 and a > 0 for v, a in results.values()) and c.seconds < 120
    detail = "; ".join(f"{k} violations={v} hypotheses-met={a}/500" for k, (v, a) in results.items())
    record(10, "triangle fact", ok, f"{detail}; {c.seconds:.1f}s<120s")
    assert ok
