"""Command-line front end.

Results go to stdout as JSON (CSV for ``experiment``); diagnostics go to
stderr.  Exit codes: 0 success, 1 a "none"/"no" answer, 2 usage or input
error, 3 budget exhausted.  Verbosity comes from ``LOOSETILE_LOG``.
"""

from __future__ import annotations

import argparse
import csv
import inspect
import json
import logging
import math
import os
import sys
import time
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from . import constructions
from .absorbing import AbsorbConfig, AbsorbError, absorb, build_absorbing_family
from .almost import CERTIFICATE, INDETERMINATE, MATCHING, almost_perfect_matching
from .extremal import extremal_solve
from .hypergraph import Hypergraph3, HypergraphError
from .lattice import closed_partition, edge_vector_counts, find_transferral, reachable_5sets, robust_vectors
from .partition import Partition
from .search import INDETERMINATE as SEARCH_INDETERMINATE
from .search import NONE, Tiling, find_factor, find_t_disjoint, max_tiling, verify_matching, verify_tiling

EXIT_OK, EXIT_NONE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
CSV_COLUMNS = ["family", "n", "params", "trials", "successes", "mean_runtime_ms", "seed"]

log = logging.getLogger("loosetile")


class UsageError(Exception):
    pass


# -- helpers ------------------------------------------------------------------------


def parse_n_range(text: str) -> list[int]:
    """``"24"``, ``"24,48,96"``, ``"24..96"`` (step 6) or ``"24..96:12"``."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            span, _, step = chunk.partition(":")
            lo, hi = span.split("..")
            lo_i, hi_i, st = int(lo), int(hi), int(step) if step else 6
            if st < 1 or lo_i > hi_i:
                raise UsageError(f"bad range {chunk!r}")
            out.extend(range(lo_i, hi_i + 1, st))
        elif chunk:
            out.append(int(chunk))
    if not out:
        raise UsageError("empty --n sweep")
    return out


def parse_params(items: Sequence[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            params[key.replace("-", "_")] = json.loads(value)
        except json.JSONDecodeError:
            params[key.replace("-", "_")] = value
    return params


def generate(family: str, n: int, params: dict[str, Any], seed: int) -> constructions.LabeledInstance:
    try:
        fn = constructions.GENERATORS[family]
    except KeyError:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(constructions.GENERATORS)}") from None
    accepted = inspect.signature(fn).parameters
    kwargs = {k: v for k, v in params.items() if v is not None}
    unknown = set(kwargs) - set(accepted)
    if unknown:
        raise UsageError(f"family {family!r} takes no parameter(s) {', '.join(sorted(unknown))}")
    if "seed" in accepted:
        kwargs["seed"] = seed
    return fn(n, **kwargs)


def find_tiling_json(data: Any) -> dict | None:
    """The first object carrying ``n`` and ``copies``, searched depth-first."""
    if isinstance(data, dict):
        if "copies" in data and "n" in data:
            return data
        for key in sorted(data):
            hit = find_tiling_json(data[key])
            if hit is not None:
                return hit
    elif isinstance(data, list):
        for item in data:
            hit = find_tiling_json(item)
            if hit is not None:
                return hit
    return None


def _load_graph(path: str) -> Hypergraph3:
    return Hypergraph3.load(path)


def _load_partition(path: str | None, n: int) -> Partition | None:
    if path is None:
        return None
    P = Partition.load(path)
    if P.n != n:
        raise UsageError(f"partition is over {P.n} vertices, hypergraph has {n}")
    return P


class Output:
    def __init__(self, indent: int | None) -> None:
        self.indent = indent

    def json(self, obj: Any) -> None:
        sys.stdout.write(json.dumps(obj, indent=self.indent, sort_keys=True) + "\n")


# -- subcommands ----------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace, out: Output) -> int:
    params = {"x_size": args.x_size, "noise": args.noise, "rho": args.rho, "p": args.p}
    inst = generate(args.family, args.n, {k: v for k, v in params.items() if v is not None}, args.seed)
    path = Path(args.out or f"{args.family}-{args.n}.h3")
    inst.hypergraph.save(path)
    side = path.with_suffix(".json")
    side.write_text(inst.sidecar_json(indent=args.json_indent) + "\n")
    out.json({"h3": str(path), "sidecar": str(side), "n": inst.n, "m": inst.hypergraph.m})
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    cod = H.min_codegree()
    deg = H.min_vertex_degree()
    report: dict[str, Any] = {
        "n": H.n,
        "m": H.m,
        "min_codegree": {"value": cod.value, "witness": list(cod.witness)},
        "min_vertex_degree": {"value": deg.value, "witness": list(deg.witness)},
        "codegree_over_n": cod.value / H.n if H.n else 0.0,
    }
    P = _load_partition(args.part, H.n)
    if P is not None:
        counts = edge_vector_counts(H, P)
        report["index_vectors"] = [{"vec": list(v), "count": c} for v, c in sorted(counts.items())]
    out.json(report)
    return EXIT_OK


def cmd_find_factor(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    if args.t is not None:
        res = find_t_disjoint(H, args.t, args.budget_ms)
    else:
        res = find_factor(H, args.budget_ms)
    if res.status == NONE:
        out.json({"result": "none", "exhaustive": res.exhaustive})
        return EXIT_NONE
    if res.status == SEARCH_INDETERMINATE:
        out.json({"result": "indeterminate", "exhaustive": False, "nodes": res.nodes})
        return EXIT_BUDGET
    out.json({"result": "some", "exhaustive": True, "tiling": res.tiling.to_json()})
    return EXIT_OK


def cmd_max_tiling(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    res = max_tiling(H, args.budget_ms)
    out.json(
        {
            "size": len(res.tiling),
            "maximum": res.maximum,
            "upper_bound": res.upper_bound,
            "tiling": res.tiling.to_json(),
        }
    )
    return EXIT_OK if res.maximum else EXIT_BUDGET


def cmd_extremal_solve(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    P = _load_partition(args.part, H.n)
    B = None
    if P is not None:
        # the larger part is taken as the sparse set
        B = max(P.parts, key=len)
    res = extremal_solve(H, args.eps, B, seed=args.seed, max_attempts=args.max_attempts, time_budget_ms=args.budget_ms)
    trace = res.trace.to_json()
    # timings go to the log so repeated runs print identical JSON
    log.info("stage timings (ms): %s", trace.pop("stage_ms"))
    body: dict[str, Any] = {"trace": trace}
    if res.found:
        body.update(result="some", tiling=res.tiling.to_json())
        out.json(body)
        return EXIT_OK
    body.update(result="failed", stage=res.failure.stage, detail=res.failure.detail)
    out.json(body)
    return EXIT_NONE


def cmd_lattice(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    P = _load_partition(args.part, H.n) or Partition.trivial(H.n)
    if args.threshold is not None:
        threshold = args.threshold
    elif args.arity == 3:
        threshold = max(1, math.ceil(0.001 * H.n**3))
    else:
        threshold = max(1, math.ceil(0.0001 * H.n**6))
    rep = robust_vectors(H, P, args.arity, threshold, samples=args.samples, seed=args.seed)
    body = rep.to_json()
    tr = find_transferral(rep) if args.arity == 6 else None
    body["transferral"] = None if tr is None else {"vector": list(tr[0]), "i": tr[1], "j": tr[2]}
    out.json(body)
    return EXIT_OK


def cmd_reach(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    if args.partition:
        cp = closed_partition(H, args.pair_threshold, args.cap)
        out.json(
            {
                "parts": [list(p) for p in cp.partition.parts],
                "min_witnesses": list(cp.min_witnesses),
                "degenerate": cp.degenerate,
            }
        )
        return EXIT_OK
    if args.x is None or args.y is None:
        raise UsageError("reach needs --x and --y (or --partition)")
    res = reachable_5sets(H, args.x, args.y, args.cap, witness_limit=args.witnesses)
    out.json(
        {
            "x": args.x,
            "y": args.y,
            "count": res.count,
            "exhaustive": res.exhaustive,
            "witnesses": [{"set": list(S), "with_x": cx.to_json(), "with_y": cy.to_json()} for S, cx, cy in res.witnesses],
        }
    )
    return EXIT_OK if res.count else EXIT_NONE


def cmd_absorb_sim(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    P = _load_partition(args.part, H.n) or Partition.trivial(H.n)
    cfg = AbsorbConfig(t=args.t, gamma1=args.gamma1, seed=args.seed, max_retries=args.max_retries)
    fam = build_absorbing_family(H, P, cfg)
    rng = constructions.rng_for(args.seed)
    rest = sorted(set(range(H.n)) - fam.W)
    size = args.leftover
    if size % 6 or size > len(rest):
        raise UsageError(f"--leftover must be a multiple of 6 and at most {len(rest)}")
    U = sorted(int(v) for v in rng.choice(rest, size=size, replace=False)) if size else []
    T = absorb(H, fam, U, args.budget_ms)
    out.json({"family": fam.to_json(), "U": U, "tiling": T.to_json()})
    return EXIT_OK


def cmd_almost_match(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    res = almost_perfect_matching(H, args.gamma, args.alpha, args.budget_ms, seed=args.seed)
    out.json(res.to_json())
    return {MATCHING: EXIT_OK, CERTIFICATE: EXIT_OK, INDETERMINATE: EXIT_BUDGET}[res.kind]


def run_check(check: str, H: Hypergraph3, args: argparse.Namespace, seed: int) -> bool:
    if check == "factor":
        res = find_factor(H, args.budget_ms)
        return res.found and bool(verify_tiling(H, res.tiling, require_perfect=True))
    if check == "t-disjoint":
        if 6 * args.t > H.n:
            return False
        res = find_t_disjoint(H, args.t, args.budget_ms)
        return res.found and bool(verify_tiling(H, res.tiling))
    if check == "certificate":
        res = almost_perfect_matching(H, args.gamma, args.alpha, args.budget_ms, seed=seed)
        if res.kind == MATCHING:
            return bool(verify_matching(H, res.matching))
        if res.kind == CERTIFICATE:
            return res.certificate.check(H)
        return False
    raise UsageError(f"unknown check {check!r}")


def cmd_experiment(args: argparse.Namespace, out: Output) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    sweep = parse_n_range(args.n)
    params = parse_params(args.param)
    checks = args.check or ["factor"]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    seeds = np.random.SeedSequence(args.seed)
    for n in sweep:
        for check in checks:
            ok = 0
            elapsed = 0.0
            for trial in range(args.trials):
                trial_seed = int(seeds.spawn(1)[0].generate_state(1)[0])
                inst = generate(args.family, n, params, trial_seed)
                t0 = time.perf_counter()
                passed = run_check(check, inst.hypergraph, args, trial_seed)
                elapsed += time.perf_counter() - t0
                ok += passed
                log.info("family=%s n=%d check=%s trial=%d ok=%s", args.family, n, check, trial, passed)
            label = json.dumps({**params, "check": check, **({"t": args.t} if check == "t-disjoint" else {})}, sort_keys=True)
            writer.writerow([args.family, n, label, args.trials, ok, f"{1000.0 * elapsed / args.trials:.3f}", args.seed])
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: Output) -> int:
    H = _load_graph(args.graph)
    data = json.loads(Path(args.tiling).read_text())
    tj = find_tiling_json(data)
    if tj is None:
        raise UsageError(f"{args.tiling} holds no tiling")
    T = Tiling.from_json(tj)
    if T.n != H.n:
        out.json({"ok": False, "diagnostic": f"tiling is over {T.n} vertices, hypergraph has {H.n}"})
        return EXIT_NONE
    verdict = verify_tiling(H, T, require_perfect=args.require_perfect)
    out.json({"ok": verdict.ok, "diagnostic": verdict.diagnostic, "copies": len(T)})
    return EXIT_OK if verdict.ok else EXIT_NONE


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-ms", type=float, default=None, help="wall-clock budget per search (default: none)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    common.add_argument("--json-indent", type=int, default=None)

    parser = argparse.ArgumentParser(prog="loosetile", description="Loose 6-cycle tilings of 3-uniform hypergraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance (.h3 plus .json sidecar)")
    p.add_argument("family", choices=sorted(constructions.GENERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x-size", type=int)
    p.add_argument("--noise", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--out", help="output .h3 path (default: <family>-<n>.h3)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", parents=[common], help="degree statistics")
    p.add_argument("graph")
    p.add_argument("--part")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("find-factor", parents=[common], help="exact factor search")
    p.add_argument("graph")
    p.add_argument("--t", type=int, help="look for t disjoint copies instead of a factor")
    p.set_defaults(func=cmd_find_factor)

    p = sub.add_parser("max-tiling", parents=[common], help="maximum set of disjoint copies")
    p.add_argument("graph")
    p.set_defaults(func=cmd_max_tiling)

    p = sub.add_parser("extremal-solve", parents=[common], help="factor of a near-extremal instance")
    p.add_argument("graph")
    p.add_argument("--part", help=".part file; its larger part is the sparse set B")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--max-attempts", type=int, default=64)
    p.set_defaults(func=cmd_extremal_solve)

    p = sub.add_parser("lattice", parents=[common], help="robust index vectors and transferrals")
    p.add_argument("graph")
    p.add_argument("--part")
    p.add_argument("--arity", type=int, choices=(3, 6), default=3)
    p.add_argument("--threshold", type=int)
    p.add_argument("--samples", type=int, default=20_000)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("reach", parents=[common], help="reachable 5-sets or the reachability partition")
    p.add_argument("graph")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--witnesses", type=int, default=4)
    p.add_argument("--partition", action="store_true")
    p.add_argument("--pair-threshold", type=int, default=1)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("absorb-sim", parents=[common], help="build an absorbing family and absorb a random leftover")
    p.add_argument("graph")
    p.add_argument("--part")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--gamma1", type=float, default=0.1)
    p.add_argument("--max-retries", type=int, default=8)
    p.add_argument("--leftover", type=int, default=6)
    p.set_defaults(func=cmd_absorb_sim)

    p = sub.add_parser("almost-match", parents=[common], help="almost-perfect matching or sparse-set certificate")
    p.add_argument("graph")
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.2)
    p.set_defaults(func=cmd_almost_match)

    p = sub.add_parser("experiment", parents=[common], help="sweep a generator family and write CSV")
    p.add_argument("--family", required=True)
    p.add_argument("--n", required=True, help="24, 24,48,96, 24..96 (step 6) or 24..96:24")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--check", action="append", choices=("factor", "t-disjoint", "certificate"))
    p.add_argument("--param", action="append", default=[], help="generator parameter key=value")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.2)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", parents=[common], help="check a tiling JSON against a hypergraph")
    p.add_argument("graph")
    p.add_argument("tiling")
    p.add_argument("--require-perfect", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    level = logging.getLevelName(os.environ.get("LOOSETILE_LOG", "WARNING").upper())
    logging.basicConfig(level=level if isinstance(level, int) else logging.WARNING, stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads != 1:
        log.info("--threads=%d accepted; running sequentially", args.threads)
    out = Output(args.json_indent)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"loosetile: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypergraphError, AbsorbError, ValueError, OSError) as exc:
        print(f"loosetile: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
