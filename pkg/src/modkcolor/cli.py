"""Command line interface: ``modkcolor <subcommand> ...``.

Graphs are read in the edge-list format (``n m`` header, then ``u v`` lines,
``#`` comments).  Every subcommand prints JSON on stdout; ``experiment`` also
writes a CSV file.  Exit status is 0 on completion, 1 when ``verify`` finds
violations, and 2 on bad input or configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional

from .engine import construct_coloring, k1kk_coloring, k1kk_graph
from .exact import SearchBudget, chi_k_exact
from .experiments import ExperimentConfig, run_trials, summarize
from .graph import EdgeColoring, InputError, degree_classes, format_edge_list, read_edge_list, verify_coloring
from .random_model import (
    JUMBLED_A,
    BinModKQuery,
    binom_mod_k_bound,
    binom_mod_k_exact,
    binom_mod_k_roots,
    check_bijumbled,
    check_class_min_degree,
    check_degree_class_balance,
    gnp,
)


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def cmd_probe(args) -> int:
    n, p, k = args.n, args.p, args.k
    if args.mode == "binom":
        rows = []
        for t in range(k):
            q = BinModKQuery(n, p, k, t)
            exact = binom_mod_k_exact(q)
            rows.append(
                {
                    "t": t,
                    "exact": exact,
                    "roots": binom_mod_k_roots(q),
                    "deviation": abs(exact - 1 / k),
                    "bound": binom_mod_k_bound(q),
                }
            )
        _dump({"mode": "binom", "n": n, "p": p, "k": k, "residues": rows})
        return 0
    G = gnp(n, p, args.seed)
    out = {"mode": args.mode, "n": n, "p": p, "k": k, "seed": args.seed, "edges": G.m}
    if args.mode == "bijumbled":
        alpha = args.alpha if args.alpha is not None else JUMBLED_A * math.sqrt(p * n)
        report = check_bijumbled(G, p, alpha, mode=args.check, sample_count=args.samples, seed=args.seed)
        out["report"] = report.to_dict()
    elif args.mode == "balance":
        flags = check_degree_class_balance(G, k)
        sizes = degree_classes(G, k).sizes
        out["classes"] = [{"class": i, "size": sizes[i - 1], "balanced": flags[i]} for i in range(1, k + 1)]
        out["bounds"] = [n / (2 * k), 3 * n / (2 * k)]
    elif args.mode == "mindeg":
        rep = check_class_min_degree(G, k, p)
        out["ok"] = rep.ok
        out["threshold"] = rep.threshold
        out["worst"] = None if rep.worst is None else dict(zip(("vertex", "class", "count"), rep.worst))
    _dump(out)
    return 0


def cmd_color(args) -> int:
    G = read_edge_list(args.input)
    res = construct_coloring(G, args.k, seed=args.seed)
    out = {
        "status": "success" if res.success else "failure",
        "case": res.case_tag,
        "colors_used": res.colors_used,
        "coloring": res.coloring.to_triples() if res.success else None,
    }
    if not res.success:
        out["failure"] = {"stage": res.failure.stage, "reason": res.failure.reason}
    if args.trace:
        out["trace"] = res.trace.to_dict()
    _dump(out)
    return 0


def cmd_special(args) -> int:
    G = k1kk_graph(args.k)
    col = k1kk_coloring(args.k)
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            fh.write(format_edge_list(G))
    _dump(
        {
            "graph": "k1kk",
            "k": args.k,
            "edge_list": format_edge_list(G),
            "status": "success",
            "colors_used": col.colors_used,
            "coloring": col.to_triples(),
        }
    )
    return 0


def cmd_exact(args) -> int:
    G = read_edge_list(args.input)
    budget = SearchBudget(args.max_colors, args.node_limit, args.time_limit)
    res = chi_k_exact(G, args.k, budget, max_cycle_length=args.max_cycle_length)
    _dump(res.to_dict())
    return 0


def _load_coloring(path: str, k: int) -> EdgeColoring:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("coloring") or data.get("witness")
    if not isinstance(data, list):
        raise InputError("coloring JSON must be a list of [u, v, color] triples or hold one under 'coloring'")
    return EdgeColoring.from_triples(k, data)


def cmd_verify(args) -> int:
    G = read_edge_list(args.input)
    col = _load_coloring(args.coloring, args.k)
    rep = verify_coloring(G, col)
    _dump(
        {
            "valid": rep.valid,
            "colors_used": col.colors_used,
            "violations": [dict(zip(("vertex", "color", "degree"), v)) for v in rep.violations],
        }
    )
    return 0 if rep.valid else 1


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        k=args.k,
        n=args.n,
        p=args.p,
        trials=args.trials,
        master_seed=args.seed,
        mode=args.mode,
        output=args.out,
        workers=args.workers,
        record_timing=args.timing,
    )
    records = run_trials(config)
    summary = summarize(records)
    summary["config"] = {"k": args.k, "n": args.n, "p": args.p, "trials": args.trials, "seed": args.seed}
    summary["output"] = args.out
    _dump(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modkcolor", description="Mod-k edge colorings of graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probe", help="numerical checks on G(n,p) and Bin(n,p) mod k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("binom", "bijumbled", "balance", "mindeg"), required=True)
    p.add_argument("--alpha", type=float, default=None, help="bijumbledness slack (default A*sqrt(pn))")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--check", choices=("auto", "exhaustive", "sampled"), default="auto")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("color", help="construct a coloring")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("special", help="named constructions")
    p.add_argument("which", choices=("k1kk",))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--graph-out", default=None, help="also write the graph as an edge list")
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("exact", help="exact mod-k chromatic index of a small graph")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-colors", type=int, default=None)
    p.add_argument("--node-limit", type=int, default=10**8)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--max-cycle-length", type=int, default=8)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a coloring")
    p.add_argument("--input", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="Monte Carlo trials on G(n,p)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("full", "engine_only"), default="full")
    p.add_argument("--out", default="results.csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the ms column (breaks byte-identical reruns)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
