"""Command line entry point.

Exit codes: 0 success, 1 regret verification mismatch, 2 invalid input,
3 enumeration guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from .errors import GuardError, ValidationError
from .game import Strategy, format_subset, make_instance, parse_subset
from .graph import generate_graph, read_graph_file, serialize_graph
from .harness import RoundRecord, RunConfig, compute_regret, emit_report, run_stackelberg
from .oracle import brute_minmax
from .absorbing import absorption_model, equilibrium_opinions

EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_GUARD = 3


def _write_rows(rows, header, out_dir, name):
    if out_dir is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(path)


def cmd_solve(args):
    g, s = read_graph_file(args.graph)
    model = absorption_model(g)
    z = equilibrium_opinions(model, s)
    rows = [[i + 1, f"{z[i]:.12g}", f"{model.ell[i]:.12g}"] for i in range(g.n)]
    _write_rows(rows, ["node", "z", "ell"], args.out, "equilibrium.csv")


def cmd_play(args):
    config = RunConfig(
        graph_path=args.graph,
        k=args.k,
        T=args.T,
        r=args.r,
        seed=args.seed,
        output_dir=args.out,
        formats=tuple(f for f in args.format.split(",") if f),
        compute_gap=args.gap,
        workers=args.workers,
    )
    report = run_stackelberg(config)
    for path in emit_report(report, config.formats, config.output_dir):
        print(path)
    print(f"T_min={report.T_min} output_strategy={report.output_strategy}", file=sys.stderr)


def cmd_oracle(args):
    g, s = read_graph_file(args.graph)
    res = brute_minmax(make_instance(g, s, args.k))
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "oracle.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "graph": args.graph,
                "k": args.k,
                "minmax_value": res.minmax_value,
                "argmin_x": str(res.argmin_x),
                "maxmin_value": res.maxmin_value,
                "argmax_y": str(res.argmax_y),
                "per_x_table": {format_subset(x): v for x, v in res.per_x_table.items()},
            },
            fh,
            indent=1,
        )
        fh.write("\n")
    print(path)


def cmd_regret(args):
    path = os.path.join(args.report, "report.json")
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    graph_path = args.graph or data["config"]["graph"]
    g, s = read_graph_file(graph_path)
    inst = make_instance(g, s, data["config"]["k"])
    records = [
        RoundRecord(
            t=row["t"],
            x_subset=parse_subset(row["x_subset"]),
            y_subset=parse_subset(row["y_subset"]),
            p_hat=np.array(row["p_hat"]),
            realized_loss=row["realized_loss"],
            expected_loss_estimate=row["expected_loss_estimate"],
        )
        for row in data["rounds"]
    ]
    curve = compute_regret(records, inst)
    stored = np.array([row["cum_regret"] for row in data["rounds"]])
    worst = float(np.max(np.abs(curve - stored)))
    rows = [[rec.t, f"{c:.12g}", f"{c / rec.t:.12g}"] for rec, c in zip(records, curve)]
    _write_rows(rows, ["t", "cum_regret", "avg_regret"], args.out, "regret.csv")
    ok = worst <= args.tol
    print(f"{'OK' if ok else 'MISMATCH'}: max |recomputed - stored| = {worst:.3g}", file=sys.stderr)
    return 0 if ok else EXIT_MISMATCH


def cmd_gen(args):
    opinions = "uniform" if args.opinions == "uniform" else float(args.opinions)
    g, s = generate_graph(args.kind, args.n, seed=args.seed, anchor_value=args.anchor, opinions=opinions, p=args.p)
    text = serialize_graph(g, s)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opinion-stackelberg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="equilibrium expressed opinions and influence weights")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", help="directory for equilibrium.csv (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", help="run FTPL against the sampling adversary")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="samples per round (default: T)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--gap", action="store_true", help="compute the equilibrium gap (brute force)")
    p.add_argument("--format", default="csv,json")
    p.add_argument("--workers", type=int, default=1, help="threads for per-round sampling")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("oracle", help="brute-force minmax / maxmin over all k-subsets")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("regret", help="recompute and verify the regret curve of a stored report")
    p.add_argument("--report", required=True, help="directory containing report.json")
    p.add_argument("--graph", help="override the graph path recorded in the report")
    p.add_argument("--out", help="directory for regret.csv (default: stdout)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_regret)

    p = sub.add_parser("gen", help="write a generated graph file")
    p.add_argument("--kind", choices=["path", "complete", "random"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--anchor", type=float, default=1.0)
    p.add_argument("--opinions", default="uniform", help="'uniform' or a constant in [-1, 1]")
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args) or 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
