"""Command-line front end: single cells, config sweeps, built-in grids, audit."""

import argparse
import sys

from .engine import RunConfig, run_once, DEFAULT_MAX_SLOTS, DEFAULT_RANGE_M
from .experiments import (
    ScenarioGrid, run_grid, paper_grid, parse_grid_config,
    aggregate_csv, runs_csv, RUN_COLUMNS, ALL_PROTOCOLS, _run_configs,
)
from .metrics import fmt
from .pr_activity import PrParams
from .protocol import TERMINATION_MODES


def _add_cell_args(p):
    p.add_argument("--protocol", required=True, choices=ALL_PROTOCOLS)
    p.add_argument("--termination", required=True, choices=TERMINATION_MODES)
    p.add_argument("--nodes", required=True, type=int)
    p.add_argument("--channels", required=True, type=int)
    p.add_argument("--similarity", required=True, type=int)
    p.add_argument("--pr", required=True,
                   help="PR activity: off, high, or lambda_x:lambda_y")


def _add_common_args(p):
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="aggregate CSV path (default stdout)")
    p.add_argument("--runs-out", default=None, help="optional per-run CSV path")
    p.add_argument("--trace", default=None, help="per-run event trace path")
    p.add_argument("--fix-topology", action="store_true",
                   help="reuse deployments across cells for matched comparisons")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rendezsim",
        description="Monte-Carlo simulator for multihop cognitive-radio rendezvous",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario cell")
    _add_cell_args(p_run)
    _add_common_args(p_run)

    p_sweep = sub.add_parser("sweep", help="run a grid from a config file")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="override the config's master seed")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--runs-out", default=None)

    p_paper = sub.add_parser("paper", help="run a built-in evaluation grid")
    p_paper.add_argument("grid", choices=("baseline", "controlled", "scale"))
    p_paper.add_argument("--runs", type=int, default=None,
                         help="replications per cell (default 1000)")
    p_paper.add_argument("--seed", type=int, default=0)
    p_paper.add_argument("--workers", type=int, default=1)
    p_paper.add_argument("--out", default=None)
    p_paper.add_argument("--runs-out", default=None)

    p_audit = sub.add_parser("audit", help="replay a per-run CSV and re-verify it")
    p_audit.add_argument("csv", help="per-run CSV produced with --runs-out")
    return parser


def _emit(args, result):
    text = aggregate_csv(result)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "runs_out", None):
        with open(args.runs_out, "w", newline="") as fh:
            fh.write(runs_csv(result))


def _cmd_run(args):
    grid = ScenarioGrid(
        name="run", protocols=(args.protocol,), terminations=(args.termination,),
        n_values=(args.nodes,), c_values=(args.channels,),
        m_values=(args.similarity,), pr_levels=(args.pr,), runs=args.runs,
        master_seed=args.seed, fix_topology=args.fix_topology,
    )
    if args.trace:
        # trace the first replication only; batch runs stay untraced
        _, _, cfg = _run_configs(grid)[0]
        with open(args.trace, "w") as fh:
            run_once(cfg, trace=fh)
    result = run_grid(grid, workers=args.workers)
    _emit(args, result)
    return 0


def _cmd_sweep(args):
    with open(args.config) as fh:
        grid = parse_grid_config(fh.read())
    if args.seed is not None:
        grid = ScenarioGrid(**{**grid.__dict__, "master_seed": args.seed})
    result = run_grid(grid, workers=args.workers)
    _emit(args, result)
    return 0


def _cmd_paper(args):
    parts = [run_grid(g, workers=args.workers)
             for g in paper_grid(args.grid, runs=args.runs, master_seed=args.seed)]
    merged = parts[0]
    for extra in parts[1:]:
        merged.aggregate_rows.extend(extra.aggregate_rows)
        merged.run_rows.extend(extra.run_rows)
        merged.incomplete += extra.incomplete
    _emit(args, merged)
    return 0


def _cmd_audit(args):
    with open(args.csv) as fh:
        lines = [l.rstrip("\n") for l in fh if not l.startswith("#")]
    header = lines[0].split(",")
    if header != RUN_COLUMNS:
        print(f"audit: unexpected columns {header}", file=sys.stderr)
        return 1
    mismatches = 0
    checked = 0
    for line in lines[1:]:
        row = dict(zip(RUN_COLUMNS, line.split(",")))
        if row["completed"] != "yes":
            continue
        cfg = RunConfig(
            protocol=row["protocol"], termination=row["termination"],
            n_nodes=int(row["N"]), pool_size=int(row["C"]),
            similarity=int(row["m"]), pr=PrParams.from_name(row["pr"]),
            seed=int(row["seed"]),
            topo_seed=int(row["topo_seed"]) if row["topo_seed"] else None,
            chan_seed=int(row["chan_seed"]) if row["chan_seed"] else None,
        )
        record = run_once(cfg)
        checked += 1
        for col, value in (("ttr_policy", record.node_mean("policy")),
                           ("ttr_n1", record.node_mean("n1")),
                           ("ttr_full", record.node_mean("full")),
                           ("ctm", record.ctm)):
            if fmt(value) != row[col]:
                mismatches += 1
                print(f"audit: run {row['run_index']} {col}: "
                      f"recorded {row[col]!r}, replayed {fmt(value)!r}",
                      file=sys.stderr)
    print(f"audit: {checked} runs replayed, {mismatches} mismatch(es)")
    return 1 if mismatches else 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "paper":
            return _cmd_paper(args)
        if args.command == "audit":
            return _cmd_audit(args)
    except (ValueError, OSError) as exc:
        print(f"rendezsim: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
