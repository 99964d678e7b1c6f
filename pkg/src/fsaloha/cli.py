"""Command line interface: run experiments, plot results, manage golden vectors."""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .metrics import emit_csv, emit_plots, load_experiment_spec, read_csv, summarize
from .model import ChannelSpec, ConfigError
from .runner import CycleSimulator, derive_cycle_seed, generate_population, run_experiment
from .slothash import golden_records, verify_golden, write_golden


def _cmd_run(args) -> int:
    try:
        spec = load_experiment_spec(args.spec)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = spec.config
    modes = tuple(args.modes.split(",")) if args.modes else spec.modes
    base_seed = args.seed if args.seed is not None else spec.base_seed
    out_dir = Path(args.out_dir) if args.out_dir else Path(spec.out_dir)
    if args.channel and args.channel != "both":
        cfg = replace(cfg, channel=replace(cfg.channel, kind=args.channel))
    channels = ("rayleigh", "rician") if args.channel == "both" else (cfg.channel.kind,)

    try:
        records = []
        for chan in channels:
            chan_cfg = replace(cfg, channel=replace(cfg.channel, kind=chan))
            if args.isic_trace:
                records.extend(_run_traced(chan_cfg, spec, modes, base_seed))
            else:
                records.extend(
                    run_experiment(chan_cfg, spec.i_values, spec.replications, base_seed, modes, args.threads)
                )
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    emit_csv(records, csv_path)
    print(f"wrote {csv_path}")
    # summarize only groups that produced at least one complete cycle; a group
    # with none has no throughput estimate and is reported via the budget check
    with_complete = {(r.mode, r.channel, r.k, r.i) for r in records if r.complete}
    summarizable = [r for r in records if (r.mode, r.channel, r.k, r.i) in with_complete]
    for row in summarize(summarizable) if summarizable else []:
        pt = row.point
        print(
            f"{row.mode:8s} {row.channel:9s} I={pt.i:<5d} K={pt.k:<6d} "
            f"mean M={pt.mean_m:7.3f}  P={pt.p:.4f} +/- {pt.ci95:.4f} "
            f"({row.n_complete} complete, {row.n_incomplete} incomplete)"
        )
    incomplete = sum(1 for r in records if not r.complete)
    if incomplete > spec.incomplete_budget:
        print(
            f"error: {incomplete} incomplete cycles exceed the budget of {spec.incomplete_budget}",
            file=sys.stderr,
        )
        return 2
    return 0


def _run_traced(cfg, spec, modes, base_seed):
    """Single-threaded run that streams inter-frame detection traces to stderr."""
    records = []
    for i in spec.i_values:
        for rep in range(spec.replications):
            for mode in modes:
                seed = derive_cycle_seed(base_seed, i, rep)
                population = generate_population(i, seed)
                trace: list = []
                sim = CycleSimulator(cfg, population, seed, mode, trace=trace)
                result = sim.run()
                for iteration, direction, r, tag in trace:
                    print(
                        f"trace: I={i} rep={rep} mode={mode} tau={iteration} {direction} r={r} tag={tag:032x}",
                        file=sys.stderr,
                    )
                from .runner import CycleRecord

                records.append(
                    CycleRecord(
                        mode=mode,
                        channel=cfg.channel.kind,
                        k=cfg.k,
                        i=i,
                        replication=rep,
                        seed=seed,
                        m=result.m,
                        complete=result.complete,
                        residual_trace=result.residual_trace,
                    )
                )
    records.sort(key=lambda rec: (rec.i, rec.replication, rec.mode))
    return records


def _cmd_plot(args) -> int:
    try:
        records = read_csv(args.csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not records:
        print("error: CSV holds no records", file=sys.stderr)
        return 1
    prefix = args.out_prefix
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    for path in emit_plots(records, prefix):
        print(f"wrote {path}")
    return 0


def _cmd_golden(args) -> int:
    if not 0 <= args.interleaver_seed < 2**64:
        print("error: interleaver seed outside the 64-bit range", file=sys.stderr)
        return 1
    if args.action == "emit":
        records = golden_records(args.count, args.seed, args.interleaver_seed)
        write_golden(args.path, records)
        print(f"wrote {len(records)} golden vectors to {args.path}")
        return 0
    try:
        mismatches = verify_golden(args.path, args.interleaver_seed)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if mismatches:
        for line in mismatches:
            print(f"mismatch: {line}", file=sys.stderr)
        return 1
    print(f"{args.path}: all vectors verified")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsaloha",
        description="Framed slotted Aloha inventory simulator with inter-frame interference cancellation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a spec file and write results.csv")
    p_run.add_argument("spec", help="flat key = value experiment file")
    p_run.add_argument("--out-dir", default=None, help="output directory (default: out_dir from the experiment file)")
    p_run.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p_run.add_argument("--modes", default=None, help="comma list overriding the experiment file modes")
    p_run.add_argument(
        "--channel",
        choices=["rayleigh", "rician", "both"],
        default=None,
        help="override the experiment file channel; 'both' runs the two fading models",
    )
    p_run.add_argument("--seed", type=int, default=None, help="override the experiment file base seed")
    p_run.add_argument(
        "--isic-trace",
        action="store_true",
        help="stream inter-frame detection traces to stderr (forces one thread)",
    )
    p_run.set_defaults(func=_cmd_run)

    p_plot = sub.add_parser("plot", help="render the summary figures from a results CSV")
    p_plot.add_argument("csv", help="results.csv written by the run command")
    p_plot.add_argument("--out-prefix", default="figs/", help="path prefix for the SVG files")
    p_plot.set_defaults(func=_cmd_plot)

    p_gold = sub.add_parser("golden", help="emit or verify slot-selection golden vectors")
    p_gold.add_argument("action", choices=["emit", "verify"])
    p_gold.add_argument("path", help="golden vector file")
    p_gold.add_argument("--count", type=int, default=128, help="records to emit (default 128)")
    p_gold.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="emission seed")
    p_gold.add_argument(
        "--interleaver-seed",
        type=lambda s: int(s, 0),
        default=None,
        help="interleaver seed (default: the protocol default)",
    )
    p_gold.set_defaults(func=_cmd_golden)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "golden":
        from .slothash import DEFAULT_GOLDEN_SEED
        from .model import DEFAULT_INTERLEAVER_SEED

        if args.seed is None:
            args.seed = DEFAULT_GOLDEN_SEED
        if args.interleaver_seed is None:
            args.interleaver_seed = DEFAULT_INTERLEAVER_SEED
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
