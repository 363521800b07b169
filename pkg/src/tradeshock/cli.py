"""Command-line front end.

Subcommands:

- ingest      per-year network summaries from a trade-flow file
- efficiency  raw and normalized network efficiency per year
- rank        top elements under an influence indicator
- impact      most damaging single-element removals
- simulate    batches of shock-recovery scenarios, written to an output dir

`simulate` accepts either a JSON manifest or flags, runs every
(year, scenario) combination — optionally across worker threads — and
writes one trajectory CSV per run plus a combined report table and a
machine-readable summary. All output is deterministic for a fixed input
and master seed: scenario seeds are derived from the run id, floats are
serialized with full round-trip precision, and rows are sorted.

Exit codes: 0 on success, 1 for bad input or arguments, 2 when one or
more scenarios fail at runtime (completed runs are still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
import zlib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .centrality import IndicatorKind, rank_edges, rank_nodes
from .efficiency import network_efficiency
from .ingest import FLOWS, ParseReport, TradeFileError, parse_trade_file, build_yearly_networks
from .network import TradeNetwork
from .resilience import summarize
from .simulation import (
    Phase,
    RecoveryOrder,
    ScenarioConfig,
    TargetKind,
    rank_by_impact,
    run_random_control,
    run_shock_recovery,
)

_REPORT_HEADER = (
    "year",
    "indicator",
    "target_kind",
    "R",
    "LONE_DS",
    "LONE_RS",
    "Resilience",
    "NE0",
)
_TRAJECTORY_HEADER = ("run_id", "year", "indicator", "target_kind", "t", "phase", "NE", "NE_std")


def _fmt(x: float) -> str:
    """Full round-trip float formatting so reruns are byte-identical."""
    return repr(float(x))


def _parse_years(spec: str | None, available: Sequence[int]) -> list[int]:
    if spec is None or spec.strip().lower() == "all":
        return list(available)
    chosen: list[int] = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if "-" in token:
            lo_text, _, hi_text = token.partition("-")
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"bad year range {token!r}")
            chosen.extend(range(lo, hi + 1))
        else:
            chosen.append(int(token))
    known = set(available)
    missing = sorted(set(chosen) - known)
    if missing:
        raise ValueError(
            f"no data for year(s) {', '.join(map(str, missing))}; "
            f"available: {', '.join(map(str, available))}"
        )
    return sorted(set(chosen))


def _load_networks(path: str, flow: str) -> tuple[dict[int, TradeNetwork], ParseReport]:
    report = parse_trade_file(path)
    return build_yearly_networks(report.records, flow=flow), report


def _print_diagnostics(report: ParseReport, path: str) -> None:
    print(
        f"{path}: {len(report.records)} records parsed, "
        f"{len(report.row_errors)} malformed rows, "
        f"{report.zero_value_rows} zero-value rows dropped",
        file=sys.stderr,
    )
    for lineno, message in report.row_errors:
        print(f"{path}:{lineno}: {message}", file=sys.stderr)


def cmd_ingest(args: argparse.Namespace) -> int:
    networks, report = _load_networks(args.input, args.flow)
    if args.summary:
        _print_diagnostics(report, args.input)
    years = _parse_years(args.years, sorted(networks))
    writer = csv.writer(sys.stdout)
    writer.writerow(("year", "n_economies", "n_relationships", "total_volume", "density"))
    for year in years:
        stats = networks[year].stats()
        writer.writerow(
            (
                year,
                stats.n_nodes,
                stats.n_edges,
                _fmt(stats.total_volume),
                _fmt(stats.density),
            )
        )
    return 0


def cmd_efficiency(args: argparse.Namespace) -> int:
    networks, _ = _load_networks(args.input, args.flow)
    years = _parse_years(args.years, sorted(networks))
    writer = csv.writer(sys.stdout)
    writer.writerow(("year", "raw_efficiency", "mean_edge_weight", "normalized_efficiency"))
    for year in years:
        result = network_efficiency(networks[year])
        writer.writerow(
            (
                year,
                _fmt(result.raw_efficiency),
                _fmt(result.reference_mean_weight),
                _fmt(result.normalized_efficiency),
            )
        )
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    networks, _ = _load_networks(args.input, args.flow)
    years = _parse_years(args.years, sorted(networks))
    if len(years) != 1:
        raise ValueError("rank works on exactly one year; pass --years")
    net = networks[years[0]]
    kind = IndicatorKind(args.indicator)
    writer = csv.writer(sys.stdout)
    if kind is IndicatorKind.edge_weight:
        ranking = rank_edges(net, kind, seed=args.seed)
        writer.writerow(("rank", "source", "target", "weight"))
        for pos, ((source, target), score) in enumerate(
            zip(ranking.ordered_items[: args.top], ranking.scores), start=1
        ):
            writer.writerow((pos, source, target, _fmt(score)))
    else:
        ranking = rank_nodes(net, kind, seed=args.seed)
        writer.writerow(("rank", "economy", "score"))
        for pos, (code, score) in enumerate(
            zip(ranking.ordered_items[: args.top], ranking.scores), start=1
        ):
            writer.writerow((pos, code, _fmt(score)))
    return 0


def cmd_impact(args: argparse.Namespace) -> int:
    networks, _ = _load_networks(args.input, args.flow)
    years = _parse_years(args.years, sorted(networks))
    if len(years) != 1:
        raise ValueError("impact works on exactly one year; pass --years")
    net = networks[years[0]]
    kind = TargetKind(args.target)
    ranked = rank_by_impact(net, kind, args.top)
    writer = csv.writer(sys.stdout)
    if kind is TargetKind.nodes:
        writer.writerow(("rank", "economy", "impact"))
        for pos, (code, impact) in enumerate(ranked, start=1):
            writer.writerow((pos, code, _fmt(impact)))
    else:
        writer.writerow(("rank", "source", "target", "impact"))
        for pos, ((source, target), impact) in enumerate(ranked, start=1):
            writer.writerow((pos, source, target, _fmt(impact)))
    return 0


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _scenario_config(spec: dict, run_seed: int) -> ScenarioConfig:
    return ScenarioConfig(
        target_kind=TargetKind(spec["target_kind"]),
        indicator=IndicatorKind(spec["indicator"]),
        batch_fraction=float(spec.get("batch_fraction", 0.01)),
        shock_depth=float(spec.get("shock_depth", 0.5)),
        recovery_order=RecoveryOrder(spec.get("recovery_order", "shock_order")),
        replicates=int(spec.get("replicates", 20)),
        master_seed=run_seed,
        recompute_rankings=bool(spec.get("recompute_rankings", False)),
    )


def _run_one(
    run_id: str, year: int, net: TradeNetwork, config: ScenarioConfig, out_dir: Path
) -> dict:
    if config.indicator is IndicatorKind.random:
        control = run_random_control(net, config)
        trajectory = control.mean
        spread: Sequence[float] | None = control.std
    else:
        trajectory = run_shock_recovery(net, config)
        spread = None

    rows = [",".join(_TRAJECTORY_HEADER)]
    for k, step in enumerate(trajectory.steps):
        std_text = _fmt(spread[k]) if spread is not None else ""
        rows.append(
            f"{run_id},{year},{config.indicator.value},{config.target_kind.value},"
            f"{step.t},{step.phase.value},{_fmt(step.ne)},{std_text}"
        )
    _write_atomic(out_dir / "trajectories" / f"{run_id}.csv", "\n".join(rows) + "\n")

    report = summarize(trajectory)
    return {
        "run_id": run_id,
        "year": year,
        "indicator": config.indicator.value,
        "target_kind": config.target_kind.value,
        "R": report.r,
        "LONE_DS": report.lone_ds,
        "LONE_RS": report.lone_rs,
        "Resilience": report.resilience,
        "NE0": report.ne0,
    }


def _load_manifest(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        manifest = json.load(handle)
    if not isinstance(manifest, dict):
        raise ValueError("manifest must be a JSON object")
    for key in ("input", "output_dir", "scenarios"):
        if key not in manifest:
            raise ValueError(f"manifest is missing {key!r}")
    if not isinstance(manifest["scenarios"], list) or not manifest["scenarios"]:
        raise ValueError("manifest needs a non-empty scenarios list")
    return manifest


def _manifest_from_flags(args: argparse.Namespace) -> dict:
    if args.input is None or args.output_dir is None:
        raise ValueError("simulate needs --input and --output-dir (or --manifest)")
    indicators = [token.strip() for token in args.indicators.split(",") if token.strip()]
    if not indicators:
        raise ValueError("no indicators given")
    scenarios = []
    for name in indicators:
        scenarios.append(
            {
                "target_kind": args.target,
                "indicator": name,
                "batch_fraction": args.batch_fraction,
                "shock_depth": args.shock_depth,
                "recovery_order": args.recovery_order,
                "replicates": args.replicates,
                "recompute_rankings": args.recompute_rankings,
            }
        )
    return {
        "input": args.input,
        "flow": args.flow,
        "years": args.years if args.years else "all",
        "output_dir": args.output_dir,
        "master_seed": args.seed,
        "jobs": args.jobs,
        "scenarios": scenarios,
    }


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.manifest is not None:
        manifest = _load_manifest(args.manifest)
    else:
        manifest = _manifest_from_flags(args)

    flow = manifest.get("flow", "import")
    if flow not in FLOWS:
        raise ValueError(f"flow must be one of {sorted(FLOWS)}, got {flow!r}")
    master_seed = int(manifest.get("master_seed", 0))
    jobs = int(manifest.get("jobs", 1))
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    out_dir = Path(manifest["output_dir"])

    networks, _ = _load_networks(str(manifest["input"]), flow)
    years_field = manifest.get("years", "all")
    if isinstance(years_field, list):
        years_text: str | None = ",".join(str(y) for y in years_field)
    else:
        years_text = str(years_field)
    years = _parse_years(years_text, sorted(networks))

    # Validate every scenario before running any, so bad arguments exit 1.
    tasks: list[tuple[str, int, ScenarioConfig]] = []
    seen: set[str] = set()
    for spec in manifest["scenarios"]:
        for year in years:
            kind = TargetKind(spec["target_kind"])
            indicator = IndicatorKind(spec["indicator"])
            run_id = f"{year}_{kind.value}_{indicator.value}"
            if run_id in seen:
                raise ValueError(f"duplicate scenario {run_id}")
            seen.add(run_id)
            run_seed = int(
                np.random.SeedSequence(
                    [master_seed, zlib.crc32(run_id.encode("ascii"))]
                ).generate_state(1)[0]
            )
            tasks.append((run_id, year, _scenario_config(spec, run_seed)))

    results: list[dict] = []
    failures: list[tuple[str, str]] = []

    def execute(task: tuple[str, int, ScenarioConfig]) -> dict:
        run_id, year, config = task
        return _run_one(run_id, year, networks[year], config, out_dir)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for task, outcome in zip(tasks, pool.map(_guarded(execute), tasks)):
            if isinstance(outcome, Exception):
                failures.append((task[0], str(outcome)))
            else:
                results.append(outcome)

    results.sort(key=lambda row: (row["year"], row["indicator"], row["target_kind"]))
    lines = [",".join(_REPORT_HEADER)]
    for row in results:
        lines.append(
            f"{row['year']},{row['indicator']},{row['target_kind']},"
            f"{_fmt(row['R'])},{_fmt(row['LONE_DS'])},{_fmt(row['LONE_RS'])},"
            f"{_fmt(row['Resilience'])},{_fmt(row['NE0'])}"
        )
    _write_atomic(out_dir / "reports.csv", "\n".join(lines) + "\n")

    by_year: dict[str, list[dict]] = {}
    for row in results:
        by_year.setdefault(str(row["year"]), []).append(row)
    summary = {
        "input": str(manifest["input"]),
        "flow": flow,
        "master_seed": master_seed,
        "years": by_year,
    }
    _write_atomic(out_dir / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")

    for run_id, message in failures:
        print(f"scenario {run_id} failed: {message}", file=sys.stderr)
    return 2 if failures else 0


def _guarded(fn):
    def wrapper(task):
        try:
            return fn(task)
        except Exception as exc:  # noqa: BLE001 - reported per scenario
            return exc

    return wrapper


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tradeshock",
        description="Shock-recovery resilience analysis of trade networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", "-i", required=True, help="trade-flow CSV (optionally .gz)")
        p.add_argument("--flow", choices=sorted(FLOWS), default="import")
        p.add_argument("--years", help="'all', a year, '2001,2008', or '1988-1992'")

    p_ingest = sub.add_parser("ingest", help="per-year network summaries")
    add_io(p_ingest)
    p_ingest.add_argument(
        "--summary", action="store_true", help="print parse diagnostics to stderr"
    )
    p_ingest.set_defaults(func=cmd_ingest)

    p_eff = sub.add_parser("efficiency", help="network efficiency per year")
    add_io(p_eff)
    p_eff.set_defaults(func=cmd_efficiency)

    p_rank = sub.add_parser("rank", help="top elements by an influence indicator")
    add_io(p_rank)
    # Validated by IndicatorKind() so an unknown name exits 1, not a usage error.
    p_rank.add_argument("--indicator", required=True, metavar="INDICATOR")
    p_rank.add_argument("--top", type=int, default=10)
    p_rank.add_argument("--seed", type=int, default=0)
    p_rank.set_defaults(func=cmd_rank)

    p_impact = sub.add_parser("impact", help="most damaging single removals")
    add_io(p_impact)
    p_impact.add_argument("--target", choices=[k.value for k in TargetKind], default="nodes")
    p_impact.add_argument("--top", type=int, default=10)
    p_impact.set_defaults(func=cmd_impact)

    p_sim = sub.add_parser("simulate", help="run shock-recovery scenarios")
    p_sim.add_argument("--manifest", help="JSON scenario manifest (overrides other flags)")
    p_sim.add_argument("--input", "-i", help="trade-flow CSV (optionally .gz)")
    p_sim.add_argument("--flow", choices=sorted(FLOWS), default="import")
    p_sim.add_argument("--years", help="'all', a year, '2001,2008', or '1988-1992'")
    p_sim.add_argument("--output-dir", "-o")
    p_sim.add_argument("--target", choices=[k.value for k in TargetKind], default="nodes")
    p_sim.add_argument(
        "--indicators",
        default="out_degree",
        help="comma-separated indicator names, one scenario each",
    )
    p_sim.add_argument("--batch-fraction", type=float, default=0.01)
    p_sim.add_argument("--shock-depth", type=float, default=0.5)
    p_sim.add_argument(
        "--recovery-order",
        choices=[o.value for o in RecoveryOrder],
        default="shock_order",
    )
    p_sim.add_argument("--replicates", type=int, default=20)
    p_sim.add_argument("--recompute-rankings", action="store_true")
    p_sim.add_argument("--seed", type=int, default=0, help="master seed")
    p_sim.add_argument("--jobs", type=int, default=1, help="parallel scenario workers")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TradeFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
