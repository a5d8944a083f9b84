"""Command-line entry points.

Subcommands: extract-window, simulate, sweep, bench, gen-synthetic. All
simulation outputs (CSV, traces, figures) land in the configured output
directory together with a metadata file carrying seed, config hash and
package version.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, coordinator, figures, fixtures, metrics, synth
from .als import ChunkPolicy
from .bls import BlsPolicy
from .config import ConfigError, ExperimentConfig, apply_kv, load_config_file
from .swf import SwfParseError, densest_window, parse_swf, serialize_swf
from .taskgen import GenConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3


def _load_workload(cfg: ExperimentConfig):
    if cfg.workload_path is not None:
        with open(cfg.workload_path) as fh:
            workload = parse_swf(fh)
    else:
        workload = synth.generate_workload(cfg.synthetic_jobs, cfg.seed)
    if cfg.window_hours is not None:
        workload, _ = densest_window(workload, round(cfg.window_hours * 3600))
    return workload


def _write_metadata(cfg: ExperimentConfig, path: str, extra: dict | None = None) -> None:
    meta = {
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "version": __version__,
    }
    if extra:
        meta.update(extra)
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if getattr(args, "config", None):
        cfg = load_config_file(args.config, cfg)
    for key in (
        "workload",
        "jobs",
        "window_hours",
        "hosts",
        "cores_per_host",
        "host_peak_gflops",
        "bls",
        "als",
        "upsilon",
        "seed",
        "chunk_overhead_seconds",
        "edf_deadline_factor",
        "output_dir",
    ):
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            apply_kv(cfg, key, str(value))
    if getattr(args, "parallel", False):
        cfg.parallel = True
    if getattr(args, "no_plots", False):
        cfg.plots = False
    return cfg


def cmd_extract_window(args) -> int:
    with open(args.input) as fh:
        workload = parse_swf(fh)
    window, start = densest_window(workload, round(args.hours * 3600))
    with open(args.out, "w") as fh:
        serialize_swf(window, fh)
    print(f"{len(window.records)} jobs in densest {args.hours:g} h window "
          f"starting at t={start} s -> {args.out}")
    return EXIT_OK


def _run_single(cfg: ExperimentConfig):
    spec = cfg.platform()
    bls = cfg.bls_policies()[0]
    als_policy = cfg.als_policies()[0]
    upsilon = cfg.upsilon_list[0]
    gen_cfg = GenConfig(upsilon=upsilon, seed=cfg.seed)
    if getattr(cfg, "_fixture", None) == fixtures.SCENARIO42_NAME:
        spec = fixtures.scenario42_platform()
        jobs = fixtures.scenario42_jobs()
    else:
        workload = _load_workload(cfg)
        jobs = list(
            coordinator.build_jobs(
                list(workload.records), spec, gen_cfg, cfg.edf_deadline_factor
            )
        )
    report, trace = coordinator.run(
        jobs,
        spec,
        bls,
        als_policy,
        gen_cfg,
        overhead_s=cfg.chunk_overhead_seconds,
        parallel=cfg.parallel,
    )
    return spec, report, trace


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    if args.fixture:
        cfg._fixture = args.fixture
        if args.fixture != fixtures.SCENARIO42_NAME:
            raise ConfigError(f"unknown fixture {args.fixture!r}")
    else:
        cfg.validate()
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    spec, report, trace = _run_single(cfg)
    with open(os.path.join(out, "metrics.csv"), "w") as fh:
        metrics.write_metrics_csv([report], fh)
    with open(os.path.join(out, "trace.txt"), "w") as fh:
        metrics.export_timeline_text(trace, fh)
    meta = {
        "combo": list(report.combo),
        "platform": {
            "hosts": spec.hosts,
            "cores_per_host": spec.cores_per_host,
            "host_peak_gflops": spec.host_peak_gflops,
        },
    }
    with open(os.path.join(out, "trace.json"), "w") as fh:
        metrics.export_timeline_json(trace, fh, metadata={"seed": cfg.seed, **meta})
    _write_metadata(cfg, os.path.join(out, "metadata.json"), meta)
    if report.unschedulable:
        with open(os.path.join(out, "unschedulable.txt"), "w") as fh:
            fh.write("\n".join(str(i) for i in report.unschedulable) + "\n")
        print(
            f"warning: {len(report.unschedulable)} jobs request more cores than "
            f"the cluster owns; see unschedulable.txt",
            file=sys.stderr,
        )
    if cfg.plots:
        figures.plot_timeline(trace, os.path.join(out, "timeline.png"))
    print(f"makespan: {report.makespan_s:.6f} s over {len(report.per_job)} jobs")
    if args.fixture:
        print("job  arrival_s  start_s  finish_s")
        for job_id in sorted(report.per_job):
            t = report.per_job[job_id]
            print(f"{job_id:>3}  {t.arrival_s:>9.3f}  {t.start_s:>7.3f}  {t.finish_s:>8.3f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    if args.ratio and 0.0 not in cfg.upsilon_list:
        cfg.upsilon_list = [0.0] + cfg.upsilon_list
    cfg.validate()
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    spec = cfg.platform()
    workload = _load_workload(cfg)
    results = coordinator.run_grid(
        list(workload.records),
        spec,
        cfg.bls_policies(),
        cfg.als_policies(),
        cfg.upsilon_list,
        cfg.seed,
        overhead_s=cfg.chunk_overhead_seconds,
        edf_deadline_factor=cfg.edf_deadline_factor,
        parallel=cfg.parallel,
    )
    rows = sorted((r for r, _ in results), key=lambda r: r.combo)
    ratios = None
    if args.ratio:
        baseline = {r.combo[:2]: r.makespan_s for r in rows if r.combo[2] == 0.0}
        ratios = [
            metrics.makespan_ratio(r.makespan_s, baseline[r.combo[:2]]) for r in rows
        ]
    with open(os.path.join(out, "sweep.csv"), "w") as fh:
        metrics.write_metrics_csv(rows, fh, ratios)
    _write_metadata(cfg, os.path.join(out, "metadata.json"), {"rows": len(rows)})
    if cfg.plots:
        figures.plot_makespan_bars(rows, os.path.join(out, "makespan.png"))
        if ratios is not None:
            figures.plot_ratio_bars(rows, ratios, os.path.join(out, "ratio.png"))
    print(f"{len(rows)} rows -> {os.path.join(out, 'sweep.csv')}")
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    ladder = [int(v) for v in args.ladder.split(",")]
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    spec = cfg.platform()
    rows = []
    # The paper's worst-performing combination stresses the simulator most.
    gen = dict(bls=BlsPolicy.FCFS, als_policy=ChunkPolicy.STATIC)
    for n in ladder:
        times = []
        for rep in range(args.reps):
            workload = synth.generate_workload(n, cfg.seed + rep)
            gen_cfg = GenConfig(upsilon=0.25, seed=cfg.seed + rep)
            jobs = list(
                coordinator.build_jobs(list(workload.records), spec, gen_cfg)
            )
            t0 = time.perf_counter()
            coordinator.run(jobs, spec, gen["bls"], gen["als_policy"], gen_cfg,
                            parallel=cfg.parallel)
            times.append(time.perf_counter() - t0)
        rows.append(
            {
                "jobs": n,
                "min_s": min(times),
                "avg_s": sum(times) / len(times),
                "max_s": max(times),
            }
        )
        print(f"{n:>7} jobs: min {rows[-1]['min_s']:.3f}  avg {rows[-1]['avg_s']:.3f}  "
              f"max {rows[-1]['max_s']:.3f} s")
    r2 = float("nan")
    if len(rows) >= 2:
        xs = np.array([r["jobs"] for r in rows], dtype=float)
        ys = np.array([r["avg_s"] for r in rows], dtype=float)
        slope, intercept = np.polyfit(xs, ys, 1)
        pred = slope * xs + intercept
        ss_res = float(np.sum((ys - pred) ** 2))
        ss_tot = float(np.sum((ys - ys.mean()) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
        print(f"linear fit of wall time vs jobs: R^2 = {r2:.4f}")
    with open(os.path.join(out, "bench.csv"), "w") as fh:
        fh.write("jobs,min_s,avg_s,max_s\n")
        for r in rows:
            fh.write(f"{r['jobs']},{r['min_s']:.6f},{r['avg_s']:.6f},{r['max_s']:.6f}\n")
    _write_metadata(cfg, os.path.join(out, "metadata.json"),
                    {"ladder": ladder, "reps": args.reps, "r_squared": r2})
    if cfg.plots:
        figures.plot_bench(rows, os.path.join(out, "bench.png"))
    return EXIT_OK


def cmd_gen_synthetic(args) -> int:
    workload = synth.generate_workload(
        args.jobs,
        args.seed,
        mean_interarrival_s=args.mean_interarrival,
        runtime_median_s=args.runtime_median,
        max_cores=args.max_cores,
    )
    with open(args.out, "w") as fh:
        serialize_swf(workload, fh)
    print(f"{args.jobs} synthetic jobs -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualsim",
        description="Two-level (batch + application) cluster scheduling simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract-window", help="extract the densest arrival window")
    p.add_argument("--in", dest="input", required=True, help="input SWF file")
    p.add_argument("--hours", type=float, default=24.0)
    p.add_argument("--out", required=True, help="output SWF file")
    p.set_defaults(func=cmd_extract_window)

    def add_common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--workload", help="input SWF file")
        p.add_argument("--jobs", type=int, help="synthetic workload size")
        p.add_argument("--window-hours", type=float, help="densest-window pre-filter")
        p.add_argument("--hosts", type=int)
        p.add_argument("--cores-per-host", type=int)
        p.add_argument("--host-peak-gflops", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--chunk-overhead-seconds", type=float)
        p.add_argument("--edf-deadline-factor", type=float)
        p.add_argument("--output-dir", "--out-dir", dest="output_dir")
        p.add_argument("--parallel", action="store_true")
        p.add_argument("--no-plots", action="store_true")

    p = sub.add_parser("simulate", help="run one BLS-ALS combination")
    add_common(p)
    p.add_argument("--bls", choices=[b.value for b in BlsPolicy])
    p.add_argument("--als", choices=[a.value for a in ChunkPolicy])
    p.add_argument("--upsilon", type=float)
    p.add_argument("--fixture", help="named reference scenario (scenario42)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a BLS x ALS x upsilon grid")
    add_common(p)
    p.add_argument("--bls", help="comma-separated BLS list")
    p.add_argument("--als", help="comma-separated ALS list")
    p.add_argument("--upsilon", help="comma-separated upsilon list")
    p.add_argument("--ratio", action="store_true",
                   help="add a makespan ratio column against the upsilon=0 baseline")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="scaling benchmark over a job-count ladder")
    add_common(p)
    p.add_argument("--ladder", default="10,100,1000,10000")
    p.add_argument("--reps", type=int, default=10)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-synthetic", help="write a synthetic SWF workload")
    p.add_argument("--jobs", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--mean-interarrival", type=float, default=30.0)
    p.add_argument("--runtime-median", type=float, default=120.0)
    p.add_argument("--max-cores", type=int, default=64)
    p.set_defaults(func=cmd_gen_synthetic)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SwfParseError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
