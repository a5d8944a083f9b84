"""Job-length estimation and per-task length synthesis.

SWF records carry no application-level detail, so each job's internal tasks
are synthesized: the job length in GFLOP is estimated from the requested
cores and runtime, then split into tasks whose lengths follow a normal
distribution with mean LJ/cores and standard deviation mean * upsilon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import ClusterSpec, core_rate
from .model import SimJob, Task, check_variation_factor, to_us
from .swf import JobRecord

_DRAW_BATCH = 64


@dataclass(frozen=True)
class GenConfig:
    upsilon: float = 0.0
    seed: int = 0
    distribution: str = "normal"

    def __post_init__(self):
        check_variation_factor(self.upsilon)
        if self.distribution != "normal":
            raise ValueError(f"unsupported distribution {self.distribution!r}")


def job_rng(seed: int, job_id: int) -> np.random.Generator:
    """Counter-based RNG stream keyed by (global seed, job id).

    Per-job keying makes task synthesis independent of simulation order,
    which the coordinator's parallel mode relies on.
    """
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), job_id]))


def estimate_job_length(rec: JobRecord, spec: ClusterSpec) -> float:
    """Job length in GFLOP: requested cores x per-core rate x run time."""
    if rec.run_time <= 0:
        raise ValueError(f"job {rec.job_number}: unusable record (run_time <= 0)")
    cores = rec.effective_processors
    if cores <= 0:
        raise ValueError(f"job {rec.job_number}: unusable record (no processor count)")
    return cores * core_rate(spec) * rec.run_time


def synthesize_tasks(length: float, cores: int, cfg: GenConfig, job_id: int) -> tuple[Task, ...]:
    """Split a job length into tasks.

    upsilon = 0 yields exactly `cores` identical tasks. upsilon > 0 draws
    i.i.d. Normal(mu, mu*upsilon) lengths (redrawing non-positive values)
    and accumulates until the total reaches the length estimate; the final
    overshooting task is kept whole.
    """
    if length <= 0:
        raise ValueError("job length must be > 0")
    if cores < 1:
        raise ValueError("cores must be >= 1")
    mu = length / cores
    if cfg.upsilon == 0:
        return tuple(Task(index=k, length=mu) for k in range(cores))
    rng = job_rng(cfg.seed, job_id)
    sigma = mu * cfg.upsilon
    lengths: list[float] = []
    total = 0.0
    while total < length:
        for draw in rng.normal(mu, sigma, size=_DRAW_BATCH):
            if draw <= 0:
                continue
            lengths.append(draw)
            total += draw
            if total >= length:
                break
    return tuple(Task(index=k, length=v) for k, v in enumerate(lengths))


def build_jobs(
    records: list[JobRecord],
    spec: ClusterSpec,
    cfg: GenConfig,
    edf_deadline_factor: float = 2.0,
) -> tuple[SimJob, ...]:
    """Turn usable, non-cancelled SWF records into simulation-ready jobs.

    Job ids are ordinals in arrival order. SWF has no deadline field, so
    EDF deadlines are synthesized as arrival + factor * requested runtime.
    """
    from .swf import STATUS_CANCELLED

    jobs: list[SimJob] = []
    for rec in sorted(records, key=lambda r: r.submit_time):
        if not rec.usable or rec.status == STATUS_CANCELLED:
            continue
        job_id = len(jobs)
        length = estimate_job_length(rec, spec)
        cores = rec.effective_processors
        tasks = synthesize_tasks(length, cores, cfg, job_id)
        runtime = float(rec.effective_runtime)
        jobs.append(
            SimJob(
                id=job_id,
                arrival_us=to_us(rec.submit_time),
                requested_cores=cores,
                requested_runtime_s=runtime,
                job_length=length,
                tasks=tasks,
                deadline_us=to_us(rec.submit_time + edf_deadline_factor * runtime),
            )
        )
    return tuple(jobs)
