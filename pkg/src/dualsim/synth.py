"""Synthetic SWF workload generator.

Ships so experiments and tests are self-contained without Parallel Workload
Archive logs: Poisson arrivals, log-normal runtimes, power-of-two core
requests.
"""

from __future__ import annotations

import numpy as np

from .swf import JobRecord, WorkloadFile


def generate_workload(
    n_jobs: int,
    seed: int,
    mean_interarrival_s: float = 30.0,
    runtime_median_s: float = 120.0,
    runtime_sigma: float = 1.0,
    max_cores: int = 64,
) -> WorkloadFile:
    """Generate `n_jobs` synthetic SWF records, deterministic per seed."""
    if n_jobs < 1:
        raise ValueError("need at least one job")
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), 0x5711]))
    gaps = rng.exponential(mean_interarrival_s, size=n_jobs)
    submits = np.floor(np.cumsum(gaps)).astype(int)
    submits[0] = 0
    runtimes = np.maximum(
        1, np.rint(rng.lognormal(np.log(runtime_median_s), runtime_sigma, size=n_jobs))
    ).astype(int)
    max_exp = int(np.log2(max_cores))
    cores = 2 ** rng.integers(0, max_exp + 1, size=n_jobs)
    records = []
    for i in range(n_jobs):
        records.append(
            JobRecord(
                job_number=i + 1,
                submit_time=int(submits[i]),
                wait_time=-1,
                run_time=int(runtimes[i]),
                allocated_processors=int(cores[i]),
                average_cpu_time=-1,
                used_memory=-1,
                requested_processors=int(cores[i]),
                requested_time=int(runtimes[i] * 2),
                requested_memory=-1,
                status=1,
                user_id=int(rng.integers(1, 50)),
                group_id=-1,
                executable=-1,
                queue=-1,
                partition=-1,
                preceding_job=-1,
                think_time=-1,
            )
        )
    header = (
        "; Synthetic workload",
        f"; Jobs: {n_jobs}  Seed: {seed}",
    )
    return WorkloadFile(header, tuple(records))
