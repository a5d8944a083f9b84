"""The connection layer: a global event loop coupling both scheduling levels.

Arrivals feed the batch-level queue; every dispatch launches a per-job
application-level simulation whose completion report is injected back into
the event queue at its finish time. Completions at a given instant are
processed before arrivals at the same instant so freed cores are visible
to same-time dispatch decisions.
"""

from __future__ import annotations

import enum
import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import als
from .als import ChunkPolicy
from .bls import BlsPolicy, JobQueue
from .cluster import ClusterSpec, CoreLedger, core_rate
from .metrics import MetricsReport, TraceEvent, build_metrics, merge_traces
from .model import Allocation, CompletionReport, SimJob
from .taskgen import GenConfig, build_jobs
from .swf import JobRecord


class EventKind(enum.IntEnum):
    # Completion ranks before arrival at equal times.
    JOB_COMPLETION = 0
    JOB_ARRIVAL = 1


@dataclass(order=True)
class Event:
    time_us: int
    kind: EventKind
    sequence: int
    payload: object = field(compare=False)


def worker_limit() -> int:
    """Worker pool bound: DUALSIM_THREADS env var, else the CPU count."""
    env = os.environ.get("DUALSIM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run(
    jobs: list[SimJob],
    spec: ClusterSpec,
    bls: BlsPolicy,
    als_policy: ChunkPolicy,
    cfg: GenConfig,
    overhead_s: float = 0.0,
    parallel: bool = False,
) -> tuple[MetricsReport, list[TraceEvent]]:
    """Simulate a batch of jobs to completion and aggregate the results.

    `parallel` runs each dispatch batch's job simulations on a worker pool;
    simulations are pure functions, so results are bit-identical to the
    sequential mode.
    """
    if not jobs:
        raise ValueError("no jobs")
    rate = core_rate(spec)
    ledger = CoreLedger(spec)
    queue = JobQueue(bls)
    events: list[Event] = []
    seq = 0
    unschedulable: list[int] = []
    by_id = {j.id: j for j in jobs}

    for job in jobs:
        if job.requested_cores > spec.total_cores:
            unschedulable.append(job.id)
            continue
        heapq.heappush(events, Event(job.arrival_us, EventKind.JOB_ARRIVAL, seq, job))
        seq += 1
    if not by_id.keys() - set(unschedulable):
        raise ValueError("no schedulable jobs")

    running: dict[int, Allocation] = {}
    reports: dict[int, CompletionReport] = {}
    allocations: dict[int, Allocation] = {}
    pool = ThreadPoolExecutor(max_workers=worker_limit()) if parallel else None

    def simulate_batch(granted: list[Allocation]) -> list[CompletionReport]:
        args = [(by_id[a.job_id], a) for a in granted]
        if pool is not None and len(args) > 1:
            futures = [
                pool.submit(als.simulate_job, j, a, als_policy, rate, overhead_s)
                for j, a in args
            ]
            batch = [f.result() for f in futures]
        else:
            batch = [
                als.simulate_job(j, a, als_policy, rate, overhead_s) for j, a in args
            ]
        return sorted(batch, key=lambda r: r.job_id)

    clock_us = 0
    try:
        while events:
            ev = heapq.heappop(events)
            assert ev.time_us >= clock_us, "event clock went backwards"
            clock_us = ev.time_us
            if ev.kind is EventKind.JOB_ARRIVAL:
                queue.push(ev.payload)
            else:
                report: CompletionReport = ev.payload
                ledger.release(running.pop(report.job_id))
                reports[report.job_id] = report
            granted = queue.dispatch(ledger, clock_us)
            for alloc in granted:
                running[alloc.job_id] = alloc
                allocations[alloc.job_id] = alloc
            for report in simulate_batch(granted):
                heapq.heappush(
                    events,
                    Event(report.finish_us, EventKind.JOB_COMPLETION, seq, report),
                )
                seq += 1
    finally:
        if pool is not None:
            pool.shutdown()

    if len(queue) or running:
        raise AssertionError("simulation ended with jobs still waiting or running")

    scheduled = [by_id[i] for i in sorted(reports)]
    trace = merge_traces(list(reports.values()), list(allocations.values()))
    metrics = build_metrics(
        scheduled, reports, spec, rate, bls, als_policy, cfg.upsilon, unschedulable
    )
    return metrics, trace


def run_grid(
    records: list[JobRecord],
    spec: ClusterSpec,
    bls_list: list[BlsPolicy],
    als_list: list[ChunkPolicy],
    upsilon_list: list[float],
    seed: int,
    overhead_s: float = 0.0,
    edf_deadline_factor: float = 2.0,
    parallel: bool = False,
) -> list[tuple[MetricsReport, list[TraceEvent]]]:
    """One run per (bls, als, upsilon) triple.

    Task lists are regenerated per upsilon from the same seed, so the
    upsilon = 0 rows are the makespan-b baselines for the others.
    """
    if not bls_list or not als_list or not upsilon_list:
        raise ValueError("policy and upsilon lists must be non-empty")
    results = []
    for upsilon in upsilon_list:
        cfg = GenConfig(upsilon=upsilon, seed=seed)
        jobs = list(build_jobs(records, spec, cfg, edf_deadline_factor))
        for bls in bls_list:
            for als_policy in als_list:
                results.append(
                    run(jobs, spec, bls, als_policy, cfg, overhead_s, parallel)
                )
    return results
