"""Hand-traced reference scenarios.

The four-job scenario pins each job's core set so that resource conflicts,
not free-core counts, decide the start order: J2 must wait for J1's cores
and J3 for a core held by both J0 and J2.
"""

from __future__ import annotations

from .cluster import ClusterSpec
from .model import SimJob, Task, to_us

SCENARIO42_NAME = "scenario42"


def scenario42_platform() -> ClusterSpec:
    """Five homogeneous single-core hosts at 1 GFLOP/s each."""
    return ClusterSpec(
        hosts=5, cores_per_host=1, host_peak_gflops=1.0, link_gbps=0.0, link_latency_ns=0.0
    )


def scenario42_jobs() -> list[SimJob]:
    """Four 3-task jobs on 5 cores; task lengths (10, 20, 30) GFLOP.

    The first two task lengths sum to the third, so STATIC on 2 cores gives
    each core 30 GFLOP. Expected with FCFS+STATIC at rate 1 GFLOP/s:
    FT0 = FT1 = 30, ST2 = FT1 = 30, FT2 = 60, ST3 = max(FT0, FT2) = 60,
    FT3 = 90.
    """
    tasks = tuple(Task(index=k, length=v) for k, v in enumerate((10.0, 20.0, 30.0)))
    pinned = [
        ((0, 0), (1, 0)),  # J0: R0, R1
        ((2, 0), (3, 0)),  # J1: R2, R3
        ((2, 0), (4, 0)),  # J2: R2, R4
        ((0, 0), (4, 0)),  # J3: R0, R4
    ]
    arrivals = [0, 0, 10, 20]
    return [
        SimJob(
            id=i,
            arrival_us=to_us(arrivals[i]),
            requested_cores=2,
            requested_runtime_s=60.0,
            job_length=60.0,
            tasks=tasks,
            deadline_us=to_us(arrivals[i] + 120.0),
            pinned_cores=pinned[i],
        )
        for i in range(4)
    ]
