"""Simulated cluster platform: hosts, cores and free/busy bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Allocation, SimJob

CoreId = tuple[int, int]  # (host_index, core_index)


@dataclass(frozen=True)
class ClusterSpec:
    hosts: int = 4
    cores_per_host: int = 64
    host_peak_gflops: float = 3000.0
    # InfiniBand link parameters: recorded for completeness, unused by
    # compute-only jobs.
    link_gbps: float = 50.0
    link_latency_ns: float = 500.0

    def __post_init__(self):
        if self.hosts < 1 or self.cores_per_host < 1:
            raise ValueError("cluster needs at least one host and one core per host")
        if self.host_peak_gflops <= 0:
            raise ValueError("host peak rate must be > 0")

    @property
    def total_cores(self) -> int:
        return self.hosts * self.cores_per_host

    def all_cores(self) -> list[CoreId]:
        return [
            (h, c) for h in range(self.hosts) for c in range(self.cores_per_host)
        ]


def core_rate(spec: ClusterSpec) -> float:
    """Per-core compute rate in GFLOP/s: host peak split evenly over cores."""
    return spec.host_peak_gflops / spec.cores_per_host


class CoreLedger:
    """Tracks which cores are free and which job owns each busy core.

    free set and busy map always partition the full core set. Owned
    exclusively by the coordinator event loop.
    """

    def __init__(self, spec: ClusterSpec):
        self.spec = spec
        self.free: set[CoreId] = set(spec.all_cores())
        self.busy: dict[CoreId, int] = {}

    @property
    def free_count(self) -> int:
        return len(self.free)

    def owner_jobs(self) -> set[int]:
        return set(self.busy.values())

    def allocate(self, job: SimJob, now_us: int) -> Allocation | None:
        """Grant cores to a job, or return None when they are insufficient.

        Non-pinned jobs get the lowest (host, core) free cores; pinned jobs
        (fixtures) require their exact core set to be free. The ledger is
        untouched on failure.
        """
        if job.id in self.busy.values():
            raise ValueError(f"job {job.id} already holds an allocation")
        if job.pinned_cores is not None:
            chosen = tuple(sorted(job.pinned_cores))
            if any(c not in self.free for c in chosen):
                return None
        else:
            if len(self.free) < job.requested_cores:
                return None
            chosen = tuple(sorted(self.free)[: job.requested_cores])
        for c in chosen:
            self.free.remove(c)
            self.busy[c] = job.id
        return Allocation(job_id=job.id, cores=chosen, start_us=now_us)

    def release(self, alloc: Allocation) -> None:
        """Return an allocation's cores to the free set."""
        for c in alloc.cores:
            if self.busy.get(c) != alloc.job_id:
                raise ValueError(
                    f"core {c} is not held by job {alloc.job_id} (release mismatch)"
                )
        for c in alloc.cores:
            del self.busy[c]
            self.free.add(c)

    def check_partition(self) -> None:
        """Internal invariant: free and busy partition the core set."""
        full = set(self.spec.all_cores())
        if self.free & self.busy.keys() or (self.free | self.busy.keys()) != full:
            raise AssertionError("core ledger partition invariant violated")
