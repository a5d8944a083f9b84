"""Batch-level scheduling: job queue ordering and dispatch.

The queue assigns free cores to jobs strictly in priority order: when the
head job does not fit, dispatch stops and waits for resources (no skipping,
no backfilling).
"""

from __future__ import annotations

import enum

from .cluster import CoreLedger
from .model import Allocation, SimJob


class BlsPolicy(enum.Enum):
    FCFS = "fcfs"
    EDF = "edf"
    SJF = "sjf"


def priority_key(policy: BlsPolicy, job: SimJob):
    """Smaller key = higher priority; ties broken by (arrival, job id)."""
    if policy is BlsPolicy.FCFS:
        primary = job.arrival_us
    elif policy is BlsPolicy.EDF:
        if job.deadline_us is None:
            raise ValueError(f"job {job.id}: EDF requires a deadline")
        primary = job.deadline_us
    else:  # SJF: the user's runtime estimate, the only runtime a scheduler sees
        primary = job.requested_runtime_s
    return (primary, job.arrival_us, job.id)


class JobQueue:
    """Waiting jobs kept in policy order."""

    def __init__(self, policy: BlsPolicy):
        self.policy = policy
        self._waiting: list[SimJob] = []

    def __len__(self) -> int:
        return len(self._waiting)

    def push(self, job: SimJob) -> None:
        self._waiting.append(job)
        self._waiting.sort(key=lambda j: priority_key(self.policy, j))

    def jobs(self) -> list[SimJob]:
        return list(self._waiting)

    def dispatch(self, ledger: CoreLedger, now_us: int) -> list[Allocation]:
        """Allocate head-of-queue jobs while resources suffice.

        Stops at the first job that does not fit, even if later jobs would.
        """
        granted: list[Allocation] = []
        while self._waiting:
            head = self._waiting[0]
            alloc = ledger.allocate(head, now_us)
            if alloc is None:
                break
            self._waiting.pop(0)
            granted.append(alloc)
        return granted
