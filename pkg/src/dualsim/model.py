"""Shared domain vocabulary: jobs, tasks, allocations, completion reports.

Time is kept as a 64-bit count of microseconds internally; seconds appear
only at API boundaries (constructors, metrics, exports). Work amounts are
GFLOP as double-precision floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

US_PER_S = 1_000_000


def to_us(seconds: float) -> int:
    """Quantize a duration or instant in seconds to integer microseconds."""
    return round(seconds * US_PER_S)


def to_s(us: int) -> float:
    return us / US_PER_S


@dataclass(frozen=True)
class Task:
    """One unit of application-level work, the analogue of a loop iteration."""

    index: int
    length: float  # GFLOP

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"task {self.index}: length must be > 0, got {self.length}")


@dataclass(frozen=True)
class SimJob:
    """A simulation-ready batch job with its synthesized task list."""

    id: int
    arrival_us: int
    requested_cores: int
    requested_runtime_s: float
    job_length: float  # GFLOP estimate the task list accumulates to
    tasks: tuple[Task, ...]
    deadline_us: int | None = None
    # Fixture support: when set, the allocator must grant exactly these cores
    # ((host, core) pairs) instead of picking lowest-free-first.
    pinned_cores: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.requested_cores < 1:
            raise ValueError(f"job {self.id}: requested_cores must be >= 1")
        if self.arrival_us < 0:
            raise ValueError(f"job {self.id}: arrival must be >= 0")
        if self.job_length <= 0:
            raise ValueError(f"job {self.id}: job_length must be > 0")
        if not self.tasks:
            raise ValueError(f"job {self.id}: task list is empty")
        if self.pinned_cores is not None and len(self.pinned_cores) != self.requested_cores:
            raise ValueError(f"job {self.id}: pinned core set size != requested_cores")

    @property
    def total_work(self) -> float:
        return sum(t.length for t in self.tasks)


@dataclass(frozen=True)
class Allocation:
    """Cores granted to a job by the batch-level scheduler at start time."""

    job_id: int
    cores: tuple[tuple[int, int], ...]  # (host, core), sorted ascending
    start_us: int

    def __post_init__(self):
        if not self.cores:
            raise ValueError("allocation with no cores")


@dataclass(frozen=True)
class ChunkRecord:
    """One chunk assignment: tasks [first, first+size) ran on `core`."""

    core: tuple[int, int]
    first_task: int
    size: int
    start_us: int
    end_us: int


@dataclass(frozen=True)
class CompletionReport:
    """Result of simulating one job's internal execution."""

    job_id: int
    start_us: int
    finish_us: int
    per_core_busy_us: dict[tuple[int, int], int] = field(compare=False)
    chunk_log: tuple[ChunkRecord, ...] = ()


def check_variation_factor(upsilon: float) -> float:
    """Validate the task variation factor, 0 <= upsilon < 1."""
    if not 0 <= upsilon < 1:
        raise ValueError(f"variation factor must be in [0, 1), got {upsilon}")
    return float(upsilon)


def makespan(reports: list[CompletionReport], jobs: list[SimJob]) -> float:
    """Batch completion time in seconds: max finish time minus min arrival."""
    if not reports or not jobs:
        raise ValueError("no jobs")
    covered = {r.job_id for r in reports}
    missing = [j.id for j in jobs if j.id not in covered]
    if missing:
        raise ValueError(f"reports missing for jobs {missing}")
    return to_s(max(r.finish_us for r in reports) - min(j.arrival_us for j in jobs))
