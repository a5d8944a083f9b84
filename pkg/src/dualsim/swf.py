"""Standard Workload Format (SWF) parsing, serialization and window extraction.

SWF is the line-oriented job log format of the Parallel Workload Archive:
';'-prefixed comment lines followed by data lines of 18 whitespace-separated
integer fields, with -1 marking unknown values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, TextIO

SWF_FIELDS = [
    "job_number",
    "submit_time",
    "wait_time",
    "run_time",
    "allocated_processors",
    "average_cpu_time",
    "used_memory",
    "requested_processors",
    "requested_time",
    "requested_memory",
    "status",
    "user_id",
    "group_id",
    "executable",
    "queue",
    "partition",
    "preceding_job",
    "think_time",
]

STATUS_CANCELLED = 5


class SwfParseError(ValueError):
    """Malformed SWF input; carries the 1-based line (and column) position."""

    def __init__(self, message: str, line: int, column: int | None = None):
        at = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{at}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class JobRecord:
    job_number: int
    submit_time: int
    wait_time: int
    run_time: int
    allocated_processors: int
    average_cpu_time: int
    used_memory: int
    requested_processors: int
    requested_time: int
    requested_memory: int
    status: int
    user_id: int
    group_id: int
    executable: int
    queue: int
    partition: int
    preceding_job: int
    think_time: int

    @property
    def usable(self) -> bool:
        return self.run_time > 0 and (
            self.requested_processors > 0 or self.allocated_processors > 0
        )

    @property
    def effective_processors(self) -> int:
        """Requested processors, falling back to allocated when unknown."""
        if self.requested_processors > 0:
            return self.requested_processors
        return self.allocated_processors

    @property
    def effective_runtime(self) -> int:
        """User-requested runtime, falling back to the recorded run time."""
        if self.requested_time > 0:
            return self.requested_time
        return self.run_time


@dataclass(frozen=True)
class WorkloadFile:
    header_comments: tuple[str, ...]
    records: tuple[JobRecord, ...]  # sorted by submit_time (stable)


def parse_swf(stream: Iterable[str]) -> WorkloadFile:
    """Parse SWF text into a workload, preserving header comments.

    Records are stably sorted by submit time. Raises SwfParseError with
    line/column positions for malformed data lines.
    """
    comments: list[str] = []
    records: list[JobRecord] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if line.lstrip().startswith(";"):
            comments.append(line)
            continue
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != len(SWF_FIELDS):
            raise SwfParseError(
                f"expected {len(SWF_FIELDS)} fields, got {len(tokens)}", lineno
            )
        values = []
        for col, tok in enumerate(tokens, start=1):
            try:
                values.append(int(tok))
            except ValueError:
                raise SwfParseError(f"non-integer token {tok!r}", lineno, col) from None
        records.append(JobRecord(*values))
    records.sort(key=lambda r: r.submit_time)
    return WorkloadFile(tuple(comments), tuple(records))


def serialize_swf(workload: WorkloadFile, out: TextIO) -> None:
    """Write a workload back as SWF text (field-level round trip with parse)."""
    for comment in workload.header_comments:
        out.write(comment + "\n")
    for rec in workload.records:
        out.write(" ".join(str(getattr(rec, f)) for f in SWF_FIELDS) + "\n")


def densest_window(workload: WorkloadFile, span_s: int) -> tuple[WorkloadFile, int]:
    """Extract the sub-workload of the span with the most usable arrivals.

    Candidate window starts are the record submit times (a maximal-count
    window can always be shifted to start at an arrival). Ties go to the
    earliest start. Returns the window workload with submit times re-based
    to 0, plus the original window start time.
    """
    if span_s <= 0:
        raise ValueError("span must be > 0")
    if not workload.records:
        raise ValueError("empty workload")
    submits = [r.submit_time for r in workload.records]
    n = len(submits)
    usable_prefix = [0] * (n + 1)
    for k, r in enumerate(workload.records):
        usable_prefix[k + 1] = usable_prefix[k] + (1 if r.usable else 0)
    best_count, best_start = -1, 0
    j = 0
    # Two-pointer sweep over windows [submits[i], submits[i] + span).
    for i in range(n):
        j = max(j, i)
        while j < n and submits[j] < submits[i] + span_s:
            j += 1
        count = usable_prefix[j] - usable_prefix[i]
        if count > best_count:
            best_count, best_start = count, submits[i]
    lo = best_start
    window = [
        replace(r, submit_time=r.submit_time - lo)
        for r in workload.records
        if lo <= r.submit_time < lo + span_s
    ]
    return WorkloadFile(workload.header_comments, tuple(window)), lo
