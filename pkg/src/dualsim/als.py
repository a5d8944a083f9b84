"""Application-level scheduling: chunk-size rules and per-job execution.

Four dynamic-loop-scheduling rules assign chunks of a job's tasks to its
cores on demand: STATIC (one equal chunk per core, single round), SS (one
task at a time), GSS (ceil of remaining over core count) and FAC (batches
of half the remaining tasks, split into equal chunks per core).
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

from .model import Allocation, ChunkRecord, CompletionReport, SimJob, to_us


class ChunkPolicy(enum.Enum):
    STATIC = "static"
    SS = "ss"
    GSS = "gss"
    FAC = "fac"


@dataclass
class ChunkState:
    total: int
    pe_count: int
    remaining: int = -1
    issued: int = 0  # chunks handed out so far (drives the STATIC split)
    fac_batch_chunk: int = 0
    fac_batch_left: int = 0

    def __post_init__(self):
        if self.pe_count < 1:
            raise ValueError("need at least one processing element")
        if self.remaining < 0:
            self.remaining = self.total


def next_chunk(policy: ChunkPolicy, state: ChunkState) -> int:
    """Return the next chunk size and advance the recurrence state."""
    if state.remaining <= 0:
        raise ValueError("exhausted: no tasks remain")
    total, p = state.total, state.pe_count
    if policy is ChunkPolicy.STATIC:
        # First (total mod P) chunks take the ceiling, the rest the floor.
        size = total // p + (1 if state.issued < total % p else 0)
        size = min(state.remaining, max(1, size))
    elif policy is ChunkPolicy.SS:
        size = 1
    elif policy is ChunkPolicy.GSS:
        size = min(state.remaining, -(-state.remaining // p))
    else:  # FAC
        if state.fac_batch_left == 0:
            state.fac_batch_chunk = max(1, -(-state.remaining // (2 * p)))
            state.fac_batch_left = p
        size = min(state.remaining, state.fac_batch_chunk)
        state.fac_batch_left -= 1
    state.remaining -= size
    state.issued += 1
    return size


def chunk_sequence(policy: ChunkPolicy, total: int, pe_count: int) -> list[int]:
    """Full chunk-size sequence for `total` tasks on `pe_count` cores."""
    state = ChunkState(total=total, pe_count=pe_count)
    seq = []
    while state.remaining > 0:
        seq.append(next_chunk(policy, state))
    return seq


def simulate_job(
    job: SimJob,
    alloc: Allocation,
    policy: ChunkPolicy,
    rate: float,
    overhead_s: float = 0.0,
) -> CompletionReport:
    """Self-scheduling simulation of one job on its allocated cores.

    All cores start idle at the allocation time; the earliest-free core
    (ties by core id ascending) pulls the next chunk, runs it for the sum
    of its task lengths divided by the per-core rate (plus the per-chunk
    overhead), and pulls again until the tasks are exhausted.
    """
    if alloc.job_id != job.id:
        raise ValueError("allocation does not match job")
    if rate <= 0:
        raise ValueError("core rate must be > 0")
    cores = sorted(alloc.cores)
    overhead_us = to_us(overhead_s)
    state = ChunkState(total=len(job.tasks), pe_count=len(cores))
    # (free time, core rank): heap order is the idle-core tie-break rule.
    ready = [(alloc.start_us, rank) for rank in range(len(cores))]
    heapq.heapify(ready)
    busy = {c: 0 for c in cores}
    log: list[ChunkRecord] = []
    first = 0
    while state.remaining > 0:
        free_us, rank = heapq.heappop(ready)
        size = next_chunk(policy, state)
        work = sum(t.length for t in job.tasks[first : first + size])
        dur_us = to_us(work / rate) + overhead_us
        end_us = free_us + dur_us
        core = cores[rank]
        busy[core] += dur_us
        log.append(ChunkRecord(core, first, size, free_us, end_us))
        first += size
        heapq.heappush(ready, (end_us, rank))
    finish_us = max(rec.end_us for rec in log)
    return CompletionReport(
        job_id=job.id,
        start_us=alloc.start_us,
        finish_us=finish_us,
        per_core_busy_us=busy,
        chunk_log=tuple(log),
    )
