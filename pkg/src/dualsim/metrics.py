"""Metrics aggregation and execution-timeline traces.

Collects per-job completion reports into batch metrics (makespan, waits,
utilization) and into a per-core timeline equivalent in content to a
binary trace-viewer file: one lane per core, one bar per task chunk, idle
time implicit in the gaps.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import TextIO

from .cluster import ClusterSpec, CoreId
from .model import Allocation, CompletionReport, SimJob, makespan, to_s, to_us

METRICS_CSV_HEADER = [
    "bls",
    "als",
    "upsilon",
    "makespan_s",
    "mean_wait_s",
    "max_wait_s",
    "utilization",
]


@dataclass(frozen=True)
class TraceEvent:
    core: CoreId
    job_id: int
    first_task: int
    size: int
    start_us: int
    end_us: int

    def __post_init__(self):
        if self.start_us >= self.end_us:
            raise ValueError("trace event must have start < end")


@dataclass(frozen=True)
class JobTimes:
    arrival_s: float
    start_s: float
    finish_s: float

    @property
    def wait_s(self) -> float:
        return self.start_s - self.arrival_s


@dataclass(frozen=True)
class MetricsReport:
    combo: tuple[str, str, float]  # (bls, als, upsilon)
    makespan_s: float
    per_job: dict[int, JobTimes]
    core_utilization: dict[CoreId, float]
    unschedulable: tuple[int, ...] = ()

    @property
    def mean_wait_s(self) -> float:
        return sum(t.wait_s for t in self.per_job.values()) / len(self.per_job)

    @property
    def max_wait_s(self) -> float:
        return max(t.wait_s for t in self.per_job.values())

    @property
    def mean_utilization(self) -> float:
        return sum(self.core_utilization.values()) / len(self.core_utilization)

    def csv_row(self, ratio: float | None = None) -> list[str]:
        bls, als, upsilon = self.combo
        row = [
            bls,
            als,
            f"{upsilon:g}",
            f"{self.makespan_s:.6f}",
            f"{self.mean_wait_s:.6f}",
            f"{self.max_wait_s:.6f}",
            f"{self.mean_utilization:.6f}",
        ]
        if ratio is not None:
            row.append(f"{ratio:.6f}")
        return row


def build_metrics(
    jobs: list[SimJob],
    reports: dict[int, CompletionReport],
    spec: ClusterSpec,
    rate: float,
    bls,
    als,
    upsilon: float,
    unschedulable: list[int],
) -> MetricsReport:
    span = makespan(list(reports.values()), jobs)
    min_at = min(j.arrival_us for j in jobs)
    span_us = max(r.finish_us for r in reports.values()) - min_at
    busy: dict[CoreId, int] = {c: 0 for c in spec.all_cores()}
    for rep in reports.values():
        for core, b in rep.per_core_busy_us.items():
            busy[core] += b
    per_job = {
        j.id: JobTimes(
            arrival_s=to_s(j.arrival_us),
            start_s=to_s(reports[j.id].start_us),
            finish_s=to_s(reports[j.id].finish_us),
        )
        for j in jobs
    }
    utilization = {c: (b / span_us if span_us else 0.0) for c, b in busy.items()}
    return MetricsReport(
        combo=(bls.value, als.value, upsilon),
        makespan_s=span,
        per_job=per_job,
        core_utilization=utilization,
        unschedulable=tuple(sorted(unschedulable)),
    )


def makespan_ratio(makespan_upsilon: float, makespan_b: float) -> float:
    """Ratio of the varied-task makespan to the identical-task baseline."""
    if makespan_b <= 0:
        raise ValueError("baseline makespan must be > 0")
    return makespan_upsilon / makespan_b


def merge_traces(
    reports: list[CompletionReport],
    allocations: list[Allocation] | None = None,
) -> list[TraceEvent]:
    """Flatten chunk logs into a globally time-sorted per-core event list.

    Overlapping events on one core indicate an engine bug and raise.
    """
    if allocations is not None:
        allocated = {a.job_id for a in allocations}
        missing = [r.job_id for r in reports if r.job_id not in allocated]
        if missing:
            raise ValueError(f"reports without allocations: {missing}")
    events = [
        TraceEvent(rec.core, rep.job_id, rec.first_task, rec.size, rec.start_us, rec.end_us)
        for rep in reports
        for rec in rep.chunk_log
    ]
    events.sort(key=lambda e: (e.start_us, e.core, e.end_us, e.job_id))
    last_end: dict[CoreId, int] = {}
    for e in sorted(events, key=lambda e: (e.core, e.start_us)):
        if e.start_us < last_end.get(e.core, 0):
            raise AssertionError(f"overlapping trace events on core {e.core}")
        last_end[e.core] = e.end_us
    return events


def export_timeline_text(events: list[TraceEvent], out: TextIO) -> None:
    """One line per event: `host.core job first size start end`, 6-decimal s."""
    for e in events:
        out.write(
            f"{e.core[0]}.{e.core[1]} {e.job_id} {e.first_task} {e.size} "
            f"{to_s(e.start_us):.6f} {to_s(e.end_us):.6f}\n"
        )


def parse_timeline_text(stream: TextIO) -> list[TraceEvent]:
    events = []
    for line in stream:
        if not line.strip():
            continue
        core, job, first, size, start, end = line.split()
        host_s, core_s = core.split(".")
        events.append(
            TraceEvent(
                (int(host_s), int(core_s)),
                int(job),
                int(first),
                int(size),
                to_us(float(start)),
                to_us(float(end)),
            )
        )
    return events


def export_timeline_json(
    events: list[TraceEvent], out: TextIO, metadata: dict | None = None
) -> None:
    """Timeline document with one lane per core and a metadata block."""
    lanes: dict[str, list[dict]] = {}
    for e in events:
        lanes.setdefault(f"{e.core[0]}.{e.core[1]}", []).append(
            {
                "job": e.job_id,
                "first_task": e.first_task,
                "size": e.size,
                "start": round(to_s(e.start_us), 6),
                "end": round(to_s(e.end_us), 6),
            }
        )
    for lane in lanes.values():
        lane.sort(key=lambda d: d["start"])
    doc = {"metadata": metadata or {}, "lanes": dict(sorted(lanes.items()))}
    json.dump(doc, out, indent=2, sort_keys=True)
    out.write("\n")


def parse_timeline_json(stream: TextIO) -> tuple[list[TraceEvent], dict]:
    doc = json.load(stream)
    events = []
    for lane, entries in doc["lanes"].items():
        host_s, core_s = lane.split(".")
        core = (int(host_s), int(core_s))
        for d in entries:
            events.append(
                TraceEvent(
                    core,
                    d["job"],
                    d["first_task"],
                    d["size"],
                    to_us(d["start"]),
                    to_us(d["end"]),
                )
            )
    events.sort(key=lambda e: (e.start_us, e.core, e.end_us, e.job_id))
    return events, doc["metadata"]


def write_metrics_csv(
    rows: list[MetricsReport],
    out: TextIO,
    ratios: list[float | None] | None = None,
) -> None:
    writer = csv.writer(out, lineterminator="\n")
    header = list(METRICS_CSV_HEADER)
    if ratios is not None:
        header.append("ratio")
    writer.writerow(header)
    for i, report in enumerate(rows):
        writer.writerow(report.csv_row(ratios[i] if ratios is not None else None))


def metrics_csv_text(rows: list[MetricsReport], ratios=None) -> str:
    buf = io.StringIO()
    write_metrics_csv(rows, buf, ratios)
    return buf.getvalue()
