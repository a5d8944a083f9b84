"""Two-level cluster scheduling simulator.

Couples batch-level scheduling (FCFS, EDF, SJF) of cluster cores to jobs
with application-level dynamic-loop scheduling (STATIC, SS, GSS, FAC) of
each running job's tasks, in one deterministic discrete-event engine.
"""

__version__ = "0.1.0"

from .als import ChunkPolicy, chunk_sequence, simulate_job
from .bls import BlsPolicy, JobQueue, priority_key
from .cluster import ClusterSpec, CoreLedger, core_rate
from .coordinator import run, run_grid
from .metrics import MetricsReport, TraceEvent, makespan_ratio, merge_traces
from .model import Allocation, CompletionReport, SimJob, Task, makespan
from .swf import JobRecord, WorkloadFile, densest_window, parse_swf, serialize_swf
from .taskgen import GenConfig, build_jobs, estimate_job_length, synthesize_tasks

__all__ = [
    "Allocation",
    "BlsPolicy",
    "ChunkPolicy",
    "ClusterSpec",
    "CompletionReport",
    "CoreLedger",
    "GenConfig",
    "JobQueue",
    "JobRecord",
    "MetricsReport",
    "SimJob",
    "Task",
    "TraceEvent",
    "WorkloadFile",
    "build_jobs",
    "chunk_sequence",
    "core_rate",
    "densest_window",
    "estimate_job_length",
    "makespan",
    "makespan_ratio",
    "merge_traces",
    "parse_swf",
    "priority_key",
    "run",
    "run_grid",
    "serialize_swf",
    "simulate_job",
    "synthesize_tasks",
]
