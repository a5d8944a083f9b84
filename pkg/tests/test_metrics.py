import io

import pytest

from dualsim import synth
from dualsim.als import ChunkPolicy
from dualsim.bls import BlsPolicy
from dualsim.cluster import ClusterSpec, core_rate
from dualsim.coordinator import run
from dualsim.fixtures import scenario42_jobs, scenario42_platform
from dualsim.metrics import (
    TraceEvent,
    export_timeline_json,
    export_timeline_text,
    makespan_ratio,
    merge_traces,
    metrics_csv_text,
    parse_timeline_json,
    parse_timeline_text,
)
from dualsim.model import ChunkRecord, CompletionReport, to_us
from dualsim.taskgen import GenConfig, build_jobs


def report(job_id, core, spans, first_task=0):
    log = []
    first = first_task
    for s, e in spans:
        log.append(ChunkRecord(core, first, 1, to_us(s), to_us(e)))
        first += 1
    return CompletionReport(
        job_id=job_id,
        start_us=min(r.start_us for r in log),
        finish_us=max(r.end_us for r in log),
        per_core_busy_us={core: sum(r.end_us - r.start_us for r in log)},
        chunk_log=tuple(log),
    )


def test_merge_disjoint_cores_sorted():
    events = merge_traces([
        report(1, (0, 1), [(5.0, 6.0)]),
        report(0, (0, 0), [(0.0, 2.0), (2.0, 3.0)]),
    ])
    assert [e.job_id for e in events] == [0, 0, 1]
    assert [e.start_us for e in events] == sorted(e.start_us for e in events)


def test_merge_detects_overlap():
    with pytest.raises(AssertionError, match="overlap"):
        merge_traces([
            report(0, (0, 0), [(0.0, 2.0)]),
            report(1, (0, 0), [(1.0, 3.0)]),
        ])


def test_merge_requires_allocations_when_given():
    with pytest.raises(ValueError, match="without allocations"):
        merge_traces([report(0, (0, 0), [(0.0, 1.0)])], allocations=[])


def test_makespan_ratio():
    assert makespan_ratio(120.0, 100.0) == pytest.approx(1.2)
    assert makespan_ratio(77.0, 77.0) == 1.0
    with pytest.raises(ValueError):
        makespan_ratio(1.0, 0.0)


def test_export_text_format():
    event = TraceEvent((0, 3), 7, 0, 2, to_us(1.0), to_us(2.5))
    buf = io.StringIO()
    export_timeline_text([event], buf)
    assert buf.getvalue() == "0.3 7 0 2 1.000000 2.500000\n"


def test_export_empty():
    buf = io.StringIO()
    export_timeline_text([], buf)
    assert buf.getvalue() == ""
    buf = io.StringIO()
    export_timeline_json([], buf, metadata={"seed": 1})
    events, meta = parse_timeline_json(io.StringIO(buf.getvalue()))
    assert events == []
    assert meta == {"seed": 1}


def test_round_trip_scenario42():
    metrics, trace = run(scenario42_jobs(), scenario42_platform(),
                         BlsPolicy.FCFS, ChunkPolicy.STATIC, GenConfig())
    text = io.StringIO()
    export_timeline_text(trace, text)
    assert parse_timeline_text(io.StringIO(text.getvalue())) == trace
    js = io.StringIO()
    export_timeline_json(trace, js, metadata={"combo": list(metrics.combo)})
    events, _ = parse_timeline_json(io.StringIO(js.getvalue()))
    assert events == trace


def test_utilization_identity_and_trace_makespan():
    spec = ClusterSpec(hosts=1, cores_per_host=8, host_peak_gflops=8)
    cfg = GenConfig(upsilon=0.2, seed=21)
    jobs = list(build_jobs(
        list(synth.generate_workload(40, 21, max_cores=8).records), spec, cfg))
    metrics, trace = run(jobs, spec, BlsPolicy.FCFS, ChunkPolicy.FAC, cfg)
    rate = core_rate(spec)
    total_work = sum(j.total_work for j in jobs)
    busy_us = sum(e.end_us - e.start_us for e in trace)
    assert abs(busy_us - to_us(total_work / rate)) <= len(trace)
    min_at = min(t.arrival_s for t in metrics.per_job.values())
    assert max(e.end_us for e in trace) / 1e6 - min_at == pytest.approx(metrics.makespan_s)


def test_metrics_csv_schema():
    metrics, _ = run(scenario42_jobs(), scenario42_platform(),
                     BlsPolicy.FCFS, ChunkPolicy.STATIC, GenConfig())
    text = metrics_csv_text([metrics])
    header, row = text.strip().split("\n")
    assert header == "bls,als,upsilon,makespan_s,mean_wait_s,max_wait_s,utilization"
    fields = row.split(",")
    assert fields[0] == "fcfs"
    assert fields[1] == "static"
    assert float(fields[3]) == 90.0
    text_with_ratio = metrics_csv_text([metrics], ratios=[1.0])
    assert text_with_ratio.splitlines()[0].endswith(",ratio")
