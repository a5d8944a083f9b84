import pytest

from dualsim.bls import BlsPolicy, JobQueue, priority_key
from dualsim.cluster import ClusterSpec, CoreLedger
from dualsim.model import SimJob, Task, to_us


def job(job_id, arrival_s=0.0, cores=1, runtime_s=10.0, deadline_s=None):
    return SimJob(
        id=job_id,
        arrival_us=to_us(arrival_s),
        requested_cores=cores,
        requested_runtime_s=runtime_s,
        job_length=1.0,
        tasks=(Task(0, 1.0),),
        deadline_us=None if deadline_s is None else to_us(deadline_s),
    )


def ordered_ids(policy, jobs):
    q = JobQueue(policy)
    for j in jobs:
        q.push(j)
    return [j.id for j in q.jobs()]


def test_fcfs_orders_by_arrival():
    jobs = [job(0, 5), job(1, 3), job(2, 7)]
    assert ordered_ids(BlsPolicy.FCFS, jobs) == [1, 0, 2]


def test_sjf_orders_by_requested_runtime():
    jobs = [job(0, runtime_s=100), job(1, runtime_s=10), job(2, runtime_s=50)]
    assert ordered_ids(BlsPolicy.SJF, jobs) == [1, 2, 0]


def test_edf_matches_explicit_sort():
    jobs = [job(i, arrival_s=a, runtime_s=r, deadline_s=a + 2 * r)
            for i, (a, r) in enumerate([(0, 50), (10, 10), (5, 30)])]
    oracle = sorted(jobs, key=lambda j: j.deadline_us)
    assert ordered_ids(BlsPolicy.EDF, jobs) == [j.id for j in oracle]


def test_edf_requires_deadline():
    with pytest.raises(ValueError, match="deadline"):
        priority_key(BlsPolicy.EDF, job(0))


def test_ties_broken_by_arrival_then_id():
    jobs = [job(2, 0, runtime_s=5), job(0, 0, runtime_s=5), job(1, 0, runtime_s=5)]
    assert ordered_ids(BlsPolicy.SJF, jobs) == [0, 1, 2]


def ledger(cores):
    return CoreLedger(ClusterSpec(hosts=1, cores_per_host=cores, host_peak_gflops=100))


def test_dispatch_stops_at_first_misfit():
    q = JobQueue(BlsPolicy.FCFS)
    q.push(job(0, 0, cores=2))
    q.push(job(1, 1, cores=6))
    q.push(job(2, 2, cores=1))  # would fit, but must not skip job 1
    led = ledger(5)
    granted = q.dispatch(led, now_us=0)
    assert [a.job_id for a in granted] == [0]
    assert len(q) == 2
    assert led.free_count == 3


def test_dispatch_empty_queue():
    assert JobQueue(BlsPolicy.FCFS).dispatch(ledger(5), 0) == []


def test_dispatch_stamps_start_time():
    q = JobQueue(BlsPolicy.FCFS)
    q.push(job(0, 0, cores=1))
    [alloc] = q.dispatch(ledger(5), now_us=42_000_000)
    assert alloc.start_us == 42_000_000


def test_scenario42_dispatch_order():
    # J0 and J1 dispatch together at t=0; J2 is held on insufficient cores.
    q = JobQueue(BlsPolicy.FCFS)
    q.push(job(0, 0, cores=2))
    q.push(job(1, 0, cores=2))
    led = ledger(5)
    granted = q.dispatch(led, 0)
    assert [a.job_id for a in granted] == [0, 1]
    q.push(job(2, 1, cores=2))
    assert q.dispatch(led, to_us(1.0)) == []
    led.release(granted[1])
    [a2] = q.dispatch(led, to_us(30.0))
    assert a2.job_id == 2


def test_work_conservation_at_head():
    q = JobQueue(BlsPolicy.FCFS)
    q.push(job(0, 0, cores=3))
    led = ledger(5)
    assert [a.job_id for a in q.dispatch(led, 0)] == [0]
    assert len(q) == 0
