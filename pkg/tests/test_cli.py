from dualsim import synth
from dualsim.cli import main
from dualsim.swf import parse_swf, serialize_swf


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_gen_synthetic_and_extract_window(tmp_path):
    swf = tmp_path / "w.swf"
    out = tmp_path / "w24.swf"
    assert main(["gen-synthetic", "--jobs", "200", "--seed", "3",
                 "--out", str(swf)]) == 0
    assert main(["extract-window", "--in", str(swf), "--hours", "1",
                 "--out", str(out)]) == 0
    with open(out) as fh:
        window = parse_swf(fh)
    assert window.records
    assert min(r.submit_time for r in window.records) == 0
    assert max(r.submit_time for r in window.records) < 3600


def test_extract_window_single_job(tmp_path):
    workload = synth.generate_workload(1, seed=1)
    swf = tmp_path / "one.swf"
    with open(swf, "w") as fh:
        serialize_swf(workload, fh)
    out = tmp_path / "out.swf"
    assert main(["extract-window", "--in", str(swf), "--hours", "24",
                 "--out", str(out)]) == 0
    with open(out) as fh:
        assert len(parse_swf(fh).records) == 1


def test_simulate_outputs_and_determinism(tmp_path):
    args = ["simulate", "--bls", "fcfs", "--als", "gss", "--upsilon", "0",
            "--jobs", "100", "--seed", "5", "--hosts", "1",
            "--cores-per-host", "16", "--host-peak-gflops", "160",
            "--no-plots"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--output-dir", str(out1)]) == 0
    assert main(args + ["--output-dir", str(out2)]) == 0
    for name in ("metrics.csv", "trace.txt", "trace.json"):
        assert read(out1 / name) == read(out2 / name)
    csv_lines = read(out1 / "metrics.csv").decode().strip().splitlines()
    assert len(csv_lines) == 2  # header + one row
    assert (out1 / "metadata.json").exists()


def test_simulate_renders_timeline_figure(tmp_path):
    out = tmp_path / "plots"
    assert main(["simulate", "--jobs", "20", "--seed", "2", "--hosts", "1",
                 "--cores-per-host", "8", "--host-peak-gflops", "80",
                 "--output-dir", str(out)]) == 0
    assert (out / "timeline.png").stat().st_size > 0


def test_simulate_fixture_table(tmp_path, capsys):
    assert main(["simulate", "--fixture", "scenario42", "--no-plots",
                 "--output-dir", str(tmp_path / "fx")]) == 0
    output = capsys.readouterr().out
    assert "makespan: 90.000000 s" in output
    assert "  2     10.000   30.000    60.000" in output
    assert "  3     20.000   60.000    90.000" in output


def test_sweep_grid_and_ratio(tmp_path):
    out = tmp_path / "sweep"
    assert main(["sweep", "--jobs", "30", "--seed", "4", "--hosts", "1",
                 "--cores-per-host", "8", "--host-peak-gflops", "80",
                 "--bls", "fcfs,edf,sjf", "--als", "static,ss,gss,fac",
                 "--upsilon", "0.1,0.25", "--ratio", "--no-plots",
                 "--output-dir", str(out)]) == 0
    lines = read(out / "sweep.csv").decode().strip().splitlines()
    assert lines[0].endswith(",ratio")
    # upsilon 0 auto-added for the baseline: 3 BLS x 4 ALS x 3 upsilon values
    assert len(lines) == 1 + 36
    for line in lines[1:]:
        assert float(line.split(",")[-1]) > 0


def test_sweep_twelve_combos(tmp_path):
    out = tmp_path / "sweep12"
    assert main(["sweep", "--jobs", "20", "--seed", "4", "--hosts", "1",
                 "--cores-per-host", "8", "--host-peak-gflops", "80",
                 "--bls", "fcfs,edf,sjf", "--als", "static,ss,gss,fac",
                 "--upsilon", "0", "--no-plots", "--output-dir", str(out)]) == 0
    lines = read(out / "sweep.csv").decode().strip().splitlines()
    assert len(lines) == 1 + 12


def test_bench_small_ladder(tmp_path):
    out = tmp_path / "bench"
    assert main(["bench", "--ladder", "5,20", "--reps", "2", "--seed", "1",
                 "--hosts", "1", "--cores-per-host", "8",
                 "--host-peak-gflops", "80", "--no-plots",
                 "--output-dir", str(out)]) == 0
    lines = read(out / "bench.csv").decode().strip().splitlines()
    assert lines[0] == "jobs,min_s,avg_s,max_s"
    assert len(lines) == 3
    for line in lines[1:]:
        _, lo, avg, hi = (float(v) for v in line.split(","))
        assert lo <= avg <= hi


def test_exit_codes(tmp_path):
    # 2: unreadable/corrupt input
    assert main(["extract-window", "--in", str(tmp_path / "missing.swf"),
                 "--out", str(tmp_path / "o.swf")]) == 2
    bad = tmp_path / "bad.swf"
    bad.write_text("1 2 three\n")
    assert main(["extract-window", "--in", str(bad),
                 "--out", str(tmp_path / "o.swf")]) == 2
    # 1: config error
    assert main(["simulate", "--no-plots",
                 "--output-dir", str(tmp_path / "x")]) == 1
    assert main(["simulate", "--jobs", "5", "--upsilon", "2.0", "--no-plots",
                 "--output-dir", str(tmp_path / "y")]) == 1


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "exp.conf"
    conf.write_text("jobs = 25\nseed = 8\nhosts = 1\ncores_per_host = 8\n"
                    "host_peak_gflops = 80\nbls = sjf\nals = fac\n")
    out = tmp_path / "run"
    assert main(["simulate", "--config", str(conf), "--seed", "9",
                 "--no-plots", "--output-dir", str(out)]) == 0
    meta = read(out / "metadata.json").decode()
    assert '"seed": 9' in meta
    csv = read(out / "metrics.csv").decode()
    assert csv.splitlines()[1].startswith("sjf,fac,")
