import json

import pytest

from pogs.cli import EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE, main
from pogs.exceptions import ConvexityWarning


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == 0 and out.out else None), out.err


@pytest.fixture(scope="module")
def sim(tmp_path_factory):
    d = tmp_path_factory.mktemp("sim")
    paths = {k: d / f"{k}.csv" for k in ("clean", "noisy")}
    paths["labels"] = d / "labels.json"
    assert main([
        "--quiet", "simulate", "--seed", "7",
        "--out-clean", str(paths["clean"]), "--out-noisy", str(paths["noisy"]),
        "--out-labels", str(paths["labels"]),
    ]) == 0
    paths["dir"] = d
    return paths


def test_pipeline_end_to_end(sim, capsys, tmp_path):
    est = tmp_path / "x.csv"
    code, doc, _ = run(capsys, "denoise", "--input", sim["noisy"], "--output", est,
                       "--fault-freq", 80, "--n1", 4, "--m", 4, "--auto-lambda")
    assert code == 0
    solver = doc["result"]["solver"]
    assert solver["lambda"] == pytest.approx(0.325 * solver["sigma_hat"])
    assert solver["convexity"] == "strictly_convex"
    assert solver["pattern"]["stored_length"] == 244

    report = tmp_path / "eval.json"
    code, doc, _ = run(capsys, "evaluate", "--estimate", est, "--clean", sim["clean"],
                       "--labels", sim["labels"], "--out", report)
    assert code == 0
    assert doc["result"]["auc"] > 0.95
    full = json.loads(report.read_text())
    assert len(full["result"]["roc"]["threshold"]) == 256

    code, doc, _ = run(capsys, "spectrum", "--input", est, "--out", tmp_path / "env.csv")
    assert code == 0
    assert doc["result"]["peak_hz"] == pytest.approx(80.0)
    assert (tmp_path / "env.csv").read_text().startswith("freq_hz,magnitude,smoothed\n")


def test_simulate_is_deterministic(sim, tmp_path):
    args = ["--quiet", "simulate", "--seed", "7", "--out-clean", str(tmp_path / "c.csv"),
            "--out-noisy", str(tmp_path / "n.csv"), "--out-labels", str(tmp_path / "l.json")]
    assert main(args) == 0
    assert (tmp_path / "n.csv").read_bytes() == sim["noisy"].read_bytes()
    assert (tmp_path / "l.json").read_bytes() == sim["labels"].read_bytes()


def test_denoise_is_deterministic(sim, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"x{i}.csv"
        assert main(["--quiet", "denoise", "--input", str(sim["noisy"]), "--output", str(out),
                     "--group-size", "4", "--lambda", "2.0"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_report_file(sim, tmp_path, capsys):
    rep = tmp_path / "r.json"
    code = main(["--quiet", "--report", str(rep), "estimate-noise", "--input", str(sim["noisy"]),
                 "--m", "4", "--n1", "2"])
    assert code == 0 and capsys.readouterr().out == ""
    doc = json.loads(rep.read_text())
    assert doc["kind"] == "report" and doc["command"] == "estimate-noise"
    assert doc["result"]["lambda"] == pytest.approx(0.475 * doc["result"]["sigma_hat"])


def test_compound(sim, tmp_path, capsys):
    out = tmp_path / "cmp"
    code, doc, _ = run(capsys, "compound", "--input", sim["noisy"], "--out-dir", out,
                       "--fault-freq", 80, "--fault-freq", 120, "--auto-lambda", "--jobs", 2)
    assert code == 0
    runs = doc["result"]["runs"]
    assert [r["fault_freq"] for r in runs] == [80.0, 120.0]
    for tag in ("80Hz", "120Hz"):
        assert (out / f"x_{tag}.csv").exists()
        assert (out / f"envelope_{tag}.csv").exists()
    assert runs[0]["envelope_peak_hz"] == pytest.approx(80.0)


def test_fault_freqs(capsys):
    code, doc, _ = run(capsys, "fault-freqs", "--rpm", 1433)
    assert code == 0
    assert doc["result"]["fault_freqs_hz"]["BPFO"] == pytest.approx(73.226, abs=0.01)
    code, doc, _ = run(capsys, "fault-freqs", "--shaft-freq", 10, "--orders", "x=2.5")
    assert doc["result"]["fault_freqs_hz"] == {"X": 25.0}


def test_zero_lambda_is_usage_error(sim, tmp_path, capsys):
    code, _, err = run(capsys, "denoise", "--input", sim["noisy"], "--output", tmp_path / "x.csv",
                       "--group-size", 4, "--lambda", 0)
    assert code == EXIT_USAGE
    assert "usage:" in err


def test_lambda_modes_are_exclusive(sim, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["denoise", "--input", str(sim["noisy"]), "--output", str(tmp_path / "x.csv"),
              "--group-size", "4", "--lambda", "1", "--auto-lambda"])
    assert exc.value.code == EXIT_USAGE


def test_two_pattern_modes(sim, tmp_path, capsys):
    code, _, _ = run(capsys, "denoise", "--input", sim["noisy"], "--output", tmp_path / "x.csv",
                     "--group-size", 4, "--pattern", "101", "--lambda", 1)
    assert code == EXIT_USAGE


def test_nan_input(tmp_path, capsys):
    bad = tmp_path / "nan.csv"
    bad.write_text("# fs=100\n1.0\nnan\n2.0\n3.0\n")
    code, _, _ = run(capsys, "denoise", "--input", bad, "--output", tmp_path / "x.csv",
                     "--group-size", 2, "--lambda", 1)
    assert code == EXIT_NUMERICAL


def test_missing_fs(tmp_path, capsys):
    f = tmp_path / "nofs.csv"
    f.write_text("1\n2\n3\n4\n5\n")
    code, _, _ = run(capsys, "spectrum", "--input", f, "--out", tmp_path / "s.csv")
    assert code == EXIT_DATA


def test_unparseable_input(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("# fs=10\n1\nfoo\n")
    code, _, err = run(capsys, "denoise", "--input", f, "--output", tmp_path / "x.csv",
                       "--group-size", 2, "--lambda", 1)
    assert code == EXIT_DATA and "line 3" in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "estimate-noise", "--input", tmp_path / "nope.csv")
    assert code == EXIT_DATA


def test_strict_non_convergence(sim, tmp_path, capsys):
    code, _, _ = run(capsys, "denoise", "--input", sim["noisy"], "--output", tmp_path / "x.csv",
                     "--group-size", 4, "--lambda", 2, "--max-iters", 1, "--strict")
    assert code == EXIT_NUMERICAL


def test_explicit_pattern_needs_lambda(sim, tmp_path, capsys):
    code, _, _ = run(capsys, "denoise", "--input", sim["noisy"], "--output", tmp_path / "x.csv",
                     "--pattern", "1011", "--auto-lambda")
    assert code == EXIT_USAGE


def test_convexity_warning_is_reported(sim, tmp_path, capsys):
    with pytest.warns(ConvexityWarning):
        code, doc, _ = run(capsys, "denoise", "--input", sim["noisy"], "--output", tmp_path / "x.csv",
                           "--group-size", 4, "--lambda", 1, "--a", 10, "--max-iters", 5)
    assert code == 0
    assert doc["result"]["solver"]["convexity"] == "violated"


def test_simulate_compound_train(tmp_path, capsys):
    code, doc, _ = run(capsys, "simulate", "--seed", 1, "--fault-freq", 73.2, "--fault-freq", 117.8,
                       "--out-clean", tmp_path / "c.csv", "--out-noisy", tmp_path / "n.csv",
                       "--out-labels", tmp_path / "l.json")
    assert code == 0
    assert doc["result"]["sim_config"]["fault_freqs"] == [73.2, 117.8]
    assert doc["result"]["n_transients"] > 50
