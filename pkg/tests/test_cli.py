import io
import json
import subprocess
import sys

import numpy as np
import pytest

from ncbl import __version__
from ncbl.cli import (
    VERIFY,
    UsageError,
    Writer,
    decode_matrix,
    encode_matrix,
    main,
    replay,
    run_trials,
    trial_rng,
)


def _records(text):
    lines = [json.loads(ln) for ln in text.splitlines() if ln.strip()]
    return lines[:-1], lines[-1]


def test_matrix_encoding_roundtrip(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    enc = json.loads(json.dumps(encode_matrix(m)))
    assert np.array_equal(decode_matrix(enc), m)


def test_trial_rng_is_schedule_independent():
    assert trial_rng(7, 3).random() == trial_rng(7, 3).random()
    assert trial_rng(7, 3).random() != trial_rng(7, 4).random()


@pytest.mark.parametrize("setting", sorted(VERIFY))
def test_verify_small_runs_pass(setting, capsys):
    code = main(["verify", setting, "--trials", "3", "--seed", "11", "--no-timing"])
    recs, summary = _records(capsys.readouterr().out)
    assert code == 0, recs
    assert len(recs) == 3 and all(r["pass"] for r in recs)
    assert summary["summary"] and summary["passed"] == 3 and summary["failed"] == 0
    assert all(r["version"] == __version__ and r["command"] == f"verify {setting}" for r in recs)


def test_search_tensor_sharpness_example(capsys):
    code = main(["search", "tensor", "--q", "2", "--cover", "{1},{2}", "--dims", "2,2", "--no-timing"])
    out = capsys.readouterr()
    recs, _ = _records(out.out)
    assert code == 1
    assert recs[0]["extra"]["ratio"] == pytest.approx(2.0)
    assert "violation" in out.err


def test_search_admissible_gaussian_exits_zero(capsys):
    assert main(["search", "gaussian", "--n", "2", "--budget", "200", "--no-timing"]) == 0


def test_search_inadmissible_clifford_finds_violation(capsys):
    assert main(["search", "clifford", "--n", "2", "--inadmissible", "--budget", "200", "--no-timing"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "tensor", "--dims", "2,2", "--subsets", "{1},{5}"],
        ["verify", "tensor", "--trials", "0"],
        ["verify", "cosh", "--n", "0"],
        ["verify", "nonsense"],
        ["verify", "clifford", "--frame-file", "/nonexistent/frame.json"],
        ["search", "tensor", "--q", "2"],
        ["replay", "/nonexistent/records.jsonl"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_replay_reproduces_deficits(tmp_path, capsys):
    out = tmp_path / "run.jsonl"
    assert main(["verify", "duality", "--trials", "4", "--seed", "3", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["replay", str(out)]) == 0
    recs, summary = _records(capsys.readouterr().out)
    assert summary["replayed"] == 4 and summary["max_deficit_change"] == 0.0
    assert all(r["deficit"] == r["replay_of_deficit"] for r in recs)


def test_replay_single_line(tmp_path, capsys):
    out = tmp_path / "run.jsonl"
    main(["verify", "psi", "--trials", "5", "--out", str(out)])
    capsys.readouterr()
    assert main(["replay", str(out), "--line", "3"]) == 0
    recs, _ = _records(capsys.readouterr().out)
    assert len(recs) == 1 and recs[0]["trial"] == 2
    assert main(["replay", str(out), "--line", "99"]) == 2


def test_replay_rejects_version_mismatch(capsys):
    main(["verify", "cosh", "--trials", "1", "--no-timing"])
    rec = json.loads(capsys.readouterr().out.splitlines()[0])
    rec["version"] = "0.0.0-other"
    with pytest.raises(UsageError):
        replay([rec])


def test_no_timing_output_is_byte_identical(capsys):
    main(["verify", "clifford", "--trials", "5", "--seed", "9", "--no-timing"])
    a = capsys.readouterr().out
    main(["verify", "clifford", "--trials", "5", "--seed", "9", "--no-timing"])
    assert capsys.readouterr().out == a
    assert "timing" not in a


def test_workers_match_serial(capsys):
    main(["verify", "gaussian", "--trials", "6", "--seed", "2", "--no-timing"])
    serial = capsys.readouterr().out
    main(["verify", "gaussian", "--trials", "6", "--seed", "2", "--no-timing", "--workers", "2"])
    assert capsys.readouterr().out == serial


def test_csv_output(capsys):
    assert main(["verify", "cosh", "--trials", "2", "--format", "csv", "--no-timing"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("trial,seed,command")
    assert len(lines) == 4 and lines[-1].startswith("# summary ")


def test_frame_file(tmp_path, capsys):
    path = tmp_path / "frame.json"
    c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
    vecs = [[1.0, 0.0], [c, s], [c, -s]]
    path.write_text(json.dumps({"n": 2, "frames": [{"basis": [[v[0]], [v[1]]], "p": 1.5} for v in vecs]}))
    assert main(["verify", "clifford", "--frame-file", str(path), "--trials", "2", "--no-timing"]) == 0
    recs, _ = _records(capsys.readouterr().out)
    assert all(r["inputs"]["frame"]["n"] == 2 for r in recs)


def test_failures_stream_to_stderr_with_out(tmp_path, capsys):
    out = tmp_path / "search.jsonl"
    assert main(["search", "tensor", "--q", "2", "--cover", "{1},{2}", "--dims", "2,2", "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert '"status": "violation-expected"' in err


def test_run_trials_counts():
    buf = io.StringIO()
    passed, failed = run_trials("verify psi", {"n": None, "dims": None, "subsets": None, "q": None, "budget": None, "inadmissible": False}, 1, 4, 1e-9, Writer(buf, timing=False))
    assert (passed, failed) == (4, 0)
    assert buf.getvalue().count("\n") == 5


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ncbl", "verify", "cosh", "--trials", "2", "--no-timing"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout.splitlines()[-1])["passed"] == 2
    res = subprocess.run([sys.executable, "-m", "ncbl", "--version"], capture_output=True, text=True)
    assert res.stdout.strip() == __version__


def test_replay_tolerance_override_flips_verdict(tmp_path, capsys):
    out = tmp_path / "run.jsonl"
    main(["verify", "cosh", "--trials", "1", "--seed", "4", "--out", str(out)])
    capsys.readouterr()
    rec = json.loads(out.read_text().splitlines()[0])
    # a negative tolerance demands a strictly positive deficit larger than the one recorded
    assert main(["replay", str(out), "--tol", str(-2 * rec["deficit"])]) == 1
    assert main(["replay", str(out), "--tol", "1e-9"]) == 0
