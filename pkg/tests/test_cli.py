import csv
import json
import subprocess
import sys

import pytest

from conftest import masked_csv, write_toy_dataset
from dcsplit.cli import main


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_tune_theta_small(tmp_path):
    out = tmp_path / "o"
    assert main(["tune-theta", "--sizes", "30x10,40x12", "--theta", "0.05,5", "--out", str(out)]) == 0
    rows = _read(out / "tune_theta.csv")
    assert rows[0] == ["M", "N", "iter[theta=0.05]", "time[theta=0.05]", "iter[theta=5]",
                       "time[theta=5]"]
    assert [r[:2] for r in rows[1:]] == [["30", "10"], ["40", "12"]]
    assert len(list((out / "traces").glob("*.csv"))) == 4
    summary = json.loads((out / "tune_theta_summary.json").read_text())
    assert len(summary["runs"]) == 4


def test_single_value_grid(tmp_path):
    assert main(["tune-beta", "--sizes", "30x10", "--beta", "0.1", "--out", str(tmp_path),
                 "--no-traces"]) == 0
    rows = _read(tmp_path / "tune_beta.csv")
    assert rows[0] == ["M", "N", "iter[beta=0.1]", "time[beta=0.1]"]
    assert not (tmp_path / "traces").exists()


def test_rls_bench_small(tmp_path):
    assert main(["rls-bench", "--sizes", "40x20", "--out", str(tmp_path), "--max-iter", "50"]) == 0
    rows = _read(tmp_path / "rls_bench.csv")
    assert rows[0][2::2] == ["iter[DRS_THETA]", "iter[DRS_ALPHA]", "iter[DCA]", "iter[GDCP]"]
    trace = _read(tmp_path / "traces" / "rls_40x20_GDCP.csv")
    assert trace[0][:4] == ["n", "err", "err_squared", "err_relative"]


def test_svm_bench_tables(tmp_path):
    data = write_toy_dataset(tmp_path / "toy.csv")
    out = tmp_path / "o"
    assert main(["svm-bench", "--dataset", str(data), "--splits", "0.1,0.3", "--out", str(out),
                 "--max-iter", "300"]) == 0
    for name in ("svm_split10.csv", "svm_split30.csv"):
        rows = _read(out / name)
        assert rows[0] == ["metric", "ADMM", "DRS_THETA", "DRS_ALPHA", "DCA", "GDCP"]
        assert [r[0] for r in rows[1:]] == ["Accuracy", "Precision", "Time", "MAE", "MSE",
                                            "RMSE", "Iterations"]
    for r in csv.DictReader(open(out / "svm_bench.csv")):
        acc, mae, mse, rmse = (float(r[k]) for k in ("accuracy", "mae", "mse", "rmse"))
        assert abs(mae - 2 * (1 - acc)) <= 1e-10
        assert abs(mse - 2 * mae) <= 1e-10
        assert abs(rmse - mse ** 0.5) <= 1e-10
        assert acc > 0.8


def test_svm_undersample(tmp_path):
    data = write_toy_dataset(tmp_path / "toy.csv")
    assert main(["svm-bench", "--dataset", str(data), "--splits", "0.2", "--undersample",
                 "--methods", "DCA", "--out", str(tmp_path / "o")]) == 0
    summary = json.loads((tmp_path / "o" / "svm_bench_summary.json").read_text())
    assert summary["arguments"]["undersample"] is True


@pytest.mark.parametrize("argv", [
    ["tune-theta", "--sizes", "20x5", "--kappa", "2.5"],
    ["tune-theta", "--sizes", "20x5", "--beta", "0"],
    ["tune-beta", "--sizes", "20x5", "--theta", "-1"],
    ["rls-bench", "--sizes", "20x5", "--alpha-scale", "2"],
    ["rls-bench", "--sizes", "20x5", "--methods", "ADMM"],
    ["tune-theta", "--sizes", "20x5", "--theta", ""],
    ["tune-theta", "--sizes", "banana"],
    ["frobnicate"],
])
def test_config_errors_exit_one(argv, tmp_path, capsys):
    with_out = argv + ["--out", str(tmp_path)] if argv != ["frobnicate"] else argv
    try:
        code = main(with_out)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert not (tmp_path / "traces").exists()


def test_data_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,class\n1,0\nzz,1\n")
    assert main(["svm-bench", "--dataset", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["svm-bench", "--dataset", str(tmp_path / "missing.csv"),
                 "--out", str(tmp_path)]) == 2
    assert main(["svm-bench", "--dataset", str(bad), "--label-col", "nope",
                 "--out", str(tmp_path)]) == 2


def test_thread_cap_validation(tmp_path, monkeypatch):
    monkeypatch.setenv("DC_SPLIT_THREADS", "lots")
    assert main(["tune-theta", "--sizes", "20x5", "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("threads", ["1", "3"])
def test_determinism_across_worker_counts(tmp_path, monkeypatch, threads):
    monkeypatch.setenv("DC_SPLIT_THREADS", "1")
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["rls-bench", "--sizes", "40x20,50x25", "--max-iter", "80", "--seed", "5"]
    assert main(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv("DC_SPLIT_THREADS", threads)
    assert main(argv + ["--out", str(b)]) == 0
    files = sorted(p.relative_to(a) for p in a.rglob("*.csv"))
    assert files == sorted(p.relative_to(b) for p in b.rglob("*.csv"))
    for f in files:
        assert masked_csv(a / f) == masked_csv(b / f)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "dcsplit", "tune-beta", "--sizes", "20x5",
                           "--beta", "1", "--out", str(tmp_path)], capture_output=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "tune_beta.csv").exists()
