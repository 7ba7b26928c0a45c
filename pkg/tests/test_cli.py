import subprocess
import sys
from pathlib import Path

DATA = Path(__file__).parent / "data"


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "twsolve", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )


def test_solve_writes_outputs(tmp_path):
    gr = tmp_path / "c5.gr"
    gr.write_text((DATA / "c5.gr").read_text())
    res = run_cli("solve", str(gr))
    assert res.returncode == 0, res.stderr
    assert "tw = 2" in res.stdout
    assert (tmp_path / "c5.td").exists()
    assert (tmp_path / "c5.cert").exists()


def test_solve_then_verify_roundtrip(tmp_path):
    gr = tmp_path / "grid3.gr"
    gr.write_text((DATA / "grid3.gr").read_text())
    assert run_cli("solve", str(gr)).returncode == 0
    res = run_cli("verify", str(gr), str(tmp_path / "grid3.cert"))
    assert res.returncode == 0, res.stdout + res.stderr
    assert "certificate ok" in res.stdout


def test_verify_tampered_certificate_exits_3(tmp_path):
    gr = tmp_path / "c5.gr"
    gr.write_text((DATA / "c5.gr").read_text())
    run_cli("solve", str(gr))
    cert = tmp_path / "c5.cert"
    cert.write_text(cert.read_text().replace("s cert 2", "s cert 1"))
    res = run_cli("verify", str(gr), str(cert))
    assert res.returncode == 3
    assert "width" in res.stdout


def test_parse_error_exits_2(tmp_path):
    bad = tmp_path / "bad.gr"
    bad.write_text((DATA / "bad_duplicate.gr").read_text())
    res = run_cli("solve", str(bad))
    assert res.returncode == 2
    assert "duplicate" in res.stderr


def test_usage_error_exits_1(tmp_path):
    res = run_cli("solve", str(tmp_path / "missing.gr"))
    assert res.returncode == 1
    res2 = run_cli("frobnicate")
    assert res2.returncode == 1


def test_oracle_subcommand(tmp_path):
    gr = tmp_path / "k4.gr"
    gr.write_text((DATA / "k4.gr").read_text())
    res = run_cli("oracle", str(gr))
    assert res.returncode == 0 and "tw = 3" in res.stdout


def test_timeout_exits_4(tmp_path):
    # a hard 30-vertex instance cannot finish in a few milliseconds
    from conftest import random_connected
    from twsolve.pace import emit_gr

    g = random_connected(30, 75, 3)
    gr = tmp_path / "hard.gr"
    gr.write_text(emit_gr(g))
    res = run_cli("solve", str(gr), "--timeout-s", "0.05")
    assert res.returncode == 4, res.stdout + res.stderr


def test_bench_reports(tmp_path):
    for name in ["c5.gr", "k4.gr", "p3.gr"]:
        (tmp_path / name).write_text((DATA / name).read_text())
    out = tmp_path / "report"
    res = run_cli("bench", str(tmp_path), "--out-dir", str(out), "--timeout-s", "60")
    assert res.returncode == 0, res.stderr
    assert (out / "results.csv").exists()
    assert (out / "times.png").exists()
    assert (out / "solved_within.png").exists()
    rows = (out / "results.csv").read_text().splitlines()
    assert rows[0] == "instance,n,m,width,time_s,timed_out"
    assert len(rows) == 4
    widths = {r.split(",")[0]: r.split(",")[3] for r in rows[1:]}
    assert widths == {"c5": "2", "k4": "3", "p3": "1"}


def test_bench_timeout_marks_row_and_exits_4(tmp_path):
    from conftest import random_connected
    from twsolve.pace import emit_gr

    (tmp_path / "easy.gr").write_text((DATA / "p3.gr").read_text())
    (tmp_path / "hard.gr").write_text(emit_gr(random_connected(30, 75, 3)))
    out = tmp_path / "report"
    res = run_cli(
        "bench", str(tmp_path), "--out-dir", str(out), "--timeout-s", "0.05"
    )
    assert res.returncode == 4
    rows = (out / "results.csv").read_text().splitlines()
    marked = {r.split(",")[0]: r.split(",")[5] for r in rows[1:]}
    assert marked["hard"] == "1" and marked["easy"] == "0"
