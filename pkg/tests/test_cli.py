import csv
import subprocess
import sys

import pytest

from hypercross.cli import run
from hypercross.config import ConfigError, parse_text
from hypercross.harness import emit_csv, run_lemma_suite, run_rate_experiment

T42 = """\
# rate ladder for the Omega_1 residual
theorem = T4.2
omega = power(2,2)
order = 3
p = 2,2
q = 4,4
theta1 = 2,2
theta2 = 2,2
tau = 2,2
ladder = 2^4,2^5,2^6
"""


def test_parse_basic():
    cfg = parse_text(T42)
    assert cfg.p == (2.0, 2.0) and cfg.m == 2
    assert cfg.omega.family == "power" and cfg.l == 3
    assert cfg.ladder == (16, 32, 64)


@pytest.mark.parametrize("text,line", [
    ("p = 2,2\np = 3,3\n", 2),
    ("p = 2,2\nwhat = 1\n", 2),
    ("p = 2,2\nq = 1,2,3\n", 2),
    ("p = 2,2\nladder = 64,32\n", 2),
    ("p = 2,2\nladder = 3,8\n", 2),
    ("p = 2,x\n", 1),
    ("p 2\n", 1),
    ("p =\n", 1),
    ("p = 2\ntheorem = T9\n", 2),
    ("omega = power(2,2)\np = 2\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as err:
        parse_text(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_parse_needs_dimension():
    with pytest.raises(ConfigError):
        parse_text("seed = 3\n")


def test_rate_rows_shape():
    header, rows = run_rate_experiment(parse_text(T42))
    assert header[:4] == ("N", "error", "predicted", "ratio") and header[-1] == "wall_ms"
    assert [r[0] for r in rows] == [16, 32, 64]
    for N, err, pred, ratio, upper, ms in rows:
        assert err >= 0 and 0 < ratio < float("inf") and ratio == pytest.approx(err / pred)


def test_threads_do_not_change_rows():
    cfg = parse_text(T42)
    _, a = run_rate_experiment(cfg)
    cfg.threads = 3
    _, b = run_rate_experiment(cfg)
    assert [r[:5] for r in a] == [r[:5] for r in b]


def test_lemma_suite_oracles():
    cfg = parse_text("omega = power(1,1)\norder = 1\ntau = 2,3\nladder = 2^8,2^10\n")
    _, rows = run_lemma_suite(cfg)
    l1 = [r for r in rows if r[0] == "lemma1" and r[1] == 8][0]
    assert l1[3] == pytest.approx(9 ** (1 / 3)) and l1[5] == pytest.approx((9 / 8) ** (1 / 3))
    for r in rows:
        if r[0] == "eq4":
            assert r[3] == r[1] + 2
        if r[0] == "lemma4":
            assert 1 / 8 <= r[5] <= 8


def test_emit_csv(tmp_path):
    out = tmp_path / "x.csv"
    emit_csv(("a", "b"), [(1, 0.1), (2, 1 / 3)], out)
    assert out.read_text() == "a,b\n1,0.1\n2,0.3333333333333333\n"


def _write(tmp_path, text, name="c.cfg"):
    cfg = tmp_path / name
    cfg.write_text(text)
    return cfg


def test_cli_exit_codes(tmp_path):
    out = tmp_path / "o.csv"
    cfg = _write(tmp_path, T42)
    assert run(["rates", "--config", str(cfg), "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["N", "error", "predicted", "ratio", "upper", "wall_ms"] and len(rows) == 4
    assert run(["rates", "--config", str(tmp_path / "missing.cfg"), "--out", str(out)]) == 1
    bad = _write(tmp_path, T42.replace("q = 4,4", "q = 1.5,1.5"), "bad.cfg")
    assert run(["rates", "--config", str(bad), "--out", str(out)]) == 1
    assert run(["rates", "--config", str(cfg), "--out", str(tmp_path / "no" / "dir.csv")]) == 2


def test_cli_text_suites(tmp_path):
    cfg = _write(tmp_path, "omega = power(1,1)\norder = 1\nN = 4\nset = lambda\nwitness = f2\n")
    out = tmp_path / "s.txt"
    assert run(["sets", "--config", str(cfg), "--out", str(out)]) == 0
    assert out.read_text() == "0 3\n1 2\n2 1\n3 0\n"
    assert run(["witness", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().split()) == 4


def test_cli_seed_override(tmp_path):
    cfg = _write(tmp_path, "q = 2,2\ndegrees = 4\ncount = 3\n")
    a, b, c = (tmp_path / f"{n}.csv" for n in "abc")
    run(["inequalities", "--config", str(cfg), "--out", str(a), "--seed", "1"])
    run(["inequalities", "--config", str(cfg), "--out", str(b), "--seed", "1"])
    run(["inequalities", "--config", str(cfg), "--out", str(c), "--seed", "2"])
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_console_script_logs_to_stderr(tmp_path):
    cfg = _write(tmp_path, T42)
    out = tmp_path / "o.csv"
    proc = subprocess.run([sys.executable, "-m", "hypercross", "rates", "--config", str(cfg), "--out", str(out),
                           "-v"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "" and "T4.2" in proc.stderr
