import json
import math
import subprocess
import sys

import pytest

from kaclab import cli


def run(argv, capsys):
    code = cli.parse_and_dispatch(argv)
    out, err = capsys.readouterr()
    return code, out, err


def csv_body(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


def test_count_example(capsys):
    code, out, _ = run(["count", "--degree", "1000", "--dist", "gaussian", "--interval", "0,1",
                        "--samples", "10", "--seed", "42"], capsys)
    assert code == 0
    rows = csv_body(out)
    assert rows[0] == "sample_id,count,uncertain_cells" and len(rows) == 11
    assert "#@ seed=42" in out and "#@ samples=10" in out
    summary = out.split("# summary\n", 1)[1]
    doc = json.loads("".join(ln[2:] for ln in summary.splitlines()))
    assert doc["samples"] == 10 and "mean_count" in doc


def test_density_example(capsys):
    code, out, _ = run(["density", "--degree", "1000", "--points", "512"], capsys)
    assert code == 0
    rows = csv_body(out)
    assert rows[0] == "x,rho1" and len(rows) == 513
    x, v = rows[1].split(",")
    assert float(x) == 0 and float(v) == pytest.approx(1 / math.pi)


def test_figure1_example(capsys):
    code, out, _ = run(["figure1", "--seed", "7"], capsys)
    assert code == 0
    rows = csv_body(out)[1:]
    assert len({r.split(",")[0] for r in rows}) == 100


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(["count", "--bogus", "1"], capsys)
    assert code == 64 and "usage" in err
    code, _, _ = run(["nosuch"], capsys)
    assert code == 64


def test_invalid_values_exit_65(capsys):
    code, _, err = run(["count", "--samples", "0"], capsys)
    assert code == 65 and "samples" in err
    code, _, err = run(["count", "--interval", "1,0", "--degree", "10"], capsys)
    assert code == 65 and "interval" in err
    code, _, err = run(["density", "--degree", "0"], capsys)
    assert code == 65


def test_threads_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("KACLAB_THREADS", "2")
    code, out, _ = run(["count", "--degree", "30", "--samples", "4"], capsys)
    assert code == 0 and "#@ threads=2" in out
    monkeypatch.setenv("KACLAB_THREADS", "zero")
    code, _, err = run(["count", "--degree", "30", "--samples", "4"], capsys)
    assert code == 65 and "KACLAB_THREADS" in err


def test_help_per_subcommand():
    for sub in cli.SUBCOMMANDS:
        with pytest.raises(SystemExit) as e:
            cli.parse_and_dispatch([sub, "--help"])
        assert e.value.code == 0


def test_empty_config_gives_defaults(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("")
    assert cli.load_config(str(p)) == {}


def test_config_sets_samples(tmp_path, capsys):
    p = tmp_path / "run.cfg"
    p.write_text("# a comment\nsamples=5000\n")
    assert cli.load_config(str(p)) == {"samples": 5000}
    code, out, _ = run(["expect", "--degree", "50", "--config", str(p)], capsys)
    assert code == 0 and json.loads(out)["config"]["samples"] == 5000


def test_malformed_config_names_line(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("samples=10\nthis line is wrong\n")
    code, _, err = run(["count", "--config", str(p)], capsys)
    assert code == 65 and ":2:" in err
    p.write_text("samples=ten\n")
    code, _, err = run(["count", "--config", str(p)], capsys)
    assert code == 65 and ":1:" in err
    code, _, err = run(["count", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == 65


def test_precedence_flags_over_config(tmp_path, capsys):
    p = tmp_path / "run.cfg"
    p.write_text("degree=40\nsamples=3\n")
    code, out, _ = run(["count", "--config", str(p), "--samples", "5"], capsys)
    assert code == 0
    assert "#@ degree=40" in out and "#@ samples=5" in out
    assert len(csv_body(out)) == 6


def test_output_reproduces_itself(tmp_path, capsys):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert cli.parse_and_dispatch(["count", "--degree", "200", "--samples", "6", "--seed", "9",
                                   "--region", "unit-", "--out", str(first)]) == 0
    assert cli.parse_and_dispatch(["count", "--config", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_json_report_round_trip(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    args = ["compare", "--degree", "10000", "--m", "10", "--draws", "1000", "--seed", "3"]
    assert cli.parse_and_dispatch(args + ["--out", str(first)]) == 0
    assert cli.parse_and_dispatch(["compare", "--config", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    doc = json.loads(first.read_text())
    assert doc["assertions"]["powers_stormer"] and doc["schema_version"] == "1.0"


@pytest.mark.parametrize("argv", [
    ["sample", "--degree", "5", "--index", "2"],
    ["sample", "--dist", "rademacher", "--moments", "1000"],
    ["expect", "--degree", "100", "--region", "outer+"],
    ["expect", "--degree", "100", "--interval", "0.5,2"],
    ["process", "--grid-end", "2", "--grid-step", "0.5", "--paths", "2"],
    ["process", "--paths", "200", "--summary"],
    ["process", "--grid-end", "3", "--grid-step", "0.5", "--sampler", "kernel", "--paths", "3"],
    ["concentration", "--degree", "100", "--samples", "200"],
    ["dyadic", "--degree", "100", "--samples", "50", "--j-range", "0,2", "--h", "0,1,3"],
])
def test_other_subcommands(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code in (0, 2)
    assert out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "kaclab", "expect", "--degree", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["results"]["expected_count"] == pytest.approx(1.0, abs=1e-8)
