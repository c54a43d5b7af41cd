import io
import subprocess
import sys

import pytest

from pindist.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_dist_interval():
    code, out, _ = run("dist", "--p", "3", "--gen", "interval", "--size", "2")
    assert code == 0
    assert kv(out)["delta_size"] == "3"
    assert kv(out)["distances"] == "0 1 2"


def test_dist_listing_is_capped():
    code, out, _ = run("dist", "--p", "2003", "--gen", "interval", "--size", "60")
    d = kv(out)
    assert code == 0
    assert int(d["delta_size"]) > 1000
    assert len(d["distances"].split()) == 1000
    assert int(d["distances_truncated"]) == int(d["delta_size"]) - 1000


def test_count_n_with_oracle():
    code, out, _ = run("count-n", "--p", "3", "--gen", "interval", "--size", "2", "--oracle")
    assert code == 0
    d = kv(out)
    assert d["n_total"] == "24" and d["n_oracle"] == "24" and d["oracle"] == "agree"
    assert int(d["n_restricted"]) + int(d["n_degenerate"]) == 24


def test_count_n_oracle_cap_refused():
    code, _, err = run("count-n", "--p", "101", "--gen", "interval", "--size", "20", "--oracle")
    assert code == 2 and "cap" in err


@pytest.mark.parametrize("token", ["4", "2", "1", "abc"])
def test_invalid_prime(token):
    code, out, err = run("dist", "--p", token, "--gen", "interval", "--size", "2")
    assert code == 1 and out == ""
    assert repr(token) in err


def test_usage_errors():
    assert run("dist", "--p", "7")[0] == 1
    assert run("dist", "--p", "7", "--gen", "interval")[0] == 1
    assert run("dist", "--p", "7", "--gen", "interval", "--size", "2", "--set", "x")[0] == 1
    code, _, err = run("dist", "--p", "7", "--gen", "gp:1:1", "--size", "2")
    assert code == 1 and "gp:1:1" in err
    assert run("frobnicate")[0] == 1
    assert run()[0] == 1


def test_set_file(tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("0, 1\n8\n")
    code, out, err = run("pin", "--p", "7", "--set", str(f))
    assert code == 0
    assert "merged 1" in err
    d = kv(out)
    assert d["best_pin_size"] == "3"
    num, den = map(int, d["guaranteed_bound"].split("/"))
    assert int(d["guaranteed_pin_size"]) * den >= num


def test_set_file_errors(tmp_path):
    code, _, err = run("dist", "--p", "7", "--set", str(tmp_path / "missing"))
    assert code == 1 and "missing" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 x3\n")
    code, _, err = run("dist", "--p", "7", "--set", str(bad))
    assert code == 1 and "'x3'" in err
    with_size = tmp_path / "ok.txt"
    with_size.write_text("1 2")
    assert run("dist", "--p", "7", "--set", str(with_size), "--size", "2")[0] == 1


def test_incidence_and_export(tmp_path):
    prefix = tmp_path / "inst"
    code, out, err = run("incidence", "--p", "5", "--gen", "interval", "--size", "2", "--export", str(prefix))
    assert code == 0
    d = kv(out)
    assert d["p_card"] == "4" and d["pi_card"] == "4" and d["incidences"] == "8"
    assert d["k_max"] == "2"
    assert d["rudnev_ratio"] == "1/2"
    assert (tmp_path / "inst.points").read_text().startswith("p=5\n")
    code2, out2, _ = run("incidence", "--p", "5", "--gen", "interval", "--size", "2", "--naive")
    assert kv(out2)["incidences"] == "8"


def test_incidence_warns_beyond_p_squared():
    code, _, err = run("incidence", "--p", "5", "--gen", "interval", "--size", "4")
    assert code == 0 and "exceeds p^2" in err


def test_verify_and_guard():
    code, out, _ = run("verify", "--p", "5", "--max-size", "3")
    assert code == 0 and kv(out)["failures"] == "0" and kv(out)["cases"] == "25"
    assert run("verify", "--p", "17", "--max-size", "2")[0] == 2
    assert run("verify", "--p", "17", "--max-size", "1", "--force")[0] == 0


def test_sweep(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("primes = 7, 11\nsizes = 2, 3\nspecs = interval, random\nseed = 3\n")
    out_csv = tmp_path / "rows.csv"
    code, out, _ = run("sweep", "--config", str(cfg), "--out", str(out_csv))
    assert code == 0 and kv(out)["rows"] == "8"
    first = out_csv.read_bytes()
    run("sweep", "--config", str(cfg), "--out", str(out_csv))
    assert out_csv.read_bytes() == first
    code, stdout_csv, _ = run("sweep", "--config", str(cfg), "--out", "-")
    assert stdout_csv.encode() == first


def test_sweep_config_errors(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("primes = 7\nsizes = 2\nspecs = interval\n")
    assert run("sweep", "--config", str(cfg))[0] == 1  # no out
    cfg.write_text("primes = 8\n")
    code, _, err = run("sweep", "--config", str(cfg), "--out", "-")
    assert code == 1 and "8" in err
    assert run("sweep", "--config", str(tmp_path / "nope"), "--out", "-")[0] == 1


def test_identical_invocations_identical_bytes():
    args = ("pin", "--p", "31", "--gen", "random", "--size", "6", "--seed", "4")
    assert run(*args)[1] == run(*args)[1]


def test_threads_env_var(monkeypatch):
    monkeypatch.setenv("PINDIST_THREADS", "3")
    a = run("count-n", "--p", "13", "--gen", "interval", "--size", "5")[1]
    monkeypatch.setenv("PINDIST_THREADS", "1")
    assert run("count-n", "--p", "13", "--gen", "interval", "--size", "5")[1] == a
    monkeypatch.setenv("PINDIST_THREADS", "zero")
    code, _, err = run("count-n", "--p", "13", "--gen", "interval", "--size", "5")
    assert code == 1 and "PINDIST_THREADS" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pindist.cli", "dist", "--p", "4", "--gen", "interval",
                           "--size", "2"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "'4'" in proc.stderr
