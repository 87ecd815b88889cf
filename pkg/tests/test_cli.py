from __future__ import annotations

import io
import json
import shutil
import subprocess
import sys

import pytest

from k3fgl import cli
from k3fgl.exact import DomainError
from k3fgl.fgl import CongruenceViolation, v_polynomials
from k3fgl.store import ResultStore, RunConfig, load_config, parse_config_text


def run(*argv: str) -> tuple[int, dict | None, str]:
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


def test_r_table_cell():
    code, doc, _ = run("r-table", "--tau", "20", "--h", "10")
    assert code == 0
    assert doc["result"] == {"r": [1, 2, 5, 10]}
    assert doc["schema"] == 1 and doc["seed"] == 0


def test_full_r_table():
    code, doc, _ = run("r-table")
    assert doc["evidence"]["cells"] == 55
    assert doc["result"]["table"]["18"]["6"] == [1, 3]


def test_gamma_check_command():
    code, doc, _ = run("gamma-check", "--p", "5", "--N", "4")
    assert code == 0
    assert doc["result"] == {"alpha": 519, "equal": True, "gamma_side": 519}


def test_height_command():
    code, doc, _ = run("height", "--family", "diagonal-quartic", "--p", "7")
    assert code == 0
    assert doc["result"]["classification"] == "SupersingularUpTo(3)"
    assert doc["evidence"]["u_p_mod_p"] == 0


def test_height_on_x_line():
    code, doc, _ = run("height", "--family", "quasi-diagonal-quartic", "--p", "13", "--x", "9")
    assert doc["result"]["classification"] == "Height2"


def test_envelope_fields():
    _, doc, _ = run("families")
    assert set(doc) == {"schema", "command", "params", "seed", "config", "result", "evidence", "meta"}
    assert set(doc["meta"]) == {"timestamp", "elapsed_s", "cached"}
    assert len(doc["result"]) == 12


def test_determinism_modulo_meta():
    argv = ("unit-root", "--family", "diagonal-quartic", "--p", "13")
    lines = [run(*argv)[2] for _ in range(2)]
    assert cli.strip_meta(lines[0]) == cli.strip_meta(lines[1])


@pytest.mark.parametrize("argv", [
    ("height", "--family", "nope", "--p", "5"),
    ("height", "--family", "diagonal-quartic", "--p", "9"),
    ("height-scan", "--family", "sextic-pencil-1", "--p", "3"),
    ("v-polys", "--family", "diagonal-quartic", "--p", "13"),
    ("q49-scan", "--p-max", "5"),
    ("r-table", "--tau", "7", "--h", "1"),
    ("log-coeffs", "--family", "diagonal-quartic", "--p", "5", "--params", "lam=3"),
    ("height", "--family", "diagonal-quartic", "--p", "5", "--precision", "1"),
    ("gamma-check", "--p", "7"),
    ("point-count", "--form", "[[1, [2, 0, 0]], [1, [1, 0, 0]]]", "--q", "5"),
    ("bogus-command",),
])
def test_usage_errors_exit_2(argv):
    code, doc, _ = run(*argv)
    assert code == 2 and doc is None


def test_computational_failure_exits_1(monkeypatch):
    def broken(args, cfg):
        raise CongruenceViolation("u(5) != alpha u(1)", mu=1, s=0)
    monkeypatch.setitem(cli.COMMANDS, "gamma-check", broken)
    code, doc, _ = run("gamma-check", "--p", "5")
    assert code == 1
    assert doc["result"]["error"] == "CongruenceViolation"
    assert doc["evidence"] == {"mu": 1, "s": 0}


def test_cache_hit_and_invalidation(tmp_path):
    argv = ("v-polys", "--family", "quasi-diagonal-quartic", "--p", "13", "--cache", str(tmp_path))
    c1, d1, l1 = run(*argv)
    c2, d2, l2 = run(*argv)
    assert not d1["meta"]["cached"] and d2["meta"]["cached"]
    assert cli.strip_meta(l1) == cli.strip_meta(l2)
    _, d3, _ = run(*argv, "--seed", "4")
    assert not d3["meta"]["cached"]
    _, d4, _ = run(*argv, "--precision", "5")
    assert not d4["meta"]["cached"]
    _, d5, _ = run(*argv, "--no-cache")
    assert not d5["meta"]["cached"]


def test_cache_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("K3FGL_CACHE_DIR", str(tmp_path / "env"))
    run("unit-root", "--family", "diagonal-quartic", "--p", "5")
    assert list((tmp_path / "env").glob("*.json"))


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for a scan\nN = 6\ns_max = 2\nseed = 7\n")
    _, doc, _ = run("families", "--config", str(cfg))
    assert doc["config"] == {"N": 6, "D": 12, "s_max": 2, "mu_max": 3, "seed": 7}
    _, doc, _ = run("families", "--config", str(cfg), "--seed", "1")
    assert doc["seed"] == 1
    cfg.write_text("colour = blue\n")
    assert run("families", "--config", str(cfg))[0] == 2


def test_config_parser_and_invariants(monkeypatch):
    monkeypatch.delenv("K3FGL_CACHE_DIR", raising=False)
    assert parse_config_text("N=5\ncache = /tmp/x # trailing\n") == {"N": 5, "cache": "/tmp/x"}
    with pytest.raises(DomainError):
        parse_config_text("N five")
    with pytest.raises(DomainError):
        RunConfig(D=4)
    assert load_config(None, N=7).N == 7


def test_store_roundtrip(tmp_path):
    store = ResultStore(tmp_path)
    store.put("k", {"a": [1, 2]})
    assert store.get("k") == {"a": [1, 2]}
    assert store.get("missing") is None
    assert not list(tmp_path.glob("*.tmp"))


def test_height_scan_quasi_diagonal_quartic():
    code, doc, _ = run("height-scan", "--family", "quasi-diagonal-quartic", "--p", "13")
    r = doc["result"]
    assert code == 0
    assert r["height2_x"] == [9]
    assert r["x_histogram"] == {"Height1": 11, "Height2": 1}
    assert r["gcd_trivial"]
    assert [row["lam"] for row in r["lambda_table"]] == list(range(1, 13))
    assert doc["evidence"]["x_images_of_lambdas"] == [4]


def test_height_scan_quasi_diagonal_sextic():
    _, doc, _ = run("height-scan", "--family", "quasi-diagonal-sextic", "--p", "31")
    assert doc["result"]["height2_x"] == [17]


def test_height_scan_parallel_matches_serial():
    argv = ("height-scan", "--family", "quartic-pencil-1", "--p", "13", "--lam", "[1,2,3,5]")
    serial = run(*argv)[2]
    parallel = run(*argv, "--workers", "2")[2]
    a, b = json.loads(cli.strip_meta(serial)), json.loads(cli.strip_meta(parallel))
    a["params"].pop("workers", None), b["params"].pop("workers", None)
    assert a == b


def test_q49_small_and_crosslink(tmp_path):
    code, doc, _ = run("q49-scan", "--p-max", "14", "--family", "quasi-diagonal-quartic",
                       "--cache", str(tmp_path))
    rows = doc["result"]["rows"]
    assert [r["p"] for r in rows] == [5, 7, 11, 13]
    row13 = rows[-1]
    stored = ResultStore(tmp_path).get(row13["v_polys_key"])
    V1, V2 = v_polynomials("quasi-diagonal-quartic", 13)
    assert stored == {"V1": list(V1.coeffs), "V2": list(V2.coeffs)}


def test_v_polys_factor_output():
    _, doc, _ = run("v-polys", "--family", "quasi-diagonal-quartic", "--p", "13", "--factor")
    fac = doc["result"]["V2_factorization"]
    assert fac["unit"] == 8 and fac["degrees"] == [1, 1, 1, 1, 2, 8]
    assert doc["result"]["V1"] == [1, 10]


def test_slope_and_power_commands():
    _, doc, _ = run("slope-factor", "--coeffs", "[1,-26,25]", "--p", "5")
    assert doc["result"]["raw_slopes"] == [["0", 1], ["2", 1]]
    assert doc["evidence"]["functional_equation"]["c"] == -25
    _, doc, _ = run("power-structure", "--coeffs", "[1,-2,3,-2,1]")
    assert doc["result"]["Q"] == [1, -1, 1] and doc["result"]["r"] == 2
    _, doc, _ = run("newton", "--coeffs", "1 -26 25", "--p", "5")
    assert doc["result"]["vertices"] == [[0, 0], [1, 0], [2, 2]]


def test_congruence_check_kinds():
    base = ("congruence-check", "--family", "diagonal-quartic", "--p", "13")
    assert run(*base)[1]["result"]["holds"]
    code, doc, _ = run("congruence-check", "--family", "quartic-pencil-1", "--p", "13",
                       "--params", "lam=2", "--kind", "limit")
    assert code == 0 and doc["result"]["equal"]
    assert run(*base, "--kind", "limit")[0] == 2
    code, doc, _ = run("congruence-check", "--family", "diagonal-quartic", "--p", "7",
                       "--kind", "supersingular")
    assert code == 0 and doc["result"]["holds"]


def test_point_count_and_jacobi_commands():
    _, doc, _ = run("point-count", "--family", "diagonal-quartic", "--q", "5")
    assert doc["result"]["count"] == 0
    _, doc, _ = run("jacobi-sum", "--p", "13")
    assert doc["result"]["J"]["coeffs"] == [3, -2] and doc["result"]["norm_is_p"]
    _, doc, _ = run("jacobi-sum", "--p", "5", "--candidates")
    assert len(doc["result"]["candidates"]) == 8


def test_console_script():
    exe = shutil.which("k3fgl")
    cmd = [exe] if exe else [sys.executable, "-m", "k3fgl.cli"]
    proc = subprocess.run(cmd + ["r-table", "--tau", "18", "--h", "6"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"] == {"r": [1, 3]}
