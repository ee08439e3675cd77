import json

import jsonschema
import pytest

from nscusp.cli import main
from nscusp.report import (
    REPORT_SCHEMA,
    ResultCache,
    RunReport,
    build_report,
    cached_report,
    resolve_cache_dir,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_23(capsys, cache_dir):
    code, out, _ = run(capsys, "compute", "-p", "23", "--cache-dir", str(cache_dir))
    assert code == 0
    d = json.loads(out)
    jsonschema.validate(d, REPORT_SCHEMA)
    assert d["order"] == str(23**4 * 37181)
    assert d["ord_p"] == "4" and d["floor"] == "4"
    assert d["classification"] == "ELEMENTARY_RANK_FLOOR"
    assert d["q_parity"] is None and d["analytic"] is None
    assert [f[:2] for f in d["factors"]] == [["23", "4"], ["37181", "1"]]


def test_compute_67_and_out_file(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "compute", "-p", "67", "--no-cache", "--out", str(out_file))
    assert code == 0 and out == ""
    d = json.loads(out_file.read_text())
    assert d["classification"] == "HAS_ORDER_P_SQUARED"
    jsonschema.validate(d, REPORT_SCHEMA)


@pytest.mark.parametrize("p", ["4", "1", "91"])
def test_compute_rejects_non_prime(capsys, p):
    code, _, err = run(capsys, "compute", "-p", p, "--no-cache")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "InvalidInput"


def test_compute_analytic(capsys):
    code, out, _ = run(capsys, "compute", "-p", "13", "--analytic", "--no-cache")
    d = json.loads(out)
    jsonschema.validate(d, REPORT_SCHEMA)
    assert d["analytic"]["upper_ok"] is True
    assert d["q_parity"] is True


@pytest.mark.parametrize("p", [5, 13, 23, 37, 67])
def test_report_round_trip(p):
    rep = build_report(p)
    d = rep.to_json()
    jsonschema.validate(d, REPORT_SCHEMA)
    back = RunReport.from_json(json.loads(json.dumps(d)))
    assert back == rep
    assert back.to_json() == d


def test_cache_hit_equals_miss(cache_dir):
    cache = ResultCache(cache_dir)
    miss, hit0 = cached_report(29, cache)
    hit, hit1 = cached_report(29, cache)
    assert (hit0, hit1) == (False, True)
    assert miss.body() == hit.body()
    assert cache.path(29).exists()
    assert not list(cache_dir.glob(".tmp-*"))


def test_cache_upgrades_to_analytic(cache_dir):
    cache = ResultCache(cache_dir)
    cached_report(11, cache)
    rep, hit = cached_report(11, cache, analytic=True)
    assert not hit and rep.analytic is not None
    plain, hit = cached_report(11, cache)
    assert hit and plain.analytic is None


def test_cache_dir_precedence(monkeypatch, tmp_path):
    monkeypatch.setenv("CACHE_DIR", str(tmp_path / "env"))
    assert resolve_cache_dir(None) == tmp_path / "env"
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    monkeypatch.delenv("CACHE_DIR")
    assert resolve_cache_dir(None).name == "nscusp"


def test_cache_ignores_other_versions(cache_dir):
    old = ResultCache(cache_dir, version="0.0.1")
    rep = build_report(7)
    old.put(rep)
    assert ResultCache(cache_dir).get(7) is None


def test_verify_table_fresh_then_cached(capsys, cache_dir):
    code, out, _ = run(capsys, "verify-table", "--cache-dir", str(cache_dir))
    assert code == 0
    assert "8/8 PASS" in out and "[cache]" not in out
    code, out, _ = run(capsys, "verify-table", "--cache-dir", str(cache_dir))
    assert code == 0
    assert "8/8 PASS" in out
    assert out.count("[cache]") == 8


def test_verify_table_tampered(capsys, tmp_path):
    fixture = tmp_path / "table.json"
    fixture.write_text(json.dumps([
        {"p": "23", "factors": [["23", "4"], ["37181", "1"]]},
        {"p": "37", "factors": [["3", "4"], ["7", "2"], ["19", "3"], ["37", "9"], ["577", "2"]]},
    ]))
    code, out, _ = run(capsys, "verify-table", "--no-cache", "--fixture", str(fixture))
    assert code == 1
    assert "p=37   FAIL" in out
    assert "expected: 3^4 * 7^2 * 19^3 * 37^9 * 577^2" in out
    assert "computed: 3^4 * 7^2 * 19^3 * 37^8 * 577^2" in out
    assert "1/2 PASS" in out


def _lines(out):
    return [json.loads(x) for x in out.splitlines()]


def test_scan_small_all_floor(capsys):
    code, out, _ = run(capsys, "scan", "--min", "5", "--max", "31", "--no-cache")
    assert code == 0
    lines = _lines(out)
    summary = lines[-1]["summary"]
    assert summary["classification_counts"] == {"ELEMENTARY_RANK_FLOOR": "9"}
    assert summary["irregular_primes"] == []
    for d in lines[:-1]:
        jsonschema.validate(d, REPORT_SCHEMA)


def test_scan_irregular_and_parallel_determinism(capsys, cache_dir):
    args = ["scan", "--min", "5", "--max", "101", "--no-timings"]
    code, serial, _ = run(capsys, *args, "--no-cache")
    assert code == 0
    code, parallel, _ = run(capsys, *args, "--jobs", "4", "--cache-dir", str(cache_dir))
    assert code == 0
    assert serial == parallel
    assert _lines(serial)[-1]["summary"]["irregular_primes"] == ["37", "59", "67", "101"]
    # a cached rerun is identical too
    _, cached, _ = run(capsys, *args, "--jobs", "4", "--cache-dir", str(cache_dir))
    assert cached == serial


def test_scan_invalid_range(capsys):
    code, _, err = run(capsys, "scan", "--min", "50", "--max", "10", "--no-cache")
    assert code == 2
    assert "error" in json.loads(err)


def test_growth_empty_and_limit(capsys):
    code, out, _ = run(capsys, "growth", "--max", "4", "--json")
    assert code == 0
    assert json.loads(out) == {"band": None, "rows": []}
    code, _, _ = run(capsys, "growth", "--max", "1000")
    assert code == 2


def test_growth_small(capsys):
    code, out, _ = run(capsys, "growth", "--max", "31", "--json")
    assert code == 0
    d = json.loads(out)
    assert [r["p"] for r in d["rows"]] == ["5", "7", "11", "13", "17", "19", "23", "29", "31"]
    for r in d["rows"]:
        assert r["upper_ok"] and r["full_lower_ok"] and r["ln_order_ok"]
        assert r["fe_residual"] < 1e-6
    assert -3 < d["band"]["min"] <= d["band"]["max"] < 0
    code, out, _ = run(capsys, "growth", "--max", "13")
    assert "(ln order - p ln p)/p in" in out


def test_factor_command(capsys):
    code, out, _ = run(capsys, "factor", str(23**4 * 37181))
    assert code == 0
    d = json.loads(out)
    assert d["factors"] == [["23", "4", True], ["37181", "1", True]]
    assert d["complete"]
    assert run(capsys, "factor", "0")[0] == 2
    assert run(capsys, "factor", "abc")[0] == 2
