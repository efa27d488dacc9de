from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cforge.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, main
from cforge.tables import DATA_DIR, build_target_list, load_findings, read_dt_list


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def gram_files(tmp_path, witnesses):
    out = {}
    for t in witnesses["targets"]:
        p = tmp_path / f"{t['name']}.txt"
        p.write_text("\n".join("(" + " ".join(map(str, r)) + ")" for r in t["goeritz"]) + "\n")
        out[t["name"]] = (p, t["dim"])
    return out


def test_embed_check_exhausted(capsys, gram_files):
    for path, dim in gram_files.values():
        code, out, _ = _run(capsys, "embed-check", "--gram", str(path), "--dim", str(dim))
        res = json.loads(out)
        assert code == EXIT_OK
        assert res["outcome"] == "Exhausted"
        assert set(res) >= {"outcome", "nodes", "wall_ms"} and "witness" not in res


def test_embed_check_witness(capsys, tmp_path):
    p = tmp_path / "g.csv"
    p.write_text("2,1\n1,2\n")
    code, out, _ = _run(capsys, "embed-check", "--gram", str(p), "--dim", "3")
    res = json.loads(out)
    assert code == EXIT_OK and res["outcome"] == "Witness" and len(res["witness"]) == 3


def test_embed_check_budget_exit_code(capsys, gram_files, monkeypatch):
    path, dim = gram_files["17ah_0168368"]
    code, out, _ = _run(capsys, "embed-check", "--gram", str(path), "--dim", str(dim), "--budget-nodes", "5")
    assert code == EXIT_BUDGET and json.loads(out)["outcome"] == "Inconclusive"
    monkeypatch.setenv("CFORGE_BUDGET_NODES", "5")
    code, _, _ = _run(capsys, "embed-check", "--gram", str(path), "--dim", str(dim))
    assert code == EXIT_BUDGET
    code, _, _ = _run(capsys, "embed-check", "--gram", str(path), "--dim", str(dim), "--budget-nodes", "100000000")
    assert code == EXIT_OK


def test_input_errors(capsys, tmp_path):
    assert _run(capsys, "identify", "[1,0,2]")[0] == EXIT_INPUT
    assert _run(capsys, "identify", "[4,4,2]", "--kind", "dt")[0] == EXIT_INPUT
    p = tmp_path / "g.txt"
    p.write_text("1 2\n2 1\n")
    assert _run(capsys, "embed-check", "--gram", str(p), "--dim", "3")[0] == EXIT_INPUT
    assert _run(capsys, "embed-check", "--gram", str(tmp_path / "missing"), "--dim", "3")[0] == EXIT_INPUT
    assert _run(capsys, "nosuchcommand")[0] == EXIT_INPUT


def test_identify(capsys):
    code, out, _ = _run(capsys, "identify", "[]")
    assert code == EXIT_OK and json.loads(out)["match"] == "0_1"


def test_ingest(capsys):
    code, out, _ = _run(capsys, "ingest", str(DATA_DIR / "fixture_table.csv"))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["records"] == rep["rows"] and not rep["skipped"]


def test_targets_appendix(capsys, tmp_path):
    out_path = tmp_path / "t.jsonl"
    code, _, err = _run(capsys, "targets", str(DATA_DIR / "appendix_targets.txt"), "--out", str(out_path))
    assert code == EXIT_OK
    assert len(out_path.read_text().splitlines()) == 3
    assert '"retained": 3' in err


def test_targets_wrong_signature(capsys, tmp_path):
    census = tmp_path / "c.txt"
    census.write_text("3_1 [4,6,2]\n4_1 [4,6,8,2]\n")
    code, out, _ = _run(capsys, "targets", str(census))
    assert code == EXIT_OK and out.strip() == ""


def test_targets_mixed_file_recount(capsys, tmp_path, corpus):
    lines = [f"{r['name']} {r['dt']}" for r in corpus if r["dt"]][:15]
    lines += [l.strip() for l in (DATA_DIR / "appendix_targets.txt").read_text().splitlines() if l.strip()]
    census = tmp_path / "mixed.txt"
    census.write_text("\n".join(lines) + "\n")
    code, out, _ = _run(capsys, "targets", str(census))
    retained = [json.loads(l)["name"] for l in out.splitlines()]
    recount = [n for n, dt in read_dt_list(census) if len(build_target_list([(n, dt)])) == 1]
    assert code == EXIT_OK and retained == recount and len(recount) == 3


def test_pulldown_and_audit(capsys, tmp_path):
    out_path = tmp_path / "f.jsonl"
    code, _, err = _run(capsys, "pulldown", "K11n80", "--kinds", "resolve", "--out", str(out_path), "--seed", "1")
    assert code == EXIT_OK
    findings = load_findings(out_path)
    assert any(f.result_match == "6_1" and f.inference == "g4=1 pulled down" for f in findings)
    assert '"event": "pulldown.done"' in err
    code, out, _ = _run(capsys, "audit", str(out_path))
    assert code == EXIT_OK and json.loads(out)["failures"] == []


def test_pullup_defaults_to_bundled_partner(capsys):
    code, out, _ = _run(capsys, "pullup", "K12n239", "--kinds", "crossing_change")
    found = [json.loads(l) for l in out.splitlines()]
    assert code == EXIT_OK
    assert found and all(f["result_match"] == "16a328556" and f["inference"] == "g4=2 pulled up" for f in found)


def test_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "cforge.cli", "identify", "[1,1,1]"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["match"] == "3_1"
