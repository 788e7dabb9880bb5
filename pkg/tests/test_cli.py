from __future__ import annotations

import json
from pathlib import Path

import pytest

from barrelwin.cli import main, run

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _run(tmp_path, name, command, *extra):
    out = tmp_path / f"{name}-{command}"
    code = main(["--config", str(CONFIGS / f"{name}.cfg"), "--command", command, "--out", str(out), *extra])
    report = json.loads((out / "report.json").read_text()) if (out / "report.json").exists() else None
    return code, report, out


def test_analyze_grassmannian(tmp_path):
    code, report, _ = _run(tmp_path, "gr26", "analyze")
    assert code == 0
    assert [row["eta"] for row in report["destabilizing_data"]] == ["12", "4", "4"]
    assert report["checks"]["narrowing_stabilizes"]


def test_analyze_nef_polarization(tmp_path):
    code, report, _ = _run(tmp_path, "sym4_nef", "analyze")
    assert code == 0 and report["stability"]["finite_stabilizers"] is True


def test_even_summand_is_refused(tmp_path):
    code, report, _ = _run(tmp_path, "sym2_even", "analyze")
    assert code == 2 and report["status"] == "refused"
    assert report["refusal"]["hypothesis"] == "gl2-summand-odd"


def test_collection_count_and_csv(tmp_path):
    code, report, out = _run(tmp_path, "gr210", "collection", "--emit-csv")
    assert code == 0 and report["count"] == 45
    header = (out / "collection.csv").read_text().splitlines()[0]
    assert header == "a,b,in_strip,in_cylinder,in_barrel,dominant"


def test_reduce_writes_a_certificate(tmp_path):
    code, report, out = _run(tmp_path, "sym3", "reduce", "--seed-box", "2")
    assert code == 0 and report["mismatches"] == [] and report["seed_box"] == 2
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["engine"] == "fano"


def test_toric_and_compose(tmp_path):
    code, report, _ = _run(tmp_path, "p1xp1", "toric")
    assert code == 0 and report["region_equality"]["equal"] is True
    code, report, _ = _run(tmp_path, "flag_quiver", "compose")
    assert code == 0 and report["count"] == 36


def test_verify_with_degree_budget(tmp_path):
    code, report, _ = _run(tmp_path, "sym3", "verify", "--degree-budget", "6")
    assert code == 0 and report["degree_budget"] == 6


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        main(["--config", str(CONFIGS / "gr26.cfg"), "--command", "dance"])
    assert err.value.code == 1
    assert main(["--config", str(tmp_path / "missing.cfg"), "--command", "analyze"]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("group = gl2\n")
    assert main(["--config", str(bad), "--command", "analyze"]) == 1
    assert main(["--config", str(CONFIGS / "gr26.cfg"), "--command", "compose"]) == 1
    assert main(["--config", str(CONFIGS / "gr26.cfg"), "--command", "analyze", "--seed-box", "0"]) == 1


def test_stdout_report(capsys):
    code, report = run(["--config", str(CONFIGS / "p1xp1.cfg"), "--command", "collection"])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["count"] == report["count"] == 4
