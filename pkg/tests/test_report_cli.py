import csv
import io
import json

import pytest

from wwmctx import cli, constructions, golden, report
from wwmctx.golden import ClosedForm


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("target", ["kcsb", "yu-oh", "peres-mermin"])
def test_report_is_deterministic_and_json_roundtrips(target):
    first = report.run_report(target, "json")
    assert report.run_report(target, "json") == first
    doc = report.ReportDocument.from_json(first)
    assert doc.to_json() == first


@pytest.mark.parametrize("target", ["kcsb", "yu-oh"])
def test_csv_and_json_agree(target):
    doc = report.run_report(target)
    rows = list(csv.DictReader(io.StringIO(doc.to_csv())))
    records = doc.to_dict()["records"]
    assert len(rows) == len(records)
    for row, rec in zip(rows, records):
        assert row["state"] == rec["state"] and row["verdict"] == rec["verdict"]
        for key in ("exact", "h0", "correction", "classical_bound"):
            assert float(row[key]) == rec[key]
        assert row["h0_exceeds_bound"] == str(rec["h0_exceeds_bound"]).lower()


def test_kcsb_report_content():
    d = report.run_report("kcsb").to_dict()
    assert d["flags"] == ["published Wigner grid for sup(0,0,0) differs from the computed grid"]
    assert d["details"]["basis_fit"]["projector_grids_match"] is True
    verdicts = {r["state"]: r["verdict"] for r in d["records"]}
    assert verdicts["phi3"] == "contextual"
    assert verdicts["phi1"] == "not-contextual-under-this-witness"


def test_pm_report_content():
    d = report.run_report("peres-mermin").to_dict()
    assert d["details"]["satisfying_assignments"] == 0
    assert d["details"]["satisfying_assignments_third_column_flipped"] > 0
    for name, info in d["details"]["contexts"].items():
        assert all(v["h0"] == 0 for v in info["expectations"].values())
        want = -1 if name == "col3" else 1
        assert all(abs(v["exact"] - want) < 1e-10 for v in info["expectations"].values())


def test_cli_report_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "yu-oh", "--format", "table")
    assert code == 0 and "construction: yu-oh" in out
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "report", "kcsb", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[0] == ",".join(report.RECORD_FIELDS)


def test_cli_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "peres-mermin")
    d = json.loads(out)
    assert code == 0 and d["satisfying_assignments"] == 0
    code, out, _ = run(capsys, "bounds", "kcsb")
    assert [c["classical_bound"] for c in json.loads(out)["certificates"]] == [2.0, 2.0]


def test_cli_weyl_grids(capsys):
    code, out, _ = run(capsys, "weyl", "phi1", "--dim", "3", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["normalization"] == "state"
    assert all(abs(d["grid"][p][q] - (1 / 3 if q == 0 else 0)) < 1e-12 for p in range(3) for q in range(3))
    code, out, _ = run(capsys, "weyl", "Pi1", "--dim", "3", "--format", "json")
    grid = json.loads(out)["grid"]
    published = golden.projector_grid_values()[0]
    assert max(abs(grid[p][q] - published[p][q]) for p in range(3) for q in range(3)) < 1e-9
    code, out, _ = run(capsys, "weyl", "Pi1", "--dim", "3", "--normalization", "observable", "--format", "json")
    assert abs(json.loads(out)["grid"][0][0] - 3 * grid[0][0]) < 1e-12
    code, out, _ = run(capsys, "weyl", "identity", "--dim", "5", "--format", "json")
    assert json.loads(out)["grid"] == [[1.0] * 5] * 5


def test_cli_weyl_qubit_and_matrix_file(capsys, tmp_path):
    code, out, _ = run(capsys, "weyl", "peres-mermin:YY", "--dim", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["kind"] == "grassmann" and len(d["terms"]) == 1
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    code, out, _ = run(capsys, "weyl", str(path), "--dim", "3", "--format", "json")
    assert code == 0 and all(abs(row[0] - 1) < 1e-12 for row in json.loads(out)["grid"])


def test_cli_exit_codes(capsys, tmp_path, monkeypatch):
    code, _, err = run(capsys, "weyl", "no-such-operator", "--dim", "3")
    assert code == cli.EXIT_INVALID and "cannot resolve" in err
    code, _, _ = run(capsys, "weyl", "kcsb:Pi1", "--dim", "5")
    assert code == cli.EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "dimension": 6, "rays": [[[1, 0]]], "witness": {"kind": "sum_projectors"}}))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == cli.EXIT_INVALID and "$.dimension" in err
    code, _, _ = run(capsys, "report", str(bad))
    assert code == cli.EXIT_INVALID

    def no_fit():
        raise constructions.BasisFitError("no labeling fits")

    monkeypatch.setitem(report.REPORTS, "kcsb", no_fit)
    code, _, err = run(capsys, "report", "kcsb")
    assert code == cli.EXIT_BASIS_FIT and "no labeling fits" in err


def test_cli_golden_mismatch(capsys, monkeypatch):
    row = golden.PAIR_WITNESS_TABLE["phi3"]
    monkeypatch.setitem(golden.PAIR_WITNESS_TABLE, "phi3", (ClosedForm("5"), row[1], row[2]))
    code, _, err = run(capsys, "report", "kcsb")
    assert code == cli.EXIT_GOLDEN and "phi3" in err


def test_cli_validate_ok(capsys, tmp_path):
    path = tmp_path / "kcsb.json"
    path.write_text(json.dumps(constructions.kcsb_config()))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 0 and out.startswith("ok: kcsb")
    code, out, _ = run(capsys, "report", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["construction"]["name"] == "kcsb"
