import io
import json
import math
import xml.etree.ElementTree as ET
from contextlib import redirect_stderr, redirect_stdout

import pytest

from datadesk.cli import main
from datadesk.table import parse_csv
from datadesk import ops

CSV = (
    "city,region,pop,income\n"
    "Oslo,East,700000,62000\n"
    "Bergen,West,290000,55000\n"
    "Trondheim,Mid,210000,53000\n"
    "Stavanger,West,145000,60000\n"
    "Drammen,East,102000,NA\n"
)

Z95 = 1.9599639845


@pytest.fixture()
def csv_path(tmp_path):
    p = tmp_path / "cities.csv"
    p.write_text(CSV)
    return str(p)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = run_cli(argv)
    assert code == 0, err
    return json.loads(out)


def test_schema(csv_path):
    got = run_json(["schema", "--input", csv_path])
    assert got["n_rows"] == 5
    by_name = {c["name"]: c for c in got["columns"]}
    assert by_name["pop"]["dtype"] == "integer"
    assert by_name["income"]["n_missing"] == 1


def test_summary_matches_core(csv_path):
    got = run_json(["summary", "--input", csv_path, "--column", "pop"])
    want = ops.summarize_column(parse_csv(CSV.encode()), "pop")
    assert got["mean"] == pytest.approx(want.mean)
    assert got["median"] == pytest.approx(want.median)
    assert got["sd"] == pytest.approx(want.sd)


def test_filter_json_and_csv_output(csv_path):
    pred = json.dumps({"column": "region", "op": "==", "value": "West"})
    got = run_json(["filter", "--input", csv_path, "--predicate", pred])
    assert got["total_rows"] == 2
    assert [r[0] for r in got["rows"]] == ["Bergen", "Stavanger"]

    code, out, _ = run_cli(["filter", "--input", csv_path,
                            "--predicate", pred, "--output", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "city,region,pop,income"
    assert len(out.splitlines()) == 3


def test_predicate_from_file(tmp_path, csv_path):
    pred_file = tmp_path / "pred.json"
    pred_file.write_text(json.dumps({"column": "pop", "op": ">",
                                     "value": 200000}))
    got = run_json(["filter", "--input", csv_path,
                    "--predicate", f"@{pred_file}"])
    assert got["total_rows"] == 3


def test_select_and_counts(csv_path):
    got = run_json(["select", "--input", csv_path, "--columns", "city,pop"])
    assert [c["name"] for c in got["columns"]] == ["city", "pop"]
    counts = run_json(["counts", "--input", csv_path, "--column", "region"])
    assert counts["entries"][0] == {"level": "East", "count": 2}


def test_aggregate_table_output(csv_path):
    spec = json.dumps({"group_by": ["region"],
                       "measures": [{"column": "pop", "fn": "sum"}]})
    code, out, _ = run_cli(["aggregate", "--input", csv_path,
                            "--spec", spec, "--output", "table"])
    assert code == 0
    assert "sum_pop" in out.splitlines()[0]
    assert any("802000" in line for line in out.splitlines())


def test_hist_svg_output(csv_path):
    code, out, err = run_cli(["hist", "--input", csv_path,
                              "--column", "pop", "--output", "svg"])
    assert code == 0, err
    root = ET.fromstring(out)
    assert root.tag.endswith("svg")
    # stdout is exactly the SVG document, nothing else
    assert out.startswith("<?xml")
    assert out.rstrip().endswith("</svg>")


def test_plot_points(csv_path):
    got = run_json(["plot", "--input", csv_path, "--x", "pop",
                    "--y", "income"])
    assert got["kind"] == "scatter"
    assert len(got["points"]) == 4


def series_csv(tmp_path):
    rows = ["year,value"]
    vals = []
    x = 0.0
    import random
    rng = random.Random(5)
    for i in range(60):
        x += rng.gauss(0, 1)
        vals.append(x)
        rows.append(f"{1950 + i},{x!r}")
    p = tmp_path / "rw.csv"
    p.write_text("\n".join(rows) + "\n")
    return str(p), vals


def test_ljungbox_and_ndiffs(tmp_path):
    path, vals = series_csv(tmp_path)
    lb = run_json(["ljungbox", "--input", path, "--series",
                   json.dumps({"value_col": "value",
                               "time": {"year_col": "year"}}),
                   "--max-lag", "5"])
    assert lb["lags"] == [1, 2, 3, 4, 5]
    assert all(q >= 0 for q in lb["q"])

    nd = run_json(["ndiffs", "--input", path, "--value-col", "value",
                   "--year-col", "year"])
    assert nd["ndiffs"] == 1
    assert "statistic" in nd["kpss"]


def test_forecast_random_walk_oracle(tmp_path):
    path, vals = series_csv(tmp_path)
    got = run_json(["forecast", "--input", path, "--value-col", "value",
                    "--year-col", "year", "--spec", "0,1,0",
                    "--horizon", "3"])
    assert got["point"] == pytest.approx([vals[-1]] * 3, abs=1e-10)
    sigma2 = got["model"]["sigma2"]
    for h in (1, 2, 3):
        half = Z95 * math.sqrt(sigma2 * h)
        assert got["intervals"]["0.95"]["upper"][h - 1] == pytest.approx(
            got["point"][h - 1] + half, rel=1e-8)
    assert got["times"] == ["2010", "2011", "2012"]


def test_forecast_horizon_rejected(tmp_path):
    path, _ = series_csv(tmp_path)
    code, out, err = run_cli(["forecast", "--input", path,
                              "--value-col", "value", "--year-col", "year",
                              "--spec", "0,1,0", "--horizon", "0"])
    assert code == 1
    assert out == ""
    assert "horizon_out_of_range" in err


def test_diff_output(tmp_path):
    path, vals = series_csv(tmp_path)
    got = run_json(["diff", "--input", path, "--value-col", "value",
                    "--year-col", "year", "--lag", "1"])
    want = [b - a for a, b in zip(vals, vals[1:])]
    assert got["values"] == pytest.approx(want)
    assert got["times"][0] == "1951"
    assert got["reference_line"] == pytest.approx(sum(want) / len(want))


def test_unknown_column_exit_code(csv_path):
    code, out, err = run_cli(["summary", "--input", csv_path,
                              "--column", "nope"])
    assert code == 1
    assert out == ""
    assert "unknown_column" in err


def test_missing_file_exit_code(tmp_path):
    code, out, err = run_cli(["schema", "--input",
                              str(tmp_path / "missing.csv")])
    assert code == 1
    assert out == ""


def test_usage_error_exit_code():
    code, _, _ = run_cli(["not-a-command"])
    assert code == 1
    code, _, _ = run_cli(["summary"])  # missing required args
    assert code == 1


def test_cli_matches_service_bodies(tmp_path, csv_path):
    """The CLI and the HTTP API emit identical payloads for the same inputs."""
    from fastapi.testclient import TestClient
    from datadesk.service import create_app

    app = create_app(data_dir=tmp_path / "svc")
    with TestClient(app) as client:
        r = client.post(
            "/api/datasets",
            files={"file": ("cities.csv", io.BytesIO(CSV.encode()))},
            data={"name": "cities"},
        )
        ds = r.json()["id"]

        cli_schema = run_json(["schema", "--input", csv_path])
        api_schema = client.get(f"/api/datasets/{ds}/schema").json()
        assert cli_schema == api_schema

        cli_sum = run_json(["summary", "--input", csv_path,
                            "--column", "income"])
        api_sum = client.post(f"/api/datasets/{ds}/summary",
                              json={"column": "income"}).json()
        assert cli_sum == api_sum

        cli_hist = run_json(["hist", "--input", csv_path, "--column", "pop"])
        api_hist = client.post(f"/api/datasets/{ds}/chart",
                               json={"kind": "histogram",
                                     "columns": ["pop"]}).json()
        api_hist.pop("kind")
        assert cli_hist == api_hist

        pred = {"column": "pop", "op": ">=", "value": 200000}
        cli_f = run_json(["filter", "--input", csv_path,
                          "--predicate", json.dumps(pred)])
        api_f = client.post(f"/api/datasets/{ds}/filter",
                            json={"predicate": pred}).json()
        assert cli_f["rows"] == api_f["rows"]
        assert cli_f["columns"] == api_f["columns"]
