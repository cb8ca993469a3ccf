import json

import pytest
from click.testing import CliRunner

from kellerlab.catalog import catalog_to_json
from kellerlab.cli import main
from kellerlab.maps import PlanarPolyMap
from kellerlab.serialize import map_to_json


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def catalog_file(tmp_path, catalog):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog_to_json(catalog)))
    return str(path)


def test_validate_ok(runner, catalog_file):
    out = runner.invoke(main, ["validate", catalog_file])
    assert out.exit_code == 0
    assert "12 entries" in out.output


def test_validate_bad_catalog_exit_3(runner, tmp_path, catalog):
    doc = catalog_to_json(catalog)
    doc["entries"].append(dict(doc["entries"][0]))  # duplicate name
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    out = runner.invoke(main, ["validate", str(path)])
    assert out.exit_code == 3
    assert "DuplicateName" in out.output


def test_compose_and_degree(runner):
    out = runner.invoke(main, ["compose", "square_x", "cube_y"])
    assert out.exit_code == 0
    assert "keller: False" in out.output
    out = runner.invoke(main, ["degree", "power_23", "--trials", "3"])
    assert out.exit_code == 0
    assert "degree power_23: 6" in out.output


def test_decompose_and_invert(runner):
    out = runner.invoke(main, ["decompose", "swap_shear"])
    assert out.exit_code == 0 and "2 factors" in out.output
    out = runner.invoke(main, ["decompose", "square_x"])
    assert out.exit_code == 3
    out = runner.invoke(main, ["invert", "shear"])
    assert out.exit_code == 0


def test_rho_command(runner):
    out = runner.invoke(main, ["rho", "identity", "trans3",
                               "--samples", "20000", "--seed", "0"])
    assert out.exit_code == 0
    assert "rho(identity,trans3)" in out.output


def test_rho_charset_domain(runner, tmp_path):
    cs_path = tmp_path / "cs.json"
    out = runner.invoke(main, ["charset", "build", "--out", str(cs_path),
                               "--slices", "1", "--bundles", "1"])
    assert out.exit_code == 0 and cs_path.exists()
    out = runner.invoke(main, ["rho", "identity", "shear",
                               "--domain", f"charset:{cs_path}",
                               "--samples", "20000"])
    assert out.exit_code == 0


def test_tracts_search_command(runner):
    out = runner.invoke(main, ["tracts", "search", "hyper"])
    assert out.exit_code == 0
    assert "3 tracts" in out.output


def test_experiment_command_pass(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 2,
                               "pairs": [["square_x", "cube_y"]]}))
    report = tmp_path / "report.json"
    out = runner.invoke(main, ["experiment", "degree_multiplicativity",
                               "--config", str(cfg), "--seed", "0",
                               "--out", str(report)])
    assert out.exit_code == 0, out.output
    doc = json.loads(report.read_text())
    assert doc["passed"] is True and doc["operation"] == "degree_multiplicativity"


def test_experiment_command_assertion_failure_exit_2(runner, tmp_path, catalog):
    # a catalog claiming the wrong expected degree fails the experiment
    doc = catalog_to_json(catalog)
    for e in doc["entries"]:
        if e["name"] == "square_x":
            e["expected_degree"] = 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    out = runner.invoke(main, ["experiment", "degree_multiplicativity",
                               "--catalog", str(bad), "--seed", "0"])
    assert out.exit_code == 2
    assert "FAIL" in out.output


def test_degree_numeric_error_exit_4(runner, tmp_path, catalog):
    from kellerlab.bipoly import BivariatePolynomial
    X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()
    doc = catalog_to_json(catalog)
    doc["entries"].append({"name": "degenerate",
                           "map": map_to_json(PlanarPolyMap(X * Y, X * Y))})
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(doc))
    out = runner.invoke(main, ["degree", "degenerate", "--trials", "2",
                               "--catalog", str(path)])
    assert out.exit_code == 4
    assert "ResultantVanishes" in out.output


def test_experiment_csv_export(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 20000, "scales": [1.0, 2.0],
                               "triples": [["identity", "identity", "trans3"]]}))
    csv_path = tmp_path / "ratios.csv"
    out = runner.invoke(main, ["experiment", "contraction", "--config", str(cfg),
                               "--seed", "0", "--csv", str(csv_path)])
    assert out.exit_code == 0, out.output
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0] == "scale,ratio,stderr"
    assert len(rows) == 3


def test_twelve_significant_digits(runner):
    out = runner.invoke(main, ["rho", "identity", "trans3",
                               "--samples", "20000", "--seed", "0"])
    value = out.output.split("=")[1].strip().split(" ")[0]
    mantissa = value.replace(".", "").lstrip("-0")
    assert len(mantissa) >= 11  # 12 significant digits requested
