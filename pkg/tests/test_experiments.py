import copy
import json

import pytest

from kellerlab.errors import SchemaError
from kellerlab.experiments import (ExperimentConfig, config_from_json,
                                   run_experiment)


def _strip_timing(report: dict) -> dict:
    out = copy.deepcopy(report)
    out.pop("wall_time_ms", None)
    return out


def test_config_requires_seed():
    with pytest.raises(SchemaError):
        config_from_json({"kind": "metric_axioms"})


def test_config_rejects_unknown_kind():
    with pytest.raises(SchemaError):
        config_from_json({"kind": "mystery", "seed": 0})


def test_config_bounds_forms():
    cfg = config_from_json({"kind": "tract_survey", "seed": 1,
                            "bounds": {"alpha_max": 3, "beta_max": 2,
                                       "phi_deg_max": 1}})
    assert cfg.bounds == (3, 2, 1)
    cfg = config_from_json({"kind": "tract_survey", "seed": 1,
                            "bounds": [2, 2, 2]})
    assert cfg.bounds == (2, 2, 2)


def test_metric_axioms_small(catalog):
    cfg = ExperimentConfig(kind="metric_axioms", seed=3, samples=20_000)
    rep = run_experiment(cfg, catalog)
    names = [a["name"] for a in rep["assertions"]]
    assert sum(1 for n in names if n.startswith("identity_")) == 6
    assert sum(1 for n in names if n.startswith("triangle_")) == 20
    assert "symmetry" in names and "diameter_bound" in names
    assert all(a["passed"] for a in rep["assertions"]
               if a["name"].startswith(("identity_", "symmetry")))
    assert rep["estimates"] and rep["seed"] == 3


def test_reports_reproduce_bit_for_bit(catalog):
    cfg = ExperimentConfig(kind="isometry", seed=5, samples=20_000,
                           triples=(("shear", "identity", "trans3"),))
    a = run_experiment(cfg, catalog)
    b = run_experiment(cfg, catalog)
    assert _strip_timing(a) == _strip_timing(b)
    assert json.dumps(_strip_timing(a), sort_keys=True) == \
        json.dumps(_strip_timing(b), sort_keys=True)


def test_reports_worker_invariant(catalog):
    base = ExperimentConfig(kind="contraction", seed=7, samples=20_000,
                            scales=(1.0,),
                            triples=(("affine_rot", "identity", "trans3"),))
    par = ExperimentConfig(kind="contraction", seed=7, samples=20_000,
                           scales=(1.0,),
                           triples=(("affine_rot", "identity", "trans3"),),
                           workers=3)
    a = run_experiment(base, catalog)
    b = run_experiment(par, catalog)
    sa, sb = _strip_timing(a), _strip_timing(b)
    sa["inputs"].pop("workers"), sb["inputs"].pop("workers")
    assert sa == sb


def test_contraction_identity_ratios_are_exactly_one(catalog):
    cfg = ExperimentConfig(kind="contraction", seed=2, samples=20_000,
                           scales=(1.0, 2.0),
                           triples=(("identity", "identity", "trans3"),))
    rep = run_experiment(cfg, catalog)
    for row in rep["ratio_series"]["ratios"]:
        assert row["ratio"] == 1.0


def test_degree_multiplicativity_small(catalog):
    cfg = ExperimentConfig(kind="degree_multiplicativity", seed=0, trials=3,
                           pairs=(("square_x", "cube_y"),
                                  ("shear", "square_x")))
    rep = run_experiment(cfg, catalog)
    assert rep["passed"]
    mult = [a for a in rep["assertions"] if a["name"].startswith("multiplicative_")]
    assert len(mult) == 2


def test_tract_survey_and_union(catalog):
    rep = run_experiment(ExperimentConfig(kind="tract_survey", seed=0), catalog)
    assert rep["passed"]
    assert "no_tracts_shear" in [a["name"] for a in rep["assertions"]]
    rep = run_experiment(ExperimentConfig(kind="union_check", seed=0), catalog)
    assert rep["passed"]
    assert all(r["verdict"] for r in rep["union_checks"])


def test_charset_volume_experiment(catalog):
    cfg = ExperimentConfig(kind="charset_volume", seed=0, samples=50_000,
                           radius=2.0)
    rep = run_experiment(cfg, catalog)
    assert rep["passed"]
    names = [a["name"] for a in rep["assertions"]]
    assert "null_removal_volume" in names and "removed_volume_scaling" in names


def test_reports_are_self_contained(catalog):
    # the recorded inputs reconstruct the config and reproduce the run
    cfg = ExperimentConfig(kind="charset_volume", seed=9, samples=20_000,
                           radius=2.0)
    rep = run_experiment(cfg, catalog)
    again = run_experiment(config_from_json(rep["inputs"]), catalog)
    assert _strip_timing(rep) == _strip_timing(again)


def test_report_is_json_serializable(catalog):
    cfg = ExperimentConfig(kind="metric_axioms", seed=1, samples=10_000)
    rep = run_experiment(cfg, catalog)
    json.dumps(rep)
    for label, est in rep["estimates"].items():
        assert set(est) >= {"value", "stderr", "samples", "seed"}
