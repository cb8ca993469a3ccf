import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DeprecationWarning)
    from fastapi.testclient import TestClient

from kellerlab.catalog import catalog_to_json
from kellerlab.maps import PlanarPolyMap
from kellerlab.serialize import map_from_json, map_to_json
from kellerlab.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    out = client.get("/health")
    assert out.status_code == 200
    assert out.json()["status"] == "ok"


def test_validate_bundled(client):
    out = client.post("/catalog/validate", json={})
    assert out.status_code == 200
    body = out.json()
    assert body["entries"] == 12
    assert "shear" in body["names"]


def test_validate_inline_catalog_with_bad_tag(client, catalog):
    doc = catalog_to_json(catalog)
    doc["entries"][6]["tags"] = ["keller"]  # square_x is not keller
    out = client.post("/catalog/validate", json={"catalog": doc})
    assert out.status_code == 400
    body = out.json()
    assert body["kind"] == "input" and body["type"] == "TagMismatch"


def test_compose_endpoint(client, catalog):
    out = client.post("/maps/compose", json={"left": "shear", "right": "trans3"})
    assert out.status_code == 200
    body = out.json()
    composed = map_from_json(body["map"])
    from kellerlab.maps import compose
    assert composed == compose(catalog["shear"].map, catalog["trans3"].map)
    assert body["keller"] is True


def test_degree_endpoint(client):
    out = client.post("/maps/degree",
                      json={"name": "power_23", "trials": 3, "seed": 0})
    assert out.status_code == 200
    body = out.json()
    assert body["degree"] == 6 and len(body["cardinalities"]) == 3


def test_degree_endpoint_numeric_error(client, catalog):
    # a non-dominant map: the eliminant vanishes identically
    from kellerlab.bipoly import BivariatePolynomial
    X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()
    doc = catalog_to_json(catalog)
    doc["entries"].append({"name": "degenerate",
                           "map": map_to_json(PlanarPolyMap(X * Y, X * Y))})
    out = client.post("/maps/degree",
                      json={"catalog": doc, "name": "degenerate", "trials": 2})
    assert out.status_code == 422
    assert out.json()["kind"] == "numeric"


def test_decompose_endpoint(client):
    out = client.post("/maps/decompose", json={"name": "swap_shear"})
    assert out.status_code == 200
    assert out.json()["factors"] == 2
    out = client.post("/maps/decompose", json={"name": "square_x"})
    assert out.status_code == 400
    assert out.json()["type"] == "NotKeller"


def test_invert_endpoint(client, catalog):
    out = client.post("/maps/invert", json={"name": "shear"})
    assert out.status_code == 200
    inv = map_from_json(out.json()["inverse_map"])
    from kellerlab.maps import compose
    assert compose(catalog["shear"].map, inv) == PlanarPolyMap.identity()


def test_unknown_name_is_input_error(client):
    out = client.post("/maps/degree", json={"name": "nope"})
    assert out.status_code == 400
    assert out.json()["kind"] == "input"


def test_rho_endpoint(client):
    out = client.post("/metric/rho", json={
        "left": "identity", "right": "trans3",
        "domain": {"kind": "ball", "radius": 1.0},
        "samples": 50_000, "seed": 0})
    assert out.status_code == 200
    body = out.json()
    import math
    assert abs(body["value"] - math.pi ** 2) <= 3 * body["stderr"]
    # identical request, identical bytes
    again = client.post("/metric/rho", json={
        "left": "identity", "right": "trans3",
        "domain": {"kind": "ball", "radius": 1.0},
        "samples": 50_000, "seed": 0})
    assert again.json() == body


def test_rho_charset_domain(client):
    built = client.post("/charset/build", json={"ball_radius": 2.0,
                                                "slices": 1,
                                                "bundles_per_slice": 1,
                                                "fattening_radius": 0.0,
                                                "seed": 0})
    assert built.status_code == 200
    cs_doc = built.json()["charset"]
    out = client.post("/metric/rho", json={
        "left": "identity", "right": "shear",
        "domain": {"kind": "charset", "charset": cs_doc},
        "samples": 20_000, "seed": 1})
    assert out.status_code == 200
    assert out.json()["value"] > 0


def test_tract_search_endpoint(client):
    out = client.post("/tracts/search", json={"name": "hyper", "alpha_max": 2,
                                              "beta_max": 2, "phi_deg_max": 1})
    assert out.status_code == 200
    hits = out.json()["tracts"]
    assert any(h["alpha"] == 1 and h["beta"] == 1 and h["phi"] == []
               for h in hits)
    out = client.post("/tracts/search", json={"name": "shear", "alpha_max": 2,
                                              "beta_max": 3, "phi_deg_max": 2})
    assert out.json()["tracts"] == []


def test_charset_build_invariant_violation(client):
    out = client.post("/charset/build", json={"ball_radius": 1.0, "slices": 1,
                                              "bundles_per_slice": 1,
                                              "fattening_radius": 0.0, "seed": 0})
    assert out.status_code == 400
    assert out.json()["type"] == "InvariantViolation"


def test_experiment_endpoint(client):
    out = client.post("/experiments/run", json={
        "config": {"kind": "degree_multiplicativity", "seed": 0, "trials": 2,
                   "pairs": [["square_x", "cube_y"]]}})
    assert out.status_code == 200
    body = out.json()
    assert body["passed"] is True
    assert body["operation"] == "degree_multiplicativity"


def test_experiment_config_error(client):
    out = client.post("/experiments/run", json={"config": {"kind": "metric_axioms"}})
    assert out.status_code == 400
    assert out.json()["type"] == "SchemaError"
