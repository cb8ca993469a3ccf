import json

import pytest

from kellerlab.bipoly import BivariatePolynomial
from kellerlab.errors import SchemaError
from kellerlab.rationals import gr
from kellerlab.serialize import (map_from_json, map_to_json,
                                 polynomial_from_json, polynomial_to_json,
                                 rational_from_json, rational_to_json,
                                 tract_from_json, tract_to_json,
                                 word_from_json, word_to_json)
from kellerlab.tracts import CanonicalRationalMap

from conftest import random_polynomial, random_word
from kellerlab.rng import stream

X, Y = BivariatePolynomial.x(), BivariatePolynomial.y()


def test_rational_roundtrip():
    c = gr("-7/3", "22/7")
    doc = rational_to_json(c)
    assert doc == {"re": ["-7", "3"], "im": ["22", "7"]}
    assert rational_from_json(json.loads(json.dumps(doc))) == c


def test_polynomial_roundtrip_random():
    gen = stream(31, 9, 6)
    for _ in range(30):
        p = random_polynomial(gen, 4, 6)
        doc = json.loads(json.dumps(polynomial_to_json(p)))
        assert polynomial_from_json(doc) == p


def test_polynomial_terms_sorted_canonically():
    p = Y * Y + X + Y
    doc = polynomial_to_json(p)
    assert [(t["i"], t["j"]) for t in doc["terms"]] == [(1, 0), (0, 1), (0, 2)]


def test_polynomial_rejects_zero_terms():
    doc = {"terms": [{"i": 0, "j": 0, "re": ["0", "1"], "im": ["0", "1"]}]}
    with pytest.raises(SchemaError):
        polynomial_from_json(doc)


def test_polynomial_rejects_unsorted_terms():
    doc = {"terms": [
        {"i": 0, "j": 2, "re": ["1", "1"], "im": ["0", "1"]},
        {"i": 1, "j": 0, "re": ["1", "1"], "im": ["0", "1"]},
    ]}
    with pytest.raises(SchemaError):
        polynomial_from_json(doc)


def test_polynomial_rejects_bad_fraction():
    doc = {"terms": [{"i": 0, "j": 0, "re": ["1", "0"], "im": ["0", "1"]}]}
    with pytest.raises(SchemaError):
        polynomial_from_json(doc)


def test_map_roundtrip():
    m = map_from_json(json.loads(json.dumps(map_to_json(
        __import__("kellerlab.maps", fromlist=["PlanarPolyMap"]).PlanarPolyMap(
            X + Y * Y, Y)))))
    assert m.first == X + Y * Y and m.second == Y


def test_word_roundtrip_random():
    for k in range(12):
        w = random_word(37, k)
        doc = json.loads(json.dumps(word_to_json(w)))
        assert word_from_json(doc) == w


def test_word_rejects_bad_affine():
    doc = {"factors": [{"kind": "affine",
                        **{n: {"re": ["1", "1"], "im": ["0", "1"]}
                           for n in "abcdef"}}]}
    with pytest.raises(SchemaError):
        word_from_json(doc)  # determinant 0


def test_elementary_axis_validation():
    doc = {"factors": [{"kind": "elementary", "axis": "z", "poly": []}]}
    with pytest.raises(SchemaError):
        word_from_json(doc)


def test_tract_roundtrip():
    r = CanonicalRationalMap(2, 3, (gr(1), gr("1/2")))
    doc = json.loads(json.dumps(tract_to_json(r)))
    assert tract_from_json(doc) == r
