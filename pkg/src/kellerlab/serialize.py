"""JSON wire formats.

Rationals travel as [numerator, denominator] pairs of decimal strings, so
arbitrary precision survives any JSON parser.  Polynomial terms are sorted
in canonical order (ascending total degree, then ascending Y-exponent) and
zero terms are rejected on input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .bipoly import BivariatePolynomial, UniPoly, canonical_order, uni_trim
from .errors import SchemaError
from .maps import PlanarPolyMap
from .rationals import GaussianRational
from .tame import (AffineFactor, Axis, ElementaryFactor, Factor, TameWord)
from .tracts import CanonicalRationalMap


def _fraction_out(x: Fraction) -> list[str]:
    return [str(x.numerator), str(x.denominator)]


def _fraction_in(v: Any, where: str) -> Fraction:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SchemaError("expected [numerator, denominator]", field=where)
    try:
        num, den = int(v[0]), int(v[1])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"non-integer fraction part: {exc}", field=where)
    if den == 0:
        raise SchemaError("zero denominator", field=where)
    return Fraction(num, den)


def rational_to_json(c: GaussianRational) -> dict:
    return {"re": _fraction_out(c.re), "im": _fraction_out(c.im)}


def rational_from_json(doc: Any, where: str = "rational") -> GaussianRational:
    if not isinstance(doc, dict) or "re" not in doc or "im" not in doc:
        raise SchemaError("expected {re: [..], im: [..]}", field=where)
    return GaussianRational(_fraction_in(doc["re"], where + ".re"),
                            _fraction_in(doc["im"], where + ".im"))


def polynomial_to_json(p: BivariatePolynomial) -> dict:
    terms = []
    for (i, j), c in p.items_canonical():
        terms.append({"i": i, "j": j,
                      "re": _fraction_out(c.re), "im": _fraction_out(c.im)})
    return {"terms": terms}


def polynomial_from_json(doc: Any, where: str = "polynomial") -> BivariatePolynomial:
    if not isinstance(doc, dict) or "terms" not in doc:
        raise SchemaError("expected {terms: [..]}", field=where)
    terms = {}
    previous = None
    for idx, t in enumerate(doc["terms"]):
        here = f"{where}.terms[{idx}]"
        if not isinstance(t, dict):
            raise SchemaError("term must be an object", field=here)
        try:
            i, j = int(t["i"]), int(t["j"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError("term needs integer i and j", field=here)
        if i < 0 or j < 0:
            raise SchemaError("negative exponent", field=here)
        c = GaussianRational(_fraction_in(t["re"], here + ".re"),
                             _fraction_in(t["im"], here + ".im"))
        if c.is_zero():
            raise SchemaError("zero terms are not permitted", field=here)
        if (i, j) in terms:
            raise SchemaError("duplicate exponent pair", field=here)
        key = canonical_order((i, j))
        if previous is not None and key <= previous:
            raise SchemaError("terms not in canonical order", field=here)
        previous = key
        terms[(i, j)] = c
    return BivariatePolynomial(terms)


def map_to_json(f: PlanarPolyMap) -> dict:
    return {"first": polynomial_to_json(f.first),
            "second": polynomial_to_json(f.second)}


def map_from_json(doc: Any, where: str = "map") -> PlanarPolyMap:
    if not isinstance(doc, dict) or "first" not in doc or "second" not in doc:
        raise SchemaError("expected {first: .., second: ..}", field=where)
    return PlanarPolyMap(polynomial_from_json(doc["first"], where + ".first"),
                         polynomial_from_json(doc["second"], where + ".second"))


def _unipoly_to_json(p: UniPoly) -> list:
    return [rational_to_json(c) for c in p]


def _unipoly_from_json(doc: Any, where: str) -> UniPoly:
    if not isinstance(doc, list):
        raise SchemaError("expected a coefficient list", field=where)
    return uni_trim(tuple(rational_from_json(c, f"{where}[{k}]")
                          for k, c in enumerate(doc)))


def word_to_json(w: TameWord) -> dict:
    factors = []
    for f in w.factors:
        if isinstance(f, AffineFactor):
            factors.append({"kind": "affine",
                            **{name: rational_to_json(getattr(f, name))
                               for name in "abcdef"}})
        else:
            factors.append({"kind": "elementary", "axis": f.axis.value,
                            "poly": _unipoly_to_json(f.poly)})
    return {"factors": factors}


def word_from_json(doc: Any, where: str = "word") -> TameWord:
    if not isinstance(doc, dict) or "factors" not in doc:
        raise SchemaError("expected {factors: [..]}", field=where)
    factors: list[Factor] = []
    for idx, fd in enumerate(doc["factors"]):
        here = f"{where}.factors[{idx}]"
        if not isinstance(fd, dict) or "kind" not in fd:
            raise SchemaError("factor needs a kind", field=here)
        if fd["kind"] == "affine":
            vals = {}
            for name in "abcdef":
                if name not in fd:
                    raise SchemaError(f"affine factor missing {name}", field=here)
                vals[name] = rational_from_json(fd[name], f"{here}.{name}")
            try:
                factors.append(AffineFactor(**vals))
            except ValueError as exc:
                raise SchemaError(str(exc), field=here)
        elif fd["kind"] == "elementary":
            axis = fd.get("axis")
            if axis not in ("x", "y"):
                raise SchemaError("axis must be 'x' or 'y'", field=here)
            factors.append(ElementaryFactor(Axis(axis),
                                            _unipoly_from_json(fd.get("poly", []), here + ".poly")))
        else:
            raise SchemaError(f"unknown factor kind {fd['kind']!r}", field=here)
    return TameWord(factors)


def tract_to_json(r: CanonicalRationalMap) -> dict:
    return {"alpha": r.alpha, "beta": r.beta, "phi": _unipoly_to_json(r.phi)}


def tract_from_json(doc: Any, where: str = "tract") -> CanonicalRationalMap:
    if not isinstance(doc, dict):
        raise SchemaError("expected a tract object", field=where)
    try:
        alpha, beta = int(doc["alpha"]), int(doc["beta"])
    except (KeyError, TypeError, ValueError):
        raise SchemaError("tract needs integer alpha and beta", field=where)
    return CanonicalRationalMap(alpha, beta,
                                _unipoly_from_json(doc.get("phi", []), where + ".phi"))


# -- characteristic sets -----------------------------------------------------


def charset_to_json(cs) -> dict:
    from .charset import CharacteristicSet

    assert isinstance(cs, CharacteristicSet)
    slices = []
    for sl in cs.slices:
        stars = []
        for s in sl.stars:
            stars.append({
                "center_w": _fraction_out(s.center_w),
                "valence": s.valence,
                "bundle": s.bundle,
                "length": _fraction_out(s.length),
                "rotation": s.rotation,
                "triangles": [[[v.real, v.imag] for v in tri]
                              for tri in s.triangles],
            })
        slices.append({
            "z_index": sl.z_index,
            "z_value": _fraction_out(sl.z_value),
            "segment": [_fraction_out(sl.segment[0]), _fraction_out(sl.segment[1])],
            "valences": list(sl.valences),
            "bundle_max_ray": [_fraction_out(m) for m in sl.bundle_max_ray],
            "stars": stars,
        })
    return {
        "ball_radius": cs.ball_radius,
        "slices_count": cs.slices_count,
        "bundles_per_slice": cs.bundles_per_slice,
        "fattening_radius": cs.fattening_radius,
        "seed": cs.seed,
        "truncation_note": cs.truncation_note,
        "slices": slices,
    }


def charset_from_json(doc: Any):
    from .charset import CharacteristicSet, StaredSegment, ThickStar
    from .maps import ComplexPoint

    if not isinstance(doc, dict):
        raise SchemaError("expected a characteristic-set object", field="charset")
    try:
        slices = []
        for sd in doc["slices"]:
            z = _fraction_in(sd["z_value"], "z_value")
            stars = []
            for st in sd["stars"]:
                cw = _fraction_in(st["center_w"], "center_w")
                stars.append(ThickStar(
                    center=ComplexPoint(complex(float(z), 0.0),
                                        complex(float(cw), 0.0)),
                    center_w=cw,
                    valence=int(st["valence"]),
                    bundle=int(st["bundle"]),
                    length=_fraction_in(st["length"], "length"),
                    rotation=float(st["rotation"]),
                    fattening_radius=float(doc["fattening_radius"]),
                    triangles=tuple(tuple(complex(v[0], v[1]) for v in tri)
                                    for tri in st["triangles"]),
                ))
            slices.append(StaredSegment(
                z_index=int(sd["z_index"]), z_value=z,
                segment=(_fraction_in(sd["segment"][0], "segment"),
                         _fraction_in(sd["segment"][1], "segment")),
                valences=tuple(int(v) for v in sd["valences"]),
                stars=tuple(stars),
                bundle_max_ray=tuple(_fraction_in(m, "bundle_max_ray")
                                     for m in sd["bundle_max_ray"]),
            ))
        return CharacteristicSet(
            ball_radius=float(doc["ball_radius"]),
            slices_count=int(doc["slices_count"]),
            bundles_per_slice=int(doc["bundles_per_slice"]),
            fattening_radius=float(doc["fattening_radius"]),
            seed=int(doc["seed"]),
            slices=tuple(slices),
            truncation_note=str(doc.get("truncation_note", "")),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed characteristic set: {exc}", field="charset")
