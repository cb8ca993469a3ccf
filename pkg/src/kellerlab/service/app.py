"""FastAPI service wrapping the lab.

Every computation the CLI offers is an endpoint here; the CLI is a thin
client of this app.  Domain errors surface as HTTP 400 (input) or 422
(numeric) with a typed envelope so clients can map them to exit codes.
All handlers are pure functions of their request bodies: given the same
payload the service returns the same bytes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..catalog import MapCatalog, bundled_catalog, catalog_from_json
from ..charset import build_characteristic_set, removed_volume
from ..errors import InputError, KellerLabError, NumericalError, SchemaError
from ..experiments import config_from_json, run_experiment
from ..fibers import geometric_degree
from ..maps import compose, is_keller
from ..serialize import (charset_from_json, charset_to_json, map_from_json,
                         map_to_json, tract_to_json, word_to_json)
from ..tame import decompose_automorphism, invert_word
from ..tracts import tract_search
from ..volume import BallDomain, CharsetDomain, rho_distance
from . import schemas


def _resolve_catalog(payload: schemas.CatalogPayload) -> MapCatalog:
    if payload.catalog is not None:
        return catalog_from_json(payload.catalog)
    if payload.use_bundled:
        return bundled_catalog()
    raise SchemaError("no catalog provided")


def _entry(catalog: MapCatalog, name: str):
    try:
        return catalog[name]
    except KeyError:
        raise SchemaError(f"map {name!r} not in catalog")


def _domain(spec: schemas.DomainSpec):
    if spec.kind == "ball":
        if spec.radius <= 0:
            raise SchemaError("ball radius must be positive")
        return BallDomain(spec.radius)
    if spec.charset is None:
        raise SchemaError("charset domain needs a charset document")
    return CharsetDomain(charset_from_json(spec.charset))


def create_app() -> FastAPI:
    app = FastAPI(title="kellerlab", version=__version__)

    @app.exception_handler(KellerLabError)
    async def _domain_error(_req: Request, exc: KellerLabError):
        status = 400 if isinstance(exc, InputError) else 422
        body = schemas.ErrorEnvelope(
            kind="input" if isinstance(exc, InputError) else "numeric",
            type=type(exc).__name__, message=str(exc))
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/catalog/validate", response_model=schemas.ValidateResponse)
    def validate(req: schemas.ValidateRequest):
        cat = _resolve_catalog(req)
        return schemas.ValidateResponse(
            entries=len(cat.entries), names=cat.names(),
            automorphisms=[e.name for e in cat.with_tag("automorphism")])

    @app.post("/maps/compose", response_model=schemas.ComposeResponse)
    def compose_maps(req: schemas.ComposeRequest):
        cat = _resolve_catalog(req)
        left = _entry(cat, req.left).map
        right = _entry(cat, req.right).map
        result = compose(left, right)
        return schemas.ComposeResponse(map=map_to_json(result),
                                       keller=is_keller(result),
                                       degree=float(result.degree))

    @app.post("/maps/degree", response_model=schemas.DegreeResponse)
    def degree(req: schemas.DegreeRequest):
        cat = _resolve_catalog(req)
        entry = _entry(cat, req.name)
        best, cards = geometric_degree(entry.map, req.trials, req.seed,
                                       return_cardinalities=True)
        return schemas.DegreeResponse(
            name=req.name, degree=best, trials=req.trials, seed=req.seed,
            cardinalities=cards, bezout_bound=float(entry.map.bezout_bound()))

    @app.post("/maps/decompose", response_model=schemas.DecomposeResponse)
    def decompose(req: schemas.DecomposeRequest):
        cat = _resolve_catalog(req)
        entry = _entry(cat, req.name)
        word = decompose_automorphism(entry.map)
        return schemas.DecomposeResponse(name=req.name, word=word_to_json(word),
                                         factors=len(word))

    @app.post("/maps/invert", response_model=schemas.InvertResponse)
    def invert(req: schemas.InvertRequest):
        cat = _resolve_catalog(req)
        entry = _entry(cat, req.name)
        word = entry.word or decompose_automorphism(entry.map)
        inverse = invert_word(word)
        from ..tame import expand_word
        return schemas.InvertResponse(name=req.name, word=word_to_json(inverse),
                                      inverse_map=map_to_json(expand_word(inverse)))

    @app.post("/metric/rho", response_model=schemas.RhoResponse)
    def rho(req: schemas.RhoRequest):
        cat = _resolve_catalog(req)
        left = _entry(cat, req.left)
        right = _entry(cat, req.right)
        est = rho_distance(left.map, right.map, _domain(req.domain),
                           req.samples, req.seed,
                           f_inverse=left.inverse_map,
                           g_inverse=right.inverse_map,
                           workers=req.workers)
        return schemas.RhoResponse(
            left=req.left, right=req.right, value=est.value, stderr=est.stderr,
            samples=est.samples, seed=est.seed,
            box=None if est.box is None else [list(b) for b in est.box])

    @app.post("/tracts/search", response_model=schemas.TractSearchResponse)
    def tracts(req: schemas.TractSearchRequest):
        if req.map is not None:
            target = map_from_json(req.map)
        elif req.name is not None:
            cat = _resolve_catalog(req)
            target = _entry(cat, req.name).map
        else:
            raise SchemaError("provide a map or a catalog name")
        hits = tract_search(target, req.alpha_max, req.beta_max, req.phi_deg_max)
        return schemas.TractSearchResponse(tracts=[
            schemas.TractHit(**tract_to_json(r),
                             flags=sorted(fl.value for fl in flags))
            for r, flags in hits])

    @app.post("/charset/build", response_model=schemas.CharsetBuildResponse)
    def charset_build(req: schemas.CharsetBuildRequest):
        cs = build_characteristic_set(req.ball_radius, req.slices,
                                      req.bundles_per_slice,
                                      req.fattening_radius, req.seed)
        return schemas.CharsetBuildResponse(
            charset=charset_to_json(cs),
            stars=sum(len(s.stars) for s in cs.slices),
            removed_volume=removed_volume(cs))

    @app.post("/experiments/run")
    def experiment(req: schemas.ExperimentRequest):
        cat = _resolve_catalog(req)
        cfg = config_from_json(req.config)
        try:
            return run_experiment(cfg, cat)
        except NumericalError as exc:
            # captured into a report, never a crash
            return {"operation": cfg.kind, "inputs": cfg.as_dict(),
                    "seed": cfg.seed, "samples": cfg.samples,
                    "assertions": [], "estimates": {}, "passed": False,
                    "error": {"kind": "numeric", "type": type(exc).__name__,
                              "message": str(exc)}}

    return app


app = create_app()
