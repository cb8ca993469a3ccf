"""Command-line client of the lab service.

Every subcommand issues an HTTP request: against a remote server when
--server is given, otherwise against an in-process instance of the same
FastAPI app, so the two paths exercise identical code.  Numeric output is
printed with 12 significant digits.

Exit codes: 0 all assertions pass, 2 assertion failure, 3 input error,
4 numerical non-convergence.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:#.12g}"
    return str(x)


class ServiceClient:
    """HTTP client: remote via --server, else in-process ASGI."""

    def __init__(self, server: str | None):
        if server:
            import httpx
            self._client = httpx.Client(base_url=server, timeout=3600.0)
        else:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DeprecationWarning)
                from fastapi.testclient import TestClient
            from .service import app
            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                body = resp.json()
            except Exception:
                click.echo(f"error: HTTP {resp.status_code}", err=True)
                sys.exit(EXIT_INPUT)
            kind = body.get("kind", "input")
            message = body.get("message", body)
            click.echo(f"error [{body.get('type', 'Error')}]: {message}", err=True)
            sys.exit(EXIT_NUMERIC if kind == "numeric" else EXIT_INPUT)
        return resp.json()


def _catalog_payload(path: str | None) -> dict:
    if path is None:
        return {"use_bundled": True}
    try:
        return {"catalog": json.loads(Path(path).read_text())}
    except FileNotFoundError:
        click.echo(f"error: catalog file not found: {path}", err=True)
        sys.exit(EXIT_INPUT)
    except json.JSONDecodeError as exc:
        click.echo(f"error: invalid JSON in {path}: {exc}", err=True)
        sys.exit(EXIT_INPUT)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL; default runs in-process.")
@click.pass_context
def main(ctx, server):
    """Laboratory for planar polynomial maps with constant Jacobian."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.argument("catalog", type=click.Path())
@click.pass_obj
def validate(client: ServiceClient, catalog):
    """Validate a catalog file: schema, tags, words."""
    out = client.post("/catalog/validate", _catalog_payload(catalog))
    click.echo(f"{out['entries']} entries, all tags consistent")
    click.echo("maps: " + " ".join(out["names"]))
    click.echo("automorphisms: " + " ".join(out["automorphisms"]))


@main.command()
@click.argument("left")
@click.argument("right")
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def compose(client: ServiceClient, left, right, catalog):
    """Compose two catalog maps (left after right) and print the result."""
    payload = {**_catalog_payload(catalog), "left": left, "right": right}
    out = client.post("/maps/compose", payload)
    click.echo(json.dumps(out["map"]))
    click.echo(f"keller: {out['keller']}  degree: {fmt(out['degree'])}")


@main.command()
@click.argument("name")
@click.option("--trials", default=16, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def degree(client: ServiceClient, name, trials, seed, catalog):
    """Geometric degree by image-sampled fiber counting."""
    payload = {**_catalog_payload(catalog), "name": name,
               "trials": trials, "seed": seed}
    out = client.post("/maps/degree", payload)
    click.echo(f"degree {name}: {out['degree']}  "
               f"(bezout bound {fmt(out['bezout_bound'])}, "
               f"trials {out['trials']}, seed {out['seed']})")
    click.echo("cardinalities: " + " ".join(str(c) for c in out["cardinalities"]))


@main.command()
@click.argument("name")
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def decompose(client: ServiceClient, name, catalog):
    """Decompose an automorphism into affine and elementary factors."""
    payload = {**_catalog_payload(catalog), "name": name}
    out = client.post("/maps/decompose", payload)
    click.echo(f"{out['factors']} factors")
    click.echo(json.dumps(out["word"]))


@main.command()
@click.argument("name")
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def invert(client: ServiceClient, name, catalog):
    """Invert an automorphism; prints the inverse word and expanded map."""
    payload = {**_catalog_payload(catalog), "name": name}
    out = client.post("/maps/invert", payload)
    click.echo(json.dumps(out["word"]))
    click.echo(json.dumps(out["inverse_map"]))


@main.command()
@click.argument("left")
@click.argument("right")
@click.option("--domain", default="ball:1", show_default=True,
              help="ball:R or charset:FILE")
@click.option("--samples", default=100_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--workers", default=1, show_default=True)
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def rho(client: ServiceClient, left, right, domain, samples, seed, workers, catalog):
    """Image symmetric-difference distance between two catalog maps."""
    kind, _, arg = domain.partition(":")
    if kind == "ball":
        spec = {"kind": "ball", "radius": float(arg or 1.0)}
    elif kind == "charset":
        try:
            spec = {"kind": "charset",
                    "charset": json.loads(Path(arg).read_text())}
        except (FileNotFoundError, json.JSONDecodeError) as exc:
            click.echo(f"error: cannot read charset {arg}: {exc}", err=True)
            sys.exit(EXIT_INPUT)
    else:
        click.echo("error: --domain must be ball:R or charset:FILE", err=True)
        sys.exit(EXIT_INPUT)
    payload = {**_catalog_payload(catalog), "left": left, "right": right,
               "domain": spec, "samples": samples, "seed": seed,
               "workers": workers}
    out = client.post("/metric/rho", payload)
    click.echo(f"rho({left},{right}) = {fmt(out['value'])} "
               f"+- {fmt(out['stderr'])}  (samples {out['samples']}, seed {out['seed']})")


@main.group()
def tracts():
    """Asymptotic tract operations."""


@tracts.command("search")
@click.argument("name")
@click.option("--alpha-max", default=2, show_default=True)
@click.option("--beta-max", default=2, show_default=True)
@click.option("--phi-deg", default=1, show_default=True)
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def tracts_search(client: ServiceClient, name, alpha_max, beta_max, phi_deg, catalog):
    """Enumerate canonical tracts of a catalog map within bounds."""
    payload = {**_catalog_payload(catalog), "name": name,
               "alpha_max": alpha_max, "beta_max": beta_max,
               "phi_deg_max": phi_deg}
    out = client.post("/tracts/search", payload)
    hits = out["tracts"]
    click.echo(f"{len(hits)} tracts")
    for h in hits:
        click.echo(json.dumps(h))


@main.group()
def charset():
    """Characteristic-set operations."""


@charset.command("build")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--radius", default=2.0, show_default=True)
@click.option("--slices", default=2, show_default=True)
@click.option("--bundles", default=2, show_default=True)
@click.option("--fatten", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def charset_build(client: ServiceClient, out_path, radius, slices, bundles,
                  fatten, seed):
    """Build a characteristic set and write it to a JSON file."""
    payload = {"ball_radius": radius, "slices": slices,
               "bundles_per_slice": bundles, "fattening_radius": fatten,
               "seed": seed}
    out = client.post("/charset/build", payload)
    Path(out_path).write_text(json.dumps(out["charset"], indent=1))
    click.echo(f"wrote {out_path}: {out['stars']} stars, "
               f"removed volume {fmt(out['removed_volume'])}")


@main.command()
@click.argument("kind")
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="JSON config; CLI flags override nothing in it.")
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--csv", "csv_path", default=None, type=click.Path(),
              help="Write (scale, ratio) rows for ratio series.")
@click.option("--seed", default=None, type=int)
@click.option("--samples", default=None, type=int)
@click.option("--catalog", default=None, type=click.Path())
@click.pass_obj
def experiment(client: ServiceClient, kind, config_path, out_path, csv_path,
               seed, samples, catalog):
    """Run one experiment and emit its report."""
    cfg: dict = {}
    if config_path is not None:
        try:
            cfg = json.loads(Path(config_path).read_text())
        except (FileNotFoundError, json.JSONDecodeError) as exc:
            click.echo(f"error: cannot read config: {exc}", err=True)
            sys.exit(EXIT_INPUT)
    cfg["kind"] = kind
    if seed is not None:
        cfg["seed"] = seed
    cfg.setdefault("seed", 0)
    if samples is not None:
        cfg["samples"] = samples
    payload = {**_catalog_payload(catalog), "config": cfg}
    report = client.post("/experiments/run", payload)

    if out_path:
        Path(out_path).write_text(json.dumps(report, indent=1))
    if csv_path and "ratio_series" in report:
        rows = ["scale,ratio,stderr"]
        for r in report["ratio_series"]["ratios"]:
            rows.append(f"{fmt(r['scale'])},{fmt(r['ratio'])},{fmt(r['stderr'])}")
        Path(csv_path).write_text("\n".join(rows) + "\n")

    if "error" in report:
        click.echo(f"error [{report['error']['type']}]: {report['error']['message']}",
                   err=True)
        sys.exit(EXIT_NUMERIC if report["error"]["kind"] == "numeric"
                 else EXIT_INPUT)

    n_pass = sum(1 for a in report["assertions"] if a["passed"])
    click.echo(f"{report['operation']}: {n_pass}/{len(report['assertions'])} "
               f"assertions passed (seed {report['seed']})")
    for a in report["assertions"]:
        mark = "PASS" if a["passed"] else "FAIL"
        click.echo(f"  [{mark}] {a['name']}: {a['property']}")
    for label, est in report.get("estimates", {}).items():
        click.echo(f"  {label} = {fmt(est['value'])} +- {fmt(est['stderr'])}")
    sys.exit(EXIT_OK if report["passed"] else EXIT_ASSERTION)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn
    uvicorn.run("kellerlab.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
