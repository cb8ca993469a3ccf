"""Experiment drivers.

One experiment per invocation: a validated config dispatches to the owning
subsystem, and the result is a self-contained JSON report carrying every
input, the seed, all estimates with standard errors, and per-assertion
pass/fail records naming the property tested.  Reports are reproducible
bit-for-bit from (seed, config) for any worker count; only wall_time_ms
varies between runs.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Any

from .catalog import CatalogEntry, MapCatalog
from .errors import SchemaError
from .fibers import geometric_degree
from .maps import compose
from .serialize import tract_to_json
from .tame import expand_word, invert_word
from .tracts import (compose_with_tract, dual_map, component_parametrization,
                     implicitize, tract_search, asymptotic_union_check)
from .volume import (BallDomain, CharsetDomain, VolumeEstimate,
                     contraction_ratio, domain_volume_estimate,
                     rho_distance)

EXPERIMENT_KINDS = ("metric_axioms", "isometry", "contraction",
                    "degree_multiplicativity", "tract_survey",
                    "charset_volume", "union_check")

BALL_VOLUME_FACTOR = math.pi ** 2 / 2.0  # vol of the unit ball of R^4


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int
    samples: int = 100_000
    radius: float = 1.0
    scales: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    trials: int = 6
    bounds: tuple[int, int, int] = (2, 2, 1)
    charset_slices: int = 2
    charset_bundles: int = 2
    charset_fatten: float = 0.01
    pairs: tuple[tuple[str, str], ...] | None = None
    triples: tuple[tuple[str, str, str], ...] | None = None
    workers: int = 1

    def as_dict(self) -> dict:
        return {
            "kind": self.kind, "seed": self.seed, "samples": self.samples,
            "radius": self.radius, "scales": list(self.scales),
            "trials": self.trials, "bounds": list(self.bounds),
            "charset_slices": self.charset_slices,
            "charset_bundles": self.charset_bundles,
            "charset_fatten": self.charset_fatten,
            "pairs": None if self.pairs is None else [list(p) for p in self.pairs],
            "triples": None if self.triples is None else [list(t) for t in self.triples],
            "workers": self.workers,
        }


def config_from_json(doc: Any) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise SchemaError("config must be an object")
    kind = doc.get("kind")
    if kind not in EXPERIMENT_KINDS:
        raise SchemaError(f"kind must be one of {EXPERIMENT_KINDS}", field="kind")
    if "seed" not in doc:
        raise SchemaError("seed is mandatory", field="seed")
    kwargs: dict[str, Any] = {"kind": kind, "seed": int(doc["seed"])}
    for name, conv in (("samples", int), ("radius", float), ("trials", int),
                       ("charset_slices", int), ("charset_bundles", int),
                       ("charset_fatten", float), ("workers", int)):
        if name in doc:
            kwargs[name] = conv(doc[name])
    if "scales" in doc:
        kwargs["scales"] = tuple(float(t) for t in doc["scales"])
    if "bounds" in doc:
        b = doc["bounds"]
        if isinstance(b, dict):
            kwargs["bounds"] = (int(b["alpha_max"]), int(b["beta_max"]),
                                int(b["phi_deg_max"]))
        else:
            kwargs["bounds"] = tuple(int(v) for v in b)
            if len(kwargs["bounds"]) != 3:
                raise SchemaError("bounds must have three components", field="bounds")
    if doc.get("pairs") is not None:
        kwargs["pairs"] = tuple((str(a), str(b)) for a, b in doc["pairs"])
    if doc.get("triples") is not None:
        kwargs["triples"] = tuple((str(a), str(b), str(c)) for a, b, c in doc["triples"])
    return ExperimentConfig(**kwargs)


# -- report assembly ---------------------------------------------------------


class _Report:
    def __init__(self, cfg: ExperimentConfig, catalog: MapCatalog):
        self.cfg = cfg
        self.doc: dict[str, Any] = {
            "operation": cfg.kind,
            "inputs": cfg.as_dict(),
            "catalog": catalog.names(),
            "seed": cfg.seed,
            "samples": cfg.samples,
            "assertions": [],
            "estimates": {},
        }
        self._counter = itertools.count()
        self._start = time.perf_counter()

    def sub_seed(self) -> int:
        return self.cfg.seed * 1_000_003 + next(self._counter)

    def record(self, label: str, est: VolumeEstimate) -> VolumeEstimate:
        self.doc["estimates"][label] = est.as_dict()
        return est

    def check(self, name: str, passed: bool, prop: str, **details) -> bool:
        self.doc["assertions"].append(
            {"name": name, "passed": bool(passed), "property": prop,
             "details": details})
        return bool(passed)

    def finish(self) -> dict:
        self.doc["passed"] = all(a["passed"] for a in self.doc["assertions"])
        self.doc["wall_time_ms"] = (time.perf_counter() - self._start) * 1e3
        return self.doc


def _entry(catalog: MapCatalog, name: str) -> CatalogEntry:
    try:
        return catalog[name]
    except KeyError:
        raise SchemaError(f"map {name!r} not in catalog")


def _composed_with_inverse(left: CatalogEntry, right: CatalogEntry):
    """(left.map o right.map, its inverse) using the entries' tame words."""
    m = compose(left.map, right.map)
    if left.word is None or right.word is None:
        return m, None
    return m, expand_word(invert_word(left.word.concat(right.word)))


def _diameter_check(report: _Report, domain_volume: float, prop: str):
    """Every recorded distance estimate obeys the diameter bound
    value <= 2 * vol(domain) + 3 * stderr."""
    worst = None
    ok = True
    for label, est in report.doc["estimates"].items():
        if not label.startswith("rho"):
            continue
        margin = 2.0 * domain_volume + 3.0 * est["stderr"] - est["value"]
        if worst is None or margin < worst[1]:
            worst = (label, margin)
        if margin < 0:
            ok = False
    report.check("diameter_bound", ok,
                 prop, worst_label=None if worst is None else worst[0],
                 worst_margin=None if worst is None else worst[1],
                 domain_volume=domain_volume)


# -- metric axioms -----------------------------------------------------------


def _run_metric_axioms(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    autos = catalog.with_tag("automorphism")
    domain = BallDomain(cfg.radius)

    for e in autos:
        est = report.record(
            f"rho({e.name},{e.name})",
            rho_distance(e.map, e.map, domain, cfg.samples, report.sub_seed(),
                         f_inverse=e.inverse_map, g_inverse=e.inverse_map,
                         workers=cfg.workers))
        report.check(f"identity_{e.name}", est.value == 0.0 and est.stderr == 0.0,
                     "distance of a map to itself is exactly zero",
                     value=est.value)

    pair_est: dict[frozenset[str], VolumeEstimate] = {}
    for a, b in itertools.combinations(autos, 2):
        seed = report.sub_seed()
        est = report.record(
            f"rho({a.name},{b.name})",
            rho_distance(a.map, b.map, domain, cfg.samples, seed,
                         f_inverse=a.inverse_map, g_inverse=b.inverse_map,
                         workers=cfg.workers))
        pair_est[frozenset((a.name, b.name))] = est

    # estimator symmetry, bit for bit, on the first pair
    a, b = autos[0], autos[1]
    seed = report.sub_seed()
    fwd = rho_distance(a.map, b.map, domain, cfg.samples, seed,
                       f_inverse=a.inverse_map, g_inverse=b.inverse_map,
                       workers=cfg.workers)
    rev = rho_distance(b.map, a.map, domain, cfg.samples, seed,
                       f_inverse=b.inverse_map, g_inverse=a.inverse_map,
                       workers=cfg.workers)
    report.check("symmetry", fwd.value == rev.value and fwd.stderr == rev.stderr,
                 "the estimator is symmetric in its two maps by construction",
                 value_fg=fwd.value, value_gf=rev.value)

    for i, j, k in itertools.combinations(range(len(autos)), 3):
        ei, ej, ek = autos[i], autos[j], autos[k]
        dik = pair_est[frozenset((ei.name, ek.name))]
        dij = pair_est[frozenset((ei.name, ej.name))]
        djk = pair_est[frozenset((ej.name, ek.name))]
        slack = 3.0 * math.sqrt(dik.stderr ** 2 + dij.stderr ** 2 + djk.stderr ** 2)
        lhs = dik.value
        rhs = dij.value + djk.value + slack
        report.check(f"triangle_{ei.name}_{ej.name}_{ek.name}", lhs <= rhs,
                     "triangle inequality of the symmetric-difference distance",
                     lhs=lhs, rhs=rhs, slack=slack)

    _diameter_check(report, domain.volume(),
                    "the distance never exceeds twice the domain volume")
    return report.finish()


# -- isometry ----------------------------------------------------------------


DEFAULT_ISOMETRY_TRIPLES = (
    ("shear", "identity", "trans3"),
    ("shear", "identity", "shear_cubic"),
    ("swap_shear", "identity", "trans3"),
    ("swap_shear", "identity", "shear"),
    ("affine_rot", "identity", "trans3"),
    ("affine_rot", "shear", "trans3"),
    ("trans3", "identity", "shear"),
    ("trans3", "shear", "shear_cubic"),
    ("shear_cubic", "identity", "trans3"),
    ("affine_rot", "identity", "shear"),
)


def _run_isometry(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    domain = BallDomain(cfg.radius)
    triples = cfg.triples or DEFAULT_ISOMETRY_TRIPLES

    base_cache: dict[frozenset[str], VolumeEstimate] = {}
    for a_name, g1_name, g2_name in triples:
        a = _entry(catalog, a_name)
        g1 = _entry(catalog, g1_name)
        g2 = _entry(catalog, g2_name)
        key = frozenset((g1_name, g2_name))
        if key not in base_cache:
            base_cache[key] = report.record(
                f"rho({g1_name},{g2_name})",
                rho_distance(g1.map, g2.map, domain, cfg.samples,
                             report.sub_seed(), f_inverse=g1.inverse_map,
                             g_inverse=g2.inverse_map, workers=cfg.workers))
        base = base_cache[key]
        m1, inv1 = _composed_with_inverse(a, g1)
        m2, inv2 = _composed_with_inverse(a, g2)
        moved = report.record(
            f"rho({a_name}∘{g1_name},{a_name}∘{g2_name})",
            rho_distance(m1, m2, domain, cfg.samples, report.sub_seed(),
                         f_inverse=inv1, g_inverse=inv2, workers=cfg.workers))
        slack = 3.0 * math.sqrt(base.stderr ** 2 + moved.stderr ** 2)
        delta = abs(moved.value - base.value)
        report.check(f"isometry_{a_name}_{g1_name}_{g2_name}", delta <= slack,
                     "left composition with an automorphism preserves distances",
                     delta=delta, slack=slack,
                     base=base.value, moved=moved.value)

    _diameter_check(report, domain.volume(),
                    "the distance never exceeds twice the domain volume")
    return report.finish()


# -- contraction -------------------------------------------------------------


DEFAULT_CONTRACTION_TRIPLES = (
    # the first triple feeds the ratio ladder; an affine automorphism keeps
    # the image boxes tight at large dilations
    ("affine_rot", "identity", "trans3"),
    ("shear", "identity", "trans3"),
    ("swap_shear", "identity", "trans3"),
    ("shear_cubic", "identity", "trans3"),
    ("affine_rot", "identity", "shear"),
    ("trans3", "identity", "shear"),
    ("shear", "identity", "shear_cubic"),
    ("swap_shear", "shear", "trans3"),
    ("shear", "shear", "trans3"),
    ("identity", "identity", "trans3"),
)


def _run_contraction(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    domain = BallDomain(cfg.radius)
    triples = cfg.triples or DEFAULT_CONTRACTION_TRIPLES

    base_cache: dict[frozenset[str], VolumeEstimate] = {}
    for f_name, g1_name, g2_name in triples:
        f = _entry(catalog, f_name)
        g1 = _entry(catalog, g1_name)
        g2 = _entry(catalog, g2_name)
        key = frozenset((g1_name, g2_name))
        if key not in base_cache:
            base_cache[key] = report.record(
                f"rho({g1_name},{g2_name})",
                rho_distance(g1.map, g2.map, domain, cfg.samples,
                             report.sub_seed(), f_inverse=g1.inverse_map,
                             g_inverse=g2.inverse_map, workers=cfg.workers))
        base = base_cache[key]
        m1, inv1 = _composed_with_inverse(f, g1)
        m2, inv2 = _composed_with_inverse(f, g2)
        moved = report.record(
            f"rho({f_name}∘{g1_name},{f_name}∘{g2_name})",
            rho_distance(m1, m2, domain, cfg.samples, report.sub_seed(),
                         f_inverse=inv1, g_inverse=inv2, workers=cfg.workers))
        slack = 3.0 * math.sqrt(base.stderr ** 2 + moved.stderr ** 2)
        report.check(f"contraction_{f_name}_{g1_name}_{g2_name}",
                     moved.value <= base.value + slack,
                     "left composition never increases the distance",
                     moved=moved.value, base=base.value, slack=slack)

    # ratio ladder for the first triple (degree-one surrogate of the limit)
    f_name, g1_name, g2_name = triples[0]
    f = _entry(catalog, f_name)
    g1 = _entry(catalog, g1_name)
    g2 = _entry(catalog, g2_name)
    inverses = {}
    _, inverses["fg1"] = _composed_with_inverse(f, g1)
    _, inverses["fg2"] = _composed_with_inverse(f, g2)
    inverses["g1"], inverses["g2"] = g1.inverse_map, g2.inverse_map
    series = contraction_ratio(f.map, g1.map, g2.map, cfg.scales, cfg.samples,
                               report.sub_seed(), domain=domain,
                               inverses=inverses, workers=cfg.workers)
    for t, (num, den) in zip(series.scales, zip(series.numerators,
                                                series.denominators)):
        report.record(f"rho_num(t={t:g})", num)
        report.record(f"rho_den(t={t:g})", den)
    report.doc["ratio_series"] = {
        "f": f_name, "g1": g1_name, "g2": g2_name,
        "scales": list(series.scales),
        "ratios": [{"scale": t, "ratio": r, "stderr": s}
                   for t, (r, s) in zip(series.scales, series.ratios)],
    }
    is_auto = "automorphism" in f.tags
    if is_auto:
        in_window = all(0.9 <= r <= 1.1 for r, _ in series.ratios)
        report.check("ratio_window", in_window,
                     "distance ratios under an automorphism stay near one",
                     ratios=[r for r, _ in series.ratios])
        last_r, last_s = series.ratios[-1]
        report.check("ratio_limit_surrogate",
                     abs(last_r - 1.0) <= 3.0 * last_s,
                     "at the largest dilation the ratio is within noise of one",
                     ratio=last_r, stderr=last_s)
    else:
        report.doc["ratio_series"]["note"] = (
            "exploratory: the composing map is not an automorphism; "
            "no limiting value is asserted")

    scaled_vol = domain.volume() * max(cfg.scales) ** 4
    _diameter_check(report, scaled_vol,
                    "the distance never exceeds twice the largest dilated volume")
    return report.finish()


# -- geometric degree --------------------------------------------------------


DEFAULT_DEGREE_PAIRS = (
    ("square_x", "cube_y"), ("square_x", "square_x"), ("cube_y", "cube_y"),
    ("power_23", "square_x"), ("power_23", "cube_y"), ("power_23", "power_23"),
    ("power_33", "square_x"), ("square_x", "power_33"), ("power_33", "cube_y"),
    ("shear", "square_x"), ("square_x", "shear"), ("swap_shear", "power_23"),
    ("power_23", "swap_shear"), ("affine_rot", "power_23"), ("trans3", "power_23"),
    ("shear_cubic", "square_x"), ("square_x", "swap_shear"),
    ("identity", "power_23"), ("hyper", "square_x"), ("swap_shear", "shear"),
)


def _run_degree_multiplicativity(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    pairs = cfg.pairs or DEFAULT_DEGREE_PAIRS

    degree_cache: dict[str, int] = {}

    def degree_of(name: str) -> int:
        if name not in degree_cache:
            e = _entry(catalog, name)
            degree_cache[name] = geometric_degree(e.map, cfg.trials, cfg.seed)
        return degree_cache[name]

    for e in catalog.entries:
        if e.expected_degree is None:
            continue
        d = degree_of(e.name)
        report.check(f"degree_{e.name}", d == e.expected_degree,
                     "observed maximal fiber cardinality matches the expected degree",
                     observed=d, expected=e.expected_degree)
        if "automorphism" in e.tags:
            report.check(f"degree_auto_{e.name}", d == 1,
                         "automorphisms have geometric degree one",
                         observed=d)

    results = []
    for f_name, g_name in pairs:
        f = _entry(catalog, f_name)
        g = _entry(catalog, g_name)
        df, dg = degree_of(f_name), degree_of(g_name)
        dfg = geometric_degree(compose(f.map, g.map), cfg.trials, cfg.seed)
        results.append({"f": f_name, "g": g_name, "d_f": df, "d_g": dg,
                        "d_fg": dfg})
        report.check(f"multiplicative_{f_name}_{g_name}", dfg == df * dg,
                     "the geometric degree is multiplicative under composition",
                     d_f=df, d_g=dg, d_fg=dfg)
    report.doc["degrees"] = results
    return report.finish()


# -- tract survey ------------------------------------------------------------


DEFAULT_TRACT_ENTRIES = ("hyper", "hyper2", "shear")
DEFAULT_TRACT_PAIRS = (("hyper", "hyper"), ("hyper", "hyper2"),
                       ("hyper2", "hyper"), ("shear", "hyper"))


def _run_tract_survey(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    amax, bmax, pmax = cfg.bounds
    surveys = {}
    for name in (cfg.pairs and {n for p in cfg.pairs for n in p} or DEFAULT_TRACT_ENTRIES):
        e = _entry(catalog, name)
        hits = tract_search(e.map, amax, bmax, pmax)
        surveys[name] = hits
        report.doc.setdefault("tracts", {})[name] = [
            {**tract_to_json(r), "flags": sorted(fl.value for fl in flags)}
            for r, flags in hits]
        if "automorphism" in e.tags:
            report.check(f"no_tracts_{name}", len(hits) == 0,
                         "automorphisms have no finite asymptotic values",
                         found=len(hits))
            continue
        # per-tract consistency: dual exists, implicit form vanishes on the
        # parametrized component, phantom factorization is well formed
        for r, _flags in hits:
            dual = dual_map(e.map, r)
            lm = compose_with_tract(e.map, r)
            report.check(
                f"dual_consistency_{name}_a{r.alpha}b{r.beta}",
                lm.is_polynomial(),
                "the dual map exists exactly when no negative powers survive")
            param = component_parametrization(dual)
            if max(len(param[0]), len(param[1])) > 1:
                h = implicitize(param)
                worst = 0.0
                from .bipoly import uni_eval_complex
                for k in range(64):
                    t = complex((k + 1) / 16.0) * complex(math.cos(k), math.sin(k))
                    u = uni_eval_complex(param[0], t) if param[0] else 0j
                    v = uni_eval_complex(param[1], t) if param[1] else 0j
                    worst = max(worst, abs(h.evaluate(u, v)))
                report.check(
                    f"implicit_vanishes_{name}_a{r.alpha}b{r.beta}",
                    worst <= 1e-9,
                    "the implicit form vanishes along its parametrization",
                    worst=worst)

    pairs = cfg.pairs or DEFAULT_TRACT_PAIRS
    for f_name, g_name in pairs:
        f = _entry(catalog, f_name)
        g = _entry(catalog, g_name)
        g_hits = surveys.get(g_name) or tract_search(g.map, amax, bmax, pmax)
        fg_hits = tract_search(compose(f.map, g.map), amax, bmax, pmax)
        g_keys = {(r.alpha, r.beta, r.phi) for r, _ in g_hits}
        fg_keys = {(r.alpha, r.beta, r.phi) for r, _ in fg_hits}
        report.check(f"tract_monotone_{f_name}_{g_name}",
                     g_keys <= fg_keys,
                     "every tract of the right factor recurs for the composition",
                     missing=len(g_keys - fg_keys), g=len(g_keys), fg=len(fg_keys))
    return report.finish()


# -- characteristic set ------------------------------------------------------


def _run_charset_volume(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    from .charset import build_characteristic_set, removed_volume

    report = _Report(cfg, catalog)
    radius = max(cfg.radius, 2.0)
    cs0 = build_characteristic_set(radius, cfg.charset_slices,
                                   cfg.charset_bundles, 0.0, cfg.seed)
    report.check("build_invariants", True,
                 "disjointness, decay chain, and valence uniqueness verified at build",
                 stars=sum(len(s.stars) for s in cs0.slices))

    est = report.record("volume(charset)", domain_volume_estimate(
        CharsetDomain(cs0), cfg.samples, report.sub_seed(), workers=cfg.workers))
    expected = BALL_VOLUME_FACTOR * radius ** 4
    report.check("null_removal_volume",
                 abs(est.value - expected) <= 3.0 * est.stderr,
                 "with zero fattening the removed set is null and the domain "
                 "fills the ball",
                 value=est.value, expected=expected, stderr=est.stderr)

    fat = cfg.charset_fatten if cfg.charset_fatten > 0 else 0.01
    cs1 = build_characteristic_set(radius, cfg.charset_slices,
                                   cfg.charset_bundles, fat, cfg.seed)
    cs2 = build_characteristic_set(radius, cfg.charset_slices,
                                   cfg.charset_bundles, 2 * fat, cfg.seed)
    v1, v2 = removed_volume(cs1), removed_volume(cs2)
    report.doc["removed_volumes"] = {"fatten": fat, "v": v1, "v_at_2r": v2}
    report.check("removed_volume_scaling", v2 == 4.0 * v1,
                 "doubling the fattening radius quadruples the removed volume",
                 v=v1, v2=v2)
    return report.finish()


# -- union check -------------------------------------------------------------


def _run_union_check(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    report = _Report(cfg, catalog)
    amax, bmax, pmax = cfg.bounds
    pairs = cfg.pairs or DEFAULT_TRACT_PAIRS
    reports = []
    for f_name, g_name in pairs:
        f = _entry(catalog, f_name)
        g = _entry(catalog, g_name)
        rep = asymptotic_union_check(f.map, g.map, amax, bmax, pmax)
        reports.append({"f": f_name, "g": g_name,
                        "verdict": rep["verdict"],
                        "tracts_of_g": rep["tracts_of_g"],
                        "tracts_of_fg": rep["tracts_of_fg"],
                        "records": [
                            {"tract": tract_to_json(r["tract"]),
                             "flags": r["flags"],
                             "contained": all(s["contained"] for s in r["samples"]),
                             "samples": len(r["samples"])}
                            for r in rep["records"]]})
        report.check(f"union_contained_{f_name}_{g_name}", rep["verdict"],
                     "sampled image of the right factor's asymptotic set lies "
                     "on the composition's asymptotic set")
    report.doc["union_checks"] = reports
    return report.finish()


_RUNNERS = {
    "metric_axioms": _run_metric_axioms,
    "isometry": _run_isometry,
    "contraction": _run_contraction,
    "degree_multiplicativity": _run_degree_multiplicativity,
    "tract_survey": _run_tract_survey,
    "charset_volume": _run_charset_volume,
    "union_check": _run_union_check,
}


def run_experiment(cfg: ExperimentConfig, catalog: MapCatalog) -> dict:
    """Dispatch to the owning driver; never raises on assertion failure
    (the report carries pass/fail), but input errors do raise."""
    if cfg.kind not in _RUNNERS:
        raise SchemaError(f"unknown experiment kind {cfg.kind!r}", field="kind")
    return _RUNNERS[cfg.kind](cfg, catalog)
