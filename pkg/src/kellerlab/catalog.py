"""Named map catalogs.

A catalog entry carries a map, descriptive tags, an optional expected
geometric degree, and, for automorphisms, a tame word whose expansion is the
map; the word supplies the exact polynomial inverse that the metric
estimators use for fast membership counting.  Parsing re-derives the keller
tag and cross-checks every claim it can.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

from .errors import DuplicateName, SchemaError, TagMismatch
from .maps import PlanarPolyMap, is_keller
from .serialize import (map_from_json, map_to_json, word_from_json,
                        word_to_json)
from .tame import TameWord, expand_word, invert_word

KNOWN_TAGS = {"keller", "automorphism", "power", "exploratory"}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    map: PlanarPolyMap
    tags: frozenset[str]
    expected_degree: int | None = None
    word: TameWord | None = None

    @cached_property
    def inverse_map(self) -> PlanarPolyMap | None:
        if self.word is None:
            return None
        return expand_word(invert_word(self.word))


@dataclass(frozen=True)
class MapCatalog:
    entries: tuple[CatalogEntry, ...]

    def __getitem__(self, name: str) -> CatalogEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def with_tag(self, tag: str) -> list[CatalogEntry]:
        return [e for e in self.entries if tag in e.tags]


def catalog_from_json(doc) -> MapCatalog:
    if not isinstance(doc, dict) or "entries" not in doc:
        raise SchemaError("expected {entries: [..]}", field="catalog")
    entries: list[CatalogEntry] = []
    seen: set[str] = set()
    for idx, ed in enumerate(doc["entries"]):
        where = f"entries[{idx}]"
        if not isinstance(ed, dict) or "name" not in ed or "map" not in ed:
            raise SchemaError("entry needs name and map", field=where)
        name = str(ed["name"])
        if name in seen:
            raise DuplicateName(f"duplicate catalog entry name {name!r}")
        seen.add(name)
        mp = map_from_json(ed["map"], where + ".map")
        tags = frozenset(str(t) for t in ed.get("tags", []))
        unknown = tags - KNOWN_TAGS
        if unknown:
            raise SchemaError(f"unknown tags {sorted(unknown)}", field=where)
        word = None
        if ed.get("word") is not None:
            word = word_from_json(ed["word"], where + ".word")
        expected = ed.get("expected_degree")
        if expected is not None:
            expected = int(expected)

        keller = is_keller(mp)
        if ("keller" in tags) != keller:
            raise TagMismatch(
                f"entry {name!r}: keller tag is {'set' if 'keller' in tags else 'absent'} "
                f"but det J {'is' if keller else 'is not'} identically 1")
        if "automorphism" in tags and "keller" not in tags:
            raise TagMismatch(f"entry {name!r}: automorphism requires keller")
        if word is not None and expand_word(word) != mp:
            raise TagMismatch(f"entry {name!r}: word does not expand to the map")
        if "automorphism" in tags and expected not in (None, 1):
            raise TagMismatch(f"entry {name!r}: automorphisms have degree 1")
        entries.append(CatalogEntry(name=name, map=mp, tags=tags,
                                    expected_degree=expected, word=word))
    return MapCatalog(tuple(entries))


def catalog_to_json(cat: MapCatalog) -> dict:
    out = []
    for e in cat.entries:
        doc = {"name": e.name, "map": map_to_json(e.map),
               "tags": sorted(e.tags)}
        if e.expected_degree is not None:
            doc["expected_degree"] = e.expected_degree
        if e.word is not None:
            doc["word"] = word_to_json(e.word)
        out.append(doc)
    return {"entries": out}


def parse_catalog(path: str | Path) -> MapCatalog:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise SchemaError(f"catalog file not found: {path}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}: {exc.msg}")
    return catalog_from_json(doc)


def bundled_catalog() -> MapCatalog:
    """The catalog shipped with the package."""
    data = resources.files("kellerlab").joinpath("data/catalog.json").read_text()
    return catalog_from_json(json.loads(data))
