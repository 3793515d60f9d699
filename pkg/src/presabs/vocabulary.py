"""Fixed relation and quality terms, configurable per deployment."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from typing import Mapping

from .model import Iri

DEFAULT_PREFIXES = {
    "owl": "http://www.w3.org/2002/07/owl#",
    "ro": "http://purl.obolibrary.org/obo/ro#",
    "pato": "http://purl.obolibrary.org/obo/pato#",
    "uberon": "http://purl.obolibrary.org/obo/uberon#",
    "ps": "http://purl.org/phenoscape/vocab#",
}

DEFAULT_GENERATED_BASE = "http://purl.org/phenoscape/generated"

_DEFAULTS = {
    "inheres_in": "ro:inheres_in",
    "towards": "ro:towards",
    "implies_presence_of": "ps:implies_presence_of",
    "part_of": "ro:part_of",
    "has_part": "ro:has_part",
    "develops_from": "ro:develops_from",
    "lacks_all_parts_of_type": "pato:lacks_all_parts_of_type",
    "quality_absent": "pato:absent",
    "quality_present": "pato:present",
    "negates": "ps:negates",
    "anatomy_root": "uberon:anatomical_structure",
}


def resolve_iri(text: str, prefixes: Mapping[str, str]) -> Iri:
    """Turn ``<full>``, ``prefix:local`` or an absolute IRI into an Iri."""
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if ":" in text:
        prefix, local = text.split(":", 1)
        if prefix in prefixes:
            return Iri(prefixes[prefix] + local)
        if "://" in text or prefix in ("urn", "http", "https"):
            return Iri(text)
        raise KeyError(f"unknown prefix {prefix!r} in {text!r}")
    raise KeyError(f"{text!r} is neither a prefixed name nor an absolute IRI")


@dataclass(frozen=True)
class Vocabulary:
    inheres_in: Iri
    towards: Iri
    implies_presence_of: Iri
    part_of: Iri
    has_part: Iri
    develops_from: Iri
    lacks_all_parts_of_type: Iri
    quality_absent: Iri
    quality_present: Iri
    negates: Iri
    anatomy_root: Iri

    def __post_init__(self):
        values = [getattr(self, f.name) for f in fields(self)]
        if len(set(values)) != len(values):
            raise ValueError("vocabulary entries must be distinct IRIs")

    @classmethod
    def default(cls) -> "Vocabulary":
        return cls(**{k: resolve_iri(v, DEFAULT_PREFIXES) for k, v in _DEFAULTS.items()})

    @classmethod
    def slots(cls) -> list:
        return [f.name for f in fields(cls)]

    def override(self, overrides: Mapping[str, str],
                 prefixes: Mapping[str, str] | None = None) -> "Vocabulary":
        prefixes = {**DEFAULT_PREFIXES, **(prefixes or {})}
        unknown = set(overrides) - set(self.slots())
        if unknown:
            raise KeyError(f"unknown vocabulary slot(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: resolve_iri(v, prefixes) for k, v in overrides.items()})

    @classmethod
    def from_config(cls, path: str) -> "Vocabulary":
        """Read ``[vocabulary]`` (slot = IRI) and optional ``[prefixes]`` sections."""
        cp = configparser.ConfigParser(delimiters=("=",))
        cp.optionxform = str
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
        prefixes = dict(cp["prefixes"]) if cp.has_section("prefixes") else {}
        overrides = dict(cp["vocabulary"]) if cp.has_section("vocabulary") else {}
        return cls.default().override(overrides, prefixes)
